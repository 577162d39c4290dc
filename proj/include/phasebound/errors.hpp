#ifndef PHASEBOUND_ERRORS_HPP
#define PHASEBOUND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace phasebound
{

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain on which the quantity is defined.
class DomainError : public Error
{
public:
    using Error::Error;
};

class ZeroState : public DomainError
{
public:
    ZeroState() : DomainError("state has zero norm") {}
};

class NegativeIndex : public DomainError
{
public:
    explicit NegativeIndex(const std::string& what) : DomainError(what) {}
};

/// Projection onto the number window annihilates the state.
class IncompatibleWindow : public DomainError
{
public:
    explicit IncompatibleWindow(const std::string& what) : DomainError(what) {}
};

class InvalidMatrix : public DomainError
{
public:
    explicit InvalidMatrix(const std::string& what) : DomainError(what) {}
};

/// Base for failures of a numerical method (as opposed to bad input).
class NumericalError : public Error
{
public:
    using Error::Error;
};

class ConvergenceFailure : public NumericalError
{
public:
    ConvergenceFailure(const std::string& what, double residual, int sweeps)
        : NumericalError(what), residual_(residual), sweeps_(sweeps)
    {
    }

    double residual() const noexcept { return residual_; }
    int sweeps() const noexcept { return sweeps_; }

private:
    double residual_;
    int sweeps_;
};

class NoConvergence : public NumericalError
{
public:
    NoConvergence(const std::string& what, double last_difference)
        : NumericalError(what), last_difference_(last_difference)
    {
    }

    double last_difference() const noexcept { return last_difference_; }

private:
    double last_difference_;
};

/// A probability drifted outside [0, 1] by more than accumulated rounding can explain.
class InternalConsistencyError : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

} // namespace phasebound

#endif // PHASEBOUND_ERRORS_HPP
