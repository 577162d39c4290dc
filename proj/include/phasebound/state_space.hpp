#ifndef PHASEBOUND_STATE_SPACE_HPP
#define PHASEBOUND_STATE_SPACE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace phasebound
{

using complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Pure photon state with finite support in the number basis.
///
/// Amplitudes are stored densely for the indices [offset, offset + size()).
/// Every index outside that window carries amplitude zero.
class FockState
{
public:
    FockState() = default;

    FockState(std::size_t offset, std::vector<complex> amplitudes)
        : offset_(offset), amplitudes_(std::move(amplitudes))
    {
    }

    /// Number state |n>.
    static FockState number(std::size_t n) { return FockState(n, {complex(1.0, 0.0)}); }

    static FockState from_real(std::size_t offset, const std::vector<double>& amplitudes)
    {
        std::vector<complex> values(amplitudes.begin(), amplitudes.end());
        return FockState(offset, std::move(values));
    }

    std::size_t offset() const noexcept { return offset_; }
    std::size_t size() const noexcept { return amplitudes_.size(); }
    /// One past the largest stored index.
    std::size_t end_index() const noexcept { return offset_ + amplitudes_.size(); }

    std::span<const complex> amplitudes() const noexcept { return amplitudes_; }

    /// Amplitude <n|psi>; zero outside the stored window.
    complex amplitude(std::size_t n) const noexcept
    {
        if (n < offset_ || n >= end_index())
            return {0.0, 0.0};
        return amplitudes_[n - offset_];
    }

    double norm_squared() const noexcept
    {
        double sum = 0.0;
        for (const auto& a : amplitudes_)
            sum += std::norm(a);
        return sum;
    }

    /// At least one amplitude is nonzero.
    bool is_valid() const noexcept
    {
        for (const auto& a : amplitudes_)
            if (a != complex(0.0, 0.0))
                return true;
        return false;
    }

    friend bool operator==(const FockState&, const FockState&) = default;

private:
    std::size_t offset_ = 0;
    std::vector<complex> amplitudes_;
};

/// Phase interval [center - width/2, center + width/2) on the circle.
class PhaseWindow
{
public:
    PhaseWindow(double center, double width) : center_(wrap_angle(center)), width_(width)
    {
        if (!std::isfinite(center))
            throw DomainError("phase window center must be finite");
        if (!(width >= 0.0 && width <= two_pi))
            throw DomainError("phase window width must lie in [0, 2pi], got " + std::to_string(width));
    }

    double center() const noexcept { return center_; }
    double width() const noexcept { return width_; }
    double lower() const noexcept { return center_ - 0.5 * width_; }
    double upper() const noexcept { return center_ + 0.5 * width_; }

    /// Maps an angle onto [-pi, pi).
    static double wrap_angle(double angle) noexcept
    {
        double shifted = std::fmod(angle + pi, two_pi);
        if (shifted < 0.0)
            shifted += two_pi;
        double wrapped = shifted - pi;
        if (wrapped >= pi)
            wrapped -= two_pi;
        return wrapped;
    }

private:
    double center_;
    double width_;
};

/// Photon-number window {base, base + 1, ..., base + precision}.
class NumberWindow
{
public:
    NumberWindow(long long base, long long precision)
    {
        if (base < 0)
            throw DomainError("number window base must be >= 0");
        if (precision < 0)
            throw DomainError("number window precision must be >= 0");
        base_ = static_cast<std::size_t>(base);
        precision_ = static_cast<std::size_t>(precision);
    }

    std::size_t base() const noexcept { return base_; }
    std::size_t precision() const noexcept { return precision_; }
    /// Number of photon numbers in the window, precision + 1.
    std::size_t count() const noexcept { return precision_ + 1; }
    std::size_t last() const noexcept { return base_ + precision_; }
    bool contains(std::size_t n) const noexcept { return n >= base_ && n <= last(); }

private:
    std::size_t base_ = 0;
    std::size_t precision_ = 0;
};

inline FockState normalize(const FockState& state)
{
    const double ns = state.norm_squared();
    if (!(ns > 1e-300))
        throw ZeroState();
    const double scale = 1.0 / std::sqrt(ns);
    std::vector<complex> out(state.amplitudes().begin(), state.amplitudes().end());
    for (auto& a : out)
        a *= scale;
    return FockState(state.offset(), std::move(out));
}

/// Applies exp(i theta N): amplitude n picks up the factor exp(i n theta).
inline FockState phase_shift(const FockState& state, double theta)
{
    std::vector<complex> out;
    out.reserve(state.size());
    std::size_t n = state.offset();
    for (const auto& a : state.amplitudes()) {
        const double angle = static_cast<double>(n) * theta;
        out.push_back(a * complex(std::cos(angle), std::sin(angle)));
        ++n;
    }
    return FockState(state.offset(), std::move(out));
}

/// Moves the amplitude at index n to index n + shift.
inline FockState number_shift(const FockState& state, long long shift)
{
    const long long target = static_cast<long long>(state.offset()) + shift;
    if (target < 0)
        throw NegativeIndex("number shift by " + std::to_string(shift) + " moves offset "
                            + std::to_string(state.offset()) + " below zero");
    std::vector<complex> out(state.amplitudes().begin(), state.amplitudes().end());
    return FockState(static_cast<std::size_t>(target), std::move(out));
}

} // namespace phasebound

#endif // PHASEBOUND_STATE_SPACE_HPP
