#ifndef PHASEBOUND_BOUND_KERNEL_HPP
#define PHASEBOUND_BOUND_KERNEL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "state_space.hpp"
#include "symmetric_eigen.hpp"

namespace phasebound
{

namespace detail
{

inline void check_precisions(double dalpha, long long dk)
{
    if (!(dalpha >= 0.0 && dalpha <= two_pi))
        throw DomainError("phase precision must lie in [0, 2pi], got " + std::to_string(dalpha));
    if (dk < 0)
        throw DomainError("number precision must be >= 0, got " + std::to_string(dk));
}

} // namespace detail

/// Concentration parameter xi = dalpha (dk + 1) / 2pi.
inline double xi(double dalpha, long long dk)
{
    detail::check_precisions(dalpha, dk);
    return dalpha * static_cast<double>(dk + 1) / two_pi;
}

/// The (dk+1)x(dk+1) symmetric Toeplitz matrix
///
///     G_nm = sin(dalpha (n - m) / 2) / (pi (n - m)),    G_nn = dalpha / 2pi,
///
/// whose quadratic form over states supported on {0..dk} is the probability of a
/// phase in [-dalpha/2, dalpha/2).
class ConcentrationKernel
{
public:
    ConcentrationKernel(double dalpha, long long dk)
    {
        detail::check_precisions(dalpha, dk);
        dalpha_ = dalpha;
        dk_ = static_cast<std::size_t>(dk);
        std::vector<double> band(dk_ + 1);
        band[0] = dalpha / two_pi;
        for (std::size_t d = 1; d <= dk_; ++d) {
            const double dd = static_cast<double>(d);
            band[d] = dalpha == two_pi ? 0.0 : std::sin(0.5 * dalpha * dd) / (pi * dd);
        }
        fill(band);
    }

    /// Same kernel parametrized by xi, with dalpha = 2pi xi / (dk + 1). Entries are
    /// formed from xi directly, so the 1x1 kernel equals xi exactly.
    static ConcentrationKernel from_xi(double xi_value, long long dk)
    {
        if (dk < 0)
            throw DomainError("number precision must be >= 0, got " + std::to_string(dk));
        const double count = static_cast<double>(dk + 1);
        if (!(xi_value >= 0.0 && xi_value <= count * (1.0 + 1e-12)))
            throw DomainError("xi = " + std::to_string(xi_value) + " implies a phase precision above 2pi for dk = "
                              + std::to_string(dk));
        ConcentrationKernel k;
        const bool full = xi_value >= count;
        k.dalpha_ = full ? two_pi : two_pi * xi_value / count;
        k.dk_ = static_cast<std::size_t>(dk);
        std::vector<double> band(k.dk_ + 1);
        band[0] = full ? 1.0 : xi_value / count;
        for (std::size_t d = 1; d <= k.dk_; ++d) {
            const double dd = static_cast<double>(d);
            band[d] = full ? 0.0 : std::sin(pi * xi_value * dd / count) / (pi * dd);
        }
        k.fill(band);
        return k;
    }

    double dalpha() const noexcept { return dalpha_; }
    std::size_t dk() const noexcept { return dk_; }
    std::size_t dimension() const noexcept { return dk_ + 1; }
    double xi() const noexcept { return dalpha_ * static_cast<double>(dk_ + 1) / two_pi; }
    const DenseMatrix& matrix() const noexcept { return matrix_; }
    double operator()(std::size_t n, std::size_t m) const noexcept { return matrix_(n, m); }

    /// Real part of sum_nm G_nm psi_n conj(psi_m) for a vector on {0..dk}.
    double quadratic_form(std::span<const complex> psi) const
    {
        double sum = 0.0;
        for (std::size_t n = 0; n < psi.size(); ++n)
            for (std::size_t m = 0; m < psi.size(); ++m)
                sum += matrix_(n, m) * (psi[n] * std::conj(psi[m])).real();
        return sum;
    }

private:
    ConcentrationKernel() = default;

    void fill(const std::vector<double>& band)
    {
        const std::size_t n = dk_ + 1;
        matrix_ = DenseMatrix(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                matrix_(i, j) = band[i > j ? i - j : j - i];
    }

    double dalpha_ = 0.0;
    std::size_t dk_ = 0;
    DenseMatrix matrix_;
};

inline ConcentrationKernel build_kernel(double dalpha, long long dk)
{
    return ConcentrationKernel(dalpha, dk);
}

struct SpectrumResult
{
    std::vector<double> eigenvalues;
    std::vector<std::vector<double>> eigenvectors;
    double max_residual = 0.0;
    double orthogonality_defect = 0.0;
    /// lambda_0 - lambda_1; infinity for a 1x1 kernel.
    double spectral_gap = std::numeric_limits<double>::infinity();
    /// Smallest gap between consecutive eigenvalues.
    double min_gap = std::numeric_limits<double>::infinity();
    int sweeps = 0;
};

/// Full spectrum of the kernel, descending.
///
/// Throws ConvergenceFailure when the eigenpair residuals exceed 1e-12 (dk + 1).
inline SpectrumResult eigensystem(const ConcentrationKernel& kernel)
{
    auto eig = jacobi_eigen(kernel.matrix());
    SpectrumResult out;
    out.max_residual = max_residual(kernel.matrix(), eig);
    out.orthogonality_defect = orthogonality_defect(eig);
    out.sweeps = eig.sweeps;
    const double target = 1e-12 * static_cast<double>(kernel.dimension());
    if (!(out.max_residual <= target) || !(out.orthogonality_defect <= target))
        throw ConvergenceFailure("kernel eigenpairs miss the residual target", out.max_residual, eig.sweeps);
    for (std::size_t s = 0; s + 1 < eig.values.size(); ++s)
        out.min_gap = std::min(out.min_gap, eig.values[s] - eig.values[s + 1]);
    if (eig.values.size() > 1)
        out.spectral_gap = eig.values[0] - eig.values[1];
    out.eigenvalues = std::move(eig.values);
    out.eigenvectors = std::move(eig.vectors);
    return out;
}

struct OptimalBound
{
    double lambda0 = 0.0;
    /// Unit state on {0..dk} attaining lambda0.
    FockState state;
};

namespace detail
{

inline OptimalBound top_pair(const ConcentrationKernel& kernel)
{
    if (kernel.dalpha() == 0.0)
        return {0.0, FockState::number(0)};
    auto spectrum = eigensystem(kernel);
    return {spectrum.eigenvalues.front(), FockState::from_real(0, spectrum.eigenvectors.front())};
}

} // namespace detail

/// Least upper bound of the conditional phase probability at precisions
/// (dalpha, dk): the largest eigenvalue of the concentration kernel, together
/// with the state that attains it. dalpha = 0 yields 0 with |0> by convention.
inline OptimalBound least_upper_bound(double dalpha, long long dk)
{
    return detail::top_pair(build_kernel(dalpha, dk));
}

inline OptimalBound least_upper_bound_at_xi(double xi_value, long long dk)
{
    return detail::top_pair(ConcentrationKernel::from_xi(xi_value, dk));
}

/// min(1, dalpha (dk + 1) / 2pi): the Cauchy-Schwarz bound on any conditional
/// phase probability.
inline double cauchy_bound(double dalpha, long long dk)
{
    return std::min(1.0, xi(dalpha, dk));
}

} // namespace phasebound

#endif // PHASEBOUND_BOUND_KERNEL_HPP
