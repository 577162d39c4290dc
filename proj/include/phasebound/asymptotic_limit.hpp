#ifndef PHASEBOUND_ASYMPTOTIC_LIMIT_HPP
#define PHASEBOUND_ASYMPTOTIC_LIMIT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "bound_kernel.hpp"
#include "errors.hpp"
#include "gauss_legendre.hpp"
#include "state_space.hpp"
#include "symmetric_eigen.hpp"

namespace phasebound
{

/// The integral operator on L2[-1, 1] with kernel
///
///     K(z, z') = sin(pi xi (z - z') / 2) / (pi (z - z')),    K(z, z) = xi / 2,
///
/// which is the large-dk limit of the concentration kernel at fixed xi.
class AsymptoticProblem
{
public:
    AsymptoticProblem(double xi_value, std::size_t nodes) : xi_(xi_value), nodes_(nodes)
    {
        if (!(xi_value >= 0.0) || !std::isfinite(xi_value))
            throw DomainError("xi must be finite and >= 0, got " + std::to_string(xi_value));
        if (nodes < 2)
            throw DomainError("Nystrom discretization needs at least 2 nodes");
    }

    double xi() const noexcept { return xi_; }
    std::size_t nodes() const noexcept { return nodes_; }

    double kernel(double z, double zp) const noexcept { return sinc_kernel(xi_, z - zp); }

    static double sinc_kernel(double xi_value, double dz) noexcept
    {
        const double x = 0.5 * pi * xi_value * dz;
        if (std::abs(x) < 1e-4) {
            const double x2 = x * x;
            return 0.5 * xi_value * (1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0)));
        }
        return std::sin(x) / (pi * dz);
    }

private:
    double xi_;
    std::size_t nodes_;
};

struct AsymptoticSpectrum
{
    std::vector<double> eigenvalues;
    /// eigenfunctions[v][i] samples the v-th eigenfunction at nodes[i], L2[-1, 1] normalized.
    std::vector<std::vector<double>> eigenfunctions;
    std::vector<double> nodes;
    std::vector<double> weights;
    /// |lambda_v(n) - lambda_v(n/2)|; infinity where the coarse rule has no partner.
    std::vector<double> error_estimates;
};

namespace detail
{

inline DenseMatrix nystrom_matrix(double xi_value, const QuadratureRule& rule)
{
    const std::size_t n = rule.nodes.size();
    DenseMatrix a(n);
    std::vector<double> root_w(n);
    for (std::size_t i = 0; i < n; ++i)
        root_w[i] = std::sqrt(rule.weights[i]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = root_w[i] * root_w[j]
                             * AsymptoticProblem::sinc_kernel(xi_value, rule.nodes[i] - rule.nodes[j]);
            a(i, j) = v;
            a(j, i) = v;
        }
    return a;
}

inline EigenDecomposition nystrom_eigen(double xi_value, const QuadratureRule& rule)
{
    const auto a = nystrom_matrix(xi_value, rule);
    auto eig = jacobi_eigen(a);
    const double resid = max_residual(a, eig);
    const double target = 1e-12 * static_cast<double>(rule.nodes.size());
    if (!(resid <= target))
        throw ConvergenceFailure("Nystrom eigenpairs miss the residual target", resid, eig.sweeps);
    return eig;
}

} // namespace detail

/// Symmetrized Gauss-Legendre Nystrom discretization of the limit operator.
///
/// Eigenvalues come from A_ij = sqrt(w_i w_j) K(z_i, z_j); eigenfunction samples
/// are v_i / sqrt(w_i). Error estimates compare against a rule with half the nodes.
inline AsymptoticSpectrum nystrom_spectrum(const AsymptoticProblem& problem)
{
    const auto rule = gauss_legendre(problem.nodes());
    auto eig = detail::nystrom_eigen(problem.xi(), rule);
    const auto coarse = detail::nystrom_eigen(problem.xi(), gauss_legendre(std::max<std::size_t>(1, problem.nodes() / 2)));

    AsymptoticSpectrum out;
    out.nodes = rule.nodes;
    out.weights = rule.weights;
    out.eigenvalues = eig.values;
    out.error_estimates.assign(eig.values.size(), std::numeric_limits<double>::infinity());
    for (std::size_t v = 0; v < coarse.values.size(); ++v)
        out.error_estimates[v] = std::abs(eig.values[v] - coarse.values[v]);
    out.eigenfunctions.reserve(eig.vectors.size());
    for (auto& vec : eig.vectors) {
        for (std::size_t i = 0; i < vec.size(); ++i)
            vec[i] /= std::sqrt(rule.weights[i]);
        out.eigenfunctions.push_back(std::move(vec));
    }
    return out;
}

struct AsymptoticEigenvalue
{
    double value = 0.0;
    /// Difference between the last two node counts.
    double error_estimate = 0.0;
    std::size_t nodes = 0;
};

/// Largest eigenvalue of the limit operator, doubling the node count from 32
/// until successive values agree to 1e-10 (at most 4096 nodes).
inline AsymptoticEigenvalue lambda0_asymptotic(double xi_value)
{
    if (!(xi_value >= 0.0) || !std::isfinite(xi_value))
        throw DomainError("xi must be finite and >= 0, got " + std::to_string(xi_value));
    constexpr std::size_t first_nodes = 32;
    constexpr std::size_t max_nodes = 4096;
    if (xi_value == 0.0)
        return {0.0, 0.0, first_nodes};

    double previous = detail::nystrom_eigen(xi_value, gauss_legendre(first_nodes)).values.front();
    double difference = std::numeric_limits<double>::infinity();
    std::size_t nodes = first_nodes;
    while (nodes < max_nodes) {
        nodes *= 2;
        const double current = detail::nystrom_eigen(xi_value, gauss_legendre(nodes)).values.front();
        difference = std::abs(current - previous);
        previous = current;
        if (difference < 1e-10)
            return {current, difference, nodes};
    }
    if (difference >= 1e-8)
        throw NoConvergence("lambda0 did not settle within " + std::to_string(max_nodes) + " nodes", difference);
    return {previous, difference, nodes};
}

struct AsymptoticComparison
{
    double xi = 0.0;
    long long dk = 0;
    double dalpha = 0.0;
    double lambda0_discrete = 0.0;
    double lambda0_asymptotic = 0.0;
    double asymptotic_error = 0.0;
    /// lambda0_discrete - lambda0_asymptotic; non-negative in practice.
    double difference = 0.0;
};

/// Compares the discrete bound at (dalpha = 2pi xi / (dk + 1), dk) with the limit.
inline AsymptoticComparison discrete_to_asymptotic_check(double xi_value, long long dk)
{
    if (!(xi_value > 0.0))
        throw DomainError("xi must be > 0 for the discrete/asymptotic comparison");
    if (dk < 0)
        throw DomainError("number precision must be >= 0");
    if (xi_value > static_cast<double>(dk + 1))
        throw DomainError("xi = " + std::to_string(xi_value) + " implies a phase precision above 2pi for dk = "
                          + std::to_string(dk));
    const auto kernel = ConcentrationKernel::from_xi(xi_value, dk);
    const auto limit = lambda0_asymptotic(xi_value);
    AsymptoticComparison report;
    report.xi = xi_value;
    report.dk = dk;
    report.dalpha = kernel.dalpha();
    report.lambda0_discrete = least_upper_bound_at_xi(xi_value, dk).lambda0;
    report.lambda0_asymptotic = limit.value;
    report.asymptotic_error = limit.error_estimate;
    report.difference = report.lambda0_discrete - report.lambda0_asymptotic;
    return report;
}

} // namespace phasebound

#endif // PHASEBOUND_ASYMPTOTIC_LIMIT_HPP
