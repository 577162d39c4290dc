#ifndef PHASEBOUND_ORACLE_HPP
#define PHASEBOUND_ORACLE_HPP

// Brute-force cross-checks for the production paths. Nothing here calls into
// canonical_povm or the Jacobi solver.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "bound_kernel.hpp"
#include "errors.hpp"
#include "state_space.hpp"

namespace phasebound::oracle
{

struct OracleConfig
{
    int quadrature_points = 4096; ///< Simpson intervals per 2pi.
    int random_trials = 1000;
    std::uint64_t seed = 42;
    double power_tolerance = 1e-12;
    int power_max_iterations = 100000;

    void validate() const
    {
        if (quadrature_points <= 0 || random_trials <= 0 || power_max_iterations <= 0)
            throw DomainError("oracle counts must be positive");
        if (!(power_tolerance > 0.0 && power_tolerance <= 1e-6))
            throw DomainError("power-iteration tolerance must lie in (0, 1e-6]");
    }
};

/// Composite Simpson integral of (1/2pi)|sum_n psi_n exp(-i n phi)|^2 over the window.
inline double quadrature_probability(const FockState& state, const PhaseWindow& window,
                                     const OracleConfig& cfg = {})
{
    cfg.validate();
    const double ns = state.norm_squared();
    if (!(ns > 0.0))
        throw ZeroState();
    const double width = window.width();
    if (width == 0.0)
        return 0.0;

    auto integrand = [&state](double phi) {
        double re = 0.0;
        double im = 0.0;
        std::size_t n = state.offset();
        for (const auto& a : state.amplitudes()) {
            const double c = std::cos(static_cast<double>(n) * phi);
            const double s = std::sin(static_cast<double>(n) * phi);
            re += a.real() * c + a.imag() * s;
            im += a.imag() * c - a.real() * s;
            ++n;
        }
        return (re * re + im * im) / two_pi;
    };

    auto intervals = static_cast<long long>(std::ceil(cfg.quadrature_points * width / two_pi));
    intervals = std::max<long long>(intervals, 2);
    if (intervals % 2 != 0)
        ++intervals;
    const double a = window.lower();
    const double h = width / static_cast<double>(intervals);
    double sum = integrand(a) + integrand(a + width);
    for (long long i = 1; i < intervals; ++i)
        sum += (i % 2 == 1 ? 4.0 : 2.0) * integrand(a + h * static_cast<double>(i));
    return sum * h / 3.0 / ns;
}

enum class PowerStatus
{
    converged,
    slow_convergence, ///< max iterations reached before the residual target
    gap_degenerate,   ///< converged, but lambda_0 - lambda_1 <= 1e-6
};

inline const char* to_string(PowerStatus s)
{
    switch (s) {
    case PowerStatus::converged: return "converged";
    case PowerStatus::slow_convergence: return "slow_convergence";
    case PowerStatus::gap_degenerate: return "gap_degenerate";
    }
    return "unknown";
}

struct PowerResult
{
    double eigenvalue = 0.0;
    std::vector<double> vector;
    int iterations = 0;
    double residual = 0.0;
    /// Lower estimate of lambda_1 from deflated iteration; -inf for 1x1 kernels.
    double second_estimate = -std::numeric_limits<double>::infinity();
    PowerStatus status = PowerStatus::converged;
};

namespace detail
{

inline std::vector<double> apply(const ConcentrationKernel& kernel, const std::vector<double>& x)
{
    const std::size_t n = x.size();
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            s += kernel(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline bool normalize_in_place(std::vector<double>& v)
{
    const double norm = std::sqrt(dot(v, v));
    if (!(norm > 0.0))
        return false;
    for (double& x : v)
        x /= norm;
    return true;
}

} // namespace detail

/// Dominant eigenpair by repeated multiplication from a seeded Gaussian start.
///
/// Stops once ||G v - lambda v|| <= tolerance. A converged result is then probed
/// with a deflated iteration; if lambda_1 comes within 1e-6 of lambda_0 the
/// status is gap_degenerate and the vector is not a meaningful comparison target.
inline PowerResult power_iteration(const ConcentrationKernel& kernel, const OracleConfig& cfg = {})
{
    cfg.validate();
    const std::size_t n = kernel.dimension();
    bool nonzero = false;
    for (std::size_t i = 0; i < n && !nonzero; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (kernel(i, j) != 0.0) {
                nonzero = true;
                break;
            }
    if (!nonzero)
        throw DomainError("power iteration needs a nonzero kernel");

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss;
    std::vector<double> v(n);
    do {
        for (double& x : v)
            x = gauss(rng);
    } while (!detail::normalize_in_place(v));

    PowerResult out;
    out.status = PowerStatus::slow_convergence;
    for (int iter = 1; iter <= cfg.power_max_iterations; ++iter) {
        auto w = detail::apply(kernel, v);
        const double lambda = detail::dot(v, w);
        double r2 = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            r2 += (w[i] - lambda * v[i]) * (w[i] - lambda * v[i]);
        out.eigenvalue = lambda;
        out.iterations = iter;
        out.residual = std::sqrt(r2);
        if (out.residual <= cfg.power_tolerance) {
            out.status = PowerStatus::converged;
            break;
        }
        if (!detail::normalize_in_place(w))
            break;
        v = std::move(w);
    }
    {
        // Largest-magnitude component positive, lowest index among near-ties.
        double largest = 0.0;
        for (double x : v)
            largest = std::max(largest, std::abs(x));
        for (double x : v)
            if (std::abs(x) >= largest * (1.0 - 1e-12)) {
                if (x < 0.0)
                    for (double& y : v)
                        y = -y;
                break;
            }
    }
    out.vector = v;

    if (out.status != PowerStatus::converged || n == 1)
        return out;

    // Deflated iteration: its Rayleigh quotient rises towards lambda_1 from below.
    std::vector<double> u(n);
    auto project_out = [&v](std::vector<double>& x) {
        const double c = detail::dot(x, v);
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] -= c * v[i];
    };
    do {
        for (double& x : u)
            x = gauss(rng);
        project_out(u);
    } while (!detail::normalize_in_place(u));
    constexpr double gap_threshold = 1e-6;
    double best = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 2000; ++iter) {
        auto w = detail::apply(kernel, u);
        const double mu = detail::dot(u, w);
        best = std::max(best, mu);
        if (out.eigenvalue - best <= gap_threshold) {
            out.status = PowerStatus::gap_degenerate;
            break;
        }
        project_out(w);
        if (!detail::normalize_in_place(w))
            break;
        if (std::abs(detail::dot(w, u)) >= 1.0 - 1e-15)
            break;
        u = std::move(w);
    }
    out.second_estimate = best;
    return out;
}

struct SearchResult
{
    double best = 0.0;
    int best_trial = -1;
    int trials = 0;
};

/// Best probability over random normalized states on {0..dk}.
///
/// Trial t draws complex Gaussian amplitudes from a generator seeded with
/// (cfg.seed, t), so trials are independent of evaluation order and distinct
/// seeds do not share trials.
inline SearchResult random_state_search(double dalpha, long long dk, const OracleConfig& cfg = {})
{
    cfg.validate();
    const auto kernel = build_kernel(dalpha, dk);
    const std::size_t n = kernel.dimension();
    SearchResult out;
    out.best = -std::numeric_limits<double>::infinity();
    std::vector<complex> psi(n);
    for (int t = 0; t < cfg.random_trials; ++t) {
        std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                          static_cast<std::uint32_t>(t)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> gauss;
        double ns = 0.0;
        for (auto& a : psi) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            a = complex(re, im);
            ns += re * re + im * im;
        }
        if (!(ns > 0.0))
            continue;
        const double value = kernel.quadratic_form(psi) / ns;
        if (value > out.best) {
            out.best = value;
            out.best_trial = t;
        }
        ++out.trials;
    }
    return out;
}

} // namespace phasebound::oracle

#endif // PHASEBOUND_ORACLE_HPP
