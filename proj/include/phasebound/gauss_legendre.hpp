#ifndef PHASEBOUND_GAUSS_LEGENDRE_HPP
#define PHASEBOUND_GAUSS_LEGENDRE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "errors.hpp"

namespace phasebound
{

struct QuadratureRule
{
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
///
/// Roots of P_n are found by Newton iteration from the Tricomi initial guess;
/// the rule is built for the positive half and mirrored, so nodes are exactly
/// antisymmetric and weights exactly symmetric.
inline QuadratureRule gauss_legendre(std::size_t n)
{
    if (n == 0)
        throw DomainError("Gauss-Legendre rule needs at least one node");
    QuadratureRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const double nd = static_cast<double>(n);

    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
        double derivative = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kd = static_cast<double>(k);
                const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            derivative = nd * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / derivative;
            x -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x)))
                break;
        }
        // Recompute the derivative at the converged root.
        {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kd = static_cast<double>(k);
                const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
                p0 = p1;
                p1 = p2;
            }
            derivative = nd * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
        const bool middle = (n % 2 == 1) && (i == n / 2);
        if (middle)
            x = 0.0;
        rule.nodes[n - 1 - i] = x;
        rule.nodes[i] = -x;
        rule.weights[n - 1 - i] = w;
        rule.weights[i] = w;
    }
    return rule;
}

} // namespace phasebound

#endif // PHASEBOUND_GAUSS_LEGENDRE_HPP
