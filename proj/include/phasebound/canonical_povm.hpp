#ifndef PHASEBOUND_CANONICAL_POVM_HPP
#define PHASEBOUND_CANONICAL_POVM_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "state_space.hpp"

namespace phasebound
{

/// Coefficients c_nm of a phase-translation covariant phase density
///
///     F(phi) = (1/2pi) sum_nm c_nm exp(i(n-m)phi) |n><m|
///
/// over the photon numbers [offset, offset + dimension). The canonical measure has
/// c_nm = 1 for every pair and is represented without storage, so it applies to
/// states of any support.
class PhaseMatrix
{
public:
    PhaseMatrix(std::size_t offset, std::size_t dimension, std::vector<complex> coefficients)
        : offset_(offset), dimension_(dimension), coefficients_(std::move(coefficients))
    {
        if (coefficients_.size() != dimension_ * dimension_)
            throw DomainError("phase matrix must be square: expected "
                              + std::to_string(dimension_ * dimension_) + " coefficients, got "
                              + std::to_string(coefficients_.size()));
    }

    static PhaseMatrix canonical()
    {
        PhaseMatrix m;
        m.canonical_ = true;
        return m;
    }

    /// c_nm = delta_nm: the measure that discards all phase information.
    static PhaseMatrix identity(std::size_t offset, std::size_t dimension)
    {
        std::vector<complex> c(dimension * dimension, complex(0.0, 0.0));
        for (std::size_t i = 0; i < dimension; ++i)
            c[i * dimension + i] = 1.0;
        return PhaseMatrix(offset, dimension, std::move(c));
    }

    bool is_canonical() const noexcept { return canonical_; }
    std::size_t offset() const noexcept { return offset_; }
    std::size_t dimension() const noexcept { return dimension_; }

    bool covers(std::size_t n) const noexcept
    {
        return canonical_ || (n >= offset_ && n < offset_ + dimension_);
    }

    /// Coefficient for photon numbers n, m; both must be covered.
    complex coefficient(std::size_t n, std::size_t m) const
    {
        if (canonical_)
            return {1.0, 0.0};
        if (!covers(n) || !covers(m))
            throw DomainError("photon number outside the phase matrix window");
        return coefficients_[(n - offset_) * dimension_ + (m - offset_)];
    }

    /// Coefficient by local (0-based) row and column.
    complex local(std::size_t row, std::size_t col) const
    {
        if (canonical_)
            return {1.0, 0.0};
        return coefficients_[row * dimension_ + col];
    }

private:
    PhaseMatrix() = default;

    bool canonical_ = false;
    std::size_t offset_ = 0;
    std::size_t dimension_ = 0;
    std::vector<complex> coefficients_;
};

struct MatrixCheck
{
    bool passed = true;
    /// First failing (n, m) in photon-number indices, row-major scan order.
    std::optional<std::pair<std::size_t, std::size_t>> first_offending;
};

struct PhaseMatrixReport
{
    MatrixCheck unit_diagonal;
    MatrixCheck modulus_bound;
    MatrixCheck hermitian;

    bool ok() const noexcept { return unit_diagonal.passed && modulus_bound.passed && hermitian.passed; }

    std::string describe() const
    {
        std::string out;
        auto add = [&out](const char* name, const MatrixCheck& check) {
            if (check.passed)
                return;
            if (!out.empty())
                out += "; ";
            out += name;
            if (check.first_offending)
                out += " at (" + std::to_string(check.first_offending->first) + ", "
                       + std::to_string(check.first_offending->second) + ")";
        };
        add("diagonal", unit_diagonal);
        add("modulus", modulus_bound);
        add("hermitian", hermitian);
        return out.empty() ? "ok" : out;
    }
};

/// Checks the necessary conditions on a phase matrix: c_nn = 1, |c_nm| <= 1 and
/// c_nm = conj(c_mn). Positivity of the full measure is not certified.
inline PhaseMatrixReport validate_phase_matrix(const PhaseMatrix& matrix, double tolerance = 1e-12)
{
    PhaseMatrixReport report;
    if (matrix.is_canonical())
        return report;

    const std::size_t dim = matrix.dimension();
    const std::size_t off = matrix.offset();
    auto fail = [off](MatrixCheck& check, std::size_t i, std::size_t j) {
        if (check.passed)
            check.first_offending = std::make_pair(off + i, off + j);
        check.passed = false;
    };

    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            const complex c = matrix.local(i, j);
            if (i == j && std::abs(c - complex(1.0, 0.0)) > tolerance)
                fail(report.unit_diagonal, i, j);
            if (std::abs(c) > 1.0 + tolerance)
                fail(report.modulus_bound, i, j);
            if (std::abs(c - std::conj(matrix.local(j, i))) > tolerance)
                fail(report.hermitian, i, j);
        }
    }
    return report;
}

/// Phase probability density <psi|F(phi)|psi> of a pure state, in 1/radian. For the
/// canonical measure this is |<phi|psi>|^2 = (1/2pi) |sum_n psi_n exp(-i n phi)|^2.
inline double phase_density(const FockState& state, const PhaseMatrix& matrix, double phi)
{
    if (matrix.is_canonical()) {
        complex sum(0.0, 0.0);
        std::size_t n = state.offset();
        for (const auto& a : state.amplitudes()) {
            const double angle = static_cast<double>(n) * phi;
            sum += a * complex(std::cos(angle), -std::sin(angle));
            ++n;
        }
        return std::norm(sum) / two_pi;
    }

    const auto report = validate_phase_matrix(matrix);
    if (!report.ok())
        throw InvalidMatrix("invalid phase matrix: " + report.describe());

    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i)
        if (amps[i] != complex(0.0, 0.0) && !matrix.covers(state.offset() + i))
            throw DomainError("state support exceeds the phase matrix window");

    double sum = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (amps[i] == complex(0.0, 0.0))
            continue;
        for (std::size_t j = 0; j < amps.size(); ++j) {
            if (amps[j] == complex(0.0, 0.0))
                continue;
            const std::size_t n = state.offset() + i;
            const std::size_t m = state.offset() + j;
            const double angle = (static_cast<double>(n) - static_cast<double>(m)) * phi;
            const complex term = matrix.coefficient(n, m) * std::conj(amps[i]) * amps[j]
                                 * complex(std::cos(angle), std::sin(angle));
            sum += term.real();
        }
    }
    return sum / two_pi;
}

namespace detail
{

/// Clamps a probability that rounding pushed slightly outside [0, 1].
inline double clamp_probability(double p)
{
    constexpr double slack = 1e-12;
    if (p < -slack || p > 1.0 + slack || !std::isfinite(p))
        throw InternalConsistencyError("probability " + std::to_string(p) + " outside [0, 1]");
    return std::clamp(p, 0.0, 1.0);
}

} // namespace detail

/// Probability that a canonical phase measurement lands in the window.
///
/// Uses the closed form of the window integral, grouped by the index difference d:
///
///     P = width/2pi + (2/pi) sum_{d>=1} Re(r_d exp(-i d center)) sin(d width/2) / d
///
/// with r_d = sum_n psi_{n+d} conj(psi_n). The integrand is 2pi-periodic, so windows
/// crossing +-pi need no splitting. The result is relative to the state's norm.
inline double interval_probability(const FockState& state, const PhaseWindow& window)
{
    const double ns = state.norm_squared();
    if (!(ns > 1e-300))
        throw ZeroState();
    const double width = window.width();
    if (width == 0.0)
        return 0.0;
    if (width == two_pi)
        return 1.0;

    const auto amps = state.amplitudes();
    const std::size_t size = amps.size();
    double off_diagonal = 0.0;
    for (std::size_t d = 1; d < size; ++d) {
        complex r(0.0, 0.0);
        for (std::size_t n = 0; n + d < size; ++n)
            r += amps[n + d] * std::conj(amps[n]);
        const double dd = static_cast<double>(d);
        const double angle = dd * window.center();
        const double rotated = r.real() * std::cos(angle) + r.imag() * std::sin(angle);
        off_diagonal += rotated * std::sin(0.5 * dd * width) / dd;
    }
    const double p = width / two_pi + (2.0 / pi) * off_diagonal / ns;
    return detail::clamp_probability(p);
}

/// Probability of a photon number in the window, relative to the state's norm.
inline double number_probability(const FockState& state, const NumberWindow& window)
{
    const double ns = state.norm_squared();
    if (!(ns > 1e-300))
        throw ZeroState();
    double inside = 0.0;
    std::size_t n = state.offset();
    for (const auto& a : state.amplitudes()) {
        if (window.contains(n))
            inside += std::norm(a);
        ++n;
    }
    return detail::clamp_probability(inside / ns);
}

/// State after a number measurement found a photon number in the window:
/// projected onto the window and renormalized.
inline FockState reduce(const FockState& state, const NumberWindow& window)
{
    const std::size_t lo = std::max(state.offset(), window.base());
    const std::size_t hi = std::min(state.end_index(), window.last() + 1);
    std::vector<complex> kept;
    if (lo < hi) {
        kept.reserve(hi - lo);
        for (std::size_t n = lo; n < hi; ++n)
            kept.push_back(state.amplitude(n));
    }
    FockState projected(lo < hi ? lo : window.base(), std::move(kept));
    if (!(projected.norm_squared() > 1e-300))
        throw IncompatibleWindow("state has no support in the number window {"
                                 + std::to_string(window.base()) + ".."
                                 + std::to_string(window.last()) + "}");
    return normalize(projected);
}

/// Probability of a phase in `phase` after a number measurement in `number`.
inline double conditional_probability(const FockState& state, const PhaseWindow& phase,
                                      const NumberWindow& number)
{
    return interval_probability(reduce(state, number), phase);
}

} // namespace phasebound

#endif // PHASEBOUND_CANONICAL_POVM_HPP
