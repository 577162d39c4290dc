#ifndef PHASEBOUND_SYMMETRIC_EIGEN_HPP
#define PHASEBOUND_SYMMETRIC_EIGEN_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "errors.hpp"

namespace phasebound
{

/// Dense square matrix of doubles, row-major.
class DenseMatrix
{
public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    static DenseMatrix identity(std::size_t n)
    {
        DenseMatrix m(n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    std::size_t size() const noexcept { return n_; }

    double& operator()(std::size_t row, std::size_t col) noexcept { return data_[row * n_ + col]; }
    double operator()(std::size_t row, std::size_t col) const noexcept { return data_[row * n_ + col]; }

    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * n_, n_}; }

    std::vector<double> multiply(std::span<const double> x) const
    {
        std::vector<double> y(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            const double* a = data_.data() + i * n_;
            double sum = 0.0;
            for (std::size_t j = 0; j < n_; ++j)
                sum += a[j] * x[j];
            y[i] = sum;
        }
        return y;
    }

    double trace() const noexcept
    {
        double t = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            t += (*this)(i, i);
        return t;
    }

    bool is_symmetric() const noexcept
    {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                if ((*this)(i, j) != (*this)(j, i))
                    return false;
        return true;
    }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Eigenpairs of a real symmetric matrix, eigenvalues in descending order.
struct EigenDecomposition
{
    std::vector<double> values;
    /// vectors[s] is the unit eigenvector paired with values[s].
    std::vector<std::vector<double>> vectors;
    int sweeps = 0;
};

/// Largest-magnitude component positive; among near-ties the lowest index decides.
inline void fix_sign(std::vector<double>& v)
{
    if (v.empty())
        return;
    double largest = 0.0;
    for (double x : v)
        largest = std::max(largest, std::abs(x));
    for (double x : v) {
        if (std::abs(x) >= largest * (1.0 - 1e-12)) {
            if (x < 0.0)
                for (double& y : v)
                    y = -y;
            return;
        }
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Sweeps over all off-diagonal pairs in row order, annihilating each element that
/// is not negligible next to its diagonal pair (|a_pq| <= eps sqrt|a_pp a_qq|).
/// Stops after the first sweep that performs no rotation.
inline EigenDecomposition jacobi_eigen(const DenseMatrix& input, int max_sweeps = 100)
{
    const std::size_t n = input.size();
    DenseMatrix a = input;
    // Eigenvectors accumulate as rows of vt: vt = V^T.
    DenseMatrix vt = DenseMatrix::identity(n);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();

    int sweep = 0;
    bool rotated = n > 1;
    while (rotated) {
        if (sweep == max_sweeps) {
            double off = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    off = std::max(off, std::abs(a(i, j)));
            throw ConvergenceFailure("Jacobi eigensolver did not converge", off, sweep);
        }
        ++sweep;
        rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                const double app = a(p, p);
                const double aqq = a(q, q);
                if (std::abs(apq) <= tiny || std::abs(apq) <= eps * std::sqrt(std::abs(app * aqq)))
                {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                rotated = true;

                const double theta = (aqq - app) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150)
                    t = 0.5 / theta;
                else
                    t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q)
                        continue;
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    const double new_rp = arp - s * (arq + tau * arp);
                    const double new_rq = arq + s * (arp - tau * arq);
                    a(r, p) = new_rp;
                    a(p, r) = new_rp;
                    a(r, q) = new_rq;
                    a(q, r) = new_rq;
                }
                double* vp = &vt(p, 0);
                double* vq = &vt(q, 0);
                for (std::size_t r = 0; r < n; ++r) {
                    const double xp = vp[r];
                    const double xq = vq[r];
                    vp[r] = xp - s * (xq + tau * xp);
                    vq[r] = xq + s * (xp - tau * xq);
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&a](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    EigenDecomposition result;
    result.sweeps = sweep;
    result.values.reserve(n);
    result.vectors.reserve(n);
    for (std::size_t idx : order) {
        result.values.push_back(a(idx, idx));
        auto r = vt.row(idx);
        std::vector<double> v(r.begin(), r.end());
        fix_sign(v);
        result.vectors.push_back(std::move(v));
    }
    return result;
}

/// Largest ||A v - lambda v|| over all eigenpairs.
inline double max_residual(const DenseMatrix& a, const EigenDecomposition& eig)
{
    double worst = 0.0;
    for (std::size_t s = 0; s < eig.values.size(); ++s) {
        const auto av = a.multiply(eig.vectors[s]);
        double sq = 0.0;
        for (std::size_t i = 0; i < av.size(); ++i) {
            const double d = av[i] - eig.values[s] * eig.vectors[s][i];
            sq += d * d;
        }
        worst = std::max(worst, std::sqrt(sq));
    }
    return worst;
}

/// Largest |<v_s, v_t> - delta_st|.
inline double orthogonality_defect(const EigenDecomposition& eig)
{
    double worst = 0.0;
    const std::size_t n = eig.vectors.size();
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = s; t < n; ++t) {
            const double dot = std::inner_product(eig.vectors[s].begin(), eig.vectors[s].end(),
                                                  eig.vectors[t].begin(), 0.0);
            worst = std::max(worst, std::abs(dot - (s == t ? 1.0 : 0.0)));
        }
    }
    return worst;
}

} // namespace phasebound

#endif // PHASEBOUND_SYMMETRIC_EIGEN_HPP
