#include <cmath>
#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include <phasebound/symmetric_eigen.hpp>

namespace pb = phasebound;

namespace
{

pb::DenseMatrix random_symmetric(std::mt19937_64& rng, std::size_t n)
{
    std::normal_distribution<double> gauss;
    pb::DenseMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            a(i, j) = a(j, i) = gauss(rng);
    return a;
}

double reconstruction_error(const pb::DenseMatrix& a, const pb::EigenDecomposition& eig)
{
    double worst = 0.0;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double sum = 0.0;
            for (std::size_t s = 0; s < n; ++s)
                sum += eig.vectors[s][i] * eig.values[s] * eig.vectors[s][j];
            worst = std::max(worst, std::abs(sum - a(i, j)));
        }
    return worst;
}

} // namespace

TEST(JacobiEigen, TwoByTwoSymmetricToeplitz)
{
    // [[a, b], [b, a]] has eigenvalues a + b, a - b with vectors (1, 1)/sqrt2, (1, -1)/sqrt2.
    pb::DenseMatrix m(2);
    m(0, 0) = m(1, 1) = 0.3;
    m(0, 1) = m(1, 0) = 0.2;
    const auto eig = pb::jacobi_eigen(m);
    EXPECT_NEAR(eig.values[0], 0.5, 1e-15);
    EXPECT_NEAR(eig.values[1], 0.1, 1e-15);
    EXPECT_NEAR(eig.vectors[0][0], 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(eig.vectors[0][1], 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(std::abs(eig.vectors[1][0]), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(eig.vectors[1][0], -eig.vectors[1][1], 1e-15);
}

TEST(JacobiEigen, DiagonalAndZeroMatrices)
{
    pb::DenseMatrix d(3);
    d(0, 0) = 1.0;
    d(1, 1) = 3.0;
    d(2, 2) = 2.0;
    const auto eig = pb::jacobi_eigen(d);
    EXPECT_EQ(eig.values, (std::vector<double>{3.0, 2.0, 1.0}));
    EXPECT_EQ(eig.vectors[0], (std::vector<double>{0.0, 1.0, 0.0}));

    const auto zero = pb::jacobi_eigen(pb::DenseMatrix(4));
    for (double v : zero.values)
        EXPECT_EQ(v, 0.0);
    EXPECT_EQ(zero.vectors[0], (std::vector<double>{1.0, 0.0, 0.0, 0.0}));

    const auto empty = pb::jacobi_eigen(pb::DenseMatrix(0));
    EXPECT_TRUE(empty.values.empty());
}

TEST(JacobiEigen, RandomMatricesReconstruct)
{
    std::mt19937_64 rng(41);
    for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 17u, 40u}) {
        const auto a = random_symmetric(rng, n);
        const auto eig = pb::jacobi_eigen(a);
        EXPECT_LE(reconstruction_error(a, eig), 1e-12 * static_cast<double>(n));
        EXPECT_LE(pb::max_residual(a, eig), 1e-12 * static_cast<double>(n));
        EXPECT_LE(pb::orthogonality_defect(eig), 1e-13);
        EXPECT_TRUE(std::is_sorted(eig.values.rbegin(), eig.values.rend()));
        EXPECT_NEAR(std::accumulate(eig.values.begin(), eig.values.end(), 0.0), a.trace(), 1e-12 * n);
    }
}

TEST(JacobiEigen, SignConvention)
{
    std::mt19937_64 rng(42);
    const auto eig = pb::jacobi_eigen(random_symmetric(rng, 6));
    for (const auto& v : eig.vectors) {
        double largest = 0.0;
        std::size_t where = 0;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (std::abs(v[i]) > largest * (1.0 + 1e-12)) {
                largest = std::abs(v[i]);
                where = i;
            }
        EXPECT_GT(v[where], 0.0);
    }
}

TEST(JacobiEigen, ZeroDiagonalOffDiagonalOnly)
{
    pb::DenseMatrix m(3);
    m(0, 1) = m(1, 0) = 1.0;
    m(1, 2) = m(2, 1) = 1.0;
    const auto eig = pb::jacobi_eigen(m);
    EXPECT_NEAR(eig.values[0], std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(eig.values[1], 0.0, 1e-15);
    EXPECT_NEAR(eig.values[2], -std::sqrt(2.0), 1e-15);
}
