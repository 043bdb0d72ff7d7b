#include <gtest/gtest.h>

#include <random>

#include "bntr/spline.hpp"
#include "oracles.hpp"

using namespace bntr;

TEST(BSpline, PartitionOfUnityAndNonnegativity) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const SplineBasis& b : {SplineBasis(4, {0.2, 0.45, 0.8}), SplineBasis(3, {0.5}), SplineBasis(2, {}),
                                 SplineBasis(1, {0.3, 0.6})}) {
        for (int t = 0; t < 1000; ++t) {
            const Eigen::VectorXd v = b.eval_bspline(u(rng));
            EXPECT_NEAR(v.sum(), 1.0, 1e-12);
            EXPECT_GE(v.minCoeff(), 0.0);
        }
        EXPECT_NEAR(b.eval_bspline(1.0).sum(), 1.0, 1e-12);
    }
}

TEST(BSpline, ClampedEnds) {
    const SplineBasis b(4, {0.25, 0.5, 0.75});
    const Eigen::VectorXd v0 = b.eval_bspline(0.0);
    EXPECT_EQ(v0(0), 1.0);
    EXPECT_EQ(v0.tail(v0.size() - 1).cwiseAbs().sum(), 0.0);
    const Eigen::VectorXd v1 = b.eval_bspline(1.0);
    EXPECT_EQ(v1(v1.size() - 1), 1.0);
}

TEST(BSpline, OrderOneIsIntervalIndicator) {
    const SplineBasis b(1, {0.3, 0.6});
    EXPECT_EQ(b.eval_bspline(0.1), Eigen::Vector3d(1, 0, 0));
    EXPECT_EQ(b.eval_bspline(0.45), Eigen::Vector3d(0, 1, 0));
    EXPECT_EQ(b.eval_bspline(0.9), Eigen::Vector3d(0, 0, 1));
}

TEST(BSpline, DomainErrors) {
    const SplineBasis b(4, {0.5});
    EXPECT_THROW(b.eval_bspline(-0.01), DomainError);
    EXPECT_THROW(b.eval_bspline(1.01), DomainError);
    EXPECT_THROW(b.eval_truncated_reduced(1.5), DomainError);
    EXPECT_THROW(SplineBasis(4, {0.5, 0.4}), InvalidArgument);
    EXPECT_THROW(SplineBasis(4, {1.0}), InvalidArgument);
}

TEST(TruncatedBasis, Monomials) {
    const SplineBasis b(4, {});
    EXPECT_TRUE(b.eval_truncated_reduced(0.5).isApprox(Eigen::Vector3d(0.5, 0.25, 0.125)));
}

TEST(TruncatedBasis, ZeroBelowKnots) {
    const SplineBasis b(4, {0.4, 0.7});
    const Eigen::VectorXd v = b.eval_truncated_reduced(0.3);
    EXPECT_EQ(v(3), 0.0);
    EXPECT_EQ(v(4), 0.0);
    EXPECT_NEAR(b.eval_truncated_reduced(0.9)(3), std::pow(0.5, 3), 1e-15);
}

// Least-squares change of basis on a fine grid, verified on fresh points.
TEST(TruncatedBasis, SpansTheBSplineSpace) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const SplineBasis& b : {SplineBasis(4, {0.25, 0.5, 0.75}), SplineBasis(3, {0.1, 0.35, 0.9}),
                                 SplineBasis(2, {0.5})}) {
        const int K = b.size();
        const int grid = 400;
        Eigen::MatrixXd t(grid, K), s(grid, K);
        for (int i = 0; i < grid; ++i) {
            const double x = (i + 0.5) / grid;
            t.row(i) = b.eval_truncated_full(x).transpose();
            s.row(i) = b.eval_bspline(x).transpose();
        }
        const Eigen::MatrixXd q = t.colPivHouseholderQr().solve(s);  // s ~ t q
        const Eigen::MatrixXd qinv = s.colPivHouseholderQr().solve(t);
        for (int k = 0; k < 50; ++k) {
            const double x = u(rng);
            const Eigen::VectorXd full = b.eval_truncated_full(x);
            const Eigen::VectorXd bs = b.eval_bspline(x);
            EXPECT_LT((q.transpose() * full - bs).cwiseAbs().maxCoeff(), 1e-8);
            EXPECT_LT((qinv.transpose() * bs - full).cwiseAbs().maxCoeff(), 1e-8);
        }
        // Random B-spline coefficients are reproduced by truncated coefficients.
        const Eigen::VectorXd c = oracle::random_matrix(K, 1, rng);
        const Eigen::VectorXd ct = q * c;
        for (int k = 0; k < 50; ++k) {
            const double x = u(rng);
            EXPECT_NEAR(b.eval_bspline(x).dot(c), b.eval_truncated_full(x).dot(ct), 1e-8);
        }
    }
}

TEST(CenteredData, AnalyticIntegrals) {
    const SplineBasis b(4, {0.5});
    const CenteredBasisData c = b.centered_data();
    EXPECT_NEAR(c.integrals(1), 0.5, 1e-15);
    EXPECT_NEAR(c.integrals(2), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(c.integrals(4), 0.015625, 1e-15);
    EXPECT_NEAR(c.gram(0, 0), 1.0 / 12.0, 1e-14);
}

TEST(CenteredData, CenteredFunctionsIntegrateToZeroAndGramMatchesMonteCarlo) {
    const SplineBasis b(4, {0.2, 0.55, 0.7});
    const CenteredBasisData c = b.centered_data();
    const int q = b.reduced_size();
    // Composite Simpson on a fine grid as an independent integrator.
    const int m = 20000;
    Eigen::VectorXd integral = Eigen::VectorXd::Zero(q);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(q, q);
    for (int i = 0; i <= m; ++i) {
        const double x = static_cast<double>(i) / m;
        const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const Eigen::VectorXd g = b.eval_truncated_reduced(x) - c.reduced_integrals;
        integral += w * g;
        gram += w * g * g.transpose();
    }
    integral /= 3.0 * m;
    gram /= 3.0 * m;
    EXPECT_LT(integral.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((gram - c.gram).cwiseAbs().maxCoeff(), 1e-12);

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd mc = Eigen::MatrixXd::Zero(q, q);
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd g = b.eval_truncated_reduced(u(rng)) - c.reduced_integrals;
        mc.noalias() += g * g.transpose();
    }
    mc /= n;
    for (int k = 0; k < q; ++k) EXPECT_NEAR(mc(k, k) / c.gram(k, k), 1.0, 5e-3);
    EXPECT_NEAR(mc(0, 0), 1.0 / 12.0, 5e-3 / 12.0);

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c.gram);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-14);
    EXPECT_TRUE(c.gram.isApprox(c.gram.transpose(), 0.0));
}

TEST(DefaultKnots, UniformGridQuartiles) {
    std::vector<double> grid(1001);
    for (int i = 0; i <= 1000; ++i) grid[static_cast<std::size_t>(i)] = i / 1000.0;
    const SplineBasis b = default_knots(grid, 7, 4);
    ASSERT_EQ(b.interior_knots().size(), 3u);
    EXPECT_NEAR(b.interior_knots()[0], 0.25, 1e-12);
    EXPECT_NEAR(b.interior_knots()[1], 0.5, 1e-12);
    EXPECT_NEAR(b.interior_knots()[2], 0.75, 1e-12);
    EXPECT_EQ(b.size(), 7);
}

TEST(DefaultKnots, NoInteriorKnotsWhenKEqualsOrder) {
    const std::vector<double> v{0.1, 0.2, 0.3};
    EXPECT_TRUE(default_knots(v, 4, 4).interior_knots().empty());
}

TEST(DefaultKnots, DegenerateSamples) {
    const std::vector<double> constant(100, 0.4);
    EXPECT_THROW(default_knots(constant, 7, 4), DegenerateData);
    const std::vector<double> outside{0.1, 1.2};
    EXPECT_THROW(default_knots(outside, 5, 4), DomainError);
}

TEST(DefaultKnots, TiedQuantilesAreMadeStrict) {
    // Mostly 0.5 with a few distinct values: raw quantiles coincide.
    std::vector<double> v(100, 0.5);
    v[0] = 0.1;
    v[1] = 0.2;
    v[2] = 0.9;
    v[3] = 0.95;
    const SplineBasis b = default_knots(v, 7, 4);
    const auto& k = b.interior_knots();
    ASSERT_EQ(k.size(), 3u);
    EXPECT_LT(k[0], k[1]);
    EXPECT_LT(k[1], k[2]);
    EXPECT_DOUBLE_EQ(k[0], 0.5);
}
