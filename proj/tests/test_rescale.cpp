#include <gtest/gtest.h>

#include <random>

#include "bntr/rescale.hpp"
#include "bntr/solver.hpp"
#include "oracles.hpp"

using namespace bntr;

TEST(Rescale, LassoClosedFormExample) {
    const std::vector<Eigen::VectorXd> blocks{Eigen::Vector2d(3.0, -1.0), Eigen::Vector2d(0.5, 0.5)};
    const Eigen::VectorXd rho = rescale_weights(blocks, 1.0);
    EXPECT_NEAR(rho(0), 0.5, 1e-14);
    EXPECT_NEAR(rho(1), 2.0, 1e-14);
    EXPECT_NEAR((rho(0) * blocks[0]).lpNorm<1>(), 2.0, 1e-14);
    EXPECT_NEAR((rho(1) * blocks[1]).lpNorm<1>(), 2.0, 1e-14);
}

TEST(Rescale, EqualNormsGiveUnitScales) {
    const std::vector<Eigen::VectorXd> l2_equal{Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.0, -1.0),
                                                Eigen::Vector2d(0.6, 0.8)};
    EXPECT_TRUE(rescale_weights(l2_equal, 0.0).isApprox(Eigen::Vector3d::Ones(), 1e-12));
    const std::vector<Eigen::VectorXd> l1_equal{Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.0, -1.0),
                                                Eigen::Vector2d(0.25, -0.75)};
    EXPECT_TRUE(rescale_weights(l1_equal, 1.0).isApprox(Eigen::Vector3d::Ones(), 1e-12));
    // With mixed penalties equal l1 and l2 norms are needed for symmetry.
    const std::vector<Eigen::VectorXd> same{Eigen::Vector2d(1.0, 2.0), Eigen::Vector2d(2.0, -1.0),
                                            Eigen::Vector2d(-1.0, 2.0)};
    EXPECT_TRUE(rescale_weights(same, 0.4).isApprox(Eigen::Vector3d::Ones(), 1e-12));
}

TEST(Rescale, ZeroBlocksArePinned) {
    const std::vector<Eigen::VectorXd> blocks{Eigen::Vector2d(4.0, 0.0), Eigen::Vector2d::Zero(),
                                              Eigen::Vector2d(1.0, 0.0)};
    for (double l2 : {0.0, 0.5, 1.0}) {
        const Eigen::VectorXd rho = rescale_weights(blocks, l2);
        EXPECT_EQ(rho(1), 1.0);
        EXPECT_NEAR(rho(0) * rho(2), 1.0, 1e-12);
        EXPECT_NEAR(rho(0) * 4.0, rho(2) * 1.0, 1e-9);
    }
    const std::vector<Eigen::VectorXd> single{Eigen::Vector2d(4.0, 0.0), Eigen::Vector2d::Zero()};
    EXPECT_EQ(rescale_weights(single, 0.5), Eigen::Vector2d::Ones());
}

TEST(Rescale, MatchesGridOracle) {
    std::mt19937_64 rng(1);
    for (double l2 : {0.0, 0.2, 0.5, 0.8, 1.0}) {
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<Eigen::VectorXd> blocks;
            for (int d = 0; d < 2; ++d) blocks.push_back(oracle::random_matrix(3 + d, 1, rng) * (1.0 + 3.0 * d));
            const Eigen::VectorXd rho = rescale_weights(blocks, l2);
            const double t = oracle::zoom_minimize(
                [&](double t) { return oracle::scaled_penalty(blocks, {std::exp(t), std::exp(-t)}, l2); }, -10.0,
                10.0);
            EXPECT_NEAR(rho(0), std::exp(t), 1e-6 * std::exp(t));
            EXPECT_NEAR(rho(1), std::exp(-t), 1e-6 * std::exp(-t));
        }
    }
}

TEST(Rescale, MatchesGridOracleThreeBlocks) {
    std::mt19937_64 rng(2);
    for (double l2 : {0.3, 0.7}) {
        std::vector<Eigen::VectorXd> blocks;
        for (int d = 0; d < 3; ++d) blocks.push_back(oracle::random_matrix(2 + d, 1, rng) * (0.5 + d));
        const Eigen::VectorXd rho = rescale_weights(blocks, l2);
        // Coordinate-wise zooming over (t1, t2), t3 = -t1 - t2; convex so it converges.
        double t1 = 0.0, t2 = 0.0;
        for (int sweep = 0; sweep < 60; ++sweep) {
            t1 = oracle::zoom_minimize(
                [&](double a) { return oracle::scaled_penalty(blocks, {std::exp(a), std::exp(t2), std::exp(-a - t2)}, l2); },
                t1 - 5.0, t1 + 5.0, 8);
            t2 = oracle::zoom_minimize(
                [&](double b) { return oracle::scaled_penalty(blocks, {std::exp(t1), std::exp(b), std::exp(-t1 - b)}, l2); },
                t2 - 5.0, t2 + 5.0, 8);
        }
        EXPECT_NEAR(std::log(rho(0)), t1, 1e-6);
        EXPECT_NEAR(std::log(rho(1)), t2, 1e-6);
        EXPECT_NEAR(rho.prod(), 1.0, 1e-12);
    }
}

TEST(Rescale, DominatesRandomFeasibleScalings) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 1.0);
    for (double l2 : {0.0, 0.5, 1.0}) {
        std::vector<Eigen::VectorXd> blocks;
        for (int d = 0; d < 3; ++d) blocks.push_back(oracle::random_matrix(4, 1, rng));
        const Eigen::VectorXd rho = rescale_weights(blocks, l2);
        const double best = oracle::scaled_penalty(blocks, {rho(0), rho(1), rho(2)}, l2);
        int strict = 0;
        const int trials = 10000;
        for (int t = 0; t < trials; ++t) {
            const double a = n(rng), b = n(rng);
            const double v = oracle::scaled_penalty(blocks, {std::exp(a), std::exp(b), std::exp(-a - b)}, l2);
            EXPECT_GE(v, best - 1e-12);
            if (v > best) ++strict;
        }
        EXPECT_GE(strict, trials * 99 / 100);
    }
}

TEST(Rescale, FactorsProductIsPreserved) {
    std::mt19937_64 rng(4);
    std::vector<Eigen::MatrixXd> f{oracle::random_matrix(3, 2, rng), oracle::random_matrix(4, 2, rng),
                                   oracle::random_matrix(2, 2, rng)};
    const Eigen::MatrixXd before = rank_one_weights(f);
    const Eigen::MatrixXd rho = rescale_factors(f, 0.5);
    for (Eigen::Index r = 0; r < 2; ++r) EXPECT_NEAR(rho.row(r).prod(), 1.0, 1e-12);
    EXPECT_LT((rank_one_weights(f) - before).cwiseAbs().maxCoeff(), 1e-12);
}

// The squared loss only sees the products w_{r,j}.
TEST(Rescale, LossInvariantUnderFeasibleScaling) {
    std::mt19937_64 rng(5);
    const Dims dims{3, 4};
    const SplineBasis basis(4, {0.5});
    Eigen::MatrixXd x(12, 30);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = u(rng);
    const Dataset data(dims, x, oracle::random_matrix(30, 1, rng));
    FitConfig cfg;
    cfg.rank = 2;
    cfg.lambda1 = 1.0;
    cfg.lambda2 = 0.5;
    Parameters theta;
    theta.intercept = 0.3;
    theta.blocks = oracle::random_factors(dims, 2, 4, rng);
    Parameters scaled = theta;
    scaled.blocks.factors[0].col(0) *= 3.0;
    scaled.blocks.factors[1].col(0) /= 3.0;
    scaled.blocks.factors[0].col(1) *= 0.1;
    scaled.blocks.factors[1].col(1) *= 10.0;
    const BlockRelaxation a(data, basis, cfg, theta), b(data, basis, cfg, scaled);
    EXPECT_NEAR(a.loss(), b.loss(), 1e-10 * std::max(1.0, a.loss()));
    EXPECT_NE(a.penalty(), b.penalty());
}
