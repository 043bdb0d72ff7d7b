#include <gtest/gtest.h>

#include <random>

#include "bntr/elastic_net.hpp"
#include "oracles.hpp"

using namespace bntr;

namespace {

double objective(const Eigen::MatrixXd& z, const Eigen::VectorXd& r, const Eigen::VectorXd& b, double l1, double l2) {
    return (r - z * b).squaredNorm() + l1 * (0.5 * (1.0 - l2) * b.squaredNorm() + l2 * b.lpNorm<1>());
}

}  // namespace

TEST(ElasticNet, SoftThreshold) {
    EXPECT_EQ(soft_threshold(3.0, 1.0), 2.0);
    EXPECT_EQ(soft_threshold(-3.0, 1.0), -2.0);
    EXPECT_EQ(soft_threshold(0.5, 1.0), 0.0);
}

TEST(ElasticNet, UnpenalizedIsLeastSquares) {
    std::mt19937_64 rng(1);
    const Eigen::MatrixXd z = oracle::random_matrix(40, 6, rng);
    const Eigen::VectorXd r = oracle::random_matrix(40, 1, rng);
    const Eigen::VectorXd b = solve_penalized_block(z, r, 0.0, 0.5, Eigen::VectorXd::Zero(6));
    EXPECT_LT((z.transpose() * (r - z * b)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(ElasticNet, OrthonormalDesignClosedForm) {
    std::mt19937_64 rng(2);
    const Eigen::MatrixXd a = oracle::random_matrix(30, 5, rng);
    const Eigen::MatrixXd z = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ() * Eigen::MatrixXd::Identity(30, 5);
    const Eigen::VectorXd r = 2.0 * oracle::random_matrix(30, 1, rng);
    for (double l2 : {0.0, 0.3, 1.0}) {
        const double l1 = 1.7;
        const Eigen::VectorXd b = solve_penalized_block(z, r, l1, l2, Eigen::VectorXd::Zero(5));
        const Eigen::VectorXd y = z.transpose() * r;
        for (int j = 0; j < 5; ++j) {
            EXPECT_NEAR(b(j), soft_threshold(2.0 * y(j), l1 * l2) / (2.0 + l1 * (1.0 - l2)), 1e-10);
        }
    }
}

TEST(ElasticNet, HeavyLassoZeroesEverything) {
    std::mt19937_64 rng(3);
    const Eigen::MatrixXd z = oracle::random_matrix(20, 4, rng);
    const Eigen::VectorXd r = oracle::random_matrix(20, 1, rng);
    EXPECT_EQ(solve_penalized_block(z, r, 1e6, 1.0, Eigen::VectorXd::Ones(4)).norm(), 0.0);
}

TEST(ElasticNet, KktConditionsAtSolution) {
    std::mt19937_64 rng(4);
    for (double l2 : {0.25, 0.5, 0.9}) {
        const Eigen::MatrixXd z = oracle::random_matrix(50, 8, rng);
        const Eigen::VectorXd r = oracle::random_matrix(50, 1, rng);
        const double l1 = 10.0;
        const Eigen::VectorXd b = solve_penalized_block(z, r, l1, l2, Eigen::VectorXd::Zero(8));
        const Eigen::VectorXd grad = -2.0 * z.transpose() * (r - z * b) + l1 * (1.0 - l2) * b;
        for (int j = 0; j < 8; ++j) {
            if (b(j) != 0.0) EXPECT_NEAR(grad(j) + l1 * l2 * (b(j) > 0 ? 1.0 : -1.0), 0.0, 1e-6);
            else EXPECT_LE(std::abs(grad(j)), l1 * l2 + 1e-6);
        }
        // No random perturbation improves the objective.
        const double f = objective(z, r, b, l1, l2);
        for (int t = 0; t < 200; ++t) {
            const Eigen::VectorXd p = b + 1e-3 * oracle::random_matrix(8, 1, rng);
            EXPECT_GE(objective(z, r, p, l1, l2), f - 1e-12);
        }
    }
}

TEST(ElasticNet, RidgeDirectSolveAgreesWithCoordinateDescent) {
    std::mt19937_64 rng(5);
    const Eigen::MatrixXd z = oracle::random_matrix(30, 6, rng);
    const Eigen::VectorXd r = oracle::random_matrix(30, 1, rng);
    const Eigen::VectorXd direct = solve_penalized_block(z, r, 2.0, 0.0, Eigen::VectorXd::Zero(6));
    const Eigen::MatrixXd g = z.transpose() * z;
    CoordinateDescentOptions opts;
    opts.max_sweeps = 10000;
    opts.tolerance = 1e-13;
    const auto cd = elastic_net_cd(g, z.transpose() * r, 2.0, 0.0, Eigen::VectorXd::Zero(6), opts);
    EXPECT_TRUE(cd.converged);
    EXPECT_LT((direct - cd.beta).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(ElasticNet, ZeroColumnWithoutRidgeGetsZero) {
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(5, 2);
    z.col(0) << 1, 2, 3, 4, 5;
    const Eigen::VectorXd r = z.col(0);
    const auto cd = elastic_net_cd(z.transpose() * z, z.transpose() * r, 1.0, 1.0, Eigen::Vector2d(0.0, 3.0));
    EXPECT_EQ(cd.beta(1), 0.0);
}
