#pragma once

// Balancing of the per-mode scales of each CP component. For component r,
// choose rho_{r,d} > 0 with prod_d rho_{r,d} = 1 to minimize the elastic-net
// penalty sum_d (1-l2)/2 ||rho beta||_2^2 + l2 ||rho beta||_1. Zero blocks are
// pinned at rho = 1 and the product constraint runs over the active blocks.

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "bntr/error.hpp"

namespace bntr {

/// Penalty of one vector under the elastic net with lambda1 = 1.
inline double elastic_net_penalty(const Eigen::Ref<const Eigen::VectorXd>& beta, double lambda2) {
    return 0.5 * (1.0 - lambda2) * beta.squaredNorm() + lambda2 * beta.lpNorm<1>();
}

/// Optimal scales for one component given its D blocks.
inline Eigen::VectorXd rescale_weights(const std::vector<Eigen::VectorXd>& blocks, double lambda2) {
    detail::require(lambda2 >= 0.0 && lambda2 <= 1.0, "lambda2 must lie in [0,1]");
    const auto D = static_cast<Eigen::Index>(blocks.size());
    Eigen::VectorXd rho = Eigen::VectorXd::Ones(D);
    std::vector<Eigen::Index> active;
    for (Eigen::Index d = 0; d < D; ++d) {
        if (blocks[static_cast<std::size_t>(d)].cwiseAbs().maxCoeff() > 0.0) active.push_back(d);
    }
    const auto m = static_cast<Eigen::Index>(active.size());
    if (m <= 1) return rho;

    Eigen::VectorXd l1(m), l2(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const auto& b = blocks[static_cast<std::size_t>(active[static_cast<std::size_t>(k)])];
        l1(k) = b.lpNorm<1>();
        l2(k) = b.norm();
    }

    auto closed_form = [&](const Eigen::VectorXd& norms) {
        const double log_geo = norms.array().log().mean();
        for (Eigen::Index k = 0; k < m; ++k) {
            rho(active[static_cast<std::size_t>(k)]) = std::exp(log_geo - std::log(norms(k)));
        }
    };
    if (lambda2 == 1.0) {
        closed_form(l1);
        return rho;
    }
    if (lambda2 == 0.0) {
        closed_form(l2);
        return rho;
    }

    // Convex in t = log rho: f(t) = sum a_k e^{2 t_k} + b_k e^{t_k}, sum t_k = 0.
    const Eigen::ArrayXd a = 0.5 * (1.0 - lambda2) * l2.array().square();
    const Eigen::ArrayXd b = lambda2 * l1.array();
    auto objective = [&](const Eigen::ArrayXd& t) { return (a * (2.0 * t).exp() + b * t.exp()).sum(); };

    Eigen::ArrayXd t = Eigen::ArrayXd::Zero(m);
    for (int it = 0; it < 100; ++it) {
        const Eigen::ArrayXd e = t.exp();
        const Eigen::ArrayXd grad = 2.0 * a * e * e + b * e;
        const Eigen::ArrayXd hess = 4.0 * a * e * e + b * e;
        const Eigen::ArrayXd projected = grad - grad.mean();
        if (std::sqrt(projected.square().sum()) < 1e-10 * std::max(1.0, std::sqrt(grad.square().sum()))) break;
        // Equality-constrained Newton step: H dt = -(grad - nu), sum dt = 0.
        const double nu = (grad / hess).sum() / (1.0 / hess).sum();
        const Eigen::ArrayXd step = -(grad - nu) / hess;
        double scale = 1.0;
        const double f0 = objective(t);
        while (scale > 1e-12 && objective(t + scale * step) > f0) scale *= 0.5;
        t += scale * step;
        t -= t.mean();
    }
    for (Eigen::Index k = 0; k < m; ++k) rho(active[static_cast<std::size_t>(k)]) = std::exp(t(k));
    return rho;
}

/// Applies the optimal scales to every component in place and returns the
/// R x D matrix of factors used.
inline Eigen::MatrixXd rescale_factors(std::vector<Eigen::MatrixXd>& factors, double lambda2) {
    detail::require(!factors.empty(), "no factor matrices");
    const Eigen::Index R = factors.front().cols();
    const auto D = static_cast<Eigen::Index>(factors.size());
    Eigen::MatrixXd rho(R, D);
    std::vector<Eigen::VectorXd> blocks(static_cast<std::size_t>(D));
    for (Eigen::Index r = 0; r < R; ++r) {
        for (Eigen::Index d = 0; d < D; ++d) blocks[static_cast<std::size_t>(d)] = factors[static_cast<std::size_t>(d)].col(r);
        const Eigen::VectorXd w = rescale_weights(blocks, lambda2);
        rho.row(r) = w.transpose();
        for (Eigen::Index d = 0; d < D; ++d) factors[static_cast<std::size_t>(d)].col(r) *= w(d);
    }
    return rho;
}

}  // namespace bntr
