#pragma once

// Elastic-net penalized least squares for one factor block:
//
//   min_b ||r - Z b||^2 + lambda1 * sum_j { (1 - lambda2)/2 b_j^2 + lambda2 |b_j| }
//
// Columns are not standardized; the penalty acts on raw coefficient scales.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "bntr/error.hpp"

namespace bntr {

inline double soft_threshold(double z, double t) noexcept {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

struct CoordinateDescentOptions {
    int max_sweeps = 200;
    double tolerance = 1e-9;  ///< max absolute coefficient change per sweep
};

struct CoordinateDescentResult {
    Eigen::VectorXd beta;
    int sweeps = 0;
    bool converged = false;
};

/// Covariance-form coordinate descent. `gram` = Z'Z and `ztr` = Z'r.
/// Each coordinate takes the closed form
///   b_j = S(2 z_j' r_j, lambda1 lambda2) / (2 z_j' z_j + lambda1 (1 - lambda2))
/// with r_j the partial residual; a zero denominator sets b_j = 0.
inline CoordinateDescentResult elastic_net_cd(const Eigen::MatrixXd& gram, const Eigen::VectorXd& ztr,
                                              double lambda1, double lambda2, Eigen::VectorXd warm,
                                              const CoordinateDescentOptions& opts = {}) {
    const Eigen::Index p = ztr.size();
    detail::require(gram.rows() == p && gram.cols() == p && warm.size() == p, "elastic net shape mismatch");
    const double l1 = lambda1 * lambda2;
    const double l2 = lambda1 * (1.0 - lambda2);

    CoordinateDescentResult res;
    res.beta = std::move(warm);
    Eigen::VectorXd grad = ztr - gram * res.beta;  // Z'(r - Z b)
    for (res.sweeps = 1; res.sweeps <= opts.max_sweeps; ++res.sweeps) {
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            const double gjj = gram(j, j);
            const double old = res.beta(j);
            const double rho = grad(j) + gjj * old;
            const double den = 2.0 * gjj + l2;
            const double next = den > 0.0 ? soft_threshold(2.0 * rho, l1) / den : 0.0;
            const double delta = next - old;
            if (delta != 0.0) {
                res.beta(j) = next;
                grad.noalias() -= delta * gram.col(j);
                max_change = std::max(max_change, std::abs(delta));
            }
        }
        if (max_change < opts.tolerance) {
            res.converged = true;
            break;
        }
    }
    res.sweeps = std::min(res.sweeps, opts.max_sweeps);
    return res;
}

/// Exact block minimizer: minimum-norm least squares when lambda1 = 0, the
/// ridge normal equations when lambda2 = 0, coordinate descent otherwise.
inline Eigen::VectorXd solve_penalized_block(const Eigen::MatrixXd& z, const Eigen::VectorXd& r,
                                             double lambda1, double lambda2, const Eigen::VectorXd& warm,
                                             const CoordinateDescentOptions& opts = {}) {
    detail::require(lambda1 >= 0.0 && lambda2 >= 0.0 && lambda2 <= 1.0, "invalid elastic net penalty");
    if (lambda1 == 0.0) {
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(z);
        return cod.solve(r);
    }
    Eigen::MatrixXd gram(z.cols(), z.cols());
    gram.setZero();
    gram.selfadjointView<Eigen::Lower>().rankUpdate(z.transpose());
    gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
    const Eigen::VectorXd ztr = z.transpose() * r;
    if (lambda2 == 0.0) {
        Eigen::MatrixXd a = 2.0 * gram;
        a.diagonal().array() += lambda1;
        return a.llt().solve(2.0 * ztr);
    }
    return elastic_net_cd(gram, ztr, lambda1, lambda2, warm, opts).beta;
}

}  // namespace bntr
