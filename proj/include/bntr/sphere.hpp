#pragma once

// min ||c - M a||^2 subject to ||a||_2 = 1, in normal-equation form: given
// H = M'M and g = M'c, find mu >= -lambda_min(H) with (H + mu I) a = g and
// ||a|| = 1 (the secular equation), solved in the eigenbasis of H.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "bntr/error.hpp"

namespace bntr {

struct SphereSolution {
    Eigen::VectorXd alpha;
    double mu = 0.0;
    bool degenerate = false;  ///< g = 0; alpha is a bottom eigenvector
    bool hard_case = false;   ///< g orthogonal to the bottom eigenspace
};

namespace detail {

/// First canonical direction projected onto span(basis), normalized.
inline Eigen::VectorXd canonical_direction(const Eigen::MatrixXd& basis) {
    const Eigen::Index q = basis.rows();
    for (Eigen::Index k = 0; k < q; ++k) {
        Eigen::VectorXd v = basis * basis.row(k).transpose();
        const double nv = v.norm();
        if (nv > 1e-8) return v / nv;
    }
    return Eigen::VectorXd::Unit(q, 0);
}

/// Root of ||a(delta)|| = 1 where a_i(delta) = gamma_i / (shift_i + delta),
/// shift_i >= 0, on a bracket where the norm decreases through 1.
inline double secular_root(const Eigen::VectorXd& gamma, const Eigen::VectorXd& shift, double lo, double hi) {
    auto norm_at = [&](double delta, double* dnorm) {
        double n2 = 0.0, d = 0.0;
        for (Eigen::Index i = 0; i < gamma.size(); ++i) {
            const double den = shift(i) + delta;
            if (gamma(i) == 0.0) continue;
            const double a = gamma(i) / den;
            n2 += a * a;
            d += a * a / den;
        }
        const double n = std::sqrt(n2);
        if (dnorm) *dnorm = n > 0 ? -d / n : 0.0;
        return n;
    };
    // Newton on 1/||a|| - 1, which is close to linear in delta.
    double delta = hi;
    for (int it = 0; it < 200; ++it) {
        double dn = 0.0;
        const double n = norm_at(delta, &dn);
        if (std::abs(n - 1.0) < 1e-13) return delta;
        if (n > 1.0) lo = delta; else hi = delta;
        double next = std::numeric_limits<double>::quiet_NaN();
        if (n > 0.0 && dn != 0.0) {
            const double phi = 1.0 / n - 1.0;
            const double dphi = -dn / (n * n);
            next = delta - phi / dphi;
        }
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(hi))) return next;
        delta = next;
    }
    return delta;
}

}  // namespace detail

inline SphereSolution solve_sphere_lsq(const Eigen::MatrixXd& h, const Eigen::VectorXd& g) {
    const Eigen::Index q = g.size();
    detail::require(q >= 1 && h.rows() == q && h.cols() == q, "sphere subproblem shape mismatch");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    const Eigen::VectorXd lam = eig.eigenvalues();
    const Eigen::MatrixXd& v = eig.eigenvectors();
    const double lam_min = lam(0);
    const double scale = std::max({std::abs(lam(q - 1)), std::abs(lam_min), std::numeric_limits<double>::min()});
    const double eig_tol = 1e-10 * scale;

    Eigen::Index bottom = 1;
    while (bottom < q && lam(bottom) - lam_min <= eig_tol) ++bottom;
    const Eigen::MatrixXd bottom_space = v.leftCols(bottom);

    SphereSolution sol;
    const double gnorm = g.norm();
    if (gnorm == 0.0) {
        sol.degenerate = true;
        sol.alpha = detail::canonical_direction(bottom_space);
        sol.mu = -lam_min;
        return sol;
    }

    const Eigen::VectorXd gamma = v.transpose() * g;
    Eigen::VectorXd shift = (lam.array() - lam_min).matrix();
    shift.head(bottom).setZero();
    const double g_bottom = gamma.head(bottom).norm();

    if (g_bottom <= 1e-12 * gnorm) {
        // Bottom eigenspace invisible to g: check the limit delta -> 0.
        Eigen::VectorXd partial = Eigen::VectorXd::Zero(q);
        for (Eigen::Index i = bottom; i < q; ++i) partial(i) = gamma(i) / shift(i);
        const double pn = partial.norm();
        if (pn <= 1.0) {
            sol.hard_case = true;
            const Eigen::VectorXd dir = detail::canonical_direction(bottom_space);
            sol.alpha = v * partial + std::sqrt(std::max(0.0, 1.0 - pn * pn)) * dir;
            sol.mu = -lam_min;
            return sol;
        }
        Eigen::VectorXd gamma_top = gamma;
        gamma_top.head(bottom).setZero();
        const double delta = detail::secular_root(gamma_top, shift, 0.0, gnorm);
        Eigen::VectorXd a(q);
        for (Eigen::Index i = 0; i < q; ++i) a(i) = i < bottom ? 0.0 : gamma(i) / (shift(i) + delta);
        sol.alpha = (v * a).normalized();
        sol.mu = delta - lam_min;
        return sol;
    }

    // ||a(delta)|| is decreasing on (0, inf) and crosses 1 in [|g_bottom|, ||g||].
    const double delta = detail::secular_root(gamma, shift, g_bottom * (1.0 - 1e-12), gnorm * (1.0 + 1e-12));
    Eigen::VectorXd a(q);
    for (Eigen::Index i = 0; i < q; ++i) a(i) = gamma(i) / (shift(i) + delta);
    sol.alpha = (v * a).normalized();
    sol.mu = delta - lam_min;
    return sol;
}

/// Convenience overload taking the design M and target c directly.
inline SphereSolution solve_sphere_lsq_design(const Eigen::MatrixXd& m, const Eigen::VectorXd& c) {
    return solve_sphere_lsq(m.transpose() * m, m.transpose() * c);
}

}  // namespace bntr
