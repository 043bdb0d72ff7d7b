#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Each one is written from the definition, without the library's kernels.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "bntr/bntr.hpp"

namespace oracle {

using bntr::Dims;

inline std::vector<std::size_t> unravel(std::size_t lin, const Dims& dims) {
    std::vector<std::size_t> idx(dims.size());
    for (std::size_t d = 0; d < dims.size(); ++d) {
        idx[d] = lin % dims[d];
        lin /= dims[d];
    }
    return idx;
}

/// Column of entry `idx` in the mode-d unfolding: remaining modes in
/// ascending order, the lowest one fastest.
inline std::size_t unfolding_column(const std::vector<std::size_t>& idx, const Dims& dims, std::size_t mode) {
    std::size_t col = 0, stride = 1;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (k == mode) continue;
        col += idx[k] * stride;
        stride *= dims[k];
    }
    return col;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i) m(i, j) = n(rng);
    return m;
}

inline bntr::DenseTensor random_tensor(const Dims& dims, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    bntr::DenseTensor t(dims);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = u(rng);
    return t;
}

inline bntr::FactorSet random_factors(const Dims& dims, int rank, int q, std::mt19937_64& rng) {
    bntr::FactorSet fs;
    for (auto p : dims) fs.factors.push_back(random_matrix(static_cast<Eigen::Index>(p), rank, rng));
    if (q > 0) fs.coeffs = random_matrix(q, rank, rng);
    return fs;
}

/// Dense Phi(X): dims p_1..p_D x (K-1) with the truncated reduced basis.
inline bntr::DenseTensor dense_phi(const bntr::DenseTensor& x, const bntr::SplineBasis& basis) {
    Dims dims = x.dims();
    const auto q = static_cast<std::size_t>(basis.reduced_size());
    dims.push_back(q);
    bntr::DenseTensor out(dims);
    for (std::size_t j = 0; j < x.size(); ++j) {
        const Eigen::VectorXd b = basis.eval_truncated_reduced(x[j]);
        for (std::size_t k = 0; k < q; ++k) out[j + x.size() * k] = b(static_cast<Eigen::Index>(k));
    }
    return out;
}

/// Direct evaluation of nu + (1/s) sum_r sum_j prod_d beta * alpha_r' btilde(x_j).
inline double predict_direct(double nu, const bntr::FactorSet& fs, const bntr::DenseTensor& x,
                             const bntr::SplineBasis& basis) {
    const auto& dims = x.dims();
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const auto idx = unravel(j, dims);
        const Eigen::VectorXd b = basis.eval_truncated_reduced(x[j]);
        for (Eigen::Index r = 0; r < fs.rank(); ++r) {
            double w = 1.0;
            for (std::size_t d = 0; d < dims.size(); ++d) w *= fs.factors[d](static_cast<Eigen::Index>(idx[d]), r);
            acc += w * fs.coeffs.col(r).dot(b);
        }
    }
    return nu + acc / static_cast<double>(x.size());
}

/// Monte Carlo L2 norm of x -> c' (btilde(x) - u) on [0,1].
inline double mc_centered_norm(const Eigen::VectorXd& c, const bntr::SplineBasis& basis, std::size_t points,
                               std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> vals(points);
    double mean = 0.0;
    for (std::size_t t = 0; t < points; ++t) {
        vals[t] = c.dot(basis.eval_truncated_reduced(u(rng)));
        mean += vals[t];
    }
    mean /= static_cast<double>(points);
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(points));
}

/// Minimizer over t in [lo, hi] of a unimodal f by repeated grid zooming.
inline double zoom_minimize(const std::function<double(double)>& f, double lo, double hi, int rounds = 12,
                            int points = 201) {
    double best = lo;
    for (int round = 0; round < rounds; ++round) {
        double best_val = f(lo);
        best = lo;
        const double h = (hi - lo) / (points - 1);
        for (int i = 1; i < points; ++i) {
            const double t = lo + h * i;
            const double v = f(t);
            if (v < best_val) {
                best_val = v;
                best = t;
            }
        }
        lo = best - 2.0 * h;
        hi = best + 2.0 * h;
    }
    return best;
}

/// Elastic-net penalty (lambda1 = 1) of the scaled blocks rho_d * beta_d.
inline double scaled_penalty(const std::vector<Eigen::VectorXd>& blocks, const std::vector<double>& rho,
                             double lambda2) {
    double g = 0.0;
    for (std::size_t d = 0; d < blocks.size(); ++d) {
        const Eigen::VectorXd b = rho[d] * blocks[d];
        g += 0.5 * (1.0 - lambda2) * b.squaredNorm() + lambda2 * b.lpNorm<1>();
    }
    return g;
}

}  // namespace oracle
