#pragma once

// The fitted broadcasted regression function
//
//   m(X) = nu + (1/s) * sum_r < beta_{r,1} o ... o beta_{r,D} o alpha_r, Phi(X) >
//
// where Phi(X) stacks the truncated (constant-free) spline basis evaluated at
// every entry of X. Entry j therefore carries the univariate function
// x -> c_j' btilde(x) with c_j = (1/s) sum_r w_{r,j} alpha_r.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bntr/dataset.hpp"
#include "bntr/error.hpp"
#include "bntr/spline.hpp"
#include "bntr/tensor.hpp"

namespace bntr {

enum class DomainPolicy { strict, clamp };

/// Per-entry L2 norms of the centered fitted effects.
using NormTensor = DenseTensor;

/// Centered effect x -> coeffs' (btilde(x) - u) of one entry, plus the
/// constant coeffs' u that the centering moves into the intercept.
struct EntryFunction {
    Eigen::VectorXd coeffs;
    double constant = 0.0;
};

class BroadcastModel {
public:
    BroadcastModel(double intercept, FactorSet factors, Dims dims, SplineBasis basis)
        : intercept_(intercept),
          factors_(std::move(factors)),
          dims_(std::move(dims)),
          basis_(std::move(basis)),
          centered_(basis_.centered_data()) {
        factors_.validate(dims_);
        detail::require(factors_.has_coeffs(), "model needs a spline coefficient block");
        detail::require(factors_.coeffs.rows() == basis_.reduced_size(),
                        "coefficient rows must equal K - 1 of the basis");
        s_ = bntr::num_entries(dims_);
        const Eigen::MatrixXd w = rank_one_weights(factors_.factors);
        entry_coeffs_ = (factors_.coeffs * w.transpose()) / static_cast<double>(s_);
    }

    double intercept() const noexcept { return intercept_; }
    const FactorSet& factors() const noexcept { return factors_; }
    const Dims& dims() const noexcept { return dims_; }
    const SplineBasis& basis() const noexcept { return basis_; }
    const CenteredBasisData& centered() const noexcept { return centered_; }
    std::size_t num_entries() const noexcept { return s_; }
    Eigen::Index rank() const { return factors_.rank(); }

    /// (K-1) x s matrix whose column j is c_j.
    const Eigen::MatrixXd& entry_coefficients() const noexcept { return entry_coeffs_; }

    double predict(const DenseTensor& x, DomainPolicy policy = DomainPolicy::strict) const {
        if (x.dims() != dims_) throw InvalidArgument("covariate dims " + dims_to_string(x.dims()) +
                                                     " do not match model dims " + dims_to_string(dims_));
        return predict_entries(x.values(), policy);
    }

    Eigen::VectorXd predict(const Dataset& data, DomainPolicy policy = DomainPolicy::strict) const {
        if (data.dims() != dims_) throw InvalidArgument("dataset dims do not match model dims");
        Eigen::VectorXd out(data.n());
        for (Eigen::Index i = 0; i < data.n(); ++i) {
            const auto col = data.covariates().col(i);
            out(i) = predict_entries({col.data(), static_cast<std::size_t>(col.size())}, policy);
        }
        return out;
    }

    /// Prediction from s entries in canonical order.
    double predict_entries(std::span<const double> entries, DomainPolicy policy = DomainPolicy::strict) const {
        detail::require(entries.size() == s_, "entry count does not match model");
        const int q = basis_.reduced_size();
        Eigen::VectorXd phi(q);
        double acc = 0.0;
        for (std::size_t j = 0; j < s_; ++j) {
            double v = entries[j];
            if (!(v >= 0.0 && v <= 1.0)) {
                if (policy == DomainPolicy::strict || std::isnan(v)) {
                    throw DomainError("covariate entry " + std::to_string(v) + " outside [0,1]");
                }
                v = std::clamp(v, 0.0, 1.0);
            }
            basis_.truncated_reduced_into(v, phi.data());
            acc += entry_coeffs_.col(static_cast<Eigen::Index>(j)).dot(phi);
        }
        return intercept_ + acc;
    }

    EntryFunction entrywise_function(std::size_t linear_index) const {
        if (linear_index >= s_) throw InvalidArgument("entry index out of range");
        EntryFunction f;
        f.coeffs = entry_coeffs_.col(static_cast<Eigen::Index>(linear_index));
        f.constant = f.coeffs.dot(centered_.reduced_integrals);
        return f;
    }

    EntryFunction entrywise_function(std::span<const std::size_t> index) const {
        return entrywise_function(DenseTensor(dims_).linear_index(index));
    }

    /// Value of the centered effect of entry j at x.
    double entry_effect(std::size_t linear_index, double x) const {
        const auto f = entrywise_function(linear_index);
        return f.coeffs.dot(basis_.eval_truncated_reduced(x) - centered_.reduced_integrals);
    }

    /// Stored intercept plus every entry's centering constant.
    double aggregate_intercept() const {
        return intercept_ + (entry_coeffs_.transpose() * centered_.reduced_integrals).sum();
    }

    NormTensor norm_tensor() const {
        const Eigen::MatrixXd gc = centered_.gram * entry_coeffs_;
        DenseTensor out(dims_);
        for (std::size_t j = 0; j < s_; ++j) {
            const auto col = static_cast<Eigen::Index>(j);
            out[j] = std::sqrt(std::max(0.0, entry_coeffs_.col(col).dot(gc.col(col))));
        }
        return out;
    }

private:
    double intercept_;
    FactorSet factors_;
    Dims dims_;
    SplineBasis basis_;
    CenteredBasisData centered_;
    std::size_t s_ = 0;
    Eigen::MatrixXd entry_coeffs_;
};

/// Largest k such that every k-subset of columns is linearly independent.
/// Subset rank uses singular values relative to the largest singular value of
/// the whole matrix (tolerance 1e-8).
inline int k_rank(const Eigen::MatrixXd& b, double tol = 1e-8) {
    const auto R = static_cast<int>(b.cols());
    if (R > 12) throw Unsupported("k-rank enumeration supports at most 12 columns");
    if (R == 0) return 0;
    const double scale = Eigen::JacobiSVD<Eigen::MatrixXd>(b).singularValues()(0);
    if (scale == 0.0) return 0;
    int best = 0;
    for (int k = 1; k <= R; ++k) {
        if (k > b.rows()) break;
        bool all_independent = true;
        for (std::uint32_t mask = 0; mask < (1u << R) && all_independent; ++mask) {
            if (__builtin_popcount(mask) != k) continue;
            Eigen::MatrixXd sub(b.rows(), k);
            int c = 0;
            for (int r = 0; r < R; ++r) {
                if (mask & (1u << r)) sub.col(c++) = b.col(r);
            }
            const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(sub).singularValues();
            if (sv(k - 1) <= tol * scale) all_independent = false;
        }
        if (!all_independent) break;
        best = k;
    }
    return best;
}

struct IdentifiabilityReport {
    std::vector<int> k_ranks;
    bool satisfied = false;
};

/// Kruskal-type sufficient condition sum_d k(B_d) >= 2R + D - 1.
inline IdentifiabilityReport identifiability_check(const FactorSet& fs) {
    if (fs.factors.empty()) throw InvalidArgument("factor set is empty");
    const auto R = static_cast<int>(fs.rank());
    if (R > 12) throw Unsupported("identifiability check supports rank <= 12");
    IdentifiabilityReport rep;
    int total = 0;
    for (const auto& b : fs.factors) {
        rep.k_ranks.push_back(k_rank(b));
        total += rep.k_ranks.back();
    }
    const int D = static_cast<int>(fs.factors.size());
    rep.satisfied = total >= 2 * R + D - 1;
    return rep;
}

}  // namespace bntr
