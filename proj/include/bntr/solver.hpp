#pragma once

// Scale-adjusted block relaxation for the penalized broadcasted model.
//
// One outer iteration updates B_1..B_D (elastic-net regressions on the
// unfolded design), the spline coefficient block (unit-sphere least squares
// per component), the intercept, and finally rebalances the per-mode scales
// of every component. Every step is an exact block minimization, so the
// objective LG = L + G never increases.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bntr/dataset.hpp"
#include "bntr/elastic_net.hpp"
#include "bntr/error.hpp"
#include "bntr/model.hpp"
#include "bntr/rescale.hpp"
#include "bntr/sphere.hpp"
#include "bntr/spline.hpp"
#include "bntr/tensor.hpp"

namespace bntr {

enum class InitStrategy { random, sequential_downsize };

struct InitPlan {
    InitStrategy strategy = InitStrategy::sequential_downsize;
    double C = 10.0;    ///< down-sizing constant
    int eta = 3;        ///< ladder length
    int max_iters = 200;  ///< cap for each unpenalized ladder fit
};

struct FitConfig {
    int rank = 1;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    int K = 7;
    int order = 4;
    /// Explicit interior knots; empty means quantile knots from the data.
    std::optional<std::vector<double>> interior_knots;
    double epsilon = 1e-6;
    bool absolute_tolerance = false;
    int max_iters = 500;
    std::uint64_t seed = 0;
    InitPlan init;
    /// Drop the unit-norm constraint and the rescaling step (lambda1 must be 0).
    bool unpenalized = false;
    /// lambda1 values fitted first, each warm-starting the next.
    std::vector<double> lambda1_path;
    std::size_t cache_budget_bytes = std::size_t{1} << 30;
    int chunk_samples = 64;

    void validate() const {
        detail::require(rank >= 1, "rank must be at least 1");
        detail::require(lambda1 >= 0.0 && std::isfinite(lambda1), "lambda1 must be finite and >= 0");
        detail::require(lambda2 >= 0.0 && lambda2 <= 1.0, "lambda2 must lie in [0,1]");
        detail::require(order >= 1 && K >= order, "basis needs order >= 1 and K >= order");
        detail::require(K >= 2, "basis needs K >= 2 to carry a nonconstant effect");
        detail::require(epsilon > 0.0, "epsilon must be positive");
        detail::require(max_iters >= 1, "max_iters must be positive");
        detail::require(init.C > 0.0 && init.eta >= 1 && init.max_iters >= 1, "invalid initialization plan");
        detail::require(!unpenalized || lambda1 == 0.0, "unpenalized mode requires lambda1 = 0");
        detail::require(chunk_samples >= 1, "chunk size must be positive");
        for (double l : lambda1_path) detail::require(l >= 0.0 && std::isfinite(l), "invalid lambda1 path value");
    }
};

/// theta = (intercept, B_1..B_D, coefficient block).
struct Parameters {
    double intercept = 0.0;
    FactorSet blocks;
};

struct IterationRecord {
    int iter = 0;
    double objective = 0.0;  ///< LG
    double loss = 0.0;       ///< L
    double penalty = 0.0;    ///< G
};

using FitObserver = std::function<void(const IterationRecord&)>;

struct FitResult {
    BroadcastModel model;
    Parameters theta;
    /// LG at the starting point followed by LG after each outer iteration.
    std::vector<double> objective_trace;
    std::vector<IterationRecord> records;
    bool converged = false;
    int iterations = 0;
};

/// Elastic-net penalty G over all factor blocks.
inline double penalty_value(const std::vector<Eigen::MatrixXd>& factors, double lambda1, double lambda2) {
    if (lambda1 == 0.0) return 0.0;
    double g = 0.0;
    for (const auto& b : factors) {
        g += 0.5 * (1.0 - lambda2) * b.squaredNorm() + lambda2 * b.cwiseAbs().sum();
    }
    return lambda1 * g;
}

/// Truncated-basis evaluations of every entry of every sample, laid out as an
/// (n*s) x (K-1) matrix whose rows run over entries fastest, then samples.
/// Stored once when it fits the memory budget, otherwise produced per chunk.
class BasisCache {
public:
    using ChunkRef = Eigen::Ref<const Eigen::MatrixXd, 0, Eigen::OuterStride<>>;

    BasisCache(const Dataset& data, const SplineBasis& basis, std::size_t budget_bytes, int chunk)
        : data_(&data), basis_(&basis), chunk_(chunk) {
        const auto rows = static_cast<std::size_t>(data.n()) * static_cast<std::size_t>(data.s());
        const auto bytes = rows * static_cast<std::size_t>(basis.reduced_size()) * sizeof(double);
        if (bytes <= budget_bytes) {
            stored_.resize(static_cast<Eigen::Index>(rows), basis.reduced_size());
            fill(0, data.n(), stored_);
            cached_ = true;
        }
    }

    bool cached() const noexcept { return cached_; }

    /// f(first_sample, count, block) for consecutive sample chunks.
    template <class F>
    void for_each_chunk(F&& f) const {
        const Eigen::Index n = data_->n(), s = data_->s();
        for (Eigen::Index i0 = 0; i0 < n; i0 += chunk_) {
            const Eigen::Index count = std::min<Eigen::Index>(chunk_, n - i0);
            if (cached_) {
                f(i0, count, ChunkRef(stored_.middleRows(i0 * s, count * s)));
            } else {
                buffer_.resize(count * s, basis_->reduced_size());
                fill(i0, count, buffer_);
                f(i0, count, ChunkRef(buffer_));
            }
        }
    }

private:
    void fill(Eigen::Index i0, Eigen::Index count, Eigen::MatrixXd& out) const {
        const Eigen::Index s = data_->s();
        const int q = basis_->reduced_size();
        std::vector<double> row(static_cast<std::size_t>(q));
        for (Eigen::Index i = 0; i < count; ++i) {
            const double* x = data_->covariates().col(i0 + i).data();
            for (Eigen::Index j = 0; j < s; ++j) {
                basis_->truncated_reduced_into(x[j], row.data());
                for (int k = 0; k < q; ++k) out(i * s + j, k) = row[static_cast<std::size_t>(k)];
            }
        }
    }

    const Dataset* data_;
    const SplineBasis* basis_;
    Eigen::Index chunk_;
    bool cached_ = false;
    Eigen::MatrixXd stored_;
    mutable Eigen::MatrixXd buffer_;
};

/// Block-update state for one fit. Holds references to the data and basis,
/// which must outlive it.
class BlockRelaxation {
public:
    BlockRelaxation(const Dataset& data, const SplineBasis& basis, FitConfig cfg, Parameters start)
        : data_(data),
          basis_(basis),
          cfg_(std::move(cfg)),
          theta_(std::move(start)),
          cache_(data, basis, cfg_.cache_budget_bytes, cfg_.chunk_samples) {
        cfg_.validate();
        theta_.blocks.validate(data_.dims());
        detail::require(theta_.blocks.has_coeffs() && theta_.blocks.coeffs.rows() == basis_.reduced_size(),
                        "starting coefficient block must have K - 1 rows");
        detail::require(theta_.blocks.rank() == cfg_.rank, "starting parameters have the wrong rank");
        detail::require(data_.n() >= 2, "fitting needs at least two samples");
        const auto& dims = data_.dims();
        strides_ = strides_of(dims);
        refresh_fitted();
    }

    const Parameters& parameters() const noexcept { return theta_; }
    const FitConfig& config() const noexcept { return cfg_; }
    /// Current model part of the predictions (without intercept).
    const Eigen::VectorXd& fitted() const noexcept { return fitted_; }

    double loss() const { return (data_.responses().array() - theta_.intercept - fitted_.array()).square().sum(); }
    double penalty() const { return penalty_value(theta_.blocks.factors, cfg_.lambda1, cfg_.lambda2); }
    double objective() const { return loss() + penalty(); }

    /// Design for factor block d: row i is vec(Phi(X_i)_(d) B_{-d}) / s, with
    /// columns ordered like vec(B_d) (entry index fastest, then component).
    Eigen::MatrixXd factor_design(std::size_t d) const {
        const auto& dims = data_.dims();
        const Eigen::Index s = data_.s();
        const Eigen::Index R = cfg_.rank;
        const auto pd = static_cast<Eigen::Index>(dims[d]);
        const auto stride = static_cast<Eigen::Index>(strides_[d]);
        const Eigen::Index outer = s / (stride * pd);
        const Eigen::MatrixXd others = rank_one_weights(theta_.blocks.factors, static_cast<std::ptrdiff_t>(d));

        Eigen::MatrixXd z(data_.n(), pd * R);
        Eigen::VectorXd weighted(s);
        const bool reuse = curve_values_ready();
        Eigen::MatrixXd local;
        cache_.for_each_chunk([&](Eigen::Index i0, Eigen::Index count, const BasisCache::ChunkRef& phi) {
            if (!reuse) local.noalias() = phi * theta_.blocks.coeffs;
            // (count*s) x R block of btilde(x_ij)' alpha_r
            const auto psi = reuse ? curve_values_.middleRows(i0 * s, count * s) : local.middleRows(0, count * s);
            for (Eigen::Index i = 0; i < count; ++i) {
                for (Eigen::Index r = 0; r < R; ++r) {
                    weighted = psi.col(r).segment(i * s, s).cwiseProduct(others.col(r));
                    // Sum over every mode except d: view as stride x (pd*outer),
                    // collapse the fast modes, then the slow ones.
                    const Eigen::RowVectorXd fast =
                        Eigen::Map<const Eigen::MatrixXd>(weighted.data(), stride, pd * outer).colwise().sum();
                    const Eigen::VectorXd marg =
                        Eigen::Map<const Eigen::MatrixXd>(fast.data(), pd, outer).rowwise().sum();
                    z.row(i0 + i).segment(r * pd, pd) = marg.transpose();
                }
            }
        });
        z /= static_cast<double>(s);
        return z;
    }

    /// Stacked per-component designs for the coefficient block: columns
    /// r*(K-1) .. r*(K-1)+K-2 hold (1/s) sum_j w_{r,j} btilde(x_ij).
    Eigen::MatrixXd coeff_design() const {
        const Eigen::Index s = data_.s();
        const Eigen::Index R = cfg_.rank;
        const int q = basis_.reduced_size();
        const Eigen::MatrixXd w = rank_one_weights(theta_.blocks.factors);
        Eigen::MatrixXd h(data_.n(), R * q);
        cache_.for_each_chunk([&](Eigen::Index i0, Eigen::Index count, const BasisCache::ChunkRef& phi) {
            for (int k = 0; k < q; ++k) {
                const Eigen::Map<const Eigen::MatrixXd> slab(phi.col(k).data(), s, count);
                const Eigen::MatrixXd proj = w.transpose() * slab;  // R x count
                for (Eigen::Index r = 0; r < R; ++r) {
                    h.col(r * q + k).segment(i0, count) = proj.row(r).transpose();
                }
            }
        });
        h /= static_cast<double>(s);
        return h;
    }

    void update_factor_block(std::size_t d) {
        detail::require(d < data_.dims().size(), "mode index out of range");
        const Eigen::MatrixXd z = factor_design(d);
        const Eigen::VectorXd target = data_.responses().array() - theta_.intercept;
        auto& b = theta_.blocks.factors[d];
        const Eigen::VectorXd warm = Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());
        const Eigen::VectorXd beta = solve_penalized_block(z, target, cfg_.lambda1, cfg_.lambda2, warm);
        b = Eigen::Map<const Eigen::MatrixXd>(beta.data(), b.rows(), b.cols());
        fitted_ = z * beta;
    }

    void update_coeff_block() {
        curve_values_fresh_ = false;
        const Eigen::MatrixXd h = coeff_design();
        const Eigen::VectorXd target = data_.responses().array() - theta_.intercept;
        auto& a = theta_.blocks.coeffs;
        const int q = basis_.reduced_size();
        if (cfg_.unpenalized) {
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(h);
            const Eigen::VectorXd sol = cod.solve(target);
            a = Eigen::Map<const Eigen::MatrixXd>(sol.data(), q, cfg_.rank);
            fitted_ = h * sol;
            return;
        }
        fitted_ = h * Eigen::Map<const Eigen::VectorXd>(a.data(), a.size());
        for (Eigen::Index r = 0; r < cfg_.rank; ++r) {
            const auto m = h.middleCols(r * q, q);
            const Eigen::VectorXd own = m * a.col(r);
            const Eigen::VectorXd c = target - (fitted_ - own);
            const SphereSolution sol = solve_sphere_lsq(m.transpose() * m, m.transpose() * c);
            a.col(r) = sol.alpha;
            fitted_ += m * sol.alpha - own;
        }
    }

    void update_intercept() { theta_.intercept = (data_.responses() - fitted_).mean(); }

    void rescale() {
        if (cfg_.unpenalized) return;
        rescale_factors(theta_.blocks.factors, cfg_.lambda2);
    }

    /// Recomputes the fitted values from scratch through the coefficient design.
    void refresh_fitted() {
        const auto& a = theta_.blocks.coeffs;
        fitted_ = coeff_design() * Eigen::Map<const Eigen::VectorXd>(a.data(), a.size());
    }

    IterationRecord record(int iter) const {
        IterationRecord rec;
        rec.iter = iter;
        rec.loss = loss();
        rec.penalty = penalty();
        rec.objective = rec.loss + rec.penalty;
        return rec;
    }

    /// Runs outer iterations until the decrease test or max_iters.
    FitResult run(const FitObserver& observer = {}) {
        std::vector<IterationRecord> records{record(0)};
        if (observer) observer(records.back());
        bool converged = false;
        int iter = 0;
        for (iter = 1; iter <= cfg_.max_iters; ++iter) {
            for (std::size_t d = 0; d < data_.dims().size(); ++d) update_factor_block(d);
            update_coeff_block();
            update_intercept();
            rescale();
            records.push_back(record(iter));
            if (observer) observer(records.back());
            const double prev = records[records.size() - 2].objective;
            const double now = records.back().objective;
            const double tol = cfg_.absolute_tolerance ? cfg_.epsilon : cfg_.epsilon * (1.0 + std::abs(prev));
            if (prev - now <= tol) {
                converged = true;
                break;
            }
        }
        std::vector<double> trace;
        trace.reserve(records.size());
        for (const auto& r : records) trace.push_back(r.objective);
        return FitResult{BroadcastModel(theta_.intercept, theta_.blocks, data_.dims(), basis_),
                         theta_,
                         std::move(trace),
                         std::move(records),
                         converged,
                         std::min(iter, cfg_.max_iters)};
    }

private:
    // The factor designs of one sweep share alpha, so btilde(x_ij)' alpha_r is
    // computed once per sweep when it fits in the cache budget.
    bool curve_values_ready() const {
        if (curve_values_fresh_) return true;
        const auto entries = static_cast<std::size_t>(data_.n()) * static_cast<std::size_t>(data_.s());
        const auto bytes = entries * static_cast<std::size_t>(cfg_.rank + basis_.reduced_size()) * sizeof(double);
        if (!cache_.cached() || bytes > cfg_.cache_budget_bytes) return false;
        curve_values_.resize(data_.n() * data_.s(), cfg_.rank);
        cache_.for_each_chunk([&](Eigen::Index i0, Eigen::Index count, const BasisCache::ChunkRef& phi) {
            curve_values_.middleRows(i0 * data_.s(), count * data_.s()).noalias() = phi * theta_.blocks.coeffs;
        });
        curve_values_fresh_ = true;
        return true;
    }

    const Dataset& data_;
    const SplineBasis& basis_;
    FitConfig cfg_;
    Parameters theta_;
    BasisCache cache_;
    std::vector<std::size_t> strides_;
    Eigen::VectorXd fitted_;
    // Kept allocated across sweeps; the flag marks it stale after alpha moves.
    mutable Eigen::MatrixXd curve_values_;
    mutable bool curve_values_fresh_ = false;
};

/// Moves each ||alpha_r|| into the factor blocks (split evenly across modes)
/// so the coefficient columns have unit norm; zero columns become e_1.
inline void normalize_coefficients(Parameters& theta) {
    auto& a = theta.blocks.coeffs;
    const auto D = static_cast<double>(theta.blocks.factors.size());
    for (Eigen::Index r = 0; r < a.cols(); ++r) {
        const double nrm = a.col(r).norm();
        if (nrm == 0.0) {
            a.col(r) = Eigen::VectorXd::Unit(a.rows(), 0);
            for (auto& b : theta.blocks.factors) b.col(r).setZero();
            continue;
        }
        a.col(r) /= nrm;
        const double per_mode = std::pow(nrm, 1.0 / D);
        for (auto& b : theta.blocks.factors) b.col(r) *= per_mode;
    }
}

/// Standard-normal factors and coefficients; the intercept starts at mean(y).
inline Parameters random_parameters(const Dims& dims, int rank, int q, double intercept, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Parameters theta;
    theta.intercept = intercept;
    for (auto p : dims) {
        Eigen::MatrixXd b(static_cast<Eigen::Index>(p), rank);
        for (Eigen::Index c = 0; c < b.cols(); ++c)
            for (Eigen::Index r = 0; r < b.rows(); ++r) b(r, c) = normal(rng);
        theta.blocks.factors.push_back(std::move(b));
    }
    theta.blocks.coeffs.resize(q, rank);
    for (Eigen::Index c = 0; c < theta.blocks.coeffs.cols(); ++c)
        for (Eigen::Index r = 0; r < q; ++r) theta.blocks.coeffs(r, c) = normal(rng);
    return theta;
}

/// Block boundaries for pooling p entries into t groups: group a covers
/// [floor(a p / t), floor((a+1) p / t)).
inline std::vector<std::size_t> pooling_groups(std::size_t p, std::size_t t) {
    detail::require(t >= 1 && t <= p, "pooled size must lie in [1, p]");
    std::vector<std::size_t> group(p);
    for (std::size_t a = 0; a < t; ++a) {
        for (std::size_t i = a * p / t; i < (a + 1) * p / t; ++i) group[i] = a;
    }
    return group;
}

/// Block-averages every covariate tensor down to `target` dims.
inline Dataset pool_dataset(const Dataset& data, const Dims& target) {
    const auto& dims = data.dims();
    detail::require(target.size() == dims.size(), "pooled dims must keep the tensor order");
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t d = 0; d < dims.size(); ++d) groups.push_back(pooling_groups(dims[d], target[d]));
    const auto t_strides = strides_of(target);
    const std::size_t st = num_entries(target);
    const auto s = static_cast<std::size_t>(data.s());

    std::vector<std::size_t> dest(s);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(st));
    for (std::size_t j = 0; j < s; ++j) {
        std::size_t rem = j, lin = 0;
        for (std::size_t d = 0; d < dims.size(); ++d) {
            lin += groups[d][rem % dims[d]] * t_strides[d];
            rem /= dims[d];
        }
        dest[j] = lin;
        counts(static_cast<Eigen::Index>(lin)) += 1.0;
    }
    Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(st), data.n());
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        const double* x = data.covariates().col(i).data();
        for (std::size_t j = 0; j < s; ++j) pooled(static_cast<Eigen::Index>(dest[j]), i) += x[j];
        pooled.col(i).array() /= counts.array();
    }
    return Dataset(target, std::move(pooled), data.responses());
}

/// Replicates each pooled factor entry over its block of original entries.
inline Parameters upsize_parameters(const Parameters& small, const Dims& small_dims, const Dims& dims) {
    Parameters out = small;
    for (std::size_t d = 0; d < dims.size(); ++d) {
        const auto group = pooling_groups(dims[d], small_dims[d]);
        const auto& b = small.blocks.factors[d];
        Eigen::MatrixXd big(static_cast<Eigen::Index>(dims[d]), b.cols());
        for (std::size_t i = 0; i < dims[d]; ++i) big.row(static_cast<Eigen::Index>(i)) = b.row(static_cast<Eigen::Index>(group[i]));
        out.blocks.factors[d] = std::move(big);
    }
    return out;
}

/// Mode sizes of each stage of the down-sizing ladder, smallest first. Stages
/// stay below the full size except for modes already no larger than C.
inline std::vector<Dims> downsize_ladder(const Dims& dims, Eigen::Index n, int rank, const InitPlan& plan) {
    std::size_t sum_p = 0;
    for (auto p : dims) sum_p += p;
    const double vartheta = static_cast<double>(n) / (plan.C * rank * static_cast<double>(sum_p));
    if (vartheta <= 1.0) return {dims};
    std::vector<Dims> ladder;
    const auto lo_cap = static_cast<std::size_t>(std::ceil(plan.C));
    for (int t = 0; t < plan.eta; ++t) {
        Dims stage(dims.size());
        for (std::size_t d = 0; d < dims.size(); ++d) {
            const std::size_t lo = std::max<std::size_t>(1, std::min(lo_cap, dims[d]));
            const double frac = static_cast<double>(t) / plan.eta;
            stage[d] = lo + static_cast<std::size_t>(std::floor(frac * static_cast<double>(dims[d] - lo)));
        }
        if (ladder.empty() || ladder.back() != stage) ladder.push_back(std::move(stage));
    }
    return ladder;
}

inline SplineBasis basis_for(const Dataset& data, const FitConfig& cfg) {
    if (cfg.interior_knots) {
        SplineBasis b(cfg.order, *cfg.interior_knots);
        detail::require(b.size() == cfg.K, "explicit knots do not match K and order");
        return b;
    }
    const auto& x = data.covariates();
    return default_knots({x.data(), static_cast<std::size_t>(x.size())}, cfg.K, cfg.order);
}

FitResult fit_from(const Dataset& data, const SplineBasis& basis, const FitConfig& cfg, Parameters start,
                   const FitObserver& observer = {});

/// Starting parameters: seeded random, or unpenalized fits chained up the
/// down-sizing ladder and replicated back to full size.
inline Parameters initialize(const Dataset& data, const SplineBasis& basis, const FitConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    const int q = basis.reduced_size();
    const double ybar = data.responses().mean();
    Parameters theta;
    if (cfg.init.strategy == InitStrategy::random) {
        theta = random_parameters(data.dims(), cfg.rank, q, ybar, rng);
    } else {
        const auto ladder = downsize_ladder(data.dims(), data.n(), cfg.rank, cfg.init);
        FitConfig stage_cfg = cfg;
        stage_cfg.unpenalized = true;
        stage_cfg.lambda1 = 0.0;
        stage_cfg.lambda1_path.clear();
        stage_cfg.max_iters = cfg.init.max_iters;
        theta = random_parameters(ladder.front(), cfg.rank, q, ybar, rng);
        Dims current = ladder.front();
        for (const auto& stage : ladder) {
            if (stage != current) {
                theta = upsize_parameters(theta, current, stage);
                current = stage;
            }
            if (stage == data.dims()) {
                theta = fit_from(data, basis, stage_cfg, std::move(theta)).theta;
            } else {
                const Dataset pooled = pool_dataset(data, stage);
                theta = fit_from(pooled, basis, stage_cfg, std::move(theta)).theta;
            }
        }
        if (current != data.dims()) theta = upsize_parameters(theta, current, data.dims());
    }
    if (!cfg.unpenalized) normalize_coefficients(theta);
    return theta;
}

inline FitResult fit_from(const Dataset& data, const SplineBasis& basis, const FitConfig& cfg, Parameters start,
                          const FitObserver& observer) {
    if (!cfg.unpenalized) normalize_coefficients(start);
    BlockRelaxation solver(data, basis, cfg, std::move(start));
    return solver.run(observer);
}

/// Full fit: basis, initialization, the optional warm-start path, then the
/// requested lambda1.
inline FitResult fit(const Dataset& data, const FitConfig& cfg, const FitObserver& observer = {}) {
    cfg.validate();
    detail::require(static_cast<std::size_t>(data.n()) >= 2, "fitting needs at least two samples");
    data.validate_for_fit();
    const SplineBasis basis = basis_for(data, cfg);
    Parameters theta = initialize(data, basis, cfg);
    for (double l1 : cfg.lambda1_path) {
        FitConfig step = cfg;
        step.lambda1 = l1;
        step.lambda1_path.clear();
        theta = fit_from(data, basis, step, std::move(theta)).theta;
    }
    FitConfig last = cfg;
    last.lambda1_path.clear();
    return fit_from(data, basis, last, std::move(theta), observer);
}

}  // namespace bntr
