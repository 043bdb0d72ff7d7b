#pragma once

// Synthetic regression cases on [0,1]-valued tensor covariates and the
// Monte Carlo integrated squared error.
//
//   Case 1: y = 1 + <B1, X> + e                      (L-shaped region, rank 2)
//   Case 2: y = 1 + <B2, F1(X)> + e                  (staircase, rank 4)
//   Case 3: y = 1 + <B3, F1(X)> + e                  (two rectangles, rank 2)
//   Case 4: y = 1 + <B41, F1(X)> + <B42, F2(X)> + e  (one rectangle each)
//
// f1(x) = x + 0.6 sin(2 pi (x - 0.5)^2), f2(x) = x + 0.3 cos(2 pi x), and the
// noise sd is noise_ratio times the sample sd of m0 over the generated X.
// There is no 1/s factor in the truth.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bntr/dataset.hpp"
#include "bntr/error.hpp"
#include "bntr/model.hpp"
#include "bntr/tensor.hpp"

namespace bntr {

enum class TruthFunction { linear, f1, f2 };

inline double apply_truth_function(TruthFunction f, double x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    switch (f) {
        case TruthFunction::linear: return x;
        case TruthFunction::f1: return x + 0.6 * std::sin(two_pi * (x - 0.5) * (x - 0.5));
        case TruthFunction::f2: return x + 0.3 * std::cos(two_pi * x);
    }
    return x;
}

inline std::string truth_function_name(TruthFunction f) {
    switch (f) {
        case TruthFunction::linear: return "linear";
        case TruthFunction::f1: return "f1";
        case TruthFunction::f2: return "f2";
    }
    return "linear";
}

inline TruthFunction parse_truth_function(const std::string& s) {
    if (s == "linear") return TruthFunction::linear;
    if (s == "f1") return TruthFunction::f1;
    if (s == "f2") return TruthFunction::f2;
    throw InvalidArgument("unknown truth function '" + s + "'");
}

struct TruthComponent {
    DenseTensor mask;
    TruthFunction function = TruthFunction::linear;
};

class GroundTruth {
public:
    GroundTruth(Dims dims, double intercept, std::vector<TruthComponent> components)
        : dims_(std::move(dims)), intercept_(intercept), components_(std::move(components)) {
        detail::require(!dims_.empty(), "truth needs covariate dims");
        for (const auto& c : components_) {
            detail::require(c.mask.dims() == dims_, "mask dims do not match covariate dims");
            std::vector<std::size_t> support;
            for (std::size_t j = 0; j < c.mask.size(); ++j) {
                const double v = c.mask[j];
                detail::require(v == 0.0 || v == 1.0, "masks must be binary");
                if (v == 1.0) support.push_back(j);
            }
            support_.push_back(std::move(support));
        }
    }

    const Dims& dims() const noexcept { return dims_; }
    double intercept() const noexcept { return intercept_; }
    const std::vector<TruthComponent>& components() const noexcept { return components_; }

    double evaluate(std::span<const double> entries) const {
        detail::require(entries.size() == num_entries(dims_), "entry count does not match truth dims");
        double m = intercept_;
        for (std::size_t c = 0; c < components_.size(); ++c) {
            const TruthFunction f = components_[c].function;
            for (std::size_t j : support_[c]) m += apply_truth_function(f, entries[j]);
        }
        return m;
    }

    double evaluate(const DenseTensor& x) const {
        detail::require(x.dims() == dims_, "covariate dims do not match truth dims");
        return evaluate(x.values());
    }

    /// Union of all component masks.
    DenseTensor support_mask() const {
        DenseTensor out(dims_);
        for (const auto& s : support_)
            for (std::size_t j : s) out[j] = 1.0;
        return out;
    }

private:
    Dims dims_;
    double intercept_;
    std::vector<TruthComponent> components_;
    std::vector<std::vector<std::size_t>> support_;
};

struct CaseSpec {
    int case_id = 2;
    Dims dims{64, 64};
    /// Overrides the default masks when nonempty (one per component).
    std::vector<DenseTensor> masks;
    double noise_ratio = 0.10;
    std::uint64_t seed = 0;
    std::size_t n = 1000;

    void validate() const {
        detail::require(case_id >= 1 && case_id <= 4, "case id must be 1, 2, 3 or 4");
        detail::require(noise_ratio >= 0.0 && std::isfinite(noise_ratio), "noise ratio must be >= 0");
        detail::require(n >= 2, "need at least two samples");
        detail::require(!dims.empty(), "dims must be nonempty");
        for (auto p : dims) detail::require(p >= 1, "dims must be positive");
    }
};

/// Independent 64-bit seed for a named stream of a run.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream,
                      0x62747231u};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

namespace streams {
inline constexpr std::uint32_t covariates = 1;
inline constexpr std::uint32_t noise = 2;
inline constexpr std::uint32_t split = 3;
inline constexpr std::uint32_t fit = 4;
inline constexpr std::uint32_t ise = 5;
}  // namespace streams

namespace detail {

struct Rect {
    std::size_t row0, rows, col0, cols;  // on the 64 x 64 reference grid
};

inline DenseTensor rect_mask(const Dims& dims, const std::vector<Rect>& rects) {
    // Reference coordinates c map to floor(c p / 64), so the layout scales to
    // any matrix shape.
    auto map = [](std::size_t c, std::size_t p) { return c * p / 64; };
    DenseTensor m(dims);
    for (const auto& r : rects) {
        const std::size_t i0 = map(r.row0, dims[0]), i1 = map(r.row0 + r.rows, dims[0]);
        const std::size_t j0 = map(r.col0, dims[1]), j1 = map(r.col0 + r.cols, dims[1]);
        for (std::size_t j = j0; j < j1; ++j)
            for (std::size_t i = i0; i < i1; ++i) m[i + dims[0] * j] = 1.0;
    }
    return m;
}

}  // namespace detail

/// Default binary masks for matrix covariates, one per truth component.
inline std::vector<DenseTensor> default_masks(int case_id, const Dims& dims) {
    if (dims.size() != 2) throw Unsupported("default masks exist only for matrix covariates; supply mask files");
    using detail::Rect;
    switch (case_id) {
        case 1:
            // Vertical bar and a foot to its right: an L with two distinct row patterns.
            return {detail::rect_mask(dims, {Rect{12, 18, 12, 10}, Rect{30, 10, 12, 32}})};
        case 2:
            // Left-aligned bands of decreasing width: four distinct rows.
            return {detail::rect_mask(dims, {Rect{16, 12, 16, 20}, Rect{28, 4, 16, 18}, Rect{32, 3, 16, 16},
                                             Rect{35, 3, 16, 14}})};
        case 3:
            return {detail::rect_mask(dims, {Rect{8, 16, 8, 20}, Rect{36, 20, 32, 24}})};
        case 4:
            return {detail::rect_mask(dims, {Rect{10, 16, 10, 16}}), detail::rect_mask(dims, {Rect{38, 16, 38, 16}})};
        default:
            throw InvalidArgument("case id must be 1, 2, 3 or 4");
    }
}

inline std::vector<TruthFunction> case_functions(int case_id) {
    switch (case_id) {
        case 1: return {TruthFunction::linear};
        case 2:
        case 3: return {TruthFunction::f1};
        case 4: return {TruthFunction::f1, TruthFunction::f2};
        default: throw InvalidArgument("case id must be 1, 2, 3 or 4");
    }
}

inline GroundTruth case_truth(const CaseSpec& spec) {
    spec.validate();
    const auto masks = spec.masks.empty() ? default_masks(spec.case_id, spec.dims) : spec.masks;
    const auto fns = case_functions(spec.case_id);
    detail::require(masks.size() == fns.size(),
                    "case " + std::to_string(spec.case_id) + " needs " + std::to_string(fns.size()) + " mask(s)");
    std::vector<TruthComponent> comps;
    for (std::size_t c = 0; c < masks.size(); ++c) comps.push_back({masks[c], fns[c]});
    return GroundTruth(spec.dims, 1.0, std::move(comps));
}

/// Fills `out` (s x n) with i.i.d. Uniform[0,1] entries.
inline void uniform_covariates(Eigen::MatrixXd& out, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] = unif(rng);
}

struct SyntheticCase {
    Dataset data;
    GroundTruth truth;
    Eigen::VectorXd signal;  ///< m0 at each generated sample
    double noise_sd = 0.0;
};

inline SyntheticCase generate_case(const CaseSpec& spec) {
    GroundTruth truth = case_truth(spec);
    const auto s = static_cast<Eigen::Index>(num_entries(spec.dims));
    const auto n = static_cast<Eigen::Index>(spec.n);
    Eigen::MatrixXd x(s, n);
    std::mt19937_64 cov_rng(derive_seed(spec.seed, streams::covariates));
    uniform_covariates(x, cov_rng);

    Eigen::VectorXd m0(n);
    for (Eigen::Index i = 0; i < n; ++i) m0(i) = truth.evaluate({x.col(i).data(), static_cast<std::size_t>(s)});
    const double mean = m0.mean();
    const double sd = std::sqrt((m0.array() - mean).square().sum() / static_cast<double>(n - 1));
    const double sigma = spec.noise_ratio * sd;

    Eigen::VectorXd y = m0;
    if (sigma > 0.0) {
        std::mt19937_64 noise_rng(derive_seed(spec.seed, streams::noise));
        std::normal_distribution<double> normal(0.0, sigma);
        for (Eigen::Index i = 0; i < n; ++i) y(i) += normal(noise_rng);
    }
    return SyntheticCase{Dataset(spec.dims, std::move(x), std::move(y)), std::move(truth), std::move(m0), sigma};
}

struct IseEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t points = 0;
};

/// Monte Carlo mean of (f(X) - g(X))^2 over `points` uniform tensors, where f
/// and g take the entries of X in canonical order.
template <class F, class G>
IseEstimate monte_carlo_ise(const Dims& dims, F&& f, G&& g, std::size_t points, std::uint64_t seed) {
    detail::require(points >= 2, "need at least two Monte Carlo points");
    const auto s = static_cast<Eigen::Index>(num_entries(dims));
    std::mt19937_64 rng(derive_seed(seed, streams::ise));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd x(s);
    // Welford accumulation keeps the variance stable for tiny errors.
    double mean = 0.0, m2 = 0.0;
    for (std::size_t t = 0; t < points; ++t) {
        for (Eigen::Index j = 0; j < s; ++j) x(j) = unif(rng);
        const std::span<const double> e(x.data(), static_cast<std::size_t>(s));
        const double d = f(e) - g(e);
        const double v = d * d;
        const double delta = v - mean;
        mean += delta / static_cast<double>(t + 1);
        m2 += delta * (v - mean);
    }
    const double var = m2 / static_cast<double>(points - 1);
    return IseEstimate{mean, std::sqrt(var / static_cast<double>(points)), points};
}

inline IseEstimate ise(const BroadcastModel& fitted, const GroundTruth& truth, std::size_t points = 10000,
                       std::uint64_t seed = 0) {
    detail::require(points >= 1000, "ISE needs at least 1000 Monte Carlo points");
    detail::require(fitted.dims() == truth.dims(), "model and truth dims differ");
    return monte_carlo_ise(
        truth.dims(), [&](std::span<const double> e) { return fitted.predict_entries(e); },
        [&](std::span<const double> e) { return truth.evaluate(e); }, points, seed);
}

inline IseEstimate ise(const BroadcastModel& fitted, const BroadcastModel& reference, std::size_t points = 10000,
                       std::uint64_t seed = 0) {
    detail::require(points >= 1000, "ISE needs at least 1000 Monte Carlo points");
    detail::require(fitted.dims() == reference.dims(), "model dims differ");
    return monte_carlo_ise(
        fitted.dims(), [&](std::span<const double> e) { return fitted.predict_entries(e); },
        [&](std::span<const double> e) { return reference.predict_entries(e); }, points, seed);
}

/// Matrix rank of an order-2 mask (full-pivot LU, exact for 0/1 entries at
/// these sizes).
inline Eigen::Index mask_rank(const DenseTensor& mask) {
    detail::require(mask.order() == 2, "mask rank needs a matrix");
    const Eigen::Map<const Eigen::MatrixXd> m(mask.values().data(), static_cast<Eigen::Index>(mask.dims()[0]),
                                              static_cast<Eigen::Index>(mask.dims()[1]));
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-9);
    return lu.rank();
}

}  // namespace bntr
