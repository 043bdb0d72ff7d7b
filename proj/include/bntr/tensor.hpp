#pragma once

// Dense tensors and the multilinear primitives used by the model and solver.
//
// Storage order is "first index fastest": entry (i_1, ..., i_D) lives at
// i_1 + p_1 * (i_2 + p_2 * (i_3 + ...)). Modes are zero based throughout.

#include <Eigen/Dense>

#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bntr/error.hpp"

namespace bntr {

using Dims = std::vector<std::size_t>;

inline std::size_t num_entries(const Dims& dims) {
    detail::require(!dims.empty(), "tensor dims must be nonempty");
    std::size_t s = 1;
    for (auto p : dims) {
        detail::require(p >= 1, "tensor dims must be positive");
        s *= p;
    }
    return s;
}

/// Linear stride of each mode under first-index-fastest order.
inline std::vector<std::size_t> strides_of(const Dims& dims) {
    std::vector<std::size_t> st(dims.size());
    std::size_t acc = 1;
    for (std::size_t d = 0; d < dims.size(); ++d) {
        st[d] = acc;
        acc *= dims[d];
    }
    return st;
}

inline std::string dims_to_string(const Dims& dims) {
    std::string out;
    for (std::size_t d = 0; d < dims.size(); ++d) {
        if (d) out += 'x';
        out += std::to_string(dims[d]);
    }
    return out;
}

class DenseTensor {
public:
    explicit DenseTensor(Dims dims, double fill = 0.0)
        : dims_(std::move(dims)), values_(num_entries(dims_), fill) {}

    DenseTensor(Dims dims, std::vector<double> values)
        : dims_(std::move(dims)), values_(std::move(values)) {
        detail::require(values_.size() == num_entries(dims_),
                        "tensor value count does not match dims " + dims_to_string(dims_));
    }

    const Dims& dims() const noexcept { return dims_; }
    std::size_t order() const noexcept { return dims_.size(); }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    std::size_t linear_index(std::span<const std::size_t> index) const {
        detail::require(index.size() == dims_.size(), "multi-index has wrong order");
        std::size_t lin = 0;
        std::size_t stride = 1;
        for (std::size_t d = 0; d < dims_.size(); ++d) {
            detail::require(index[d] < dims_[d], "multi-index out of range");
            lin += index[d] * stride;
            stride *= dims_[d];
        }
        return lin;
    }

    Dims multi_index(std::size_t linear) const {
        detail::require(linear < values_.size(), "linear index out of range");
        Dims idx(dims_.size());
        for (std::size_t d = 0; d < dims_.size(); ++d) {
            idx[d] = linear % dims_[d];
            linear /= dims_[d];
        }
        return idx;
    }

    double at(std::span<const std::size_t> index) const { return values_[linear_index(index)]; }

    Eigen::Map<const Eigen::VectorXd> as_vector() const {
        return {values_.data(), static_cast<Eigen::Index>(values_.size())};
    }

    bool operator==(const DenseTensor&) const = default;

private:
    Dims dims_;
    std::vector<double> values_;
};

/// Mode-d unfolding: rows index i_d, columns enumerate the remaining modes in
/// ascending order with the lowest remaining mode fastest.
inline Eigen::MatrixXd mode_matricize(const DenseTensor& t, std::size_t mode) {
    if (mode >= t.order()) throw InvalidArgument("mode index out of range");
    const auto& dims = t.dims();
    const auto pd = static_cast<Eigen::Index>(dims[mode]);
    const auto cols = static_cast<Eigen::Index>(t.size() / dims[mode]);
    const std::size_t stride = strides_of(dims)[mode];

    Eigen::MatrixXd out(pd, cols);
    // Removing mode d from the linear index leaves exactly the column index:
    // lin = low + stride * (i_d + p_d * high), col = low + stride * high.
    for (std::size_t lin = 0; lin < t.size(); ++lin) {
        const std::size_t low = lin % stride;
        const std::size_t rest = lin / stride;
        const std::size_t id = rest % dims[mode];
        const std::size_t high = rest / dims[mode];
        out(static_cast<Eigen::Index>(id), static_cast<Eigen::Index>(low + stride * high)) = t[lin];
    }
    return out;
}

/// Inverse of mode_matricize.
inline DenseTensor mode_fold(const Eigen::MatrixXd& m, std::size_t mode, Dims dims) {
    if (mode >= dims.size()) throw InvalidArgument("mode index out of range");
    DenseTensor t(std::move(dims));
    const auto& d = t.dims();
    detail::require(m.rows() == static_cast<Eigen::Index>(d[mode]) &&
                        m.cols() == static_cast<Eigen::Index>(t.size() / d[mode]),
                    "matrix shape does not match the unfolding of dims");
    const std::size_t stride = strides_of(d)[mode];
    for (std::size_t lin = 0; lin < t.size(); ++lin) {
        const std::size_t low = lin % stride;
        const std::size_t rest = lin / stride;
        t[lin] = m(static_cast<Eigen::Index>(rest % d[mode]),
                   static_cast<Eigen::Index>(low + stride * (rest / d[mode])));
    }
    return t;
}

/// Column-wise Kronecker product. The first matrix varies slowest, so for
/// two column vectors a, b the result is (a_1 b, a_2 b, ...).
inline Eigen::MatrixXd khatri_rao(std::span<const Eigen::MatrixXd> mats) {
    if (mats.empty()) throw InvalidArgument("khatri_rao needs at least one matrix");
    const Eigen::Index R = mats.front().cols();
    for (const auto& m : mats) {
        if (m.cols() != R) throw InvalidArgument("khatri_rao column counts differ");
    }
    Eigen::MatrixXd acc = mats.front();
    for (std::size_t i = 1; i < mats.size(); ++i) {
        const auto& next = mats[i];
        Eigen::MatrixXd grown(acc.rows() * next.rows(), R);
        for (Eigen::Index r = 0; r < R; ++r) {
            for (Eigen::Index a = 0; a < acc.rows(); ++a) {
                grown.col(r).segment(a * next.rows(), next.rows()) = acc(a, r) * next.col(r);
            }
        }
        acc = std::move(grown);
    }
    return acc;
}

/// CP factors B_1..B_D (p_d x R) plus an optional trailing coefficient block
/// (q x R). An empty coefficient block means a pure D-way CP tensor.
struct FactorSet {
    std::vector<Eigen::MatrixXd> factors;
    Eigen::MatrixXd coeffs;

    std::size_t order() const noexcept { return factors.size(); }
    Eigen::Index rank() const { return factors.empty() ? 0 : factors.front().cols(); }
    bool has_coeffs() const noexcept { return coeffs.size() > 0; }

    void validate(const Dims& dims) const {
        detail::require(!factors.empty(), "factor set has no factor matrices");
        detail::require(factors.size() == dims.size(), "factor count does not match tensor order");
        const Eigen::Index R = rank();
        detail::require(R >= 1, "rank must be at least 1");
        for (std::size_t d = 0; d < factors.size(); ++d) {
            detail::require(factors[d].cols() == R, "factor matrices disagree on rank");
            detail::require(factors[d].rows() == static_cast<Eigen::Index>(dims[d]),
                            "factor " + std::to_string(d) + " rows do not match dims");
        }
        if (has_coeffs()) detail::require(coeffs.cols() == R, "coefficient block rank mismatch");
    }
};

/// W(j, r) = prod_d B_d(j_d, r) for every entry j in canonical order.
/// Equivalent to khatri_rao(B_D, ..., B_1); computed directly for speed.
inline Eigen::MatrixXd rank_one_weights(const std::vector<Eigen::MatrixXd>& factors,
                                        std::ptrdiff_t skip_mode = -1) {
    detail::require(!factors.empty(), "no factors");
    const Eigen::Index R = factors.front().cols();
    std::size_t s = 1;
    for (const auto& f : factors) s *= static_cast<std::size_t>(f.rows());
    Eigen::MatrixXd w = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(s), R);
    std::size_t stride = 1;
    for (std::size_t d = 0; d < factors.size(); ++d) {
        const auto pd = static_cast<std::size_t>(factors[d].rows());
        if (static_cast<std::ptrdiff_t>(d) != skip_mode) {
            for (std::size_t j = 0; j < s; ++j) {
                w.row(static_cast<Eigen::Index>(j)).array() *=
                    factors[d].row(static_cast<Eigen::Index>((j / stride) % pd)).array();
            }
        }
        stride *= pd;
    }
    return w;
}

/// Khatri-Rao product of every block except mode `mode`, ordered so that
/// <B_d, T_(d) * result> = <T, cp_compose(fs)> under mode_matricize. With the
/// lowest-remaining-mode-fastest unfolding this is the reverse of the natural
/// mode order: coeffs, B_D, ..., B_{d+1}, B_{d-1}, ..., B_1.
inline Eigen::MatrixXd leave_one_out_khatri_rao(const FactorSet& fs, std::size_t mode) {
    const std::size_t total = fs.order() + (fs.has_coeffs() ? 1 : 0);
    if (mode >= total) throw InvalidArgument("mode index out of range");
    std::vector<Eigen::MatrixXd> mats;
    if (fs.has_coeffs() && mode != fs.order()) mats.push_back(fs.coeffs);
    for (std::size_t d = fs.order(); d-- > 0;) {
        if (d != mode) mats.push_back(fs.factors[d]);
    }
    if (mats.empty()) return Eigen::MatrixXd::Ones(1, fs.rank());
    return khatri_rao(mats);
}

/// Dense sum_r beta_{r,1} o ... o beta_{r,D} (o alpha_r). Intended for tests
/// and small problems; the solver never materializes this.
inline DenseTensor cp_compose(const FactorSet& fs, const Dims& dims) {
    fs.validate(dims);
    Dims out_dims = dims;
    Eigen::MatrixXd w = rank_one_weights(fs.factors);
    if (fs.has_coeffs()) {
        out_dims.push_back(static_cast<std::size_t>(fs.coeffs.rows()));
        // Trailing mode is slowest: column k of (W * C^T) is the k-th slab.
        Eigen::MatrixXd slabs = w * fs.coeffs.transpose();
        return DenseTensor(out_dims, std::vector<double>(slabs.data(), slabs.data() + slabs.size()));
    }
    Eigen::VectorXd sum = w.rowwise().sum();
    return DenseTensor(out_dims, std::vector<double>(sum.data(), sum.data() + sum.size()));
}

inline double inner_product(const DenseTensor& a, const DenseTensor& b) {
    if (a.dims() != b.dims()) throw InvalidArgument("inner_product dims mismatch");
    return a.as_vector().dot(b.as_vector());
}

}  // namespace bntr
