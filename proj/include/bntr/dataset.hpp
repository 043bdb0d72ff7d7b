#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bntr/error.hpp"
#include "bntr/tensor.hpp"

namespace bntr {

/// n paired (tensor covariate, scalar response) samples. Covariates are the
/// columns of an s x n matrix, each column in canonical tensor order.
class Dataset {
public:
    Dataset(Dims dims, Eigen::MatrixXd covariates, Eigen::VectorXd responses)
        : dims_(std::move(dims)), x_(std::move(covariates)), y_(std::move(responses)) {
        const auto s = static_cast<Eigen::Index>(num_entries(dims_));
        detail::require(x_.rows() == s, "covariate rows (" + std::to_string(x_.rows()) +
                                            ") do not match dims " + dims_to_string(dims_));
        detail::require(x_.cols() == y_.size(), "covariate and response counts differ");
    }

    Dataset(Dims dims, std::span<const DenseTensor> tensors, Eigen::VectorXd responses)
        : Dataset(dims, stack(dims, tensors), std::move(responses)) {}

    const Dims& dims() const noexcept { return dims_; }
    Eigen::Index n() const noexcept { return x_.cols(); }
    Eigen::Index s() const noexcept { return x_.rows(); }
    const Eigen::MatrixXd& covariates() const noexcept { return x_; }
    const Eigen::VectorXd& responses() const noexcept { return y_; }

    DenseTensor sample(Eigen::Index i) const {
        const auto col = x_.col(i);
        return DenseTensor(dims_, std::vector<double>(col.data(), col.data() + col.size()));
    }

    Dataset subset(std::span<const std::size_t> rows) const {
        Eigen::MatrixXd x(s(), static_cast<Eigen::Index>(rows.size()));
        Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const auto i = static_cast<Eigen::Index>(rows[k]);
            detail::require(i < n(), "subset row out of range");
            x.col(static_cast<Eigen::Index>(k)) = x_.col(i);
            y(static_cast<Eigen::Index>(k)) = y_(i);
        }
        return Dataset(dims_, std::move(x), std::move(y));
    }

    /// Throws DomainError if any covariate is outside [0,1] and
    /// InvalidArgument if any response is non-finite.
    void validate_for_fit() const {
        for (Eigen::Index k = 0; k < x_.size(); ++k) {
            const double v = x_.data()[k];
            if (!(v >= 0.0 && v <= 1.0)) {
                throw DomainError("covariate entry " + std::to_string(v) + " outside [0,1]");
            }
        }
        for (Eigen::Index i = 0; i < y_.size(); ++i) {
            if (!std::isfinite(y_(i))) throw InvalidArgument("non-finite response at sample " + std::to_string(i));
        }
    }

private:
    static Eigen::MatrixXd stack(const Dims& dims, std::span<const DenseTensor> tensors) {
        const auto s = static_cast<Eigen::Index>(num_entries(dims));
        Eigen::MatrixXd x(s, static_cast<Eigen::Index>(tensors.size()));
        for (std::size_t i = 0; i < tensors.size(); ++i) {
            detail::require(tensors[i].dims() == dims, "sample tensor dims differ from dataset dims");
            x.col(static_cast<Eigen::Index>(i)) = tensors[i].as_vector();
        }
        return x;
    }

    Dims dims_;
    Eigen::MatrixXd x_;
    Eigen::VectorXd y_;
};

}  // namespace bntr
