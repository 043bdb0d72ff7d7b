#pragma once

// Spline bases on [0,1]: clamped B-splines (Cox-de Boor) and the equivalent
// truncated power basis with its constant term removed, plus the integrals and
// centered Gram matrix needed for mean-zero entrywise effects.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bntr/error.hpp"

namespace bntr {

/// Gauss-Legendre nodes and weights on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    detail::require(n >= 1, "quadrature needs at least one node");
    std::vector<double> nodes(static_cast<std::size_t>(n)), weights(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[static_cast<std::size_t>(i)] = -x;
        nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        weights[static_cast<std::size_t>(i)] = w;
        weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return {nodes, weights};
}

/// Integrals of the truncated basis plus the centered Gram matrix.
///
/// `integrals` holds u_k for all K functions (the first is the constant 1);
/// `reduced_integrals` drops the constant. `gram(k, l)` is the L2 inner
/// product of g_k = btilde_{k+1} - u_{k+1} and g_l over [0,1].
struct CenteredBasisData {
    Eigen::VectorXd integrals;
    Eigen::VectorXd reduced_integrals;
    Eigen::MatrixXd gram;
};

class SplineBasis {
public:
    SplineBasis(int order, std::vector<double> interior_knots)
        : order_(order), knots_(std::move(interior_knots)) {
        detail::require(order_ >= 1, "spline order must be at least 1");
        for (std::size_t i = 0; i < knots_.size(); ++i) {
            detail::require(knots_[i] > 0.0 && knots_[i] < 1.0, "interior knots must lie in (0,1)");
            if (i > 0) detail::require(knots_[i] > knots_[i - 1], "interior knots must be strictly increasing");
        }
        full_knots_.assign(static_cast<std::size_t>(order_), 0.0);
        full_knots_.insert(full_knots_.end(), knots_.begin(), knots_.end());
        full_knots_.insert(full_knots_.end(), static_cast<std::size_t>(order_), 1.0);
    }

    int order() const noexcept { return order_; }
    int size() const noexcept { return order_ + static_cast<int>(knots_.size()); }
    /// Number of truncated functions once the constant is dropped (K - 1).
    int reduced_size() const noexcept { return size() - 1; }
    const std::vector<double>& interior_knots() const noexcept { return knots_; }

    bool operator==(const SplineBasis& o) const {
        return order_ == o.order_ && knots_ == o.knots_;
    }

    /// Clamped B-spline values b_1(x)..b_K(x).
    Eigen::VectorXd eval_bspline(double x) const {
        check_domain(x);
        const int K = size();
        const int m = static_cast<int>(full_knots_.size());
        const auto& t = full_knots_;
        // Span index mu with t[mu] <= x < t[mu+1]; x = 1 uses the last nonempty span.
        int mu = order_ - 1;
        if (x >= 1.0) {
            mu = K - 1;
        } else {
            while (mu + 1 < m && t[static_cast<std::size_t>(mu + 1)] <= x) ++mu;
        }
        // Degree-0 start then raise the degree; only order_ functions are nonzero.
        std::vector<double> n(static_cast<std::size_t>(order_), 0.0);
        n[0] = 1.0;
        for (int deg = 1; deg < order_; ++deg) {
            std::vector<double> next(static_cast<std::size_t>(order_), 0.0);
            for (int a = 0; a <= deg; ++a) {
                // basis index i = mu - deg + a
                const int i = mu - deg + a;
                double v = 0.0;
                if (a > 0) {
                    const double den = t[static_cast<std::size_t>(i + deg)] - t[static_cast<std::size_t>(i)];
                    if (den > 0) v += (x - t[static_cast<std::size_t>(i)]) / den * n[static_cast<std::size_t>(a - 1)];
                }
                if (a < deg) {
                    const double den = t[static_cast<std::size_t>(i + deg + 1)] - t[static_cast<std::size_t>(i + 1)];
                    if (den > 0) v += (t[static_cast<std::size_t>(i + deg + 1)] - x) / den * n[static_cast<std::size_t>(a)];
                }
                next[static_cast<std::size_t>(a)] = v;
            }
            n = std::move(next);
        }
        Eigen::VectorXd out = Eigen::VectorXd::Zero(K);
        for (int a = 0; a < order_; ++a) {
            const int i = mu - order_ + 1 + a;
            if (i >= 0 && i < K) out(i) = n[static_cast<std::size_t>(a)];
        }
        return out;
    }

    /// Truncated power basis without the constant:
    /// (x, x^2, ..., x^(order-1), (x - xi_2)_+^(order-1), ...).
    Eigen::VectorXd eval_truncated_reduced(double x) const {
        check_domain(x);
        Eigen::VectorXd out(reduced_size());
        truncated_reduced_into(x, out.data());
        return out;
    }

    /// Unchecked evaluation into out[0..K-2]; callers validate the domain.
    void truncated_reduced_into(double x, double* out) const noexcept {
        double p = 1.0;
        for (int k = 1; k < order_; ++k) {
            p *= x;
            out[k - 1] = p;
        }
        const int deg = order_ - 1;
        for (std::size_t j = 0; j < knots_.size(); ++j) {
            const double z = std::max(x - knots_[j], 0.0);
            double v;
            if (deg == 0) {
                v = x >= knots_[j] ? 1.0 : 0.0;
            } else {
                v = z;
                for (int k = 1; k < deg; ++k) v *= z;
            }
            out[static_cast<std::size_t>(deg) + j] = v;
        }
    }

    /// Full truncated basis including the constant, (1, x, ..., ).
    Eigen::VectorXd eval_truncated_full(double x) const {
        Eigen::VectorXd out(size());
        out(0) = 1.0;
        out.tail(reduced_size()) = eval_truncated_reduced(x);
        return out;
    }

    CenteredBasisData centered_data() const {
        const int K = size();
        const int q = reduced_size();
        CenteredBasisData c;
        c.integrals.resize(K);
        c.integrals(0) = 1.0;
        for (int k = 1; k < order_; ++k) c.integrals(k) = 1.0 / (k + 1);
        for (std::size_t j = 0; j < knots_.size(); ++j) {
            c.integrals(order_ + static_cast<int>(j)) = std::pow(1.0 - knots_[j], order_) / order_;
        }
        c.reduced_integrals = c.integrals.tail(q);

        // Products g_k g_l are piecewise polynomials of degree 2*order-2
        // between knots; order nodes per piece integrate them exactly.
        const auto [nodes, weights] = gauss_legendre(order_);
        std::vector<double> breaks{0.0};
        breaks.insert(breaks.end(), knots_.begin(), knots_.end());
        breaks.push_back(1.0);
        c.gram = Eigen::MatrixXd::Zero(q, q);
        Eigen::VectorXd g(q);
        for (std::size_t piece = 0; piece + 1 < breaks.size(); ++piece) {
            const double a = breaks[piece], b = breaks[piece + 1];
            const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                const double x = mid + half * nodes[i];
                truncated_reduced_into(x, g.data());
                g -= c.reduced_integrals;
                c.gram.noalias() += (half * weights[i]) * g * g.transpose();
            }
        }
        c.gram = (0.5 * (c.gram + c.gram.transpose())).eval();
        return c;
    }

private:
    static void check_domain(double x) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw DomainError("spline argument " + std::to_string(x) + " outside [0,1]");
        }
    }

    int order_;
    std::vector<double> knots_;
    std::vector<double> full_knots_;
};

/// Basis with K - order interior knots at equally spaced empirical quantiles
/// of the pooled samples (linear interpolation between order statistics).
/// Tied knots are pushed up by the smallest gap between distinct samples.
inline SplineBasis default_knots(std::span<const double> samples, int K, int order) {
    detail::require(order >= 1, "spline order must be at least 1");
    detail::require(K >= order, "basis size K must be at least the spline order");
    detail::require(!samples.empty(), "knot placement needs samples");
    const int n_knots = K - order;
    if (n_knots == 0) return SplineBasis(order, {});

    std::vector<double> sorted(samples.begin(), samples.end());
    for (double v : sorted) {
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("knot samples must lie in [0,1]");
    }
    std::sort(sorted.begin(), sorted.end());

    double min_gap = 1.0;
    std::size_t distinct = 1;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i] > sorted[i - 1]) {
            ++distinct;
            min_gap = std::min(min_gap, sorted[i] - sorted[i - 1]);
        }
    }
    if (distinct < static_cast<std::size_t>(n_knots) + 1) {
        throw DegenerateData("too few distinct sample values (" + std::to_string(distinct) +
                             ") to place " + std::to_string(n_knots) + " strict interior knots");
    }

    const double last = static_cast<double>(sorted.size() - 1);
    std::vector<double> knots;
    knots.reserve(static_cast<std::size_t>(n_knots));
    for (int j = 1; j <= n_knots; ++j) {
        const double h = last * j / (n_knots + 1);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        double q = sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
        const double floor_value = knots.empty() ? 0.0 : knots.back();
        if (q <= floor_value) q = floor_value + min_gap;
        knots.push_back(q);
    }
    if (knots.back() >= 1.0) {
        throw DegenerateData("quantile knots cannot be made strictly increasing inside (0,1)");
    }
    return SplineBasis(order, std::move(knots));
}

}  // namespace bntr
