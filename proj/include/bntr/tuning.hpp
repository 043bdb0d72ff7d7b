#pragma once

// Hold-out model selection over (R, lambda1, lambda2). For each (R, lambda2)
// the lambda1 values are fitted in ascending order, each one warm-started from
// the previous solution; only the first uses the configured initialization.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "bntr/dataset.hpp"
#include "bntr/error.hpp"
#include "bntr/format.hpp"
#include "bntr/model.hpp"
#include "bntr/solver.hpp"

namespace bntr {

struct GridSpec {
    std::vector<int> ranks{1, 2, 3, 4, 5};
    std::vector<double> lambda1s{1e-2, 5e-2, 1e-1, 5e-1, 1.0, 5.0, 1e1, 5e1, 1e2, 5e2, 1e3};
    std::vector<double> lambda2s{0.0, 0.5, 1.0};
    double split_fraction = 0.2;
    std::uint64_t seed = 0;

    void validate() const {
        detail::require(!ranks.empty() && !lambda1s.empty() && !lambda2s.empty(), "tuning grids must be nonempty");
        for (int r : ranks) detail::require(r >= 1, "grid ranks must be >= 1");
        for (double l : lambda1s) detail::require(l > 0.0 && std::isfinite(l), "grid lambda1 values must be positive");
        for (double l : lambda2s) detail::require(l >= 0.0 && l <= 1.0, "grid lambda2 values must lie in [0,1]");
        detail::require(split_fraction > 0.0 && split_fraction < 1.0, "split fraction must lie in (0,1)");
    }

    /// Ascending lambda1 values with duplicates removed.
    std::vector<double> lambda1_path() const {
        std::vector<double> v = lambda1s;
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }
};

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> valid;
};

/// Seeded random partition: floor(n (1 - f)) training indices, the rest for
/// validation. Both lists are sorted.
inline Split split_indices(std::size_t n, double fraction, std::uint64_t seed) {
    detail::require(fraction > 0.0 && fraction < 1.0, "split fraction must lie in (0,1)");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    // Fisher-Yates with an explicit draw so the permutation does not depend
    // on the standard library's shuffle implementation.
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(perm[i - 1], perm[j]);
    }
    const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * (1.0 - fraction)));
    detail::require(n_train >= 2 && n_train < n, "split leaves too few samples on one side");
    Split s;
    s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.valid.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.valid.begin(), s.valid.end());
    return s;
}

inline double validation_error(const BroadcastModel& model, const Dataset& valid,
                               DomainPolicy policy = DomainPolicy::strict) {
    if (valid.n() == 0) throw InvalidArgument("validation set is empty");
    const Eigen::VectorXd pred = model.predict(valid, policy);
    return (valid.responses() - pred).squaredNorm() / static_cast<double>(valid.n());
}

struct GridCell {
    int rank = 1;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double validation_error = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
    std::string error;  ///< nonempty when the fit threw
};

struct GridResult {
    std::vector<GridCell> cells;
    std::size_t best = 0;
    std::optional<FitResult> best_fit;
    /// Configuration that reproduces the winning fit on the training split,
    /// including the lambda1 warm-start path.
    FitConfig best_config;
    Split split;
};

/// True when a should be preferred over b.
inline bool better_cell(const GridCell& a, const GridCell& b) {
    if (a.validation_error != b.validation_error) return a.validation_error < b.validation_error;
    if (a.rank != b.rank) return a.rank < b.rank;
    if (a.lambda1 != b.lambda1) return a.lambda1 > b.lambda1;
    return a.lambda2 > b.lambda2;
}

using GridObserver = std::function<void(const GridCell&)>;

inline GridResult grid_search(const Dataset& data, const GridSpec& grid, const FitConfig& base,
                              const GridObserver& observer = {}) {
    grid.validate();
    base.validate();
    data.validate_for_fit();
    GridResult out;
    out.split = split_indices(static_cast<std::size_t>(data.n()), grid.split_fraction, grid.seed);
    const Dataset train = data.subset(out.split.train);
    const Dataset valid = data.subset(out.split.valid);
    const SplineBasis basis = basis_for(train, base);
    const std::vector<double> path = grid.lambda1_path();

    bool have_best = false;
    for (int rank : grid.ranks) {
        // The down-sizing start does not involve the penalty, so it is
        // shared by every lambda2 at this rank.
        FitConfig init_cfg = base;
        init_cfg.rank = rank;
        init_cfg.lambda1 = path.front();
        init_cfg.lambda1_path.clear();
        std::optional<Parameters> start;
        std::string init_error;
        try {
            start = initialize(train, basis, init_cfg);
        } catch (const std::exception& e) {
            init_error = e.what();
        }
        for (double l2 : grid.lambda2s) {
            std::optional<Parameters> theta = start;
            std::vector<double> done;
            for (double l1 : path) {
                GridCell cell;
                cell.rank = rank;
                cell.lambda1 = l1;
                cell.lambda2 = l2;
                FitConfig cfg = base;
                cfg.rank = rank;
                cfg.lambda1 = l1;
                cfg.lambda2 = l2;
                cfg.lambda1_path = done;
                if (!theta) {
                    cell.error = init_error.empty() ? "no starting point" : init_error;
                } else {
                    try {
                        FitConfig run_cfg = cfg;
                        run_cfg.lambda1_path.clear();
                        FitResult res = fit_from(train, basis, run_cfg, *theta);
                        cell.validation_error = validation_error(res.model, valid);
                        if (!std::isfinite(cell.validation_error)) {
                            cell.validation_error = std::numeric_limits<double>::infinity();
                        }
                        cell.iterations = res.iterations;
                        cell.converged = res.converged;
                        theta = res.theta;
                        if (!have_best || better_cell(cell, out.cells[out.best])) {
                            have_best = true;
                            out.best = out.cells.size();
                            out.best_config = cfg;
                            out.best_config.interior_knots = basis.interior_knots();
                            out.best_fit = std::move(res);
                        }
                    } catch (const std::exception& e) {
                        cell.error = e.what();
                        theta.reset();
                    }
                }
                done.push_back(l1);
                out.cells.push_back(cell);
                if (observer) observer(cell);
            }
        }
    }
    if (!have_best) throw DegenerateData("every grid cell failed to fit");
    return out;
}

inline void write_grid_csv(std::ostream& os, const std::vector<GridCell>& cells) {
    os << "R,lambda1,lambda2,validation_error,iterations,converged\n";
    for (const auto& c : cells) {
        os << c.rank << ',' << format_double(c.lambda1) << ',' << format_double(c.lambda2) << ','
           << format_double(c.validation_error) << ',' << c.iterations << ',' << (c.converged ? 1 : 0) << '\n';
    }
}

}  // namespace bntr
