#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <set>

#include "bntr/io.hpp"
#include "bntr/synth.hpp"
#include "bntr/tuning.hpp"
#include "oracles.hpp"

using namespace bntr;

namespace {

SyntheticCase small_case(std::uint64_t seed, std::size_t n = 120) {
    CaseSpec spec;
    spec.case_id = 3;
    spec.dims = {8, 8};
    spec.n = n;
    spec.seed = seed;
    return generate_case(spec);
}

FitConfig small_config() {
    FitConfig c;
    c.K = 5;
    c.max_iters = 200;
    return c;
}

}  // namespace

TEST(Split, PartitionSizesAndDeterminism) {
    const Split s = split_indices(103, 0.2, 9);
    EXPECT_EQ(s.train.size(), 82u);
    EXPECT_EQ(s.valid.size(), 21u);
    std::set<std::size_t> all(s.train.begin(), s.train.end());
    for (auto i : s.valid) EXPECT_TRUE(all.insert(i).second);
    EXPECT_EQ(all.size(), 103u);
    EXPECT_EQ(*all.rbegin(), 102u);
    const Split t = split_indices(103, 0.2, 9);
    EXPECT_EQ(s.train, t.train);
    EXPECT_NE(s.train, split_indices(103, 0.2, 10).train);
    EXPECT_THROW(split_indices(10, 0.0, 1), InvalidArgument);
}

TEST(ValidationError, Basics) {
    const SyntheticCase sc = small_case(1, 40);
    FactorSet fs;
    fs.factors = {Eigen::MatrixXd::Zero(8, 1), Eigen::MatrixXd::Zero(8, 1)};
    fs.coeffs = Eigen::MatrixXd::Zero(4, 1);
    const BroadcastModel constant(2.0, fs, {8, 8}, SplineBasis(4, {0.5}));
    const Eigen::VectorXd& y = sc.data.responses();
    EXPECT_NEAR(validation_error(constant, sc.data), (y.array() - 2.0).square().mean(), 1e-12);

    // Perfect predictions: responses replaced by the model's own output.
    const Dataset self(sc.data.dims(), sc.data.covariates(), constant.predict(sc.data));
    EXPECT_EQ(validation_error(constant, self), 0.0);
    EXPECT_THROW(validation_error(constant, sc.data.subset(std::vector<std::size_t>{})), InvalidArgument);
}

TEST(ValidationError, MatchesRecomputationFromExportedPredictions) {
    const SyntheticCase sc = small_case(2);
    FitConfig cfg = small_config();
    cfg.rank = 2;
    cfg.lambda1 = 0.5;
    const FitResult res = fit(sc.data, cfg);
    const auto dir = std::filesystem::temp_directory_path() / "bntr_valid_csv";
    std::filesystem::create_directories(dir);
    write_vector_csv(dir / "pred.csv", "prediction", res.model.predict(sc.data));
    const Eigen::VectorXd pred = read_vector_csv(dir / "pred.csv");
    const double recomputed = (sc.data.responses() - pred).squaredNorm() / static_cast<double>(pred.size());
    EXPECT_NEAR(validation_error(res.model, sc.data), recomputed, 1e-12);
    std::filesystem::remove_all(dir);
}

TEST(GridSearch, SingleCellEqualsOneFit) {
    const SyntheticCase sc = small_case(3);
    GridSpec grid;
    grid.ranks = {2};
    grid.lambda1s = {0.5};
    grid.lambda2s = {0.5};
    grid.seed = 4;
    const FitConfig base = small_config();
    const GridResult gr = grid_search(sc.data, grid, base);
    ASSERT_EQ(gr.cells.size(), 1u);

    const Dataset train = sc.data.subset(gr.split.train), valid = sc.data.subset(gr.split.valid);
    FitConfig cfg = base;
    cfg.rank = 2;
    cfg.lambda1 = 0.5;
    cfg.lambda2 = 0.5;
    const FitResult direct = fit(train, cfg);
    EXPECT_EQ(gr.cells[0].validation_error, validation_error(direct.model, valid));
    EXPECT_EQ(gr.best_fit->objective_trace, direct.objective_trace);
}

TEST(GridSearch, DuplicateLambdasAreDeduplicated) {
    const SyntheticCase sc = small_case(5);
    GridSpec a;
    a.ranks = {1};
    a.lambda2s = {1.0};
    a.lambda1s = {1.0, 0.1, 1.0, 0.1};
    GridSpec b = a;
    b.lambda1s = {0.1, 1.0};
    const GridResult ra = grid_search(sc.data, a, small_config());
    const GridResult rb = grid_search(sc.data, b, small_config());
    ASSERT_EQ(ra.cells.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(ra.cells[i].lambda1, rb.cells[i].lambda1);
        EXPECT_EQ(ra.cells[i].validation_error, rb.cells[i].validation_error);
    }
}

TEST(GridSearch, BestCellAndReplay) {
    const SyntheticCase sc = small_case(6);
    GridSpec grid;
    grid.ranks = {1, 2};
    grid.lambda1s = {0.01, 0.1, 1.0, 10.0};
    grid.lambda2s = {0.0, 1.0};
    grid.seed = 8;
    const GridResult gr = grid_search(sc.data, grid, small_config());
    EXPECT_EQ(gr.cells.size(), 16u);
    for (const auto& c : gr.cells) EXPECT_FALSE(better_cell(c, gr.cells[gr.best]));

    const Dataset valid = sc.data.subset(gr.split.valid);
    const Dataset train = sc.data.subset(gr.split.train);
    EXPECT_NEAR(validation_error(gr.best_fit->model, valid), gr.cells[gr.best].validation_error, 1e-12);
    // Replaying the stored configuration rebuilds the same model.
    const FitResult replay = fit(train, gr.best_config);
    EXPECT_NEAR(validation_error(replay.model, valid), gr.cells[gr.best].validation_error, 1e-12);

    std::ostringstream os;
    write_grid_csv(os, gr.cells);
    const std::string csv = os.str();
    EXPECT_EQ(csv.rfind("R,lambda1,lambda2,validation_error,iterations,converged\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 17);
}

TEST(GridSearch, TieBreaking) {
    GridCell a{2, 1.0, 0.5, 1.0, 0, true, ""};
    GridCell b = a;
    b.rank = 1;
    EXPECT_TRUE(better_cell(b, a));
    b = a;
    b.lambda1 = 2.0;
    EXPECT_TRUE(better_cell(b, a));
    b = a;
    b.lambda2 = 1.0;
    EXPECT_TRUE(better_cell(b, a));
    b = a;
    b.validation_error = 0.9;
    b.rank = 5;
    EXPECT_TRUE(better_cell(b, a));
}

// Warm starts along the lambda1 path versus a fresh start at the last value.
TEST(GridSearch, WarmStartNoWorseThanColdStart) {
    std::vector<double> diff;
    const std::vector<double> path{0.01, 0.1, 1.0, 5.0};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const SyntheticCase sc = small_case(100 + seed, 100);
        FitConfig cfg = small_config();
        cfg.rank = 2;
        cfg.lambda2 = 0.5;
        cfg.seed = seed;
        cfg.lambda1 = path.back();
        cfg.lambda1_path.assign(path.begin(), path.end() - 1);
        const FitResult warm = fit(sc.data, cfg);
        cfg.lambda1_path.clear();
        const FitResult cold = fit(sc.data, cfg);
        diff.push_back(warm.objective_trace.back() - cold.objective_trace.back());
    }
    std::nth_element(diff.begin(), diff.begin() + 10, diff.end());
    EXPECT_LE(diff[10], 1e-6);
}

TEST(GridSpec, DefaultsAndValidation) {
    const GridSpec g;
    EXPECT_EQ(g.ranks, (std::vector<int>{1, 2, 3, 4, 5}));
    EXPECT_EQ(g.lambda1s.size(), 11u);
    EXPECT_EQ(g.lambda2s, (std::vector<double>{0.0, 0.5, 1.0}));
    EXPECT_EQ(g.split_fraction, 0.2);
    GridSpec bad;
    bad.lambda1s = {};
    EXPECT_THROW(bad.validate(), InvalidArgument);
    bad = GridSpec{};
    bad.split_fraction = 1.0;
    EXPECT_THROW(bad.validate(), InvalidArgument);
}
