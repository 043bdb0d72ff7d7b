#pragma once

// Subcommands of the bntr tool. Every command writes its outputs into --out
// (a directory) together with manifest.json, which lists SHA-256 checksums of
// all inputs and outputs.
//
// Exit codes: 0 success, 1 numerical failure (non-convergence under
// --strict, degenerate data), 2 usage or I/O error.

#include <openssl/evp.h>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bntr/bntr.hpp"

namespace bntr::cli {

namespace fs = std::filesystem;

inline constexpr int exit_ok = 0;
inline constexpr int exit_numerical = 1;
inline constexpr int exit_usage = 2;

inline std::string sha256_file(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot read " + path.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx) throw IoError("cannot allocate digest context");
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    std::vector<char> buf(1 << 16);
    while (is) {
        is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (is.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(is.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return hex.str();
}

/// Collects the files a command touched and writes the manifest.
class Run {
public:
    Run(std::string command, std::vector<std::string> args)
        : command_(std::move(command)), args_(std::move(args)), start_(std::chrono::steady_clock::now()) {}

    void input(const fs::path& p) {
        if (fs::is_directory(p)) {
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(p))
                if (e.is_regular_file() && e.path().filename() != "manifest.json") files.push_back(e.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files) inputs_.push_back(f);
        } else {
            inputs_.push_back(p);
        }
    }
    void output(const fs::path& p) { outputs_.push_back(p); }
    void config(const std::string& p) { config_ = p; }
    void seed(std::uint64_t s) { seed_ = s; }

    void write(const fs::path& out_dir) const {
        Json ins = Json::array(), outs = Json::array();
        for (const auto& p : inputs_) ins.push_back(Json{{"path", p.generic_string()}, {"sha256", sha256_file(p)}});
        for (const auto& p : outputs_) {
            outs.push_back(Json{{"path", p.lexically_relative(out_dir).generic_string()}, {"sha256", sha256_file(p)}});
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        Json j{{"format", "bntr-manifest"},
               {"version", 1},
               {"command", command_},
               {"args", args_},
               {"config", config_ ? Json(*config_) : Json(nullptr)},
               {"seed", seed_ ? Json(*seed_) : Json(nullptr)},
               {"inputs", std::move(ins)},
               {"outputs", std::move(outs)},
               {"wall_time_seconds", secs}};
        write_json(out_dir / "manifest.json", j);
    }

private:
    std::string command_;
    std::vector<std::string> args_;
    std::chrono::steady_clock::time_point start_;
    std::vector<fs::path> inputs_, outputs_;
    std::optional<std::string> config_;
    std::optional<std::uint64_t> seed_;
};

/// Recomputes every output checksum listed in a manifest. Returns the
/// mismatching paths (empty when the manifest verifies).
inline std::vector<std::string> verify_manifest(const fs::path& manifest) {
    const Json j = read_json(manifest);
    const fs::path dir = manifest.parent_path();
    std::vector<std::string> bad;
    for (const auto& o : json_get<Json>(j, "outputs")) {
        const auto rel = json_get<std::string>(o, "path");
        const fs::path p = dir / rel;
        if (!fs::exists(p) || sha256_file(p) != json_get<std::string>(o, "sha256")) bad.push_back(rel);
    }
    return bad;
}

inline Dims parse_dims(const std::string& s) {
    Dims d;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(tok, &used);
        } catch (const std::exception&) {
            throw InvalidArgument("bad dims '" + s + "'");
        }
        if (used != tok.size() || v == 0) throw InvalidArgument("bad dims '" + s + "'");
        d.push_back(static_cast<std::size_t>(v));
    }
    if (d.empty()) throw InvalidArgument("bad dims '" + s + "'");
    return d;
}

/// Flags shared by fit and tune; unset flags leave the config file value.
struct FitFlags {
    std::string config;
    std::optional<int> rank, K, zeta, max_iters, init_eta, init_max_iters;
    std::optional<double> lambda1, lambda2, epsilon, init_c;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> init;
    std::optional<std::vector<double>> knots;
    bool unpenalized = false, absolute_tolerance = false;
    std::optional<double> cache_mb;

    void add(CLI::App* app, bool with_penalty) {
        app->add_option("--config", config, "JSON fit configuration")->check(CLI::ExistingFile);
        app->add_option("--rank", rank, "CP rank R")->check(CLI::PositiveNumber);
        if (with_penalty) {
            app->add_option("--lambda1", lambda1, "penalty level lambda1 >= 0")->check(CLI::NonNegativeNumber);
            app->add_option("--lambda2", lambda2, "elastic-net mixing lambda2 in [0,1]")->check(CLI::Range(0.0, 1.0));
        }
        app->add_option("--K", K, "spline basis size (default 7)");
        app->add_option("--zeta", zeta, "spline order (default 4, cubic)");
        app->add_option("--knots", knots, "explicit interior knots (default: pooled quantiles)")->delimiter(',');
        app->add_option("--epsilon", epsilon, "convergence threshold on the objective decrease");
        app->add_flag("--absolute-tolerance", absolute_tolerance, "use the absolute instead of relative decrease test");
        app->add_option("--max-iters", max_iters, "maximum outer iterations");
        app->add_option("--seed", seed, "seed of the initialization");
        app->add_option("--init", init, "random | downsize")->check(CLI::IsMember({"random", "downsize"}));
        app->add_option("--init-C", init_c, "down-sizing constant C (default 10)");
        app->add_option("--init-eta", init_eta, "down-sizing ladder length (default 3)");
        app->add_option("--init-max-iters", init_max_iters, "iteration cap of each ladder fit");
        if (with_penalty) app->add_flag("--unpenalized", unpenalized, "lambda1 = 0 without unit-norm constraints");
        app->add_option("--cache-mb", cache_mb, "memory budget for cached basis evaluations (MiB)");
    }

    FitConfig resolve(const Json& file) const {
        FitConfig c = file.is_null() ? FitConfig{} : fit_config_from_json(file);
        if (rank) c.rank = *rank;
        if (lambda1) c.lambda1 = *lambda1;
        if (lambda2) c.lambda2 = *lambda2;
        if (K) c.K = *K;
        if (zeta) c.order = *zeta;
        if (knots) c.interior_knots = *knots;
        if (epsilon) c.epsilon = *epsilon;
        if (absolute_tolerance) c.absolute_tolerance = true;
        if (max_iters) c.max_iters = *max_iters;
        if (seed) c.seed = *seed;
        if (init) c.init.strategy = *init == "random" ? InitStrategy::random : InitStrategy::sequential_downsize;
        if (init_c) c.init.C = *init_c;
        if (init_eta) c.init.eta = *init_eta;
        if (init_max_iters) c.init.max_iters = *init_max_iters;
        if (unpenalized) c.unpenalized = true;
        if (cache_mb) c.cache_budget_bytes = static_cast<std::size_t>(*cache_mb * 1024.0 * 1024.0);
        c.validate();
        return c;
    }
};

inline Json json_number(double v) { return std::isfinite(v) ? Json(v) : Json(format_double(v)); }

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Broadcasted nonparametric tensor regression"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "bntr 1.0.0");

    std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);

    // simulate
    auto* sim = app.add_subcommand("simulate", "generate a synthetic case with its ground truth");
    int sim_case = 2;
    std::size_t sim_n = 1000;
    std::uint64_t sim_seed = 0;
    double sim_noise = 0.10;
    std::string sim_dims = "64,64", sim_out;
    std::vector<std::string> sim_masks;
    sim->add_option("--case", sim_case, "case 1-4")->check(CLI::Range(1, 4));
    sim->add_option("--n", sim_n, "number of samples")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
    sim->add_option("--seed", sim_seed, "generator seed");
    sim->add_option("--noise-ratio", sim_noise, "noise sd relative to the sd of m0")->check(CLI::NonNegativeNumber);
    sim->add_option("--dims", sim_dims, "covariate dims, comma separated");
    sim->add_option("--mask", sim_masks, "mask file per component (binary tensor or .csv)")->check(CLI::ExistingFile);
    sim->add_option("--out", sim_out, "output directory")->required();

    // fit
    auto* fitc = app.add_subcommand("fit", "fit one configuration");
    FitFlags fit_flags;
    fit_flags.add(fitc, true);
    std::string fit_data, fit_out;
    bool fit_progress = false;
    std::optional<double> fit_vfrac;
    std::optional<std::uint64_t> fit_split_seed;
    bool fit_strict = false;
    fitc->add_option("--data", fit_data, "dataset directory")->required();
    fitc->add_option("--out", fit_out, "output directory")->required();
    fitc->add_option("--validation-fraction", fit_vfrac, "hold out this share and fit on the rest")
        ->check(CLI::Range(0.0, 1.0));
    fitc->add_option("--split-seed", fit_split_seed, "seed of the hold-out split");
    fitc->add_flag("--progress", fit_progress, "also write progress.jsonl");
    fitc->add_flag("--strict", fit_strict, "exit 1 when the solver does not converge");

    // tune
    auto* tune = app.add_subcommand("tune", "validation grid search over (R, lambda1, lambda2)");
    FitFlags tune_flags;
    tune_flags.add(tune, false);
    std::string tune_data, tune_out, tune_grid;
    std::optional<std::vector<int>> tune_ranks;
    std::optional<std::vector<double>> tune_l1, tune_l2;
    std::optional<double> tune_frac;
    std::optional<std::uint64_t> tune_split_seed;
    tune->add_option("--data", tune_data, "dataset directory")->required();
    tune->add_option("--out", tune_out, "output directory")->required();
    tune->add_option("--grid", tune_grid, "JSON grid specification")->check(CLI::ExistingFile);
    tune->add_option("--ranks", tune_ranks, "ranks")->delimiter(',');
    tune->add_option("--lambda1s", tune_l1, "lambda1 grid")->delimiter(',');
    tune->add_option("--lambda2s", tune_l2, "lambda2 grid")->delimiter(',');
    tune->add_option("--validation-fraction", tune_frac, "validation share (default 0.2)");
    tune->add_option("--split-seed", tune_split_seed, "seed of the validation split");

    // predict
    auto* pred = app.add_subcommand("predict", "predict responses for a dataset");
    std::string pred_model, pred_data, pred_out;
    bool pred_clamp = false;
    pred->add_option("--model", pred_model, "model JSON")->required();
    pred->add_option("--data", pred_data, "dataset directory")->required();
    pred->add_option("--out", pred_out, "output directory")->required();
    pred->add_flag("--clamp", pred_clamp, "clamp covariates outside [0,1] instead of failing");

    // eval-ise
    auto* ise_cmd = app.add_subcommand("eval-ise", "Monte Carlo integrated squared error against a truth");
    std::string ise_model, ise_truth, ise_out;
    std::size_t ise_points = 10000;
    std::uint64_t ise_seed = 0;
    ise_cmd->add_option("--model", ise_model, "model JSON")->required();
    ise_cmd->add_option("--truth", ise_truth, "truth JSON")->required();
    ise_cmd->add_option("--points", ise_points, "Monte Carlo points (>= 1000)");
    ise_cmd->add_option("--seed", ise_seed, "Monte Carlo seed");
    ise_cmd->add_option("--out", ise_out, "output directory")->required();

    // norm-tensor
    auto* nt = app.add_subcommand("norm-tensor", "export per-entry L2 norms of the fitted effects");
    std::string nt_model, nt_out;
    nt->add_option("--model", nt_model, "model JSON")->required();
    nt->add_option("--out", nt_out, "output directory")->required();

    // ingest
    auto* ing = app.add_subcommand("ingest", "min-max rescale raw covariates into a dataset directory");
    std::string ing_input, ing_y, ing_out, ing_extrema_from;
    std::optional<std::string> ing_dims;
    ing->add_option("--input", ing_input, "raw covariates: binary tensor with the sample mode last")->required();
    ing->add_option("--responses", ing_y, "responses, one per line")->required();
    ing->add_option("--dims", ing_dims, "reshape each sample to these dims");
    ing->add_option("--extrema-from", ing_extrema_from, "dataset directory whose extrema are reused");
    ing->add_option("--out", ing_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << '\n';
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "bntr: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (*sim) {
            Run run("simulate", args);
            CaseSpec spec;
            spec.case_id = sim_case;
            spec.n = sim_n;
            spec.seed = sim_seed;
            spec.noise_ratio = sim_noise;
            spec.dims = parse_dims(sim_dims);
            for (const auto& m : sim_masks) {
                spec.masks.push_back(read_tensor_any(m));
                run.input(m);
            }
            run.seed(sim_seed);
            const SyntheticCase sc = generate_case(spec);
            const fs::path dir(sim_out);
            DatasetMeta meta;
            meta.seed = sim_seed;
            meta.extra = Json{{"case", sim_case}, {"noise_ratio", sim_noise}, {"noise_sd", sc.noise_sd}};
            write_dataset(dir, sc.data, meta);
            write_json(dir / "truth.json", truth_to_json(sc.truth));
            for (const char* f : {"data.bin", "y.csv", "meta.json", "truth.json"}) run.output(dir / f);
            if (spec.dims.size() == 2) {
                write_pgm(dir / "truth_mask.pgm", sc.truth.support_mask());
                run.output(dir / "truth_mask.pgm");
            }
            run.write(dir);
            return exit_ok;
        }

        if (*fitc) {
            Run run("fit", args);
            const Json file = fit_flags.config.empty() ? Json(nullptr) : read_json(fit_flags.config);
            if (!fit_flags.config.empty()) {
                run.config(fit_flags.config);
                run.input(fit_flags.config);
            }
            const FitConfig cfg = fit_flags.resolve(file);
            run.seed(cfg.seed);
            // A tuned configuration carries the split it was selected on.
            std::optional<double> vfrac = fit_vfrac;
            std::optional<std::uint64_t> split_seed = fit_split_seed;
            if (file.is_object() && file.contains("validation")) {
                const auto& v = file.at("validation");
                if (!vfrac) vfrac = json_get<double>(v, "fraction");
                if (!split_seed) split_seed = json_get<std::uint64_t>(v, "seed");
            }
            run.input(fit_data);
            const Dataset data = read_dataset(fit_data);
            const fs::path dir(fit_out);
            fs::create_directories(dir);

            std::optional<Dataset> valid;
            Json summary = Json::object();
            const Dataset* train = &data;
            std::optional<Dataset> train_store;
            if (vfrac && *vfrac > 0.0) {
                const Split sp = split_indices(static_cast<std::size_t>(data.n()), *vfrac, split_seed.value_or(0));
                train_store = data.subset(sp.train);
                valid = data.subset(sp.valid);
                train = &*train_store;
                summary["validation"] = Json{{"fraction", *vfrac}, {"seed", split_seed.value_or(0)}};
            }
            std::ofstream progress;
            FitObserver observer;
            if (fit_progress) {
                progress.open(dir / "progress.jsonl", std::ios::trunc);
                if (!progress) throw IoError("cannot write progress.jsonl");
                observer = [&](const IterationRecord& r) { progress << progress_line(r) << '\n' << std::flush; };
            }
            const FitResult res = fit(*train, cfg, observer);
            if (progress.is_open()) {
                progress.close();
                run.output(dir / "progress.jsonl");
            }
            save_model(dir / "model.json", res.model);
            write_trace_csv(dir / "trace.csv", res.records);
            summary["converged"] = res.converged;
            summary["iterations"] = res.iterations;
            summary["objective"] = json_number(res.records.back().objective);
            summary["loss"] = json_number(res.records.back().loss);
            summary["penalty"] = json_number(res.records.back().penalty);
            summary["train_n"] = train->n();
            summary["train_mse"] = json_number(res.records.back().loss / static_cast<double>(train->n()));
            if (valid) summary["validation_error"] = json_number(validation_error(res.model, *valid));
            summary["config"] = fit_config_to_json(cfg);
            write_json(dir / "fit.json", summary);
            for (const char* f : {"model.json", "trace.csv", "fit.json"}) run.output(dir / f);
            run.write(dir);
            if (!res.converged) {
                err << "bntr: warning: no convergence within " << cfg.max_iters << " iterations\n";
                if (fit_strict) return exit_numerical;
            }
            return exit_ok;
        }

        if (*tune) {
            Run run("tune", args);
            const Json file = tune_flags.config.empty() ? Json(nullptr) : read_json(tune_flags.config);
            if (!tune_flags.config.empty()) {
                run.config(tune_flags.config);
                run.input(tune_flags.config);
            }
            const FitConfig base = tune_flags.resolve(file);
            GridSpec grid;
            if (!tune_grid.empty()) {
                grid = grid_from_json(read_json(tune_grid));
                run.input(tune_grid);
            }
            if (tune_ranks) grid.ranks = *tune_ranks;
            if (tune_l1) grid.lambda1s = *tune_l1;
            if (tune_l2) grid.lambda2s = *tune_l2;
            if (tune_frac) grid.split_fraction = *tune_frac;
            if (tune_split_seed) grid.seed = *tune_split_seed;
            grid.validate();
            run.seed(base.seed);
            run.input(tune_data);
            const Dataset data = read_dataset(tune_data);
            const GridResult gr = grid_search(data, grid, base);
            const fs::path dir(tune_out);
            fs::create_directories(dir);
            {
                std::ofstream os(dir / "tuning.csv", std::ios::trunc);
                if (!os) throw IoError("cannot write tuning.csv");
                write_grid_csv(os, gr.cells);
            }
            Json best = fit_config_to_json(gr.best_config);
            best["validation"] = Json{{"fraction", grid.split_fraction}, {"seed", grid.seed}};
            write_json(dir / "best_config.json", best);
            save_model(dir / "model.json", gr.best_fit->model);
            const GridCell& cell = gr.cells[gr.best];
            write_json(dir / "tune.json", Json{{"rank", cell.rank},
                                               {"lambda1", cell.lambda1},
                                               {"lambda2", cell.lambda2},
                                               {"validation_error", json_number(cell.validation_error)},
                                               {"iterations", cell.iterations},
                                               {"converged", cell.converged},
                                               {"grid", grid_to_json(grid)}});
            for (const char* f : {"tuning.csv", "best_config.json", "model.json", "tune.json"}) run.output(dir / f);
            run.write(dir);
            return exit_ok;
        }

        if (*pred) {
            Run run("predict", args);
            run.input(pred_model);
            run.input(pred_data);
            const BroadcastModel model = load_model(pred_model);
            const Dataset data = read_dataset(pred_data);
            const Eigen::VectorXd y = model.predict(data, pred_clamp ? DomainPolicy::clamp : DomainPolicy::strict);
            const fs::path dir(pred_out);
            fs::create_directories(dir);
            write_vector_csv(dir / "predictions.csv", "prediction", y);
            run.output(dir / "predictions.csv");
            run.write(dir);
            return exit_ok;
        }

        if (*ise_cmd) {
            Run run("eval-ise", args);
            run.input(ise_model);
            run.input(ise_truth);
            run.seed(ise_seed);
            const BroadcastModel model = load_model(ise_model);
            const GroundTruth truth = truth_from_json(read_json(ise_truth));
            const IseEstimate e = ise(model, truth, ise_points, ise_seed);
            const fs::path dir(ise_out);
            fs::create_directories(dir);
            write_json(dir / "ise.json", Json{{"ise", json_number(e.value)},
                                              {"std_error", json_number(e.std_error)},
                                              {"points", e.points},
                                              {"seed", ise_seed}});
            run.output(dir / "ise.json");
            run.write(dir);
            out << format_double(e.value) << '\n';
            return exit_ok;
        }

        if (*nt) {
            Run run("norm-tensor", args);
            run.input(nt_model);
            const BroadcastModel model = load_model(nt_model);
            const NormTensor norms = model.norm_tensor();
            const fs::path dir(nt_out);
            fs::create_directories(dir);
            write_tensor_binary(dir / "norm.bin", norms);
            run.output(dir / "norm.bin");
            if (norms.order() == 2) {
                write_tensor_csv(dir / "norm.csv", norms);
                write_pgm(dir / "norm.pgm", norms);
                run.output(dir / "norm.csv");
                run.output(dir / "norm.pgm");
            }
            run.write(dir);
            return exit_ok;
        }

        if (*ing) {
            Run run("ingest", args);
            run.input(ing_input);
            run.input(ing_y);
            const DenseTensor raw = read_tensor_binary(ing_input);
            if (raw.order() < 2) throw IoError("raw input needs at least one covariate mode plus the sample mode");
            const std::size_t n = raw.dims().back();
            Dims dims(raw.dims().begin(), raw.dims().end() - 1);
            if (ing_dims) {
                const Dims want = parse_dims(*ing_dims);
                if (num_entries(want) != num_entries(dims)) throw InvalidArgument("--dims does not match the input size");
                dims = want;
            }
            Extrema ext;
            if (!ing_extrema_from.empty()) {
                run.input(fs::path(ing_extrema_from) / "meta.json");
                DatasetMeta m;
                read_dataset(ing_extrema_from, &m);
                if (!m.extrema) throw IoError("dataset " + ing_extrema_from + " has no stored extrema");
                ext = *m.extrema;
            } else {
                ext = compute_extrema(raw.values());
            }
            if (ext.constant()) err << "bntr: warning: constant covariates; every entry set to 0.5\n";
            const std::vector<double> scaled = apply_extrema(raw.values(), ext);
            const Eigen::VectorXd y = read_vector_csv(ing_y);
            if (static_cast<std::size_t>(y.size()) != n) throw IoError("response count does not match the samples");
            for (Eigen::Index i = 0; i < y.size(); ++i)
                if (!std::isfinite(y(i))) throw InvalidArgument("non-finite response");
            const auto s = static_cast<Eigen::Index>(num_entries(dims));
            Eigen::MatrixXd x = Eigen::Map<const Eigen::MatrixXd>(scaled.data(), s, static_cast<Eigen::Index>(n));
            const fs::path dir(ing_out);
            DatasetMeta meta;
            meta.extrema = ext;
            write_dataset(dir, Dataset(dims, std::move(x), y), meta);
            for (const char* f : {"data.bin", "y.csv", "meta.json"}) run.output(dir / f);
            run.write(dir);
            return exit_ok;
        }
    } catch (const IoError& e) {
        err << "bntr: " << e.what() << '\n';
        return exit_usage;
    } catch (const InvalidArgument& e) {
        err << "bntr: " << e.what() << '\n';
        return exit_usage;
    } catch (const DomainError& e) {
        err << "bntr: " << e.what() << '\n';
        return exit_usage;
    } catch (const Unsupported& e) {
        err << "bntr: " << e.what() << '\n';
        return exit_usage;
    } catch (const fs::filesystem_error& e) {
        err << "bntr: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "bntr: " << e.what() << '\n';
        return exit_numerical;
    }
    err << "bntr: no command given\n";
    return exit_usage;
}

}  // namespace bntr::cli
