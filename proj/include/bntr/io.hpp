#pragma once

// File formats.
//
// Binary tensor: 8-byte magic "BNTRTNS1", u64 order, u64 dims[order], then
// f64 values in canonical order; all little-endian.
// Dataset directory: data.bin (tensor of dims p_1..p_D, n), y.csv, meta.json.
// Models, truths and configs are JSON; doubles are written in shortest
// round-trip form so a reload is exact.

#include <Eigen/Dense>

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bntr/dataset.hpp"
#include "bntr/error.hpp"
#include "bntr/format.hpp"
#include "bntr/ingest.hpp"
#include "bntr/model.hpp"
#include "bntr/solver.hpp"
#include "bntr/spline.hpp"
#include "bntr/synth.hpp"
#include "bntr/tensor.hpp"
#include "bntr/tuning.hpp"

namespace bntr {

using Json = nlohmann::json;
namespace fs = std::filesystem;

inline constexpr char tensor_magic[8] = {'B', 'N', 'T', 'R', 'T', 'N', 'S', '1'};

namespace detail {

inline std::uint64_t to_le(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
        return r;
    }
    return v;
}

inline void put_u64(std::ostream& os, std::uint64_t v) {
    v = to_le(v);
    os.write(reinterpret_cast<const char*>(&v), 8);
}

inline std::uint64_t get_u64(std::istream& is) {
    std::uint64_t v = 0;
    if (!is.read(reinterpret_cast<char*>(&v), 8)) throw IoError("truncated tensor header");
    return to_le(v);
}

inline std::ofstream open_out(const fs::path& path, bool binary = false) {
    std::ofstream os(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
    if (!os) throw IoError("cannot write " + path.string());
    return os;
}

inline std::ifstream open_in(const fs::path& path, bool binary = false) {
    std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
    if (!is) throw IoError("cannot read " + path.string());
    return is;
}

inline double parse_double(const std::string& tok, const std::string& where) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw IoError("malformed number '" + tok + "' in " + where);
    }
    while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
    if (used != tok.size()) throw IoError("malformed number '" + tok + "' in " + where);
    return v;
}

}  // namespace detail

// ---- binary tensors -------------------------------------------------------

inline void write_tensor_stream(std::ostream& os, const Dims& dims, const double* values) {
    os.write(tensor_magic, 8);
    detail::put_u64(os, dims.size());
    for (auto p : dims) detail::put_u64(os, p);
    const std::size_t s = num_entries(dims);
    if constexpr (std::endian::native == std::endian::little) {
        os.write(reinterpret_cast<const char*>(values), static_cast<std::streamsize>(s * sizeof(double)));
    } else {
        for (std::size_t i = 0; i < s; ++i) detail::put_u64(os, std::bit_cast<std::uint64_t>(values[i]));
    }
}

inline void write_tensor_binary(const fs::path& path, const DenseTensor& t) {
    auto os = detail::open_out(path, true);
    write_tensor_stream(os, t.dims(), t.values().data());
    if (!os) throw IoError("failed writing " + path.string());
}

inline DenseTensor read_tensor_binary(const fs::path& path) {
    auto is = detail::open_in(path, true);
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, tensor_magic, 8) != 0) {
        throw IoError(path.string() + " is not a tensor file");
    }
    const std::uint64_t order = detail::get_u64(is);
    if (order == 0 || order > 64) throw IoError("implausible tensor order in " + path.string());
    Dims dims(order);
    for (auto& p : dims) {
        p = detail::get_u64(is);
        if (p == 0) throw IoError("zero dimension in " + path.string());
    }
    const std::size_t s = num_entries(dims);
    std::vector<double> values(s);
    for (auto& v : values) v = std::bit_cast<double>(detail::get_u64(is));
    if (is.peek() != std::char_traits<char>::eof()) throw IoError("trailing bytes in " + path.string());
    return DenseTensor(std::move(dims), std::move(values));
}

// ---- CSV --------------------------------------------------------------------

/// Order-2 tensor: one CSV row per first index.
inline DenseTensor read_tensor_csv(const fs::path& path) {
    auto is = detail::open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) row.push_back(detail::parse_double(tok, path.string()));
        if (!rows.empty() && row.size() != rows.front().size()) throw IoError("ragged CSV " + path.string());
        rows.push_back(std::move(row));
    }
    if (rows.empty() || rows.front().empty()) throw IoError("empty CSV " + path.string());
    DenseTensor t(Dims{rows.size(), rows.front().size()});
    for (std::size_t j = 0; j < rows.front().size(); ++j)
        for (std::size_t i = 0; i < rows.size(); ++i) t[i + rows.size() * j] = rows[i][j];
    return t;
}

inline void write_tensor_csv(const fs::path& path, const DenseTensor& t) {
    detail::require(t.order() == 2, "CSV export needs an order-2 tensor");
    auto os = detail::open_out(path);
    const std::size_t p1 = t.dims()[0], p2 = t.dims()[1];
    for (std::size_t i = 0; i < p1; ++i) {
        for (std::size_t j = 0; j < p2; ++j) {
            if (j) os << ',';
            os << format_double(t[i + p1 * j]);
        }
        os << '\n';
    }
}

/// Reads a tensor from .csv (order 2) or the binary format.
inline DenseTensor read_tensor_any(const fs::path& path) {
    return path.extension() == ".csv" ? read_tensor_csv(path) : read_tensor_binary(path);
}

inline void write_tensor_any(const fs::path& path, const DenseTensor& t) {
    if (path.extension() == ".csv") write_tensor_csv(path, t);
    else write_tensor_binary(path, t);
}

/// One number per line; an optional non-numeric header line is skipped.
inline Eigen::VectorXd read_vector_csv(const fs::path& path) {
    auto is = detail::open_in(path);
    std::vector<double> v;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            const char c = line.front();
            if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.' || c == 'n' ||
                  c == 'i')) {
                continue;
            }
        }
        v.push_back(detail::parse_double(line, path.string()));
    }
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline void write_vector_csv(const fs::path& path, const std::string& header, const Eigen::VectorXd& v) {
    auto os = detail::open_out(path);
    os << header << '\n';
    for (Eigen::Index i = 0; i < v.size(); ++i) os << format_double(v(i)) << '\n';
}

// ---- JSON helpers -------------------------------------------------------------

inline void write_json(const fs::path& path, const Json& j) {
    auto os = detail::open_out(path);
    os << j.dump(2) << '\n';
    if (!os) throw IoError("failed writing " + path.string());
}

inline Json read_json(const fs::path& path) {
    auto is = detail::open_in(path);
    try {
        return Json::parse(is);
    } catch (const Json::exception& e) {
        throw IoError("invalid JSON in " + path.string() + ": " + e.what());
    }
}

/// Row-major nested arrays.
inline Json matrix_to_json(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Eigen::MatrixXd matrix_from_json(const Json& j, Eigen::Index cols_if_empty = 0) {
    if (!j.is_array()) throw IoError("matrix must be an array of rows");
    if (j.empty()) return Eigen::MatrixXd(0, cols_if_empty);
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw IoError("ragged matrix");
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

template <class T>
T json_get(const Json& j, const char* key) {
    if (!j.contains(key)) throw IoError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw IoError(std::string("bad field '") + key + "': " + e.what());
    }
}

// ---- basis, model, truth -------------------------------------------------------

inline Json basis_to_json(const SplineBasis& b) {
    return Json{{"zeta", b.order()}, {"interior_knots", b.interior_knots()}, {"K", b.size()}};
}

inline SplineBasis basis_from_json(const Json& j) {
    SplineBasis b(json_get<int>(j, "zeta"), json_get<std::vector<double>>(j, "interior_knots"));
    if (j.contains("K") && j.at("K").get<int>() != b.size()) throw IoError("basis K disagrees with its knots");
    return b;
}

inline Json model_to_json(const BroadcastModel& m) {
    Json factors = Json::array();
    for (const auto& b : m.factors().factors) factors.push_back(matrix_to_json(b));
    return Json{{"format", "bntr-model"},
                {"version", 1},
                {"intercept", m.intercept()},
                {"dims", m.dims()},
                {"rank", m.rank()},
                {"basis", basis_to_json(m.basis())},
                {"factors", std::move(factors)},
                {"coeffs", matrix_to_json(m.factors().coeffs)}};
}

inline BroadcastModel model_from_json(const Json& j) {
    if (!j.is_object() || j.value("format", "") != "bntr-model") throw IoError("not a model file");
    const auto dims = json_get<Dims>(j, "dims");
    const auto rank = json_get<Eigen::Index>(j, "rank");
    FactorSet fs;
    for (const auto& b : json_get<Json>(j, "factors")) fs.factors.push_back(matrix_from_json(b, rank));
    fs.coeffs = matrix_from_json(json_get<Json>(j, "coeffs"), rank);
    try {
        return BroadcastModel(json_get<double>(j, "intercept"), std::move(fs), dims,
                              basis_from_json(json_get<Json>(j, "basis")));
    } catch (const InvalidArgument& e) {
        throw IoError(std::string("inconsistent model file: ") + e.what());
    }
}

inline void save_model(const fs::path& path, const BroadcastModel& m) { write_json(path, model_to_json(m)); }
inline BroadcastModel load_model(const fs::path& path) { return model_from_json(read_json(path)); }

inline Json truth_to_json(const GroundTruth& t) {
    Json comps = Json::array();
    for (const auto& c : t.components()) {
        std::vector<int> mask(c.mask.size());
        for (std::size_t k = 0; k < mask.size(); ++k) mask[k] = static_cast<int>(c.mask[k]);
        comps.push_back(Json{{"function", truth_function_name(c.function)}, {"mask", std::move(mask)}});
    }
    return Json{{"format", "bntr-truth"},
                {"version", 1},
                {"dims", t.dims()},
                {"intercept", t.intercept()},
                {"components", std::move(comps)}};
}

inline GroundTruth truth_from_json(const Json& j) {
    if (!j.is_object() || j.value("format", "") != "bntr-truth") throw IoError("not a truth file");
    const auto dims = json_get<Dims>(j, "dims");
    std::vector<TruthComponent> comps;
    for (const auto& c : json_get<Json>(j, "components")) {
        const auto mask = json_get<std::vector<double>>(c, "mask");
        if (mask.size() != num_entries(dims)) throw IoError("mask size does not match dims");
        comps.push_back({DenseTensor(dims, mask), parse_truth_function(json_get<std::string>(c, "function"))});
    }
    try {
        return GroundTruth(dims, json_get<double>(j, "intercept"), std::move(comps));
    } catch (const InvalidArgument& e) {
        throw IoError(std::string("inconsistent truth file: ") + e.what());
    }
}

// ---- configs ------------------------------------------------------------------

inline Json fit_config_to_json(const FitConfig& c) {
    Json j{{"rank", c.rank},
           {"lambda1", c.lambda1},
           {"lambda2", c.lambda2},
           {"K", c.K},
           {"zeta", c.order},
           {"epsilon", c.epsilon},
           {"absolute_tolerance", c.absolute_tolerance},
           {"max_iters", c.max_iters},
           {"seed", c.seed},
           {"init",
            {{"strategy", c.init.strategy == InitStrategy::random ? "random" : "sequential_downsize"},
             {"C", c.init.C},
             {"eta", c.init.eta},
             {"max_iters", c.init.max_iters}}},
           {"unpenalized", c.unpenalized},
           {"lambda1_path", c.lambda1_path}};
    j["interior_knots"] = c.interior_knots ? Json(*c.interior_knots) : Json(nullptr);
    return j;
}

/// Fields absent from `j` keep their values from `base`.
inline FitConfig fit_config_from_json(const Json& j, FitConfig base = {}) {
    if (!j.is_object()) throw IoError("fit config must be a JSON object");
    try {
        if (j.contains("rank")) base.rank = j.at("rank").get<int>();
        if (j.contains("lambda1")) base.lambda1 = j.at("lambda1").get<double>();
        if (j.contains("lambda2")) base.lambda2 = j.at("lambda2").get<double>();
        if (j.contains("K")) base.K = j.at("K").get<int>();
        if (j.contains("zeta")) base.order = j.at("zeta").get<int>();
        if (j.contains("epsilon")) base.epsilon = j.at("epsilon").get<double>();
        if (j.contains("absolute_tolerance")) base.absolute_tolerance = j.at("absolute_tolerance").get<bool>();
        if (j.contains("max_iters")) base.max_iters = j.at("max_iters").get<int>();
        if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("unpenalized")) base.unpenalized = j.at("unpenalized").get<bool>();
        if (j.contains("lambda1_path")) base.lambda1_path = j.at("lambda1_path").get<std::vector<double>>();
        if (j.contains("interior_knots")) {
            const auto& k = j.at("interior_knots");
            if (k.is_null()) base.interior_knots.reset();
            else base.interior_knots = k.get<std::vector<double>>();
        }
        if (j.contains("init")) {
            const auto& in = j.at("init");
            if (in.contains("strategy")) {
                const auto s = in.at("strategy").get<std::string>();
                if (s == "random") base.init.strategy = InitStrategy::random;
                else if (s == "sequential_downsize") base.init.strategy = InitStrategy::sequential_downsize;
                else throw IoError("unknown init strategy '" + s + "'");
            }
            if (in.contains("C")) base.init.C = in.at("C").get<double>();
            if (in.contains("eta")) base.init.eta = in.at("eta").get<int>();
            if (in.contains("max_iters")) base.init.max_iters = in.at("max_iters").get<int>();
        }
    } catch (const Json::exception& e) {
        throw IoError(std::string("bad fit config: ") + e.what());
    }
    return base;
}

inline Json grid_to_json(const GridSpec& g) {
    return Json{{"ranks", g.ranks},
                {"lambda1s", g.lambda1s},
                {"lambda2s", g.lambda2s},
                {"split_fraction", g.split_fraction},
                {"seed", g.seed}};
}

inline GridSpec grid_from_json(const Json& j, GridSpec base = {}) {
    if (!j.is_object()) throw IoError("grid must be a JSON object");
    try {
        if (j.contains("ranks")) base.ranks = j.at("ranks").get<std::vector<int>>();
        if (j.contains("lambda1s")) base.lambda1s = j.at("lambda1s").get<std::vector<double>>();
        if (j.contains("lambda2s")) base.lambda2s = j.at("lambda2s").get<std::vector<double>>();
        if (j.contains("split_fraction")) base.split_fraction = j.at("split_fraction").get<double>();
        if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
    } catch (const Json::exception& e) {
        throw IoError(std::string("bad grid: ") + e.what());
    }
    return base;
}

// ---- dataset directories ----------------------------------------------------------

struct DatasetMeta {
    Dims dims;
    std::size_t n = 0;
    std::optional<Extrema> extrema;
    std::optional<std::uint64_t> seed;
    Json extra = Json::object();
};

inline void write_dataset(const fs::path& dir, const Dataset& data, const DatasetMeta& meta) {
    fs::create_directories(dir);
    Dims full = data.dims();
    full.push_back(static_cast<std::size_t>(data.n()));
    {
        auto os = detail::open_out(dir / "data.bin", true);
        write_tensor_stream(os, full, data.covariates().data());
        if (!os) throw IoError("failed writing " + (dir / "data.bin").string());
    }
    write_vector_csv(dir / "y.csv", "y", data.responses());
    Json j{{"format", "bntr-dataset"}, {"version", 1}, {"dims", data.dims()}, {"n", data.n()}};
    j["extrema"] = meta.extrema ? Json{{"min", meta.extrema->min}, {"max", meta.extrema->max}} : Json(nullptr);
    j["seed"] = meta.seed ? Json(*meta.seed) : Json(nullptr);
    for (auto it = meta.extra.begin(); it != meta.extra.end(); ++it) j[it.key()] = it.value();
    write_json(dir / "meta.json", j);
}

inline Dataset read_dataset(const fs::path& dir, DatasetMeta* meta_out = nullptr) {
    if (!fs::is_directory(dir)) throw IoError("dataset directory " + dir.string() + " does not exist");
    const Json meta = read_json(dir / "meta.json");
    const auto dims = json_get<Dims>(meta, "dims");
    const DenseTensor x = read_tensor_binary(dir / "data.bin");
    if (x.order() != dims.size() + 1 || !std::equal(dims.begin(), dims.end(), x.dims().begin())) {
        throw IoError("data.bin dims " + dims_to_string(x.dims()) + " do not match meta.json");
    }
    const auto n = static_cast<Eigen::Index>(x.dims().back());
    const Eigen::VectorXd y = read_vector_csv(dir / "y.csv");
    if (y.size() != n) throw IoError("y.csv has " + std::to_string(y.size()) + " responses, expected " + std::to_string(n));
    const auto s = static_cast<Eigen::Index>(num_entries(dims));
    Eigen::MatrixXd cov = Eigen::Map<const Eigen::MatrixXd>(x.values().data(), s, n);
    if (meta_out) {
        meta_out->dims = dims;
        meta_out->n = static_cast<std::size_t>(n);
        if (meta.contains("extrema") && !meta.at("extrema").is_null()) {
            meta_out->extrema = Extrema{meta["extrema"].at("min").get<double>(), meta["extrema"].at("max").get<double>()};
        }
        if (meta.contains("seed") && !meta.at("seed").is_null()) meta_out->seed = meta.at("seed").get<std::uint64_t>();
        meta_out->extra = meta;
    }
    return Dataset(dims, std::move(cov), y);
}

// ---- reports ---------------------------------------------------------------------

/// 8-bit binary PGM of an order-2 tensor, rows = first index, scaled so the
/// largest value maps to 255 (all-zero tensors stay black).
inline void write_pgm(const fs::path& path, const DenseTensor& t) {
    detail::require(t.order() == 2, "PGM export needs an order-2 tensor");
    const std::size_t rows = t.dims()[0], cols = t.dims()[1];
    double hi = 0.0;
    for (double v : t.values()) hi = std::max(hi, v);
    auto os = detail::open_out(path, true);
    os << "P5\n" << cols << ' ' << rows << "\n255\n";
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const double v = hi > 0.0 ? std::clamp(t[i + rows * j] / hi, 0.0, 1.0) : 0.0;
            os.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * v))));
        }
    }
}

inline void write_trace_csv(const fs::path& path, const std::vector<IterationRecord>& records) {
    auto os = detail::open_out(path);
    os << "iter,LG,L,G\n";
    for (const auto& r : records) {
        os << r.iter << ',' << format_double(r.objective) << ',' << format_double(r.loss) << ','
           << format_double(r.penalty) << '\n';
    }
}

inline std::string progress_line(const IterationRecord& r) {
    return Json{{"iter", r.iter}, {"LG", r.objective}, {"L", r.loss}, {"G", r.penalty}}.dump();
}

}  // namespace bntr
