#include "diffgeo/bench.hpp"

#include "diffgeo/error.hpp"
#include "diffgeo/lpca.hpp"
#include "diffgeo/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

namespace diffgeo {

const char* const kVersion = "0.3.0";

// ---------------------------------------------------------------------------
// configuration

std::string MethodSpec::name() const {
    return kind == Kind::Diffusion ? "diffusion" : "lpca(" + std::to_string(k) + ")";
}

MethodSpec MethodSpec::parse(const std::string& text) {
    if (text == "diffusion") return {};
    for (const char* prefix : {"lpca:", "lpca("}) {
        const std::string p(prefix);
        if (text.rfind(p, 0) == 0) {
            std::string digits = text.substr(p.size());
            if (!digits.empty() && digits.back() == ')') digits.pop_back();
            try {
                std::size_t used = 0;
                const int k = std::stoi(digits, &used);
                if (used == digits.size() && k >= 1) return {Kind::Lpca, k};
            } catch (const std::exception&) {
            }
        }
    }
    throw Error(ErrorKind::Parse, "unknown method '" + text + "' (expected diffusion or lpca:<k>)");
}

void ExperimentConfig::validate() const {
    if (runs < 1) throw Error(ErrorKind::Domain, "runs must be >= 1");
    if (manifolds.empty()) throw Error(ErrorKind::Domain, "no manifolds configured");
    for (const auto& m : manifolds) m.validate();
    for (int n : n_values)
        if (n < 3) throw Error(ErrorKind::Domain, "sample sizes must be >= 3");
    if (sigma_values.empty()) throw Error(ErrorKind::Domain, "no noise levels configured");
    for (double s : sigma_values)
        if (!(s >= 0) || !std::isfinite(s)) throw Error(ErrorKind::Domain, "noise levels must be >= 0");
    if (methods.empty()) throw Error(ErrorKind::Domain, "no methods configured");
}

namespace {

nlohmann::json spec_json(const ManifoldSpec& spec) { return nlohmann::json::parse(to_json(spec)); }

}  // namespace

ExperimentConfig config_from_json(const std::string& text, BenchTask task) {
    ExperimentConfig cfg;
    if (task == BenchTask::Dimension) {
        cfg.manifolds = benchmark_suite();
    } else {
        cfg.manifolds = {ManifoldSpec::torus(1.0, 2.0)};
        cfg.runs = 10;
        cfg.n_values = {500, 1000, 2000};
        if (task == BenchTask::Tangent) cfg.methods = {MethodSpec{}, {MethodSpec::Kind::Lpca, 5}, {MethodSpec::Kind::Lpca, 100}};
        else cfg.n_values = {1000, 2000, 4000};
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorKind::Format, "config must be a JSON object");
    try {
        if (j.contains("manifolds")) {
            cfg.manifolds.clear();
            for (const auto& m : j.at("manifolds")) cfg.manifolds.push_back(manifold_spec_from_json(m.dump()));
        }
        if (j.contains("n_values")) cfg.n_values = j.at("n_values").get<std::vector<int>>();
        if (j.contains("sigma_values")) cfg.sigma_values = j.at("sigma_values").get<std::vector<double>>();
        if (j.contains("runs")) cfg.runs = j.at("runs").get<int>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("methods")) {
            cfg.methods.clear();
            for (const auto& m : j.at("methods")) cfg.methods.push_back(MethodSpec::parse(m.get<std::string>()));
        }
        if (j.contains("k")) cfg.op.k = j.at("k").get<int>();
        if (j.contains("k0")) cfg.op.k0 = j.at("k0").get<int>();
        if (j.contains("epsilon") && !j.at("epsilon").is_null()) cfg.op.epsilon = j.at("epsilon").get<double>();
        if (j.contains("density_dim") && !j.at("density_dim").is_null())
            cfg.op.density_dim = j.at("density_dim").get<int>();
        if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Format, std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["manifolds"] = nlohmann::json::array();
    for (const auto& m : cfg.manifolds) j["manifolds"].push_back(spec_json(m));
    j["n_values"] = cfg.n_values;
    j["sigma_values"] = cfg.sigma_values;
    j["runs"] = cfg.runs;
    j["seed"] = cfg.seed;
    j["methods"] = nlohmann::json::array();
    for (const auto& m : cfg.methods) j["methods"].push_back(m.kind == MethodSpec::Kind::Diffusion ? "diffusion" : "lpca:" + std::to_string(m.k));
    j["k"] = cfg.op.k;
    j["k0"] = cfg.op.k0;
    j["epsilon"] = cfg.op.epsilon ? nlohmann::json(*cfg.op.epsilon) : nlohmann::json(nullptr);
    j["density_dim"] = cfg.op.density_dim ? nlohmann::json(*cfg.op.density_dim) : nlohmann::json(nullptr);
    j["output"] = cfg.output;
    return j.dump(2);
}

std::string to_json(const RunManifest& manifest) {
    nlohmann::json j{{"task", manifest.task},
                     {"config", nlohmann::json::parse(manifest.config_json)},
                     {"version", manifest.version},
                     {"wall_seconds", manifest.wall_seconds}};
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// result tables

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else if (c != '\r') {
            fields.back() += c;
        }
    }
    return fields;
}

constexpr const char* kHeader = "manifold,n,sigma,method,metric,mean,std,runs,failures,note";

}  // namespace

void ResultTable::write_csv(std::ostream& out) const {
    const auto old = out.precision(17);
    out << kHeader << '\n';
    for (const auto& r : rows)
        out << csv_field(r.manifold) << ',' << r.n << ',' << r.sigma << ',' << csv_field(r.method) << ','
            << csv_field(r.metric) << ',' << r.mean << ',' << r.stddev << ',' << r.runs << ',' << r.failures << ','
            << csv_field(r.note) << '\n';
    out.precision(old);
}

ResultTable ResultTable::read_csv(const std::string& text) {
    ResultTable table;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        if (line_no == 1) {
            if (line.rfind("manifold,", 0) != 0) throw Error(ErrorKind::Format, "missing result table header");
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 10) throw Error(ErrorKind::Format, "line " + std::to_string(line_no) + ": expected 10 fields");
        try {
            table.rows.push_back({f[0], std::stoi(f[1]), std::stod(f[2]), f[3], f[4], std::stod(f[5]), std::stod(f[6]),
                                  std::stoi(f[7]), std::stoi(f[8]), f[9]});
        } catch (const std::exception&) {
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": bad numeric field");
        }
    }
    return table;
}

const ResultRow* ResultTable::find(const std::string& manifold, int n, double sigma, const std::string& method,
                                   const std::string& metric) const {
    for (const auto& r : rows)
        if (r.manifold == manifold && r.n == n && r.sigma == sigma && r.method == method && r.metric == metric) return &r;
    return nullptr;
}

// ---------------------------------------------------------------------------
// metrics

std::uint64_t run_seed(std::uint64_t seed, const ManifoldSpec& spec, int n, double sigma, int run) {
    return mix_seed(seed, {hash_string(spec.label()), static_cast<std::uint64_t>(n), std::bit_cast<std::uint64_t>(sigma),
                           static_cast<std::uint64_t>(run)});
}

Sample make_run_data(const ManifoldSpec& spec, int n, double sigma, std::uint64_t seed) {
    const int D = spec.ambient();
    if (D > spec.minimal_ambient_dim()) {
        auto base = sample(spec.with_ambient(0), n, seed);
        auto embedded = embed_isometric(base.cloud, D, seed);
        return {add_gaussian_noise(embedded, sigma, seed), GroundTruth(spec)};
    }
    auto s = sample(spec, n, seed);
    return {add_gaussian_noise(s.cloud, sigma, seed), std::move(s.truth)};
}

double error_angle(const TangentFrameStack& est, const GroundTruth& gt, const PointCloud& pc) {
    if (est.size() != pc.size()) throw Error(ErrorKind::Shape, "frames and cloud differ in size");
    if (gt.ambient_dim() - gt.dim() != 1 || est.size() == 0 || est.normals.front().cols() != 1)
        throw Error(ErrorKind::MissingOracle, "error angle needs codimension-one frames and normals");
    double total = 0.0;
    for (Eigen::Index i = 0; i < pc.size(); ++i) {
        const Vector p = gt.project(pc.row(i).transpose());
        const double cosine = std::min(1.0, std::abs(est.normals[i].col(0).normalized().dot(gt.normal_at(p))));
        total += std::acos(cosine) * 180.0 / std::numbers::pi;
    }
    return total / static_cast<double>(pc.size());
}

double curvature_mae(const Vector& est_scalar, const GroundTruth& gt, const PointCloud& pc) {
    if (est_scalar.size() != pc.size()) throw Error(ErrorKind::Shape, "curvature vector and cloud differ in size");
    double total = 0.0;
    for (Eigen::Index i = 0; i < pc.size(); ++i)
        total += std::abs(est_scalar(i) - gt.scalar_at(gt.project(pc.row(i).transpose())));
    return total / static_cast<double>(pc.size());
}

TangentFrameStack truth_frames(const GroundTruth& gt, const PointCloud& pc) {
    TangentFrameStack out;
    out.d = gt.dim();
    for (Eigen::Index i = 0; i < pc.size(); ++i) {
        const Vector p = gt.project(pc.row(i).transpose());
        out.tangents.push_back(gt.tangent_frame(p));
        out.normals.push_back(gt.normal_frame(p));
    }
    return out;
}

// ---------------------------------------------------------------------------
// sweeps

namespace {

struct Cell {
    std::size_t manifold;
    int n;
    double sigma;
    std::string size_class;  // "n_small"/"n_large" when sizes come from the defaults
};

std::vector<Cell> enumerate_cells(const ExperimentConfig& cfg) {
    std::vector<Cell> cells;
    for (std::size_t m = 0; m < cfg.manifolds.size(); ++m) {
        std::vector<std::pair<int, std::string>> sizes;
        if (cfg.n_values.empty()) {
            const auto [small, large] = default_sample_sizes(cfg.manifolds[m].intrinsic_dim());
            sizes = {{small, "n_small"}, {large, "n_large"}};
        } else {
            for (int n : cfg.n_values) sizes.push_back({n, ""});
        }
        for (const auto& [n, size_class] : sizes)
            for (double sigma : cfg.sigma_values) cells.push_back({m, n, sigma, size_class});
    }
    return cells;
}

/// One run's outcome for each metric slot; nullopt marks a failure described in errors.
struct Outcome {
    std::vector<std::optional<double>> values;
    std::vector<std::string> errors;
};

/// Per-slot failure messages a job may fill in; empty entries fall back to "non-finite result".
using SlotErrors = std::vector<std::string>;

struct Accumulated {
    double mean = 0.0, stddev = 0.0;
    int failures = 0;
    std::string note;
};

Accumulated accumulate(const std::vector<Outcome>& outcomes, std::size_t slot, bool failure_counts_as_zero) {
    std::vector<double> values;
    Accumulated acc;
    for (const auto& o : outcomes) {
        if (o.values[slot]) {
            values.push_back(*o.values[slot]);
        } else {
            ++acc.failures;
            if (acc.note.empty()) acc.note = o.errors[slot];
            if (failure_counts_as_zero) values.push_back(0.0);
        }
    }
    if (values.empty()) {
        acc.mean = std::nan("");
        acc.stddev = std::nan("");
        return acc;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    acc.mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - acc.mean) * (v - acc.mean);
    acc.stddev = values.size() > 1 ? std::sqrt(sq / static_cast<double>(values.size() - 1)) : 0.0;
    return acc;
}

/// Runs every (cell, run) job, in parallel across jobs, and returns outcomes indexed by
/// cell then run. A job that throws yields a failed outcome; no other job is affected.
std::vector<std::vector<Outcome>> sweep(const ExperimentConfig& cfg, const std::vector<Cell>& cells,
                                        std::size_t slots,
                                        const std::function<std::vector<double>(const Cell&, std::uint64_t, SlotErrors&)>& job) {
    std::vector<std::vector<Outcome>> results(cells.size(), std::vector<Outcome>(cfg.runs));
    const long total = static_cast<long>(cells.size()) * cfg.runs;
#pragma omp parallel for schedule(dynamic)
    for (long idx = 0; idx < total; ++idx) {
        const auto& cell = cells[idx / cfg.runs];
        const int run = static_cast<int>(idx % cfg.runs);
        Outcome outcome;
        outcome.values.assign(slots, std::nullopt);
        outcome.errors.assign(slots, "");
        try {
            SlotErrors errors(slots);
            const auto values =
                job(cell, run_seed(cfg.seed, cfg.manifolds[cell.manifold], cell.n, cell.sigma, run), errors);
            for (std::size_t s = 0; s < slots; ++s)
                if (std::isfinite(values[s])) outcome.values[s] = values[s];
                else outcome.errors[s] = errors[s].empty() ? "non-finite result" : errors[s];
        } catch (const std::exception& e) {
            outcome.errors.assign(slots, e.what());
        }
        results[idx / cfg.runs][run] = std::move(outcome);
    }
    return results;
}

}  // namespace

ResultTable run_dimension_bench(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto cells = enumerate_cells(cfg);
    const auto outcomes = sweep(cfg, cells, 1, [&](const Cell& cell, std::uint64_t seed, SlotErrors&) {
        const auto& spec = cfg.manifolds[cell.manifold];
        const auto data = make_run_data(spec, cell.n, cell.sigma, seed);
        PipelineOptions options;
        options.op = cfg.op;
        options.dimension_only = true;
        const auto result = analyze(data.cloud, options);
        return std::vector<double>{result.global_dim == spec.intrinsic_dim() ? 100.0 : 0.0};
    });

    ResultTable table;
    // summary per (size, sigma): per-manifold means and deviations averaged over manifolds
    std::map<std::pair<std::string, double>, std::pair<std::vector<double>, std::vector<double>>> summary;
    std::map<std::pair<std::string, double>, int> summary_n;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto& cell = cells[c];
        const auto acc = accumulate(outcomes[c], 0, true);
        table.rows.push_back({cfg.manifolds[cell.manifold].label(), cell.n, cell.sigma, "diffusion", "accuracy_pct",
                              acc.mean, acc.stddev, cfg.runs, acc.failures, acc.note});
        const std::string key = cell.size_class.empty() ? "ALL" : "ALL(" + cell.size_class + ")";
        auto& entry = summary[{key, cell.sigma}];
        entry.first.push_back(acc.mean);
        entry.second.push_back(acc.stddev);
        summary_n[{key, cell.sigma}] = cell.size_class.empty() ? cell.n : 0;
    }
    for (const auto& [key, values] : summary) {
        auto mean = [](const std::vector<double>& v) {
            double s = 0.0;
            for (double x : v) s += x;
            return s / static_cast<double>(v.size());
        };
        table.rows.push_back({key.first, summary_n[key], key.second, "diffusion", "accuracy_pct", mean(values.first),
                              mean(values.second), cfg.runs, 0, ""});
    }
    return table;
}

ResultTable run_tangent_grid(const ExperimentConfig& cfg) {
    cfg.validate();
    for (const auto& spec : cfg.manifolds)
        if (spec.ambient() - spec.intrinsic_dim() != 1 || spec.ambient() != spec.minimal_ambient_dim())
            throw Error(ErrorKind::Unsupported, "tangent grid needs unembedded hypersurfaces: " + spec.label());
    const auto cells = enumerate_cells(cfg);
    const auto outcomes = sweep(cfg, cells, cfg.methods.size(), [&](const Cell& cell, std::uint64_t seed, SlotErrors& errors) {
        const auto& spec = cfg.manifolds[cell.manifold];
        const auto data = make_run_data(spec, cell.n, cell.sigma, seed);
        std::vector<double> angles;
        for (const auto& method : cfg.methods) {
            double angle = std::nan("");
            try {
                if (method.kind == MethodSpec::Kind::Diffusion) {
                    PipelineOptions options;
                    options.op = cfg.op;
                    options.dim = spec.intrinsic_dim();
                    options.curvature = false;
                    angle = error_angle(analyze(data.cloud, options).frames, data.truth, data.cloud);
                } else {
                    angle = error_angle(lpca_tangent(data.cloud, method.k, spec.intrinsic_dim()), data.truth, data.cloud);
                }
            } catch (const std::exception& e) {
                // recorded as a failure of this method only
                errors[angles.size()] = e.what();
            }
            angles.push_back(angle);
        }
        return angles;
    });
    ResultTable table;
    for (std::size_t c = 0; c < cells.size(); ++c)
        for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
            const auto acc = accumulate(outcomes[c], m, false);
            table.rows.push_back({cfg.manifolds[cells[c].manifold].label(), cells[c].n, cells[c].sigma,
                                  cfg.methods[m].name(), "error_angle_deg", acc.mean, acc.stddev, cfg.runs, acc.failures,
                                  acc.note});
        }
    return table;
}

ResultTable run_curvature_grid(const ExperimentConfig& cfg) {
    cfg.validate();
    for (const auto& spec : cfg.manifolds)
        if (spec.ambient() != spec.minimal_ambient_dim())
            throw Error(ErrorKind::Unsupported, "curvature grid needs unembedded manifolds: " + spec.label());
    const auto cells = enumerate_cells(cfg);
    const auto outcomes = sweep(cfg, cells, 1, [&](const Cell& cell, std::uint64_t seed, SlotErrors&) {
        const auto& spec = cfg.manifolds[cell.manifold];
        const auto data = make_run_data(spec, cell.n, cell.sigma, seed);
        PipelineOptions options;
        options.op = cfg.op;
        options.dim = spec.intrinsic_dim();
        const auto result = analyze(data.cloud, options);
        return std::vector<double>{curvature_mae(result.curvature->scalar, data.truth, data.cloud)};
    });
    ResultTable table;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto acc = accumulate(outcomes[c], 0, false);
        table.rows.push_back({cfg.manifolds[cells[c].manifold].label(), cells[c].n, cells[c].sigma, "diffusion",
                              "scalar_mae", acc.mean, acc.stddev, cfg.runs, acc.failures, acc.note});
    }
    return table;
}

}  // namespace diffgeo
