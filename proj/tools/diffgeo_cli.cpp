// Command-line front end: sampling, per-cloud estimates and benchmark sweeps.
//
// Exit codes: 0 success, 2 input error, 3 numerical failure.

#include "diffgeo/bench.hpp"
#include "diffgeo/error.hpp"
#include "diffgeo/lpca.hpp"
#include "diffgeo/manifolds.hpp"
#include "diffgeo/pipeline.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace diffgeo;

constexpr int kInputError = 2;
constexpr int kNumericalError = 3;

struct Common {
    std::uint64_t seed = 0;
    int k = 128;
    int k0 = 8;
    double epsilon = 0.0;
    int dim = 0;
    int density_dim = 0;
    std::string out;
    std::string input;
    bool header = false;

    OperatorOptions op() const {
        OperatorOptions o;
        o.k = k;
        o.k0 = k0;
        if (epsilon > 0) o.epsilon = epsilon;
        if (density_dim > 0) o.density_dim = density_dim;
        return o;
    }
};

std::string read_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw Error(ErrorKind::EmptyInput, "cannot open " + path);
    std::stringstream buffer;
    buffer << file.rdbuf();
    return buffer.str();
}

/// Runs `body` with `out` bound to the --out file or stdout.
template <typename Body>
void with_output(const std::string& path, Body&& body) {
    if (path.empty() || path == "-") {
        body(std::cout);
        return;
    }
    std::ofstream file(path);
    if (!file) throw Error(ErrorKind::Domain, "cannot write " + path);
    body(file);
}

void add_estimator_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("input", c.input, "Point cloud CSV (rows are points)")->required();
    cmd->add_flag("--header", c.header, "Skip the first row");
    cmd->add_option("--k", c.k, "Neighbours kept in the sparse kernel")->check(CLI::PositiveNumber);
    cmd->add_option("--k0", c.k0, "Neighbours used by the bandwidth function")->check(CLI::PositiveNumber);
    cmd->add_option("--epsilon", c.epsilon, "Fixed kernel bandwidth (default: automatic)")->check(CLI::PositiveNumber);
    cmd->add_option("--dim", c.dim, "Intrinsic dimension (default: estimated)")->check(CLI::PositiveNumber);
    cmd->add_option("--density-dim", c.density_dim, "Density weights for this intrinsic dimension (default: row sums)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", c.out, "Output CSV (default: stdout)");
}

int run(int argc, char** argv) {
    CLI::App app{"Diffusion-geometry estimates of dimension, tangents and curvature for point clouds"};
    app.require_subcommand(1);
    Common c;
    app.add_option("--seed", c.seed, "Random seed");

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "Sample a synthetic manifold to CSV");
    std::string spec_json, spec_file;
    int n = 1000;
    double sigma = 0.0;
    std::string truth_out;
    sample_cmd->add_option("--spec", spec_json, R"(Manifold JSON, e.g. {"kind":"torus_revolution","params":{"r":1,"R":2}})");
    sample_cmd->add_option("--spec-file", spec_file, "File holding the manifold JSON");
    sample_cmd->add_option("--n", n, "Number of points")->check(CLI::PositiveNumber);
    sample_cmd->add_option("--sigma", sigma, "Ambient Gaussian noise level")->check(CLI::NonNegativeNumber);
    sample_cmd->add_option("--seed", c.seed, "Random seed");
    sample_cmd->add_option("--out", c.out, "Output CSV (default: stdout)");
    sample_cmd->add_option("--truth-out", truth_out, "Also write per-point ground truth (scalar curvature) CSV");

    auto* dim_cmd = app.add_subcommand("dim", "Estimate pointwise and global intrinsic dimension");
    add_estimator_flags(dim_cmd, c);

    auto* tangent_cmd = app.add_subcommand("tangent", "Estimate tangent frames");
    add_estimator_flags(tangent_cmd, c);
    std::string method = "diffusion";
    tangent_cmd->add_option("--method", method, "diffusion or lpca:<k>");

    auto* curv_cmd = app.add_subcommand("curvature", "Estimate scalar, Ricci and Riemann curvature");
    add_estimator_flags(curv_cmd, c);
    bool riemann = false;
    curv_cmd->add_flag("--riemann", riemann, "Include the full Riemann tensor");

    auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark sweep");
    std::string task, config_path, manifest_path;
    bench_cmd->add_option("task", task, "dim | tangent | curvature")
        ->required()
        ->check(CLI::IsMember({"dim", "tangent", "curvature"}));
    bench_cmd->add_option("--config", config_path, "Experiment JSON (default: built-in protocol)");
    bench_cmd->add_option("--seed", c.seed, "Overrides the config seed");
    bench_cmd->add_option("--out", c.out, "Results CSV (default: config output or stdout)");
    bench_cmd->add_option("--manifest", manifest_path, "Run manifest JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    if (sample_cmd->parsed()) {
        if (spec_json.empty() && spec_file.empty()) throw Error(ErrorKind::Domain, "sample needs --spec or --spec-file");
        const auto spec = manifold_spec_from_json(spec_json.empty() ? read_file(spec_file) : spec_json);
        auto data = make_run_data(spec, n, sigma, c.seed);
        with_output(c.out, [&](std::ostream& out) { out << to_csv(data.cloud); });
        if (!truth_out.empty() && spec.ambient() == spec.minimal_ambient_dim()) {
            with_output(truth_out, [&](std::ostream& out) {
                out.precision(17);
                out << "index,scalar\n";
                for (Eigen::Index i = 0; i < data.cloud.size(); ++i)
                    out << i << ',' << data.truth.scalar_at(data.truth.project(data.cloud.row(i).transpose())) << '\n';
            });
        }
        return 0;
    }

    if (dim_cmd->parsed()) {
        const auto pc = load_csv(c.input, c.header);
        PipelineOptions options;
        options.op = c.op();
        options.dimension_only = true;
        const auto result = analyze(pc, options);
        std::cout << result.global_dim << '\n';
        if (!c.out.empty()) {
            // tangent basis of the estimated dimension, uncalibrated eigenvalues
            const int d = std::max(1, c.dim > 0 ? c.dim : result.global_dim);
            const auto frames = tangent_frames(result.metric, std::min<int>(d, static_cast<int>(pc.dim())));
            with_output(c.out, [&](std::ostream& out) {
                write_frames_csv(out, frames, result.pointwise_dims, &result.metric.eigenvalues);
            });
        }
        return 0;
    }

    if (tangent_cmd->parsed()) {
        const auto pc = load_csv(c.input, c.header);
        const auto m = MethodSpec::parse(method);
        if (m.kind == MethodSpec::Kind::Lpca) {
            if (c.dim <= 0) throw Error(ErrorKind::Domain, "lpca needs --dim");
            const auto frames = lpca_tangent(pc, m.k, c.dim);
            with_output(c.out, [&](std::ostream& out) { write_frames_csv(out, frames); });
            return 0;
        }
        PipelineOptions options;
        options.op = c.op();
        if (c.dim > 0) options.dim = c.dim;
        options.curvature = false;
        const auto result = analyze(pc, options);
        with_output(c.out, [&](std::ostream& out) {
            write_frames_csv(out, result.frames, result.pointwise_dims, &result.metric.eigenvalues);
        });
        return 0;
    }

    if (curv_cmd->parsed()) {
        const auto pc = load_csv(c.input, c.header);
        PipelineOptions options;
        options.op = c.op();
        if (c.dim > 0) options.dim = c.dim;
        options.riemann = riemann;
        const auto result = analyze(pc, options);
        with_output(c.out, [&](std::ostream& out) { write_curvature_csv(out, *result.curvature, riemann); });
        return 0;
    }

    if (bench_cmd->parsed()) {
        const BenchTask kind = task == "dim" ? BenchTask::Dimension
                               : task == "tangent" ? BenchTask::Tangent
                                                   : BenchTask::Curvature;
        auto cfg = config_from_json(config_path.empty() ? "{}" : read_file(config_path), kind);
        if (bench_cmd->count("--seed")) cfg.seed = c.seed;
        const auto start = std::chrono::steady_clock::now();
        const auto table = kind == BenchTask::Dimension ? run_dimension_bench(cfg)
                           : kind == BenchTask::Tangent ? run_tangent_grid(cfg)
                                                        : run_curvature_grid(cfg);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        with_output(c.out.empty() ? cfg.output : c.out, [&](std::ostream& out) { table.write_csv(out); });
        if (!manifest_path.empty())
            with_output(manifest_path, [&](std::ostream& out) {
                out << to_json(RunManifest{task, to_json(cfg), kVersion, seconds}) << '\n';
            });
        return 0;
    }
    return kInputError;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const diffgeo::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return diffgeo::is_input_error(e.kind()) ? kInputError : kNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumericalError;
    }
}
