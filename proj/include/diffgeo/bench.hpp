#pragma once

#include "diffgeo/manifolds.hpp"
#include "diffgeo/metric.hpp"
#include "diffgeo/pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace diffgeo {

struct MethodSpec {
    enum class Kind { Diffusion, Lpca } kind = Kind::Diffusion;
    int k = 0;  // LPCA neighbourhood size

    std::string name() const;
    static MethodSpec parse(const std::string& text);  // "diffusion", "lpca:5"
    bool operator==(const MethodSpec&) const = default;
};

struct ExperimentConfig {
    std::vector<ManifoldSpec> manifolds;
    std::vector<int> n_values;  // empty: n_small and n_large by intrinsic dimension
    std::vector<double> sigma_values{0.0, 0.025, 0.05, 0.1};
    int runs = 20;
    std::uint64_t seed = 0;
    std::vector<MethodSpec> methods{MethodSpec{}};
    OperatorOptions op;
    std::string output;

    void validate() const;
};

enum class BenchTask { Dimension, Tangent, Curvature };

/// Task defaults: the benchmark suite for dimension, the (1, 2) torus otherwise;
/// diffusion plus lpca(5) and lpca(100) for tangents. Keys present in the JSON override.
ExperimentConfig config_from_json(const std::string& json, BenchTask task);
std::string to_json(const ExperimentConfig& cfg);

struct ResultRow {
    std::string manifold;
    int n = 0;
    double sigma = 0.0;
    std::string method;
    std::string metric;
    double mean = 0.0;
    double stddev = 0.0;
    int runs = 0;
    int failures = 0;
    std::string note;  // first error message of failed runs

    bool operator==(const ResultRow&) const = default;
};

struct ResultTable {
    std::vector<ResultRow> rows;

    void write_csv(std::ostream& out) const;
    static ResultTable read_csv(const std::string& text);
    const ResultRow* find(const std::string& manifold, int n, double sigma, const std::string& method,
                          const std::string& metric) const;
};

/// Seed of one run, independent of sweep order.
std::uint64_t run_seed(std::uint64_t seed, const ManifoldSpec& spec, int n, double sigma, int run);

/// Sample, embed when the spec asks for extra ambient dimensions, then add noise.
Sample make_run_data(const ManifoldSpec& spec, int n, double sigma, std::uint64_t seed);

/// Mean angle in degrees, folded to [0, 90], between estimated and true normals at the
/// nearest manifold points. Codimension one only.
double error_angle(const TangentFrameStack& est, const GroundTruth& gt, const PointCloud& pc);

/// Mean |S_i - S(project(x_i))|.
double curvature_mae(const Vector& est_scalar, const GroundTruth& gt, const PointCloud& pc);

/// True frames at the nearest manifold points.
TangentFrameStack truth_frames(const GroundTruth& gt, const PointCloud& pc);

ResultTable run_dimension_bench(const ExperimentConfig& cfg);
ResultTable run_tangent_grid(const ExperimentConfig& cfg);
ResultTable run_curvature_grid(const ExperimentConfig& cfg);

struct RunManifest {
    std::string task;
    std::string config_json;
    std::string version;
    double wall_seconds = 0.0;
};

std::string to_json(const RunManifest& manifest);

extern const char* const kVersion;

}  // namespace diffgeo
