#pragma once

#include "diffgeo/curvature.hpp"
#include "diffgeo/diffusion_operator.hpp"
#include "diffgeo/metric.hpp"

#include <optional>
#include <vector>

namespace diffgeo {

struct PipelineOptions {
    OperatorOptions op;
    std::optional<int> dim;  // overrides the global dimension estimate
    bool dimension_only = false;
    bool curvature = true;
    bool riemann = false;
    /// Replace the estimated frames before curvature (diagnostics against known geometry).
    std::optional<TangentFrameStack> frames_override;
};

struct PipelineResult {
    LaplacianOperator op;  // calibrated unless dimension_only
    MetricStack metric;    // calibrated unless dimension_only
    std::vector<int> pointwise_dims;
    int global_dim = 0;
    int dim = 0;  // dimension used for frames and curvature
    double c = 1.0;
    TangentFrameStack frames;
    std::optional<CurvatureStack> curvature;
};

/// Operator -> Gram matrices -> dimension -> calibration -> frames -> curvature.
PipelineResult analyze(const PointCloud& pc, const PipelineOptions& options = {});

}  // namespace diffgeo
