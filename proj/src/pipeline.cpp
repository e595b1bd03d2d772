#include "diffgeo/pipeline.hpp"

#include "diffgeo/error.hpp"

namespace diffgeo {

PipelineResult analyze(const PointCloud& pc, const PipelineOptions& options) {
    auto op = build_operator(pc, options.op);
    auto metric = gram_stack(op, pc);
    auto dims = pointwise_dimension(metric);
    const int global = global_dimension(dims);
    PipelineResult result{std::move(op), std::move(metric), std::move(dims), global, global, 1.0, {}, std::nullopt};
    if (options.dimension_only) return result;

    const int d = options.dim.value_or(global);
    if (d < 1 || d > pc.dim())
        throw Error(options.dim ? ErrorKind::Domain : ErrorKind::Calibration,
                    "dimension " + std::to_string(d) + " unusable for calibration");
    result.dim = d;
    result.c = estimate_c(result.metric, d);
    result.op = result.op.calibrated(result.c);
    result.metric = rescaled(result.metric, result.c);
    result.frames = tangent_frames(result.metric, d);
    if (options.curvature) {
        const auto& frames = options.frames_override ? *options.frames_override : result.frames;
        if (frames.d != d) throw Error(ErrorKind::Shape, "override frames have the wrong dimension");
        const auto alpha = alpha_stack(ambient_hessian_stack(result.op, pc), frames, result.metric);
        result.curvature = curvature_stack(alpha, options.riemann);
    }
    return result;
}

}  // namespace diffgeo
