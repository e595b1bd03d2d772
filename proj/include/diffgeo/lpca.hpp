#pragma once

#include "diffgeo/metric.hpp"

namespace diffgeo {

/// Local PCA tangents: covariance of each point together with its k nearest neighbours,
/// top-d eigenvectors as the tangent basis, the rest as normals.
TangentFrameStack lpca_tangent(const PointCloud& pc, int k, int d);

/// Same, reusing an existing neighbour graph (its first k neighbours per point).
TangentFrameStack lpca_tangent(const PointCloud& pc, const NeighborGraph& graph, int k, int d);

}  // namespace diffgeo
