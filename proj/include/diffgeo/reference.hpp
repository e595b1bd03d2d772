#pragma once

// Serial, straightforward versions of the hot kernels. The library proper uses the
// OpenMP versions; these exist for the equivalence tests and the kernel benchmarks.

#include "diffgeo/diffusion_operator.hpp"
#include "diffgeo/metric.hpp"

namespace diffgeo::reference {

/// Full sort of every distance row.
NeighborGraph knn_graph(const PointCloud& pc, int k);

/// Dense-style row loop over the Markov matrix.
Vector apply(const LaplacianOperator& op, const Vector& f);

/// The three-term product-rule formula 1/2 (f L h + h L f - L(f h)).
Vector gamma(const LaplacianOperator& op, const Vector& f, const Vector& h);

/// Gram matrices and eigendecompositions one point at a time.
MetricStack gram_stack(const LaplacianOperator& op, const PointCloud& pc);

}  // namespace diffgeo::reference
