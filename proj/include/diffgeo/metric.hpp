#pragma once

#include "diffgeo/diffusion_operator.hpp"

#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace diffgeo {

/// Per-point D x D Gram matrices Gamma(x_a, x_b) with their spectra.
struct MetricStack {
    std::vector<Matrix> grams;
    Matrix eigenvalues;          // n x D, each row descending
    std::vector<Matrix> frames;  // eigenvectors as columns, same order as eigenvalues

    Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(grams.size()); }
    Eigen::Index ambient_dim() const noexcept { return eigenvalues.cols(); }
};

/// Orthonormal tangent (D x d) and normal (D x (D - d)) bases at every point.
struct TangentFrameStack {
    int d = 0;
    std::vector<Matrix> tangents;
    std::vector<Matrix> normals;

    Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(tangents.size()); }
};

MetricStack gram_stack(const LaplacianOperator& op, const PointCloud& pc);

/// Symmetrises and diagonalises given Gram matrices. Eigenvectors are signed so that
/// their largest-magnitude entry is positive.
MetricStack metric_from_grams(std::vector<Matrix> grams);

/// Sign convention shared with the local PCA baseline.
void canonicalize_sign(Eigen::Ref<Vector> v);

/// Median over points of the mean of the top-d eigenvalues.
double estimate_c(const MetricStack& ms, int d);

/// Divides every Gram matrix and eigenvalue by c; frames are unchanged.
MetricStack rescaled(const MetricStack& ms, double c);

/// argmax of (1 - l_1, l_1 - l_2, ..., l_{D-1} - l_D, l_D) after clamping negative
/// eigenvalues to zero; ties go to the smaller index.
std::vector<int> pointwise_dimension(const MetricStack& ms);
int pointwise_dimension(const Vector& descending_eigenvalues);

/// Lower median, so the result is always one of the inputs.
int global_dimension(std::span<const int> dims);

TangentFrameStack tangent_frames(const MetricStack& ms, int d);

/// CSV: index, dim, eigenvalues (if given), tangent frame flattened column by column.
void write_frames_csv(std::ostream& out, const TangentFrameStack& frames, std::span<const int> dims = {},
                      const Matrix* eigenvalues = nullptr);

}  // namespace diffgeo
