#pragma once

#include "diffgeo/point_cloud.hpp"

#include <Eigen/Sparse>

#include <optional>
#include <ostream>
#include <vector>

namespace diffgeo {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Exact k nearest neighbours of every point, excluding the point itself.
/// Row i occupies [i*k, (i+1)*k) of both arrays, distances ascending, ties by lower index.
struct NeighborGraph {
    int k = 0;
    std::vector<int> indices;
    std::vector<double> distances;

    Eigen::Index size() const noexcept { return k == 0 ? 0 : static_cast<Eigen::Index>(indices.size()) / k; }
    int neighbor(Eigen::Index i, int j) const { return indices[static_cast<std::size_t>(i) * k + j]; }
    double distance(Eigen::Index i, int j) const { return distances[static_cast<std::size_t>(i) * k + j]; }
};

NeighborGraph knn_graph(const PointCloud& pc, int k);

/// Union-symmetrised edge list in CSR form (no diagonal), columns ascending per row.
struct SymmetricEdges {
    std::vector<Eigen::Index> row_start;  // size n + 1
    std::vector<int> cols;
    std::vector<double> dist2;

    Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(row_start.size()) - 1; }
};

SymmetricEdges symmetrize(const NeighborGraph& graph);

/// rho_i = RMS distance to the k0 nearest neighbours, scaled to unit geometric mean.
Vector bandwidth_function(const NeighborGraph& graph, int k0);

struct EpsilonScan {
    std::vector<int> log2_eps;       // m in eps = 2^m
    std::vector<double> log_sum;     // log T(2^m)
    std::vector<double> slope;       // d log T / d log eps, zero at the two ends
    double epsilon = 0.0;
};

/// Evaluates T(eps) = sum of kernel entries (diagonal included) over eps = 2^m, m in [-30, 30].
EpsilonScan scan_epsilon(const SymmetricEdges& edges, const Vector& rho);

/// The grid eps with the steepest log-log slope of T; ties go to the smaller eps.
double select_epsilon(const PointCloud& pc, const NeighborGraph& graph, const Vector& rho);

/// exp(-|p_i - p_j|^2 / (eps rho_i rho_j)) on symmetrised graph edges plus a unit diagonal.
SparseMatrix kernel_matrix(const PointCloud& pc, const NeighborGraph& graph, const Vector& rho, double epsilon);

/// Density-normalised diffusion Laplacian, positive semidefinite sign convention:
///
///   (L f)_i = s_i / c * sum_j P_ij (f_i - f_j),   s_i = 4 / (eps rho_i^2)
///
/// where P is the row-normalised bi-normalised kernel and c the optional calibration
/// constant. With c unset the operator estimates the Laplace-Beltrami operator up to a
/// constant factor close to one.
class LaplacianOperator {
public:
    LaplacianOperator(SparseMatrix markov, double epsilon, Vector rho);

    Eigen::Index size() const noexcept { return markov_.rows(); }
    const SparseMatrix& markov() const noexcept { return markov_; }
    double epsilon() const noexcept { return epsilon_; }
    const Vector& rho() const noexcept { return rho_; }
    /// Per-row factor s_i / c including the calibration constant.
    const Vector& row_scale() const noexcept { return row_scale_; }
    std::optional<double> scale_c() const noexcept { return scale_c_; }

    /// A copy rescaled by 1/c. Replaces any previous calibration.
    LaplacianOperator calibrated(double c) const;

    Vector apply(const Vector& f) const;

private:
    SparseMatrix markov_;
    double epsilon_;
    Vector rho_;
    Vector row_scale_;
    std::optional<double> scale_c_;
};

/// Normalises the kernel and wraps it as an operator. Rows with no off-diagonal weight
/// raise IsolatedPoint. By default entries are divided by the product of row sums; with
/// `density_dim` the weights follow the variable-bandwidth rule for that intrinsic dimension,
/// making L itself (not only the carre du champ) independent of the sampling density.
LaplacianOperator laplacian(const SparseMatrix& kernel, double epsilon, const Vector& rho,
                            std::optional<int> density_dim = std::nullopt);

struct OperatorOptions {
    int k = 128;  // clamped to n - 1
    int k0 = 8;   // clamped to k
    std::optional<double> epsilon;
    std::optional<int> density_dim;
};

/// knn_graph -> bandwidth_function -> select_epsilon -> kernel_matrix -> laplacian.
LaplacianOperator build_operator(const PointCloud& pc, const OperatorOptions& options = {});

Vector apply(const LaplacianOperator& op, const Vector& f);

/// Coordinate-list dump: one "row,col,value" line per stored entry.
void write_coo(const SparseMatrix& m, std::ostream& out);

}  // namespace diffgeo
