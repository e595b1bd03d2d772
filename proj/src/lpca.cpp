#include "diffgeo/lpca.hpp"

#include "diffgeo/error.hpp"

namespace diffgeo {

TangentFrameStack lpca_tangent(const PointCloud& pc, int k, int d) {
    if (k < 1 || k > pc.size() - 1)
        throw Error(ErrorKind::Domain, "k = " + std::to_string(k) + " outside [1, " + std::to_string(pc.size() - 1) + "]");
    return lpca_tangent(pc, knn_graph(pc, k), k, d);
}

TangentFrameStack lpca_tangent(const PointCloud& pc, const NeighborGraph& graph, int k, int d) {
    const auto n = pc.size();
    const auto D = pc.dim();
    if (d < 1 || d >= D) throw Error(ErrorKind::Domain, "LPCA needs 1 <= d < D");
    if (k < d + 1) throw Error(ErrorKind::Rank, "k = " + std::to_string(k) + " cannot span " + std::to_string(d) + " dimensions");
    if (k > graph.k || graph.size() != n) throw Error(ErrorKind::Shape, "neighbour graph too small for k");

    TangentFrameStack out;
    out.d = d;
    out.tangents.resize(n);
    out.normals.resize(n);
    const auto& points = pc.points();
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        Matrix local(k + 1, D);
        local.row(0) = points.row(i);
        for (int j = 0; j < k; ++j) local.row(j + 1) = points.row(graph.neighbor(i, j));
        const Eigen::RowVectorXd mean = local.colwise().mean();
        local.rowwise() -= mean;
        const Matrix cov = local.transpose() * local / static_cast<double>(k + 1);
        Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
        Matrix frame = solver.eigenvectors().rowwise().reverse();
        for (Eigen::Index j = 0; j < D; ++j) canonicalize_sign(frame.col(j));
        out.tangents[i] = frame.leftCols(d);
        out.normals[i] = frame.rightCols(D - d);
    }
    return out;
}

}  // namespace diffgeo
