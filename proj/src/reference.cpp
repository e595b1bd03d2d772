#include "diffgeo/reference.hpp"

#include "diffgeo/error.hpp"

#include <algorithm>
#include <cmath>

namespace diffgeo::reference {

NeighborGraph knn_graph(const PointCloud& pc, int k) {
    const auto n = pc.size();
    if (k < 1 || k > n - 1) throw Error(ErrorKind::Domain, "k out of range");
    const auto& points = pc.points();
    NeighborGraph graph;
    graph.k = k;
    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<std::pair<double, int>> row;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            double d2 = 0.0;
            for (Eigen::Index a = 0; a < pc.dim(); ++a) d2 += (points(i, a) - points(j, a)) * (points(i, a) - points(j, a));
            row.push_back({d2, static_cast<int>(j)});
        }
        std::sort(row.begin(), row.end());
        for (int j = 0; j < k; ++j) {
            graph.indices.push_back(row[j].second);
            graph.distances.push_back(std::sqrt(row[j].first));
        }
    }
    return graph;
}

Vector apply(const LaplacianOperator& op, const Vector& f) {
    if (f.size() != op.size()) throw Error(ErrorKind::Shape, "vector length mismatch");
    Vector out(op.size());
    for (Eigen::Index i = 0; i < op.size(); ++i) {
        double acc = 0.0;
        for (SparseMatrix::InnerIterator it(op.markov(), i); it; ++it) acc += it.value() * (f(i) - f(it.col()));
        out(i) = op.row_scale()(i) * acc;
    }
    return out;
}

Vector gamma(const LaplacianOperator& op, const Vector& f, const Vector& h) {
    const Vector fh = f.cwiseProduct(h);
    return 0.5 * (f.cwiseProduct(reference::apply(op, h)) + h.cwiseProduct(reference::apply(op, f)) -
                  reference::apply(op, fh));
}

MetricStack gram_stack(const LaplacianOperator& op, const PointCloud& pc) {
    const auto n = pc.size();
    const auto D = pc.dim();
    std::vector<Matrix> grams(n, Matrix(D, D));
    for (Eigen::Index a = 0; a < D; ++a)
        for (Eigen::Index b = a; b < D; ++b) {
            const Vector entry = gamma(op, pc.coordinate(a), pc.coordinate(b));
            for (Eigen::Index i = 0; i < n; ++i) grams[i](a, b) = grams[i](b, a) = entry(i);
        }
    MetricStack ms;
    ms.eigenvalues.resize(n, D);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(grams[i]);
        Matrix frame = solver.eigenvectors().rowwise().reverse();
        for (Eigen::Index j = 0; j < D; ++j) canonicalize_sign(frame.col(j));
        ms.eigenvalues.row(i) = solver.eigenvalues().reverse().transpose();
        ms.frames.push_back(std::move(frame));
    }
    ms.grams = std::move(grams);
    return ms;
}

}  // namespace diffgeo::reference
