#include "diffgeo/metric.hpp"

#include "diffgeo/carre_du_champ.hpp"
#include "diffgeo/error.hpp"

#include <algorithm>
#include <cmath>

namespace diffgeo {

void canonicalize_sign(Eigen::Ref<Vector> v) {
    Eigen::Index largest = 0;
    for (Eigen::Index a = 1; a < v.size(); ++a)
        if (std::abs(v(a)) > std::abs(v(largest))) largest = a;
    if (v(largest) < 0) v = -v;
}

MetricStack metric_from_grams(std::vector<Matrix> grams) {
    const auto n = static_cast<Eigen::Index>(grams.size());
    if (n == 0) throw Error(ErrorKind::EmptyInput, "no Gram matrices");
    const auto D = grams.front().rows();
    MetricStack ms;
    ms.eigenvalues.resize(n, D);
    ms.frames.resize(n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        Matrix& g = grams[i];
        g = (0.5 * (g + g.transpose())).eval();
        Eigen::SelfAdjointEigenSolver<Matrix> solver(g);
        Matrix frame = solver.eigenvectors().rowwise().reverse();
        for (Eigen::Index j = 0; j < D; ++j) canonicalize_sign(frame.col(j));
        ms.eigenvalues.row(i) = solver.eigenvalues().reverse().transpose();
        ms.frames[i] = std::move(frame);
    }
    ms.grams = std::move(grams);
    return ms;
}

MetricStack gram_stack(const LaplacianOperator& op, const PointCloud& pc) {
    if (op.size() != pc.size()) throw Error(ErrorKind::Shape, "operator and cloud sizes differ");
    const auto n = pc.size();
    const auto D = pc.dim();
    std::vector<Matrix> grams(n, Matrix(D, D));
    for (Eigen::Index a = 0; a < D; ++a) {
        const Vector xa = pc.coordinate(a);
        for (Eigen::Index b = a; b < D; ++b) {
            const Vector entry = gamma(op, xa, pc.coordinate(b));
            for (Eigen::Index i = 0; i < n; ++i) grams[i](a, b) = grams[i](b, a) = entry(i);
        }
    }
    return metric_from_grams(std::move(grams));
}

double estimate_c(const MetricStack& ms, int d) {
    if (d < 1 || d > ms.ambient_dim())
        throw Error(ErrorKind::Domain, "d = " + std::to_string(d) + " outside [1, " + std::to_string(ms.ambient_dim()) + "]");
    std::vector<double> means(ms.size());
    for (Eigen::Index i = 0; i < ms.size(); ++i) means[i] = ms.eigenvalues.row(i).head(d).mean();
    // conventional median: average of the two middle values for even counts
    const auto mid = means.size() / 2;
    std::nth_element(means.begin(), means.begin() + mid, means.end());
    double c = means[mid];
    if (means.size() % 2 == 0) c = 0.5 * (c + *std::max_element(means.begin(), means.begin() + mid));
    if (!(c > 0) || !std::isfinite(c)) throw Error(ErrorKind::Calibration, "non-positive calibration constant");
    return c;
}

MetricStack rescaled(const MetricStack& ms, double c) {
    if (!(c > 0) || !std::isfinite(c)) throw Error(ErrorKind::Calibration, "calibration constant must be positive");
    MetricStack out = ms;
    for (auto& g : out.grams) g /= c;
    out.eigenvalues /= c;
    return out;
}

int pointwise_dimension(const Vector& descending) {
    const auto D = descending.size();
    const Vector lam = descending.cwiseMax(0.0);
    int best = 0;
    double best_gap = 1.0 - lam(0);
    for (Eigen::Index j = 1; j <= D; ++j) {
        const double gap = j < D ? lam(j - 1) - lam(j) : lam(D - 1);
        if (gap > best_gap) {
            best_gap = gap;
            best = static_cast<int>(j);
        }
    }
    return best;
}

std::vector<int> pointwise_dimension(const MetricStack& ms) {
    std::vector<int> dims(ms.size());
    for (Eigen::Index i = 0; i < ms.size(); ++i) dims[i] = pointwise_dimension(Vector(ms.eigenvalues.row(i).transpose()));
    return dims;
}

int global_dimension(std::span<const int> dims) {
    if (dims.empty()) throw Error(ErrorKind::EmptyInput, "no pointwise dimensions");
    std::vector<int> sorted(dims.begin(), dims.end());
    const auto mid = (sorted.size() - 1) / 2;
    std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
    return sorted[mid];
}

TangentFrameStack tangent_frames(const MetricStack& ms, int d) {
    const auto D = ms.ambient_dim();
    if (d < 1 || d > D)
        throw Error(ErrorKind::Domain, "d = " + std::to_string(d) + " outside [1, " + std::to_string(D) + "]");
    TangentFrameStack out;
    out.d = d;
    out.tangents.reserve(ms.size());
    out.normals.reserve(ms.size());
    for (const auto& frame : ms.frames) {
        out.tangents.push_back(frame.leftCols(d));
        out.normals.push_back(frame.rightCols(D - d));
    }
    return out;
}

void write_frames_csv(std::ostream& out, const TangentFrameStack& frames, std::span<const int> dims,
                      const Matrix* eigenvalues) {
    if (frames.size() == 0) return;
    const auto D = frames.tangents.front().rows();
    const auto old = out.precision(17);
    out << "index";
    if (!dims.empty()) out << ",dim";
    if (eigenvalues)
        for (Eigen::Index j = 0; j < eigenvalues->cols(); ++j) out << ",lambda" << j + 1;
    for (int j = 0; j < frames.d; ++j)
        for (Eigen::Index a = 0; a < D; ++a) out << ",t" << j + 1 << "_" << a + 1;
    out << '\n';
    for (Eigen::Index i = 0; i < frames.size(); ++i) {
        out << i;
        if (!dims.empty()) out << ',' << dims[i];
        if (eigenvalues)
            for (Eigen::Index j = 0; j < eigenvalues->cols(); ++j) out << ',' << (*eigenvalues)(i, j);
        const auto& t = frames.tangents[i];
        for (Eigen::Index j = 0; j < t.cols(); ++j)
            for (Eigen::Index a = 0; a < D; ++a) out << ',' << t(a, j);
        out << '\n';
    }
    out.precision(old);
}

}  // namespace diffgeo
