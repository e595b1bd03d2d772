#include "diffgeo/curvature.hpp"

#include "diffgeo/carre_du_champ.hpp"
#include "diffgeo/error.hpp"

namespace diffgeo {

HessianStack ambient_hessian_stack(const LaplacianOperator& op, const PointCloud& pc) {
    if (op.size() != pc.size()) throw Error(ErrorKind::Shape, "operator and cloud sizes differ");
    const auto n = pc.size();
    const auto D = pc.dim();
    auto pair = [D](Eigen::Index a, Eigen::Index b) {
        if (a > b) std::swap(a, b);
        return a * D - a * (a - 1) / 2 + (b - a);
    };
    const auto pairs = D * (D + 1) / 2;

    std::vector<Vector> coords(D);
    for (Eigen::Index a = 0; a < D; ++a) coords[a] = pc.coordinate(a);
    std::vector<Vector> metric(pairs);
    for (Eigen::Index a = 0; a < D; ++a)
        for (Eigen::Index b = a; b < D; ++b) metric[pair(a, b)] = gamma(op, coords[a], coords[b]);
    // nested[e * pairs + pair(a, b)] = Gamma(x_e, Gamma(x_a, x_b))
    std::vector<Vector> nested(D * pairs);
    for (Eigen::Index e = 0; e < D; ++e)
        for (Eigen::Index p = 0; p < pairs; ++p) nested[e * pairs + p] = gamma(op, coords[e], metric[p]);

    HessianStack hess(n, D);
    for (Eigen::Index a = 0; a < D; ++a)
        for (Eigen::Index b = 0; b < D; ++b)
            for (Eigen::Index c = 0; c < D; ++c) {
                // same operand order as hessian_form(x_a, x_b, x_c)
                const Vector& first = nested[b * pairs + pair(c, a)];
                const Vector& second = nested[c * pairs + pair(b, a)];
                const Vector& third = nested[a * pairs + pair(b, c)];
                for (Eigen::Index i = 0; i < n; ++i) hess(i, a, b, c) = 0.5 * ((first(i) + second(i)) - third(i));
            }
    return hess;
}

Matrix AlphaStack::slice(Eigen::Index i, int l) const {
    Matrix out(d_, d_);
    for (int j = 0; j < d_; ++j)
        for (int k = 0; k < d_; ++k) out(j, k) = (*this)(i, l, j, k);
    return out;
}

namespace {

AlphaStack contract(const HessianStack& hess, const TangentFrameStack& frames, const MetricStack* metric) {
    if (hess.size() != frames.size()) throw Error(ErrorKind::Shape, "Hessian and frame stacks differ in size");
    if (metric && metric->size() != hess.size()) throw Error(ErrorKind::Shape, "Hessian and metric stacks differ in size");
    const auto n = hess.size();
    const auto D = hess.ambient_dim();
    const int d = frames.d;
    if (n > 0 && frames.tangents.front().rows() != D) throw Error(ErrorKind::Shape, "frame ambient dimension mismatch");
    if (metric && n > 0 && metric->ambient_dim() != D) throw Error(ErrorKind::Shape, "metric ambient dimension mismatch");
    const int codim = static_cast<int>(D) - d;
    AlphaStack alpha(n, d, codim);
    if (codim == 0) return alpha;
    if (metric)
        for (Eigen::Index i = 0; i < n; ++i)
            if (!(metric->eigenvalues(i, d - 1) > 0.0))
                throw Error(ErrorKind::Calibration, "Gram matrix at point " + std::to_string(i) +
                                                        " has no positive tangent eigenvalue to invert");

#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        Matrix t = frames.tangents[i];
        if (metric) {
            const Matrix v = metric->frames[i].leftCols(d);
            const Vector inv = metric->eigenvalues.row(i).head(d).transpose().cwiseInverse();
            t = v * inv.asDiagonal() * (v.transpose() * t);
        }
        const Matrix& normals = frames.normals[i];
        // restricted[a] = t^T H(x_a) t
        std::vector<Matrix> restricted(D);
        Matrix h(D, D);
        for (Eigen::Index a = 0; a < D; ++a) {
            for (Eigen::Index b = 0; b < D; ++b)
                for (Eigen::Index c = 0; c < D; ++c) h(b, c) = hess(i, a, b, c);
            restricted[a] = t.transpose() * h * t;
        }
        for (int l = 0; l < codim; ++l) {
            Matrix form = Matrix::Zero(d, d);
            for (Eigen::Index a = 0; a < D; ++a) form += normals(a, l) * restricted[a];
            for (int j = 0; j < d; ++j)
                for (int k = j; k < d; ++k) alpha(i, l, j, k) = alpha(i, l, k, j) = 0.5 * (form(j, k) + form(k, j));
        }
    }
    return alpha;
}

}  // namespace

AlphaStack alpha_stack(const HessianStack& hess, const TangentFrameStack& frames) {
    return contract(hess, frames, nullptr);
}

AlphaStack alpha_stack(const HessianStack& hess, const TangentFrameStack& frames, const MetricStack& metric) {
    return contract(hess, frames, &metric);
}

RiemannStack riemann(const AlphaStack& alpha) {
    const int d = alpha.dim();
    RiemannStack out(alpha.size(), d);
#pragma omp parallel for schedule(static)
    for (Eigen::Index p = 0; p < alpha.size(); ++p)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l) {
                        double acc = 0.0;
                        for (int m = 0; m < alpha.codim(); ++m)
                            acc += alpha(p, m, i, k) * alpha(p, m, j, l) - alpha(p, m, j, k) * alpha(p, m, i, l);
                        out(p, i, j, k, l) = acc;
                    }
    return out;
}

std::vector<Matrix> ricci(const AlphaStack& alpha) {
    const int d = alpha.dim();
    std::vector<Matrix> out(alpha.size(), Matrix::Zero(d, d));
#pragma omp parallel for schedule(static)
    for (Eigen::Index p = 0; p < alpha.size(); ++p)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double acc = 0.0;
                for (int m = 0; m < alpha.codim(); ++m)
                    for (int k = 0; k < d; ++k)
                        acc += alpha(p, m, k, k) * alpha(p, m, i, j) - alpha(p, m, i, k) * alpha(p, m, j, k);
                out[p](i, j) = acc;
            }
    return out;
}

Vector scalar(const AlphaStack& alpha) {
    const int d = alpha.dim();
    Vector out = Vector::Zero(alpha.size());
#pragma omp parallel for schedule(static)
    for (Eigen::Index p = 0; p < alpha.size(); ++p) {
        double acc = 0.0;
        for (int m = 0; m < alpha.codim(); ++m)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    acc += alpha(p, m, i, i) * alpha(p, m, j, j) - alpha(p, m, i, j) * alpha(p, m, i, j);
        out(p) = acc;
    }
    return out;
}

Vector gaussian_curvature(const AlphaStack& alpha) {
    if (alpha.codim() != 1)
        throw Error(ErrorKind::Unsupported, "Gaussian curvature needs codimension one, got " + std::to_string(alpha.codim()));
    Vector out(alpha.size());
    for (Eigen::Index p = 0; p < alpha.size(); ++p) out(p) = alpha.slice(p, 0).determinant();
    return out;
}

CurvatureStack curvature_stack(const AlphaStack& alpha, bool with_riemann) {
    CurvatureStack out{with_riemann ? riemann(alpha) : RiemannStack(0, alpha.dim()), ricci(alpha),
                       Vector(alpha.size()), std::nullopt};
    for (Eigen::Index p = 0; p < alpha.size(); ++p) out.scalar(p) = out.ricci[p].trace();
    if (alpha.codim() == 1) out.gaussian = gaussian_curvature(alpha);
    return out;
}

void write_curvature_csv(std::ostream& out, const CurvatureStack& curv, bool include_riemann) {
    const auto n = curv.scalar.size();
    const int d = curv.ricci.empty() ? 0 : static_cast<int>(curv.ricci.front().rows());
    include_riemann = include_riemann && curv.riemann.size() == n;
    const auto old = out.precision(17);
    out << "index,S";
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out << ",Ric" << i + 1 << j + 1;
    if (include_riemann)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l) out << ",R" << i + 1 << j + 1 << k + 1 << l + 1;
    if (curv.gaussian) out << ",kappa";
    out << '\n';
    for (Eigen::Index p = 0; p < n; ++p) {
        out << p << ',' << curv.scalar(p);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) out << ',' << curv.ricci[p](i, j);
        if (include_riemann)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    for (int k = 0; k < d; ++k)
                        for (int l = 0; l < d; ++l) out << ',' << curv.riemann(p, i, j, k, l);
        if (curv.gaussian) out << ',' << (*curv.gaussian)(p);
        out << '\n';
    }
    out.precision(old);
}

}  // namespace diffgeo
