#pragma once

#include "diffgeo/metric.hpp"

#include <ostream>
#include <vector>

namespace diffgeo {

/// H(x_a)(grad x_b, grad x_c) at every point, for all ambient coordinate triples.
class HessianStack {
public:
    HessianStack(Eigen::Index n, Eigen::Index D) : n_(n), D_(D), data_(static_cast<std::size_t>(n * D * D * D), 0.0) {}

    Eigen::Index size() const noexcept { return n_; }
    Eigen::Index ambient_dim() const noexcept { return D_; }
    double& operator()(Eigen::Index i, Eigen::Index a, Eigen::Index b, Eigen::Index c) {
        return data_[static_cast<std::size_t>(((i * D_ + a) * D_ + b) * D_ + c)];
    }
    double operator()(Eigen::Index i, Eigen::Index a, Eigen::Index b, Eigen::Index c) const {
        return data_[static_cast<std::size_t>(((i * D_ + a) * D_ + b) * D_ + c)];
    }

private:
    Eigen::Index n_, D_;
    std::vector<double> data_;
};

/// Hessians of the linear coordinate functions. Because n . x is linear in x, the Hessian
/// of any normal function is the matching combination of these, so the D (D + 1) / 2 * D
/// nested Gamma evaluations here cover every point's normal directions at once.
HessianStack ambient_hessian_stack(const LaplacianOperator& op, const PointCloud& pc);

/// Second fundamental form coefficients alpha^l_jk = H(n^l)(t_j, t_k) per point.
class AlphaStack {
public:
    AlphaStack(Eigen::Index n, int d, int codim)
        : n_(n), d_(d), codim_(codim), data_(static_cast<std::size_t>(n) * codim * d * d, 0.0) {}

    Eigen::Index size() const noexcept { return n_; }
    int dim() const noexcept { return d_; }
    int codim() const noexcept { return codim_; }
    double& operator()(Eigen::Index i, int l, int j, int k) {
        return data_[((static_cast<std::size_t>(i) * codim_ + l) * d_ + j) * d_ + k];
    }
    double operator()(Eigen::Index i, int l, int j, int k) const {
        return data_[((static_cast<std::size_t>(i) * codim_ + l) * d_ + j) * d_ + k];
    }
    Matrix slice(Eigen::Index i, int l) const;

private:
    Eigen::Index n_;
    int d_, codim_;
    std::vector<double> data_;
};

/// Contracts the normal on the function slot and tangents on the bilinear slots.
/// Each slice is symmetrised exactly. Codimension zero gives an empty stack.
AlphaStack alpha_stack(const HessianStack& hess, const TangentFrameStack& frames);

/// As above, but each tangent t is first mapped to the coordinate direction G^+ t whose
/// estimated gradient is t, with G^+ the pseudo-inverse of the Gram matrix on its top-d
/// eigenspace. This removes the per-point scale error of the Gram matrix from alpha; for
/// frames taken from the same metric it divides alpha_ij by lambda_i * lambda_j.
AlphaStack alpha_stack(const HessianStack& hess, const TangentFrameStack& frames, const MetricStack& metric);

/// R_ijkl per point, flattened as ((i * d + j) * d + k) * d + l.
class RiemannStack {
public:
    RiemannStack(Eigen::Index n, int d) : n_(n), d_(d), data_(static_cast<std::size_t>(n) * d * d * d * d, 0.0) {}
    Eigen::Index size() const noexcept { return n_; }
    int dim() const noexcept { return d_; }
    double& operator()(Eigen::Index p, int i, int j, int k, int l) { return data_[index(p, i, j, k, l)]; }
    double operator()(Eigen::Index p, int i, int j, int k, int l) const { return data_[index(p, i, j, k, l)]; }

private:
    std::size_t index(Eigen::Index p, int i, int j, int k, int l) const {
        return (((static_cast<std::size_t>(p) * d_ + i) * d_ + j) * d_ + k) * d_ + l;
    }
    Eigen::Index n_;
    int d_;
    std::vector<double> data_;
};

RiemannStack riemann(const AlphaStack& alpha);
std::vector<Matrix> ricci(const AlphaStack& alpha);
Vector scalar(const AlphaStack& alpha);
/// det(alpha) per point; codimension one only.
Vector gaussian_curvature(const AlphaStack& alpha);

struct CurvatureStack {
    RiemannStack riemann;
    std::vector<Matrix> ricci;
    Vector scalar;                  // trace of ricci
    std::optional<Vector> gaussian;  // hypersurfaces only
};

CurvatureStack curvature_stack(const AlphaStack& alpha, bool with_riemann = true);

/// CSV: index, S, Ric flattened row-major, optionally R flattened, kappa when present.
void write_curvature_csv(std::ostream& out, const CurvatureStack& curv, bool include_riemann);

}  // namespace diffgeo
