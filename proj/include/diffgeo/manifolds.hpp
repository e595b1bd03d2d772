#pragma once

#include "diffgeo/point_cloud.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace diffgeo {

enum class ManifoldKind { Circle, Sphere, TorusRevolution, FlatTorus, SwissRoll, Hyperboloid, MobiusStrip, Helix };

std::string to_string(ManifoldKind kind);
ManifoldKind manifold_kind_from_string(const std::string& name);

/// A test manifold and its parameters. Unused parameters are ignored by kinds that
/// do not read them; `ambient_dim == 0` means the minimal embedding dimension.
struct ManifoldSpec {
    ManifoldKind kind = ManifoldKind::Circle;
    int dim = 1;                // sphere(d), flat_torus(d)
    double radius = 1.0;        // circle/sphere R, Mobius centre radius, helix radius
    double minor_radius = 1.0;  // torus r
    double major_radius = 2.0;  // torus R
    double width = 0.5;         // Mobius half-width
    double height = 21.0;       // swiss roll depth, helix total height
    double extent = 1.0;        // hyperboloid |u| bound
    int twists = 10;            // Mobius
    int turns = 3;              // helix
    int ambient_dim = 0;

    static ManifoldSpec circle(double R = 1.0);
    static ManifoldSpec sphere(int d, double R = 1.0);
    static ManifoldSpec torus(double r = 1.0, double R = 2.0);
    static ManifoldSpec flat_torus(int d);
    static ManifoldSpec swiss_roll(double height = 21.0);
    static ManifoldSpec hyperboloid(double extent = 1.0);
    static ManifoldSpec mobius(int twists = 10);
    static ManifoldSpec helix(int turns = 3, double height = 4.0);

    ManifoldSpec with_ambient(int D) const {
        auto copy = *this;
        copy.ambient_dim = D;
        return copy;
    }

    int intrinsic_dim() const;
    int minimal_ambient_dim() const;
    int ambient() const { return ambient_dim > 0 ? ambient_dim : minimal_ambient_dim(); }
    /// Throws Domain on invalid parameters.
    void validate() const;
    /// Short stable label, e.g. "torus_revolution(r=1,R=2)/D3".
    std::string label() const;
};

std::string to_json(const ManifoldSpec& spec);
ManifoldSpec manifold_spec_from_json(const std::string& json);

namespace detail {
class ManifoldModel;
}

/// Evaluation maps for a synthetic manifold. Points are in ambient coordinates; the
/// manifold occupies the first `minimal_ambient_dim` coordinates, the rest are zero.
class GroundTruth {
public:
    explicit GroundTruth(const ManifoldSpec& spec);

    const ManifoldSpec& spec() const noexcept { return spec_; }
    int dim() const noexcept { return spec_.intrinsic_dim(); }
    int ambient_dim() const noexcept { return spec_.ambient(); }

    /// Nearest manifold point. Throws DegenerateInput where the nearest point is not unique.
    Vector project(const Vector& q) const;
    /// Orthonormal D x d tangent basis at a manifold point.
    Matrix tangent_frame(const Vector& p) const;
    /// Orthonormal D x (D - d) normal basis at a manifold point.
    Matrix normal_frame(const Vector& p) const;
    /// Unit normal at a manifold point; only for codimension one.
    Vector normal_at(const Vector& p) const;
    double scalar_at(const Vector& p) const;
    /// Residual of the defining equations; zero on the manifold.
    double residual(const Vector& p) const;

private:
    ManifoldSpec spec_;
    std::shared_ptr<const detail::ManifoldModel> model_;
};

enum class SamplingMode { UniformArea, ParameterUniform };

struct Sample {
    PointCloud cloud;
    GroundTruth truth;
};

Sample sample(const ManifoldSpec& spec, int n, std::uint64_t seed, SamplingMode mode = SamplingMode::UniformArea);

/// Closed-form scalar curvature of the torus of revolution at internal angle phi.
double torus_scalar_curvature(double phi, double r, double R);
/// Internal angle of a point on (or projected onto) the torus of revolution.
double torus_phi(const Vector& p, double R);

Vector project_to_manifold(const GroundTruth& gt, const Vector& q);

/// Benchmark suite: spheres and flat tori of dimension 1..3, the torus of revolution,
/// hyperboloid, swiss roll, Mobius strip and two helices.
std::vector<ManifoldSpec> benchmark_suite();

/// Sample sizes (n_small, n_large) by intrinsic dimension.
std::pair<int, int> default_sample_sizes(int intrinsic_dim);

}  // namespace diffgeo
