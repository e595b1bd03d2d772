#include "diffgeo/manifolds.hpp"

#include "diffgeo/error.hpp"
#include "diffgeo/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace diffgeo {

using std::numbers::pi;

namespace {

constexpr double kDegenerate = 1e-12;

/// Orthonormal basis of the span of `columns` (thin Q of a QR factorisation).
Matrix orthonormalize(const Matrix& columns) {
    Eigen::HouseholderQR<Matrix> qr(columns);
    Matrix q = qr.householderQ() * Matrix::Identity(columns.rows(), columns.cols());
    // make the factorisation deterministic and aligned with the input columns
    const Matrix& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < columns.cols(); ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    return q;
}

/// Orthonormal basis of the orthogonal complement of span(columns) in R^rows.
Matrix complement(const Matrix& columns) {
    const auto m = columns.rows();
    const auto d = columns.cols();
    Eigen::HouseholderQR<Matrix> qr(columns);
    Matrix full = qr.householderQ();
    return full.rightCols(m - d);
}

}  // namespace

namespace detail {

class ManifoldModel {
public:
    virtual ~ManifoldModel() = default;
    virtual int dim() const = 0;
    virtual int ambient() const = 0;
    virtual Vector draw(std::mt19937_64& engine, SamplingMode mode) const = 0;
    virtual Vector project(const Vector& q) const = 0;
    /// Spanning set of the tangent space at a manifold point (not necessarily orthonormal).
    virtual Matrix tangent(const Vector& p) const = 0;
    virtual double scalar(const Vector& p) const = 0;
    virtual double residual(const Vector& p) const { return (p - project(p)).norm(); }
};

namespace {

std::uniform_real_distribution<double> unit01(0.0, 1.0);

class SphereModel final : public ManifoldModel {
public:
    SphereModel(int d, double R) : d_(d), R_(R) {}
    int dim() const override { return d_; }
    int ambient() const override { return d_ + 1; }

    Vector draw(std::mt19937_64& engine, SamplingMode mode) const override {
        Vector p(d_ + 1);
        if (mode == SamplingMode::UniformArea || d_ == 1) {
            std::normal_distribution<double> normal(0.0, 1.0);
            do {
                for (int a = 0; a <= d_; ++a) p(a) = normal(engine);
            } while (p.norm() < 1e-8);
            return R_ * p / p.norm();
        }
        // hyperspherical angles drawn uniformly: concentrates mass at the poles
        std::uniform_real_distribution<double> polar(0.0, pi), azimuth(0.0, 2 * pi);
        std::vector<double> angles(d_);
        for (int a = 0; a + 1 < d_; ++a) angles[a] = polar(engine);
        angles[d_ - 1] = azimuth(engine);
        double running = 1.0;
        for (int a = 0; a < d_; ++a) {
            p(a) = running * std::cos(angles[a]);
            running *= std::sin(angles[a]);
        }
        p(d_) = running;
        return R_ * p;
    }

    Vector project(const Vector& q) const override {
        const double norm = q.norm();
        if (norm < kDegenerate) throw Error(ErrorKind::DegenerateInput, "sphere projection of the centre is ambiguous");
        return R_ * q / norm;
    }

    Matrix tangent(const Vector& p) const override { return complement(p); }
    double scalar(const Vector&) const override { return d_ * (d_ - 1) / (R_ * R_); }
    double residual(const Vector& p) const override { return std::abs(p.norm() - R_); }

private:
    int d_;
    double R_;
};

class FlatTorusModel final : public ManifoldModel {
public:
    explicit FlatTorusModel(int d) : d_(d) {}
    int dim() const override { return d_; }
    int ambient() const override { return 2 * d_; }

    Vector draw(std::mt19937_64& engine, SamplingMode) const override {
        Vector p(2 * d_);
        for (int a = 0; a < d_; ++a) {
            const double t = 2 * pi * unit01(engine);
            p(2 * a) = std::cos(t);
            p(2 * a + 1) = std::sin(t);
        }
        return p;
    }

    Vector project(const Vector& q) const override {
        Vector p(2 * d_);
        for (int a = 0; a < d_; ++a) {
            const double norm = std::hypot(q(2 * a), q(2 * a + 1));
            if (norm < kDegenerate)
                throw Error(ErrorKind::DegenerateInput, "flat torus projection is ambiguous at a circle centre");
            p(2 * a) = q(2 * a) / norm;
            p(2 * a + 1) = q(2 * a + 1) / norm;
        }
        return p;
    }

    Matrix tangent(const Vector& p) const override {
        Matrix t = Matrix::Zero(2 * d_, d_);
        for (int a = 0; a < d_; ++a) {
            t(2 * a, a) = -p(2 * a + 1);
            t(2 * a + 1, a) = p(2 * a);
        }
        return t;
    }

    double scalar(const Vector&) const override { return 0.0; }

    double residual(const Vector& p) const override {
        double worst = 0.0;
        for (int a = 0; a < d_; ++a) worst = std::max(worst, std::abs(std::hypot(p(2 * a), p(2 * a + 1)) - 1.0));
        return worst;
    }

private:
    int d_;
};

/// Surfaces and curves given by an explicit parametrisation over a box.
class ParametricModel : public ManifoldModel {
public:
    Vector draw(std::mt19937_64& engine, SamplingMode mode) const override {
        const int d = dim();
        Vector u(d);
        while (true) {
            for (int i = 0; i < d; ++i) u(i) = lo_[i] + (hi_[i] - lo_[i]) * unit01(engine);
            if (mode == SamplingMode::ParameterUniform) return embed(u);
            // area-weighted rejection
            if (unit01(engine) * area_bound_ <= area_element(u)) return embed(u);
        }
    }

    Vector project(const Vector& q) const override { return embed(locate(q)); }
    Matrix tangent(const Vector& p) const override { return jacobian(locate(p)); }
    double scalar(const Vector& p) const override { return scalar_from_parameters(locate(p)); }

    virtual Vector embed(const Vector& u) const = 0;
    virtual Matrix jacobian(const Vector& u) const = 0;

    double area_element(const Vector& u) const {
        const Matrix j = jacobian(u);
        return std::sqrt(std::max(0.0, (j.transpose() * j).determinant()));
    }

    /// Scalar curvature from the second fundamental form, second derivatives by
    /// central differences of the analytic Jacobian.
    double scalar_from_parameters(const Vector& u) const {
        const int d = dim();
        if (d < 2) return 0.0;
        const Matrix j = jacobian(u);
        const Matrix normals = complement(j);
        const Matrix metric = j.transpose() * j;
        const double h = 1e-5;
        std::vector<Matrix> second(d);  // second[b](:, a) = d^2 X / du_a du_b
        for (int b = 0; b < d; ++b) {
            Vector up = u, down = u;
            up(b) += h;
            down(b) -= h;
            second[b] = (jacobian(up) - jacobian(down)) / (2 * h);
        }
        double s = 0.0;
        for (Eigen::Index l = 0; l < normals.cols(); ++l) {
            Matrix form(d, d);
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) form(a, b) = normals.col(l).dot(second[b].col(a));
            form = 0.5 * (form + form.transpose()).eval();
            const Matrix shape = metric.ldlt().solve(form);
            const double tr = shape.trace();
            s += tr * tr - (shape * shape).trace();
        }
        return s;
    }

    /// Nearest parameters: grid scan, then damped Gauss-Newton from the best candidates.
    Vector locate(const Vector& q) const {
        const int d = dim();
        const int per_axis = d == 1 ? 2048 : 96;
        struct Candidate {
            double dist2;
            Vector u;
        };
        std::vector<Candidate> best;
        const int keep = 4;
        Vector u(d);
        const long total = d == 1 ? per_axis : static_cast<long>(per_axis) * per_axis;
        for (long idx = 0; idx < total; ++idx) {
            long rest = idx;
            for (int i = 0; i < d; ++i) {
                const long k = rest % per_axis;
                rest /= per_axis;
                u(i) = lo_[i] + (hi_[i] - lo_[i]) * (static_cast<double>(k) + (clamp_[i] ? 0.0 : 0.5)) /
                                    (clamp_[i] ? per_axis - 1 : per_axis);
            }
            const double dist2 = (embed(u) - q).squaredNorm();
            if (best.size() < keep || dist2 < best.back().dist2) {
                best.push_back({dist2, u});
                std::sort(best.begin(), best.end(), [](const auto& x, const auto& y) { return x.dist2 < y.dist2; });
                if (best.size() > keep) best.pop_back();
            }
        }
        Candidate result = best.front();
        for (auto& cand : best) {
            Vector v = refine(cand.u, q);
            const double dist2 = (embed(v) - q).squaredNorm();
            if (dist2 < result.dist2) result = {dist2, v};
        }
        return result.u;
    }

protected:
    void clamp_into_box(Vector& u) const {
        for (int i = 0; i < dim(); ++i)
            if (clamp_[i]) u(i) = std::clamp(u(i), lo_[i], hi_[i]);
    }

    Vector refine(Vector u, const Vector& q) const {
        double lambda = 1e-9;
        double cost = (embed(u) - q).squaredNorm();
        for (int iter = 0; iter < 200; ++iter) {
            const Matrix j = jacobian(u);
            const Vector r = q - embed(u);
            Matrix normal_eq = j.transpose() * j;
            normal_eq.diagonal().array() += lambda * (1.0 + normal_eq.diagonal().array());
            Vector step = normal_eq.ldlt().solve(j.transpose() * r);
            Vector trial = u + step;
            clamp_into_box(trial);
            const double trial_cost = (embed(trial) - q).squaredNorm();
            if (trial_cost <= cost) {
                const double moved = (trial - u).norm();
                u = trial;
                cost = trial_cost;
                lambda = std::max(lambda * 0.1, 1e-12);
                if (moved < 1e-15 * (1.0 + u.norm())) break;
            } else {
                lambda *= 10.0;
                if (lambda > 1e8) break;
            }
        }
        return u;
    }

    /// Must be called by subclasses once lo_/hi_/clamp_ are set.
    void init_area_bound() {
        const int d = dim();
        const int per_axis = d == 1 ? 4096 : 256;
        double worst = 0.0;
        Vector u(d);
        const long total = d == 1 ? per_axis : static_cast<long>(per_axis) * per_axis;
        for (long idx = 0; idx < total; ++idx) {
            long rest = idx;
            for (int i = 0; i < d; ++i) {
                const long k = rest % per_axis;
                rest /= per_axis;
                u(i) = lo_[i] + (hi_[i] - lo_[i]) * static_cast<double>(k) / (per_axis - 1);
            }
            worst = std::max(worst, area_element(u));
        }
        area_bound_ = 1.05 * worst;
    }

    std::vector<double> lo_, hi_;
    std::vector<bool> clamp_;
    double area_bound_ = 1.0;
};

class TorusModel final : public ParametricModel {
public:
    TorusModel(double r, double R) : r_(r), R_(R) {
        lo_ = {0.0, 0.0};
        hi_ = {2 * pi, 2 * pi};
        clamp_ = {false, false};
        area_bound_ = r_ * (R_ + r_);
    }
    int dim() const override { return 2; }
    int ambient() const override { return 3; }

    // u = (theta, phi): ((R + r cos phi) cos theta, (R + r cos phi) sin theta, r sin phi)
    Vector embed(const Vector& u) const override {
        const double ring = R_ + r_ * std::cos(u(1));
        return Vector{{ring * std::cos(u(0)), ring * std::sin(u(0)), r_ * std::sin(u(1))}};
    }
    Matrix jacobian(const Vector& u) const override {
        const double ring = R_ + r_ * std::cos(u(1));
        Matrix j(3, 2);
        j << -ring * std::sin(u(0)), -r_ * std::sin(u(1)) * std::cos(u(0)),  //
            ring * std::cos(u(0)), -r_ * std::sin(u(1)) * std::sin(u(0)),     //
            0.0, r_ * std::cos(u(1));
        return j;
    }

    Vector project(const Vector& q) const override {
        const double planar = std::hypot(q(0), q(1));
        if (planar < kDegenerate) throw Error(ErrorKind::DegenerateInput, "torus projection on the symmetry axis");
        Vector centre{{R_ * q(0) / planar, R_ * q(1) / planar, 0.0}};
        Vector offset = q - centre;
        const double norm = offset.norm();
        if (norm < kDegenerate) throw Error(ErrorKind::DegenerateInput, "torus projection on the core circle");
        return centre + r_ * offset / norm;
    }
    Matrix tangent(const Vector& p) const override {
        return jacobian(Vector{{std::atan2(p(1), p(0)), torus_phi(p, R_)}});
    }
    double scalar(const Vector& p) const override { return torus_scalar_curvature(torus_phi(p, R_), r_, R_); }
    double residual(const Vector& p) const override {
        return std::abs(std::hypot(std::hypot(p(0), p(1)) - R_, p(2)) - r_);
    }

private:
    double r_, R_;
};

class SwissRollModel final : public ParametricModel {
public:
    explicit SwissRollModel(double height) {
        lo_ = {1.5 * pi, 0.0};
        hi_ = {4.5 * pi, height};
        clamp_ = {true, true};
        area_bound_ = std::sqrt(1.0 + hi_[0] * hi_[0]);
    }
    int dim() const override { return 2; }
    int ambient() const override { return 3; }
    Vector embed(const Vector& u) const override {
        return Vector{{u(0) * std::cos(u(0)), u(1), u(0) * std::sin(u(0))}};
    }
    Matrix jacobian(const Vector& u) const override {
        const double t = u(0);
        Matrix j(3, 2);
        j << std::cos(t) - t * std::sin(t), 0.0,  //
            0.0, 1.0,                             //
            std::sin(t) + t * std::cos(t), 0.0;
        return j;
    }
    double scalar(const Vector&) const override { return 0.0; }
};

class HyperboloidModel final : public ParametricModel {
public:
    explicit HyperboloidModel(double extent) {
        lo_ = {-extent, 0.0};
        hi_ = {extent, 2 * pi};
        clamp_ = {true, false};
        area_bound_ = std::cosh(extent) * std::sqrt(std::cosh(2 * extent));
    }
    int dim() const override { return 2; }
    int ambient() const override { return 3; }
    Vector embed(const Vector& u) const override {
        return Vector{{std::cosh(u(0)) * std::cos(u(1)), std::cosh(u(0)) * std::sin(u(1)), std::sinh(u(0))}};
    }
    Matrix jacobian(const Vector& u) const override {
        const double ch = std::cosh(u(0)), sh = std::sinh(u(0));
        Matrix j(3, 2);
        j << sh * std::cos(u(1)), -ch * std::sin(u(1)),  //
            sh * std::sin(u(1)), ch * std::cos(u(1)),    //
            ch, 0.0;
        return j;
    }
    // Gaussian curvature of x^2 + y^2 - z^2 = 1 is -1 / (x^2 + y^2 + z^2)^2
    double scalar(const Vector& p) const override {
        const double r2 = p.squaredNorm();
        return -2.0 / (r2 * r2);
    }
    double residual(const Vector& p) const override {
        return std::abs(p(0) * p(0) + p(1) * p(1) - p(2) * p(2) - 1.0);
    }
};

class MobiusModel final : public ParametricModel {
public:
    MobiusModel(int twists, double R, double width) : k_(twists), R_(R), w_(width) {
        lo_ = {0.0, -1.0};
        hi_ = {2 * pi, 1.0};
        clamp_ = {false, true};
        init_area_bound();
    }
    int dim() const override { return 2; }
    int ambient() const override { return 3; }
    Vector embed(const Vector& u) const override {
        const double a = 0.5 * k_ * u(0);
        const double ring = R_ + w_ * u(1) * std::cos(a);
        return Vector{{ring * std::cos(u(0)), ring * std::sin(u(0)), w_ * u(1) * std::sin(a)}};
    }
    Matrix jacobian(const Vector& u) const override {
        const double t = u(0), s = u(1);
        const double a = 0.5 * k_ * t;
        const double ring = R_ + w_ * s * std::cos(a);
        const double ring_t = -w_ * s * 0.5 * k_ * std::sin(a);
        Matrix j(3, 2);
        j << ring_t * std::cos(t) - ring * std::sin(t), w_ * std::cos(a) * std::cos(t),  //
            ring_t * std::sin(t) + ring * std::cos(t), w_ * std::cos(a) * std::sin(t),   //
            w_ * s * 0.5 * k_ * std::cos(a), w_ * std::sin(a);
        return j;
    }

private:
    int k_;
    double R_, w_;
};

class HelixModel final : public ParametricModel {
public:
    HelixModel(int turns, double height, double radius) : m_(turns), h_(height), a_(radius) {
        lo_ = {0.0};
        hi_ = {1.0};
        clamp_ = {true};
        area_bound_ = std::hypot(2 * pi * m_ * a_, h_);
    }
    int dim() const override { return 1; }
    int ambient() const override { return 3; }
    Vector embed(const Vector& u) const override {
        const double w = 2 * pi * m_ * u(0);
        return Vector{{a_ * std::cos(w), a_ * std::sin(w), h_ * u(0)}};
    }
    Matrix jacobian(const Vector& u) const override {
        const double w = 2 * pi * m_ * u(0);
        Matrix j(3, 1);
        j << -2 * pi * m_ * a_ * std::sin(w), 2 * pi * m_ * a_ * std::cos(w), h_;
        return j;
    }
    double scalar(const Vector&) const override { return 0.0; }

private:
    int m_;
    double h_, a_;
};

std::shared_ptr<const ManifoldModel> make_model(const ManifoldSpec& s) {
    switch (s.kind) {
        case ManifoldKind::Circle: return std::make_shared<SphereModel>(1, s.radius);
        case ManifoldKind::Sphere: return std::make_shared<SphereModel>(s.dim, s.radius);
        case ManifoldKind::TorusRevolution: return std::make_shared<TorusModel>(s.minor_radius, s.major_radius);
        case ManifoldKind::FlatTorus: return std::make_shared<FlatTorusModel>(s.dim);
        case ManifoldKind::SwissRoll: return std::make_shared<SwissRollModel>(s.height);
        case ManifoldKind::Hyperboloid: return std::make_shared<HyperboloidModel>(s.extent);
        case ManifoldKind::MobiusStrip: return std::make_shared<MobiusModel>(s.twists, s.radius, s.width);
        case ManifoldKind::Helix: return std::make_shared<HelixModel>(s.turns, s.height, s.radius);
    }
    throw Error(ErrorKind::Domain, "unknown manifold kind");
}

}  // namespace
}  // namespace detail

// ---------------------------------------------------------------------------
// ManifoldSpec

namespace {

constexpr std::array<std::pair<ManifoldKind, const char*>, 8> kKindNames{{
    {ManifoldKind::Circle, "circle"},
    {ManifoldKind::Sphere, "sphere"},
    {ManifoldKind::TorusRevolution, "torus_revolution"},
    {ManifoldKind::FlatTorus, "flat_torus"},
    {ManifoldKind::SwissRoll, "swiss_roll"},
    {ManifoldKind::Hyperboloid, "hyperboloid"},
    {ManifoldKind::MobiusStrip, "mobius_strip"},
    {ManifoldKind::Helix, "helix"},
}};

std::string fmt(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

}  // namespace

std::string to_string(ManifoldKind kind) {
    for (auto [k, name] : kKindNames)
        if (k == kind) return name;
    return "unknown";
}

ManifoldKind manifold_kind_from_string(const std::string& name) {
    for (auto [k, n] : kKindNames)
        if (name == n) return k;
    throw Error(ErrorKind::Domain, "unknown manifold kind '" + name + "'");
}

ManifoldSpec ManifoldSpec::circle(double R) {
    ManifoldSpec s;
    s.kind = ManifoldKind::Circle;
    s.radius = R;
    return s;
}
ManifoldSpec ManifoldSpec::sphere(int d, double R) {
    ManifoldSpec s;
    s.kind = ManifoldKind::Sphere;
    s.dim = d;
    s.radius = R;
    return s;
}
ManifoldSpec ManifoldSpec::torus(double r, double R) {
    ManifoldSpec s;
    s.kind = ManifoldKind::TorusRevolution;
    s.minor_radius = r;
    s.major_radius = R;
    return s;
}
ManifoldSpec ManifoldSpec::flat_torus(int d) {
    ManifoldSpec s;
    s.kind = ManifoldKind::FlatTorus;
    s.dim = d;
    return s;
}
ManifoldSpec ManifoldSpec::swiss_roll(double height) {
    ManifoldSpec s;
    s.kind = ManifoldKind::SwissRoll;
    s.height = height;
    return s;
}
ManifoldSpec ManifoldSpec::hyperboloid(double extent) {
    ManifoldSpec s;
    s.kind = ManifoldKind::Hyperboloid;
    s.extent = extent;
    return s;
}
ManifoldSpec ManifoldSpec::mobius(int twists) {
    ManifoldSpec s;
    s.kind = ManifoldKind::MobiusStrip;
    s.twists = twists;
    return s;
}
ManifoldSpec ManifoldSpec::helix(int turns, double height) {
    ManifoldSpec s;
    s.kind = ManifoldKind::Helix;
    s.turns = turns;
    s.height = height;
    return s;
}

int ManifoldSpec::intrinsic_dim() const {
    switch (kind) {
        case ManifoldKind::Circle:
        case ManifoldKind::Helix: return 1;
        case ManifoldKind::Sphere:
        case ManifoldKind::FlatTorus: return dim;
        default: return 2;
    }
}

int ManifoldSpec::minimal_ambient_dim() const {
    switch (kind) {
        case ManifoldKind::Circle: return 2;
        case ManifoldKind::Sphere: return dim + 1;
        case ManifoldKind::FlatTorus: return 2 * dim;
        default: return 3;
    }
}

void ManifoldSpec::validate() const {
    auto fail = [this](const std::string& why) { throw Error(ErrorKind::Domain, to_string(kind) + ": " + why); };
    switch (kind) {
        case ManifoldKind::Circle:
            if (!(radius > 0)) fail("radius must be positive");
            break;
        case ManifoldKind::Sphere:
            if (dim < 1 || dim > 3) fail("sphere dimension must be in 1..3");
            if (!(radius > 0)) fail("radius must be positive");
            break;
        case ManifoldKind::TorusRevolution:
            if (!(minor_radius > 0 && minor_radius < major_radius)) fail("need 0 < r < R");
            break;
        case ManifoldKind::FlatTorus:
            if (dim < 1 || dim > 3) fail("flat torus dimension must be in 1..3");
            break;
        case ManifoldKind::SwissRoll:
            if (!(height > 0)) fail("height must be positive");
            break;
        case ManifoldKind::Hyperboloid:
            if (!(extent > 0)) fail("extent must be positive");
            break;
        case ManifoldKind::MobiusStrip:
            if (twists < 1) fail("twists must be >= 1");
            if (!(radius > 0 && width > 0 && width < radius)) fail("need 0 < width < radius");
            break;
        case ManifoldKind::Helix:
            if (turns < 1) fail("turns must be >= 1");
            if (!(radius > 0 && height > 0)) fail("radius and height must be positive");
            break;
    }
    if (ambient_dim != 0 && ambient_dim < minimal_ambient_dim())
        fail("ambient dimension " + std::to_string(ambient_dim) + " below minimal " +
             std::to_string(minimal_ambient_dim()));
}

namespace {

nlohmann::json params_json(const ManifoldSpec& s) {
    switch (s.kind) {
        case ManifoldKind::Circle: return {{"R", s.radius}};
        case ManifoldKind::Sphere: return {{"d", s.dim}, {"R", s.radius}};
        case ManifoldKind::TorusRevolution: return {{"r", s.minor_radius}, {"R", s.major_radius}};
        case ManifoldKind::FlatTorus: return {{"d", s.dim}};
        case ManifoldKind::SwissRoll: return {{"height", s.height}};
        case ManifoldKind::Hyperboloid: return {{"extent", s.extent}};
        case ManifoldKind::MobiusStrip: return {{"twists", s.twists}, {"R", s.radius}, {"width", s.width}};
        case ManifoldKind::Helix: return {{"turns", s.turns}, {"height", s.height}, {"R", s.radius}};
    }
    return nlohmann::json::object();
}

}  // namespace

std::string ManifoldSpec::label() const {
    std::string out = to_string(kind) + "(";
    bool first = true;
    const auto params = params_json(*this);
    for (auto& [key, value] : params.items()) {
        if (!first) out += ",";
        first = false;
        out += key + "=" + (value.is_number_integer() ? std::to_string(value.get<int>()) : fmt(value.get<double>()));
    }
    return out + ")/D" + std::to_string(ambient());
}

std::string to_json(const ManifoldSpec& spec) {
    nlohmann::json j{{"kind", to_string(spec.kind)}, {"params", params_json(spec)}, {"ambient_D", spec.ambient()}};
    return j.dump();
}

ManifoldSpec manifold_spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("manifold spec: ") + e.what());
    }
    if (!j.is_object() || !j.contains("kind")) throw Error(ErrorKind::Format, "manifold spec needs a 'kind' field");
    ManifoldSpec s;
    try {
        s.kind = manifold_kind_from_string(j.at("kind").get<std::string>());
        const auto params = j.value("params", nlohmann::json::object());
        auto real = [&](const char* key, double& field) {
            if (params.contains(key)) field = params.at(key).get<double>();
        };
        auto integer = [&](const char* key, int& field) {
            if (params.contains(key)) field = params.at(key).get<int>();
        };
        switch (s.kind) {
            case ManifoldKind::TorusRevolution:
                real("r", s.minor_radius);
                real("R", s.major_radius);
                break;
            default:
                real("R", s.radius);
                break;
        }
        if (s.kind == ManifoldKind::Sphere && !params.contains("d")) s.dim = 2;
        if (s.kind == ManifoldKind::FlatTorus && !params.contains("d")) s.dim = 2;
        if (s.kind == ManifoldKind::Helix && !params.contains("height")) s.height = 4.0;
        integer("d", s.dim);
        real("height", s.height);
        real("extent", s.extent);
        real("width", s.width);
        integer("twists", s.twists);
        integer("turns", s.turns);
        s.ambient_dim = j.value("ambient_D", 0);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Format, std::string("manifold spec: ") + e.what());
    }
    s.validate();
    return s;
}

// ---------------------------------------------------------------------------
// GroundTruth

GroundTruth::GroundTruth(const ManifoldSpec& spec) : spec_(spec) {
    spec_.validate();
    model_ = detail::make_model(spec_);
}

namespace {

Vector head(const Vector& q, int m) { return q.head(m); }

Vector pad(const Vector& p, int D) {
    Vector out = Vector::Zero(D);
    out.head(p.size()) = p;
    return out;
}

}  // namespace

Vector GroundTruth::project(const Vector& q) const {
    if (q.size() != ambient_dim()) throw Error(ErrorKind::Shape, "point has wrong ambient dimension");
    if (!q.allFinite()) throw Error(ErrorKind::Domain, "non-finite point");
    return pad(model_->project(head(q, model_->ambient())), ambient_dim());
}

Matrix GroundTruth::tangent_frame(const Vector& p) const {
    if (p.size() != ambient_dim()) throw Error(ErrorKind::Shape, "point has wrong ambient dimension");
    const Matrix local = orthonormalize(model_->tangent(head(p, model_->ambient())));
    Matrix frame = Matrix::Zero(ambient_dim(), dim());
    frame.topRows(local.rows()) = local;
    return frame;
}

Matrix GroundTruth::normal_frame(const Vector& p) const { return complement(tangent_frame(p)); }

Vector GroundTruth::normal_at(const Vector& p) const {
    if (ambient_dim() - dim() != 1) throw Error(ErrorKind::Unsupported, "normal_at needs codimension one");
    return normal_frame(p).col(0);
}

double GroundTruth::scalar_at(const Vector& p) const {
    if (p.size() != ambient_dim()) throw Error(ErrorKind::Shape, "point has wrong ambient dimension");
    return model_->scalar(head(p, model_->ambient()));
}

double GroundTruth::residual(const Vector& p) const {
    const int m = model_->ambient();
    double off = p.size() > m ? p.tail(p.size() - m).norm() : 0.0;
    return std::max(off, model_->residual(head(p, m)));
}

Vector project_to_manifold(const GroundTruth& gt, const Vector& q) { return gt.project(q); }

Sample sample(const ManifoldSpec& spec, int n, std::uint64_t seed, SamplingMode mode) {
    if (n < 1) throw Error(ErrorKind::Domain, "sample size must be >= 1");
    GroundTruth truth(spec);
    auto model = detail::make_model(spec);
    auto engine = make_engine(seed, Stream::Sampling);
    Matrix points = Matrix::Zero(n, spec.ambient());
    for (int i = 0; i < n; ++i) points.row(i).head(model->ambient()) = model->draw(engine, mode).transpose();
    Provenance meta;
    meta.generator = spec.label();
    meta.parameters = to_json(spec);
    meta.seed = seed;
    return {PointCloud(std::move(points), std::move(meta)), std::move(truth)};
}

double torus_scalar_curvature(double phi, double r, double R) {
    if (!(r > 0 && r < R)) throw Error(ErrorKind::Domain, "torus curvature needs 0 < r < R");
    return 2.0 * std::cos(phi) / (r * (R + r * std::cos(phi)));
}

double torus_phi(const Vector& p, double R) { return std::atan2(p(2), std::hypot(p(0), p(1)) - R); }

std::vector<ManifoldSpec> benchmark_suite() {
    return {
        ManifoldSpec::circle().with_ambient(2),
        ManifoldSpec::sphere(2).with_ambient(5),
        ManifoldSpec::sphere(3).with_ambient(4),
        ManifoldSpec::flat_torus(1).with_ambient(4),
        ManifoldSpec::flat_torus(2).with_ambient(4),
        ManifoldSpec::flat_torus(3).with_ambient(6),
        ManifoldSpec::torus().with_ambient(3),
        ManifoldSpec::hyperboloid().with_ambient(3),
        ManifoldSpec::swiss_roll().with_ambient(5),
        ManifoldSpec::mobius(10).with_ambient(3),
        ManifoldSpec::helix(3, 4.0).with_ambient(3),
        ManifoldSpec::helix(10, 4.0).with_ambient(3),
    };
}

std::pair<int, int> default_sample_sizes(int intrinsic_dim) {
    switch (intrinsic_dim) {
        case 1: return {600, 1200};
        case 2: return {1200, 2400};
        case 3: return {2400, 4800};
        default: throw Error(ErrorKind::Domain, "no default sample size for dimension " + std::to_string(intrinsic_dim));
    }
}

}  // namespace diffgeo
