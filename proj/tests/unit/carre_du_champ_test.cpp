#include "diffgeo/carre_du_champ.hpp"
#include "diffgeo/error.hpp"
#include "diffgeo/manifolds.hpp"
#include "diffgeo/metric.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>

namespace diffgeo {
namespace {

using namespace diffgeo::testing;

struct CircleFixture {
    Vector theta;
    PointCloud pc;
    LaplacianOperator op;
};

CircleFixture calibrated_circle(const Vector& theta) {
    auto pc = circle_at(theta);
    const auto raw = build_operator(pc);
    auto op = raw.calibrated(estimate_c(gram_stack(raw, pc), 1));
    return {theta, std::move(pc), std::move(op)};
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

TEST(Gamma, ConstantArgumentGivesZero) {
    const auto pc = sample(ManifoldSpec::torus(), 500, 1).cloud;
    const auto op = build_operator(pc);
    const Vector f = pc.coordinate(0);
    const Vector one = Vector::Constant(500, 4.2);
    EXPECT_EQ(gamma(op, f, one).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(gamma(op, one, f).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Gamma, SymmetricBitwise) {
    const auto pc = sample(ManifoldSpec::torus(), 500, 2).cloud;
    const auto op = build_operator(pc);
    const Vector f = pc.coordinate(0), h = pc.coordinate(2).array().exp();
    EXPECT_EQ(gamma(op, f, h), gamma(op, h, f));
}

TEST(Gamma, Bilinear) {
    const auto pc = sample(ManifoldSpec::sphere(2), 500, 3).cloud;
    const auto op = build_operator(pc);
    const Vector f = pc.coordinate(0), g = pc.coordinate(1), h = pc.coordinate(2).array().sin();
    const Vector lhs = gamma(op, 3.0 * f - 2.0 * g, h);
    const Vector rhs = 3.0 * gamma(op, f, h) - 2.0 * gamma(op, g, h);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + rhs.cwiseAbs().maxCoeff()));
}

TEST(Gamma, SquareNormNonNegative) {
    const auto pc = sample(ManifoldSpec::swiss_roll(), 800, 3).cloud;
    const auto op = build_operator(pc);
    for (int a = 0; a < 3; ++a) EXPECT_GE(gamma(op, pc.coordinate(a), pc.coordinate(a)).minCoeff(), 0.0);
}

TEST(Gamma, ShapeMismatch) {
    const auto pc = sample(ManifoldSpec::circle(), 100, 3).cloud;
    const auto op = build_operator(pc);
    EXPECT_THROW(gamma(op, pc.coordinate(0), Vector::Zero(99)), Error);
    EXPECT_THROW(hessian_form(op, pc.coordinate(0), pc.coordinate(1), Vector::Zero(99)), Error);
}

TEST(Gamma, CircleGradientsHaveUnitNorm) {
    const auto c = calibrated_circle(uniform_angles(2000, 5));
    const Vector sum = gamma(c.op, c.pc.coordinate(0), c.pc.coordinate(0)) + gamma(c.op, c.pc.coordinate(1), c.pc.coordinate(1));
    EXPECT_NEAR(sum.mean(), 1.0, 0.05);
}

TEST(Gamma, DensityIndependentWithoutDimensionWeights) {
    // first-order density terms of L cancel in Gamma
    const Vector theta = quantile_angles(4000, 0.5);
    const auto pc = circle_at(theta);
    const auto op = build_operator(pc);
    const Vector xx = gamma(op, pc.coordinate(0), pc.coordinate(0));
    const Vector yy = gamma(op, pc.coordinate(1), pc.coordinate(1));
    const Vector sum = xx + yy;
    const Vector sin2 = theta.array().sin().square();
    EXPECT_LT(rms(xx.cwiseQuotient(sum) - sin2), 0.01);
}

TEST(Gamma, ConvergesOnCircle) {
    // max |Gamma(x, x) - sin^2| shrinks as n doubles; median over random phases.
    // Equispaced angles: on i.i.d. samples the maximum is dominated by sampling noise.
    std::array<double, 3> err{};
    const std::array<int, 3> sizes{500, 1000, 2000};
    for (int s = 0; s < 3; ++s) {
        std::vector<double> per_seed;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const double phase = uniform_angles(1, 100 + seed)(0);
            const auto c = calibrated_circle(equispaced_angles(sizes[s]).array() + phase);
            const Vector g = gamma(c.op, c.pc.coordinate(0), c.pc.coordinate(0));
            per_seed.push_back((g.array() - c.theta.array().sin().square()).abs().maxCoeff());
        }
        err[s] = median(per_seed);
    }
    EXPECT_GT(err[0], err[1]) << err[0] << " " << err[1] << " " << err[2];
    EXPECT_GT(err[1], err[2]);
}

TEST(Gamma, LeibnizDefectShrinks) {
    std::array<double, 3> err{};
    const std::array<int, 3> sizes{500, 1000, 2000};
    for (int s = 0; s < 3; ++s) {
        std::vector<double> per_seed;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto c = calibrated_circle(uniform_angles(sizes[s], 200 + seed));
            const Vector f = c.theta.array().cos() + 0.5 * (2 * c.theta.array()).sin();
            const Vector h = c.theta.array().sin() + 1.5;
            const Vector defect = gamma(c.op, f, h.cwiseProduct(h)) - 2.0 * h.cwiseProduct(gamma(c.op, f, h));
            per_seed.push_back(rms(defect));
        }
        err[s] = median(per_seed);
    }
    EXPECT_GT(err[0], err[1]);
    EXPECT_GT(err[1], err[2]);
}

TEST(Hessian, ConstantFunctionGivesZero) {
    const auto pc = sample(ManifoldSpec::torus(), 400, 1).cloud;
    const auto op = build_operator(pc);
    const Vector h = hessian_form(op, Vector::Constant(400, 2.0), pc.coordinate(0), pc.coordinate(1));
    EXPECT_EQ(h.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Hessian, SymmetricInDirectionsBitwise) {
    const auto pc = sample(ManifoldSpec::torus(), 400, 1).cloud;
    const auto op = build_operator(pc);
    const Vector f = pc.coordinate(2);
    EXPECT_EQ(hessian_form(op, f, pc.coordinate(0), pc.coordinate(1)), hessian_form(op, f, pc.coordinate(1), pc.coordinate(0)));
}

Vector interior_values(const PointCloud& pc, const Vector& v, double margin) {
    std::vector<double> out;
    for (Eigen::Index i = 0; i < pc.size(); ++i) {
        const double x = pc.points()(i, 0), y = pc.points()(i, 1);
        if (x > margin && x < 1 - margin && y > margin && y < 1 - margin) out.push_back(v(i));
    }
    return Eigen::Map<Vector>(out.data(), static_cast<Eigen::Index>(out.size()));
}

TEST(Hessian, SquareOfCoordinateOnFlatSquare) {
    const auto pc = unit_square(4000, 7);
    const auto raw = build_operator(pc);
    const auto op = raw.calibrated(estimate_c(gram_stack(raw, pc), 2));
    const Vector x = pc.coordinate(0);
    const Vector h = hessian_form(op, x.cwiseProduct(x), x, x);
    EXPECT_NEAR(interior_values(pc, h, 0.2).mean(), 2.0, 0.2);
    const Vector mixed = hessian_form(op, x.cwiseProduct(x), x, pc.coordinate(1));
    EXPECT_LT(std::abs(interior_values(pc, mixed, 0.2).mean()), 0.2);
}

}  // namespace
}  // namespace diffgeo
