#include "diffgeo/error.hpp"
#include "diffgeo/point_cloud.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

namespace diffgeo {
namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no diffgeo::Error thrown";
    return ErrorKind::Format;
}

PointCloud random_cloud(int n, int D, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Matrix m(n, D);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < D; ++j) m(i, j) = g(rng);
    return PointCloud(m);
}

TEST(PointCloud, RejectsNonFiniteAndEmpty) {
    Matrix m(2, 2);
    m << 0, 1, std::nan(""), 2;
    EXPECT_EQ(kind_of([&] { PointCloud{m}; }), ErrorKind::Domain);
    EXPECT_EQ(kind_of([] { PointCloud{Matrix(0, 3)}; }), ErrorKind::EmptyInput);
}

TEST(Csv, ParsesRowsInOrder) {
    const auto pc = parse_csv("0,0\n1,0\n0,1");
    ASSERT_EQ(pc.size(), 3);
    ASSERT_EQ(pc.dim(), 2);
    Matrix expected(3, 2);
    expected << 0, 0, 1, 0, 0, 1;
    EXPECT_EQ(pc.points(), expected);
}

TEST(Csv, HeaderIsSkipped) {
    const auto pc = parse_csv("x,y\n1.5,2\n3,4\n", true);
    EXPECT_EQ(pc.size(), 2);
    EXPECT_DOUBLE_EQ(pc.points()(0, 0), 1.5);
}

TEST(Csv, ParseErrorCitesLine) {
    try {
        parse_csv("1,abc\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parse);
        EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos) << e.what();
    }
}

TEST(Csv, RaggedAndEmpty) {
    try {
        parse_csv("1,2\n3\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Format);
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
    EXPECT_EQ(kind_of([] { parse_csv(""); }), ErrorKind::EmptyInput);
    EXPECT_EQ(kind_of([] { parse_csv("a,b\n", true); }), ErrorKind::EmptyInput);
    EXPECT_EQ(kind_of([] { parse_csv("1,inf\n"); }), ErrorKind::Parse);
}

TEST(Csv, SaveLoadRoundTripIsExact) {
    const auto pc = random_cloud(50, 4, 7);
    const auto path = std::filesystem::temp_directory_path() / "diffgeo_roundtrip.csv";
    save_csv(pc, path, "a,b,c,d");
    const auto back = load_csv(path, true);
    std::filesystem::remove(path);
    EXPECT_EQ(back.points(), pc.points());
    EXPECT_EQ(parse_csv(to_csv(pc)).points(), pc.points());
}

TEST(Csv, MissingFile) {
    EXPECT_TRUE(is_input_error(kind_of([] { load_csv("/nonexistent/cloud.csv"); })));
}

TEST(Noise, ZeroSigmaIsIdentity) {
    const auto pc = random_cloud(20, 3, 1);
    EXPECT_EQ(add_gaussian_noise(pc, 0.0, 5).points(), pc.points());
}

TEST(Noise, DeterministicAndRecorded) {
    const auto pc = random_cloud(100, 3, 1);
    const auto a = add_gaussian_noise(pc, 0.2, 42);
    const auto b = add_gaussian_noise(pc, 0.2, 42);
    EXPECT_EQ(a.points(), b.points());
    EXPECT_NE(add_gaussian_noise(pc, 0.2, 43).points(), a.points());
    EXPECT_EQ(a.meta().noise_sigma, 0.2);
    EXPECT_EQ(a.meta().noise_seed, 42u);
}

TEST(Noise, StandardDeviationMatchesSigma) {
    const auto pc = random_cloud(10000, 3, 2);
    const Matrix diff = add_gaussian_noise(pc, 0.1, 9).points() - pc.points();
    for (int a = 0; a < 3; ++a) {
        const Vector col = diff.col(a);
        const double mean = col.mean();
        const double sd = std::sqrt((col.array() - mean).square().sum() / (col.size() - 1));
        EXPECT_NEAR(sd, 0.1, 0.005) << "coordinate " << a;
    }
}

TEST(Noise, NegativeSigma) {
    EXPECT_EQ(kind_of([] { add_gaussian_noise(random_cloud(3, 2, 0), -0.1, 0); }), ErrorKind::Domain);
}

double max_relative_change(const Matrix& a, const Matrix& b) {
    return ((a - b).array().abs() / (1.0 + a.array().abs())).maxCoeff();
}

TEST(Embed, SameDimensionIsRigid) {
    const auto pc = random_cloud(60, 3, 3);
    const auto out = embed_isometric(pc, 3, 11);
    EXPECT_EQ(out.dim(), 3);
    EXPECT_NE(out.points(), pc.points());
    EXPECT_LT(max_relative_change(distance_matrix(pc.points()), distance_matrix(out.points())), 1e-12);
}

TEST(Embed, HigherDimensionPreservesDistances) {
    const auto pc = random_cloud(60, 3, 4);
    const auto a = embed_isometric(pc, 10, 1);
    const auto b = embed_isometric(pc, 10, 2);
    ASSERT_EQ(a.dim(), 10);
    const Matrix d0 = distance_matrix(pc.points());
    EXPECT_LT(max_relative_change(d0, distance_matrix(a.points())), 1e-12);
    EXPECT_LT(max_relative_change(d0, distance_matrix(b.points())), 1e-12);
    EXPECT_NE(a.points(), b.points());
    EXPECT_EQ(a.meta().embedded_from, 3);
}

TEST(Embed, LowerTargetRejected) {
    EXPECT_EQ(kind_of([] { embed_isometric(random_cloud(5, 3, 0), 2, 0); }), ErrorKind::Domain);
}

}  // namespace
}  // namespace diffgeo
