#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace diffgeo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Where a cloud came from. All fields optional; filled in by generators and transforms.
struct Provenance {
    std::string generator;
    std::string parameters;
    std::optional<std::uint64_t> seed;
    std::optional<double> noise_sigma;
    std::optional<std::uint64_t> noise_seed;
    std::optional<int> embedded_from;
    std::optional<std::uint64_t> embedding_seed;
};

/// n points in R^D stored row-wise. Immutable once built; every coordinate is finite.
class PointCloud {
public:
    explicit PointCloud(Matrix points, Provenance meta = {});

    const Matrix& points() const noexcept { return points_; }
    Eigen::Index size() const noexcept { return points_.rows(); }
    Eigen::Index dim() const noexcept { return points_.cols(); }
    auto row(Eigen::Index i) const { return points_.row(i); }
    Vector coordinate(Eigen::Index a) const { return points_.col(a); }
    const Provenance& meta() const noexcept { return meta_; }

private:
    Matrix points_;
    Provenance meta_;
};

PointCloud load_csv(const std::filesystem::path& path, bool has_header = false);
PointCloud parse_csv(const std::string& text, bool has_header = false);

/// Writes 17 significant digits so load_csv recovers every double exactly.
void save_csv(const PointCloud& pc, const std::filesystem::path& path,
              const std::optional<std::string>& header = std::nullopt);
std::string to_csv(const PointCloud& pc, const std::optional<std::string>& header = std::nullopt);

/// Independent N(0, sigma^2) per ambient coordinate, deterministic in seed.
PointCloud add_gaussian_noise(const PointCloud& pc, double sigma, std::uint64_t seed);

/// Random orthogonal injection R^D -> R^target_dim plus a random translation.
PointCloud embed_isometric(const PointCloud& pc, int target_dim, std::uint64_t seed);

/// Full Euclidean distance matrix; test and diagnostic helper.
Matrix distance_matrix(const Matrix& points);

}  // namespace diffgeo
