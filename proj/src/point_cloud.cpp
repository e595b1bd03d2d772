#include "diffgeo/point_cloud.hpp"

#include "diffgeo/error.hpp"
#include "diffgeo/rng.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace diffgeo {

PointCloud::PointCloud(Matrix points, Provenance meta) : points_(std::move(points)), meta_(std::move(meta)) {
    if (points_.rows() < 1 || points_.cols() < 1)
        throw Error(ErrorKind::EmptyInput, "point cloud needs at least one point and one coordinate");
    if (!points_.allFinite()) throw Error(ErrorKind::Domain, "point cloud contains non-finite coordinates");
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_cell(std::string_view cell, std::size_t line) {
    cell = trim(cell);
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size())
        throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": cannot parse '" + std::string(cell) + "'");
    if (!std::isfinite(value))
        throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": non-finite value '" + std::string(cell) + "'");
    return value;
}

}  // namespace

PointCloud parse_csv(const std::string& text, bool has_header) {
    std::vector<double> values;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    std::istringstream in(text);
    std::string line;
    bool header_pending = has_header;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = trim(line);
        if (view.empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        std::size_t count = 0;
        std::size_t start = 0;
        while (true) {
            auto comma = view.find(',', start);
            auto cell = view.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            values.push_back(parse_cell(cell, line_no));
            ++count;
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (rows == 0) {
            cols = count;
        } else if (count != cols) {
            throw Error(ErrorKind::Format, "line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                                               " columns, found " + std::to_string(count));
        }
        ++rows;
    }
    if (rows == 0) throw Error(ErrorKind::EmptyInput, "no data rows");
    Matrix points(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) points(i, j) = values[i * cols + j];
    return PointCloud(std::move(points));
}

PointCloud load_csv(const std::filesystem::path& path, bool has_header) {
    std::ifstream file(path);
    if (!file) throw Error(ErrorKind::EmptyInput, "cannot open " + path.string());
    std::stringstream buffer;
    buffer << file.rdbuf();
    auto pc = parse_csv(buffer.str(), has_header);
    Provenance meta;
    meta.generator = "csv:" + path.string();
    return PointCloud(pc.points(), meta);
}

std::string to_csv(const PointCloud& pc, const std::optional<std::string>& header) {
    std::ostringstream out;
    out << std::setprecision(17);
    if (header) out << *header << '\n';
    const auto& p = pc.points();
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        for (Eigen::Index j = 0; j < p.cols(); ++j) {
            if (j) out << ',';
            out << p(i, j);
        }
        out << '\n';
    }
    return out.str();
}

void save_csv(const PointCloud& pc, const std::filesystem::path& path, const std::optional<std::string>& header) {
    std::ofstream file(path);
    if (!file) throw Error(ErrorKind::Domain, "cannot write " + path.string());
    file << to_csv(pc, header);
}

PointCloud add_gaussian_noise(const PointCloud& pc, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw Error(ErrorKind::Domain, "noise sigma must be >= 0");
    Matrix out = pc.points();
    if (sigma > 0.0) {
        auto engine = make_engine(seed, Stream::Noise);
        std::normal_distribution<double> normal(0.0, sigma);
        for (Eigen::Index i = 0; i < out.rows(); ++i)
            for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) += normal(engine);
    }
    Provenance meta = pc.meta();
    meta.noise_sigma = sigma;
    meta.noise_seed = seed;
    return PointCloud(std::move(out), std::move(meta));
}

PointCloud embed_isometric(const PointCloud& pc, int target_dim, std::uint64_t seed) {
    const auto source_dim = pc.dim();
    if (target_dim < source_dim)
        throw Error(ErrorKind::Domain, "target dimension " + std::to_string(target_dim) + " below source dimension " +
                                           std::to_string(source_dim));
    auto engine = make_engine(seed, Stream::Embedding);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix gaussian(target_dim, target_dim);
    for (Eigen::Index j = 0; j < gaussian.cols(); ++j)
        for (Eigen::Index i = 0; i < gaussian.rows(); ++i) gaussian(i, j) = normal(engine);
    Eigen::HouseholderQR<Matrix> qr(gaussian);
    Matrix q = qr.householderQ();
    // Haar-distributed: fix column signs by the sign of R's diagonal
    const Matrix& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < target_dim; ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    Vector shift(target_dim);
    for (Eigen::Index j = 0; j < target_dim; ++j) shift(j) = normal(engine);

    Matrix basis = q.leftCols(source_dim);  // target_dim x source_dim, orthonormal columns
    Matrix out = pc.points() * basis.transpose();
    out.rowwise() += shift.transpose();

    Provenance meta = pc.meta();
    meta.embedded_from = static_cast<int>(source_dim);
    meta.embedding_seed = seed;
    return PointCloud(std::move(out), std::move(meta));
}

Matrix distance_matrix(const Matrix& points) {
    const auto n = points.rows();
    Matrix dist(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) dist(i, j) = (points.row(i) - points.row(j)).norm();
    return dist;
}

}  // namespace diffgeo
