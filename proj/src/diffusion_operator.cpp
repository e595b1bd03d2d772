#include "diffgeo/diffusion_operator.hpp"

#include "diffgeo/error.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

namespace diffgeo {

namespace {

// points stored one per column
double squared_distance(const Matrix& points, Eigen::Index i, Eigen::Index j) {
    double acc = 0.0;
    for (Eigen::Index a = 0; a < points.rows(); ++a) {
        const double diff = points(a, i) - points(a, j);
        acc += diff * diff;
    }
    return acc;
}

void check_k(Eigen::Index n, int k) {
    if (k < 1 || k > n - 1)
        throw Error(ErrorKind::Domain, "k = " + std::to_string(k) + " outside [1, " + std::to_string(n - 1) + "]");
}

}  // namespace

NeighborGraph knn_graph(const PointCloud& pc, int k) {
    const auto n = pc.size();
    check_k(n, k);
    const Matrix points = pc.points().transpose();
    NeighborGraph graph;
    graph.k = k;
    graph.indices.resize(static_cast<std::size_t>(n) * k);
    graph.distances.resize(static_cast<std::size_t>(n) * k);

#pragma omp parallel
    {
        std::vector<std::pair<double, int>> row(n - 1);
#pragma omp for schedule(static)
        for (Eigen::Index i = 0; i < n; ++i) {
            std::size_t m = 0;
            for (Eigen::Index j = 0; j < n; ++j)
                if (j != i) row[m++] = {squared_distance(points, i, j), static_cast<int>(j)};
            // (distance, index) pairs order ties by lower index
            std::nth_element(row.begin(), row.begin() + (k - 1), row.end());
            std::sort(row.begin(), row.begin() + k);
            for (int j = 0; j < k; ++j) {
                graph.indices[static_cast<std::size_t>(i) * k + j] = row[j].second;
                graph.distances[static_cast<std::size_t>(i) * k + j] = std::sqrt(row[j].first);
            }
        }
    }
    return graph;
}

SymmetricEdges symmetrize(const NeighborGraph& graph) {
    const auto n = graph.size();
    std::vector<std::vector<std::pair<int, double>>> adjacency(n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (int j = 0; j < graph.k; ++j) {
            const int other = graph.neighbor(i, j);
            const double d = graph.distance(i, j);
            adjacency[i].push_back({other, d * d});
            adjacency[other].push_back({static_cast<int>(i), d * d});
        }
    SymmetricEdges edges;
    edges.row_start.assign(n + 1, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        auto& row = adjacency[i];
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end(), [](auto& a, auto& b) { return a.first == b.first; }),
                  row.end());
        edges.row_start[i + 1] = edges.row_start[i] + static_cast<Eigen::Index>(row.size());
    }
    edges.cols.reserve(edges.row_start[n]);
    edges.dist2.reserve(edges.row_start[n]);
    for (const auto& row : adjacency)
        for (auto [j, d2] : row) {
            edges.cols.push_back(j);
            edges.dist2.push_back(d2);
        }
    return edges;
}

Vector bandwidth_function(const NeighborGraph& graph, int k0) {
    if (k0 < 1 || k0 > graph.k)
        throw Error(ErrorKind::Domain, "k0 = " + std::to_string(k0) + " outside [1, " + std::to_string(graph.k) + "]");
    const auto n = graph.size();
    Vector rho(n);
    bool floored = false;
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < k0; ++j) acc += graph.distance(i, j) * graph.distance(i, j);
        rho(i) = std::sqrt(acc / k0);
        if (!(rho(i) >= 1e-12)) {
            rho(i) = 1e-12;
            floored = true;
        }
    }
    if (floored) std::cerr << "warning: duplicate points, bandwidth floored at 1e-12\n";
    const double log_mean = rho.array().log().mean();
    return rho / std::exp(log_mean);
}

EpsilonScan scan_epsilon(const SymmetricEdges& edges, const Vector& rho) {
    const auto n = edges.size();
    // reduced arguments |p_i - p_j|^2 / (rho_i rho_j)
    std::vector<double> reduced(edges.cols.size());
    for (Eigen::Index i = 0; i < n; ++i)
        for (auto e = edges.row_start[i]; e < edges.row_start[i + 1]; ++e)
            reduced[e] = edges.dist2[e] / (rho(i) * rho(edges.cols[e]));

    EpsilonScan scan;
    for (int m = -30; m <= 30; ++m) scan.log2_eps.push_back(m);
    const std::size_t grid = scan.log2_eps.size();
    scan.log_sum.resize(grid);
    std::vector<double> row_sums(n);
    for (std::size_t g = 0; g < grid; ++g) {
        const double eps = std::ldexp(1.0, scan.log2_eps[g]);
#pragma omp parallel for schedule(static)
        for (Eigen::Index i = 0; i < n; ++i) {
            double acc = 0.0;
            for (auto e = edges.row_start[i]; e < edges.row_start[i + 1]; ++e) acc += std::exp(-reduced[e] / eps);
            row_sums[i] = acc;
        }
        // serial summation in row order keeps the result independent of thread count
        double total = static_cast<double>(n);
        for (double s : row_sums) total += s;
        scan.log_sum[g] = std::log(total);
    }
    scan.slope.assign(grid, 0.0);
    for (std::size_t g = 1; g + 1 < grid; ++g)
        scan.slope[g] = (scan.log_sum[g + 1] - scan.log_sum[g - 1]) / (2.0 * std::log(2.0));

    std::size_t best = 1;
    for (std::size_t g = 1; g + 1 < grid; ++g)
        if (scan.slope[g] > scan.slope[best]) best = g;
    if (!(scan.slope[best] > 1e-12))
        throw Error(ErrorKind::Selection, "kernel sum is flat in epsilon (degenerate cloud)");
    scan.epsilon = std::ldexp(1.0, scan.log2_eps[best]);
    return scan;
}

double select_epsilon(const PointCloud& pc, const NeighborGraph& graph, const Vector& rho) {
    if (graph.size() != pc.size() || rho.size() != pc.size())
        throw Error(ErrorKind::Shape, "graph, bandwidth and cloud sizes differ");
    if (graph.size() < 2 || graph.k < 1) throw Error(ErrorKind::EmptyInput, "empty neighbour graph");
    return scan_epsilon(symmetrize(graph), rho).epsilon;
}

SparseMatrix kernel_matrix(const PointCloud& pc, const NeighborGraph& graph, const Vector& rho, double epsilon) {
    if (!(epsilon > 0) || !std::isfinite(epsilon)) throw Error(ErrorKind::Domain, "epsilon must be positive");
    if (graph.size() != pc.size() || rho.size() != pc.size())
        throw Error(ErrorKind::Shape, "graph, bandwidth and cloud sizes differ");
    const auto edges = symmetrize(graph);
    const auto n = pc.size();
    SparseMatrix kernel(n, n);
    kernel.reserve(Eigen::VectorXi::NullaryExpr(n, [&](Eigen::Index i) {
        return static_cast<int>(edges.row_start[i + 1] - edges.row_start[i] + 1);
    }));
    for (Eigen::Index i = 0; i < n; ++i) {
        bool diagonal_done = false;
        for (auto e = edges.row_start[i]; e < edges.row_start[i + 1]; ++e) {
            const int j = edges.cols[e];
            if (!diagonal_done && j > i) {
                kernel.insert(i, i) = 1.0;
                diagonal_done = true;
            }
            // the argument is symmetric in (i, j) term by term, so K = K^T exactly
            kernel.insert(i, j) = std::exp(-edges.dist2[e] / (epsilon * (rho(i) * rho(j))));
        }
        if (!diagonal_done) kernel.insert(i, i) = 1.0;
    }
    kernel.makeCompressed();
    return kernel;
}

LaplacianOperator::LaplacianOperator(SparseMatrix markov, double epsilon, Vector rho)
    : markov_(std::move(markov)), epsilon_(epsilon), rho_(std::move(rho)) {
    if (!(epsilon_ > 0)) throw Error(ErrorKind::Domain, "epsilon must be positive");
    if (rho_.size() != markov_.rows() || markov_.rows() != markov_.cols())
        throw Error(ErrorKind::Shape, "operator and bandwidth sizes differ");
    if (!(rho_.array() > 0).all() || !rho_.allFinite()) throw Error(ErrorKind::Domain, "bandwidth must be positive");
    row_scale_ = 4.0 / (epsilon_ * rho_.array().square());
}

LaplacianOperator LaplacianOperator::calibrated(double c) const {
    if (!(c > 0) || !std::isfinite(c)) throw Error(ErrorKind::Calibration, "calibration constant must be positive");
    LaplacianOperator out(markov_, epsilon_, rho_);
    out.row_scale_ /= c;
    out.scale_c_ = c;
    return out;
}

Vector LaplacianOperator::apply(const Vector& f) const {
    const auto n = size();
    if (f.size() != n)
        throw Error(ErrorKind::Shape, "vector length " + std::to_string(f.size()) + " != " + std::to_string(n));
    const auto* start = markov_.outerIndexPtr();
    const auto* cols = markov_.innerIndexPtr();
    const auto* vals = markov_.valuePtr();
    Vector out(n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (auto e = start[i]; e < start[i + 1]; ++e) acc += vals[e] * (f(i) - f(cols[e]));
        out(i) = row_scale_(i) * acc;
    }
    return out;
}

Vector apply(const LaplacianOperator& op, const Vector& f) { return op.apply(f); }

LaplacianOperator laplacian(const SparseMatrix& kernel, double epsilon, const Vector& rho,
                            std::optional<int> density_dim) {
    const auto n = kernel.rows();
    if (kernel.cols() != n || rho.size() != n) throw Error(ErrorKind::Shape, "kernel must be n x n with n bandwidths");
    if (density_dim && *density_dim < 1) throw Error(ErrorKind::Domain, "density dimension must be at least 1");
    Vector degree = Vector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double off_diagonal = 0.0;
        for (SparseMatrix::InnerIterator it(kernel, i); it; ++it) {
            degree(i) += it.value();
            if (it.col() != i) off_diagonal += it.value();
        }
        if (!(off_diagonal > 0.0))
            throw Error(ErrorKind::IsolatedPoint, "row " + std::to_string(i) + " has no kernel weight to other points");
    }
    // K_ij w_i w_j, then row normalisation to a Markov matrix. Without a dimension
    // w = 1/q. With dimension d, w = (q / rho^d)^(1/d - 1/2), which removes the
    // first-order density drift left by a kNN bandwidth.
    Vector weight(n);
    if (density_dim) {
        const double d = *density_dim;
        const double exponent = 1.0 / d - 0.5;
        for (Eigen::Index i = 0; i < n; ++i) weight(i) = std::pow(degree(i) / std::pow(rho(i), d), exponent);
    } else {
        weight = degree.cwiseInverse();
    }
    SparseMatrix markov = kernel;
    for (Eigen::Index i = 0; i < n; ++i)
        for (SparseMatrix::InnerIterator it(markov, i); it; ++it) it.valueRef() *= weight(i) * weight(it.col());
    for (Eigen::Index i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (SparseMatrix::InnerIterator it(markov, i); it; ++it) row_sum += it.value();
        for (SparseMatrix::InnerIterator it(markov, i); it; ++it) it.valueRef() /= row_sum;
    }
    return LaplacianOperator(std::move(markov), epsilon, rho);
}

LaplacianOperator build_operator(const PointCloud& pc, const OperatorOptions& options) {
    const auto n = pc.size();
    if (n < 2) throw Error(ErrorKind::Domain, "need at least two points");
    const int k = static_cast<int>(std::min<Eigen::Index>(options.k, n - 1));
    const auto graph = knn_graph(pc, k);
    const auto rho = bandwidth_function(graph, std::min(options.k0, k));
    const double epsilon = options.epsilon ? *options.epsilon : select_epsilon(pc, graph, rho);
    return laplacian(kernel_matrix(pc, graph, rho, epsilon), epsilon, rho, options.density_dim);
}

void write_coo(const SparseMatrix& m, std::ostream& out) {
    const auto old = out.precision(17);
    for (Eigen::Index i = 0; i < m.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(m, i); it; ++it) out << it.row() << ',' << it.col() << ',' << it.value() << '\n';
    out.precision(old);
}

}  // namespace diffgeo
