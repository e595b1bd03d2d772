// End-to-end acceptance checks. One line per criterion: PASS/FAIL, measured values, time.
#include "diffgeo/bench.hpp"
#include "diffgeo/carre_du_champ.hpp"
#include "diffgeo/curvature.hpp"
#include "diffgeo/manifolds.hpp"
#include "diffgeo/metric.hpp"
#include "diffgeo/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

using namespace diffgeo;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_seconds, const std::function<Verdict()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget_seconds > 0 && secs > budget_seconds) {
        v.pass = false;
        v.detail += "; over time budget " + std::to_string(budget_seconds) + "s";
    }
    failures += !v.pass;
    std::printf("%s [%d] %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Matrix random_rotation(int D, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Matrix a(D, D);
    for (auto& x : a.reshaped()) x = g(rng);
    Matrix q = Eigen::HouseholderQR<Matrix>(a).householderQ();
    if (q.determinant() < 0) q.col(0) *= -1.0;
    return q;
}

Vector ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    Vector r(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k) r(static_cast<Eigen::Index>(idx[k])) = 0.5 * static_cast<double>(i + j);
        i = j + 1;
    }
    return r;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    const Vector x = ranks(a).array() - ranks(a).mean();
    const Vector y = ranks(b).array() - ranks(b).mean();
    return x.dot(y) / std::sqrt(x.squaredNorm() * y.squaredNorm());
}

// 1: exact identities of the curvature assembly on random second fundamental forms
Verdict tensor_identities() {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 2 + trial % 2, codim = 1 + (trial / 2) % 2;
        const int n = 20;
        AlphaStack a(n, d, codim);
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < codim; ++l)
                for (int j = 0; j < d; ++j)
                    for (int k = j; k < d; ++k) a(i, l, j, k) = a(i, l, k, j) = g(rng);
        const Matrix Q = random_rotation(codim, rng());
        AlphaStack b(n, d, codim);
        for (int i = 0; i < n; ++i)
            for (int m = 0; m < codim; ++m)
                for (int j = 0; j < d; ++j)
                    for (int k = 0; k < d; ++k)
                        for (int l = 0; l < codim; ++l) b(i, m, j, k) += Q(l, m) * a(i, l, j, k);
        const auto ca = curvature_stack(a), cb = curvature_stack(b);
        for (int p = 0; p < n; ++p) {
            worst = std::max(worst, std::abs(ca.scalar(p) - ca.ricci[p].trace()));
            worst = std::max(worst, std::abs(ca.scalar(p) - cb.scalar(p)));
            worst = std::max(worst, (ca.ricci[p] - cb.ricci[p]).cwiseAbs().maxCoeff());
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double contracted = 0.0;
                    for (int k = 0; k < d; ++k) {
                        contracted += ca.riemann(p, k, i, k, j);
                        for (int l = 0; l < d; ++l) {
                            const double r = ca.riemann(p, i, j, k, l);
                            worst = std::max({worst, std::abs(r + ca.riemann(p, j, i, k, l)),
                                              std::abs(r + ca.riemann(p, i, j, l, k)),
                                              std::abs(r - ca.riemann(p, k, l, i, j)),
                                              std::abs(r - cb.riemann(p, i, j, k, l))});
                        }
                    }
                    worst = std::max(worst, std::abs(contracted - ca.ricci[p](i, j)));
                }
        }
    }
    return {worst < 1e-10, fmt("max deviation %.2e over 100 stacks", worst)};
}

// 2: calibrated Gram matrices against the tangent projection on the unit sphere
Verdict gram_projection() {
    std::vector<double> per_seed;
    double slowest = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto start = std::chrono::steady_clock::now();
        const auto s = sample(ManifoldSpec::sphere(2), 3000, 1000 + seed);
        PipelineOptions opt;
        opt.dim = 2;
        opt.curvature = false;
        const auto r = analyze(s.cloud, opt);
        double total = 0.0;
        for (Eigen::Index i = 0; i < s.cloud.size(); ++i) {
            const Vector nrm = s.truth.normal_at(s.truth.project(s.cloud.row(i).transpose()));
            total += (r.metric.grams[i] - (Matrix::Identity(3, 3) - nrm * nrm.transpose())).norm();
        }
        per_seed.push_back(total / static_cast<double>(s.cloud.size()));
        slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    const double worst = *std::max_element(per_seed.begin(), per_seed.end());
    return {worst < 0.1 && slowest < 60.0,
            fmt("mean Frobenius distance per seed max %.4f (< 0.1), slowest seed %.1fs", worst, slowest)};
}

ResultTable dimension_runs(std::vector<ManifoldSpec> specs, std::vector<int> n, double sigma) {
    // one cell per manifold at its own size
    ResultTable all;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        ExperimentConfig cfg;
        cfg.manifolds = {specs[i]};
        cfg.n_values = {n[i]};
        cfg.sigma_values = {sigma};
        cfg.runs = 20;
        cfg.seed = 2024;
        for (const auto& row : run_dimension_bench(cfg).rows)
            if (row.manifold != "ALL") all.rows.push_back(row);
    }
    return all;
}

// 3: clean dimension estimates
Verdict dimension_clean() {
    const auto table = dimension_runs({ManifoldSpec::circle(), ManifoldSpec::sphere(2), ManifoldSpec::torus(),
                                       ManifoldSpec::swiss_roll(), ManifoldSpec::sphere(3)},
                                      {600, 1200, 1200, 1200, 2400}, 0.0);
    double correct = 0.0;
    std::string detail;
    for (const auto& r : table.rows) {
        correct += r.mean / 100.0 * r.runs;
        detail += fmt("%s %.0f%%, ", r.manifold.c_str(), r.mean);
    }
    const double pct = 100.0 * correct / (20.0 * 5);
    return {pct >= 95.0, detail + fmt("overall %.1f%% (>= 95%%)", pct)};
}

// 4: noisy torus dimension
Verdict dimension_noisy() {
    const auto table = dimension_runs({ManifoldSpec::torus()}, {2400}, 0.05);
    const double pct = table.rows.front().mean;
    return {pct >= 80.0, fmt("torus n=2400 sigma=0.05: %.1f%% (>= 80%%)", pct)};
}

// 5: tangent error angles against local PCA
Verdict tangents() {
    ExperimentConfig clean;
    clean.manifolds = {ManifoldSpec::torus()};
    clean.n_values = {2000};
    clean.sigma_values = {0.0};
    clean.runs = 10;
    clean.seed = 5;
    const auto a = run_tangent_grid(clean);
    auto noisy = clean;
    noisy.n_values = {1000};
    noisy.sigma_values = {0.05};
    noisy.methods = {MethodSpec{}, MethodSpec::parse("lpca:5")};
    const auto b = run_tangent_grid(noisy);
    const auto label = ManifoldSpec::torus().label();
    const double clean_diff = a.find(label, 2000, 0.0, "diffusion", "error_angle_deg")->mean;
    const double noisy_diff = b.find(label, 1000, 0.05, "diffusion", "error_angle_deg")->mean;
    const double noisy_lpca = b.find(label, 1000, 0.05, "lpca(5)", "error_angle_deg")->mean;
    const bool pass = clean_diff < 5.0 && noisy_diff < noisy_lpca && noisy_diff < 20.0;
    return {pass, fmt("(a) clean n=2000 diffusion %.2f deg (< 5); (b) sigma=0.05 n=1000 diffusion %.2f deg vs lpca(5) "
                      "%.2f deg (< lpca, < 20)",
                      clean_diff, noisy_diff, noisy_lpca)};
}

struct CurvatureRun {
    double mae = 0.0;
    std::vector<double> phi, estimate;
};

CurvatureRun torus_curvature(int n, double sigma, std::uint64_t seed) {
    const auto spec = ManifoldSpec::torus(1.0, 2.0);
    const auto data = make_run_data(spec, n, sigma, seed);
    const auto result = analyze(data.cloud);
    CurvatureRun run;
    run.mae = curvature_mae(result.curvature->scalar, data.truth, data.cloud);
    for (Eigen::Index i = 0; i < data.cloud.size(); ++i) {
        run.phi.push_back(torus_phi(data.truth.project(data.cloud.row(i).transpose()), 2.0));
        run.estimate.push_back(result.curvature->scalar(i));
    }
    return run;
}

// 6: scalar curvature of the torus
Verdict curvature() {
    const auto spec = ManifoldSpec::torus(1.0, 2.0);
    std::vector<double> clean, noisy;
    const int bins = 20;
    std::vector<double> sum(bins, 0.0), count(bins, 0.0);
    for (int run = 0; run < 10; ++run) {
        clean.push_back(torus_curvature(4000, 0.0, run_seed(6, spec, 4000, 0.0, run)).mae);
        const auto r = torus_curvature(2000, 0.05, run_seed(6, spec, 2000, 0.05, run));
        noisy.push_back(r.mae);
        for (std::size_t i = 0; i < r.phi.size(); ++i) {
            double phi = r.phi[i] + std::numbers::pi;
            const int b = std::min(bins - 1, static_cast<int>(phi / (2 * std::numbers::pi) * bins));
            sum[b] += r.estimate[i];
            count[b] += 1.0;
        }
    }
    std::vector<double> binned, oracle;
    for (int b = 0; b < bins; ++b) {
        binned.push_back(sum[b] / count[b]);
        oracle.push_back(torus_scalar_curvature(-std::numbers::pi + (b + 0.5) * 2 * std::numbers::pi / bins, 1.0, 2.0));
    }
    const double clean_mae = std::accumulate(clean.begin(), clean.end(), 0.0) / 10.0;
    const double noisy_mae = std::accumulate(noisy.begin(), noisy.end(), 0.0) / 10.0;
    const double rho = spearman(binned, oracle);
    return {clean_mae < 0.2 && noisy_mae < 0.6 && rho > 0.9,
            fmt("(a) clean n=4000 MAE %.3f (< 0.2); (b) sigma=0.05 n=2000 MAE %.3f (< 0.6), Spearman over %d phi-bins "
                "%.3f (> 0.9); 10 runs each",
                clean_mae, noisy_mae, bins, rho)};
}

// 7: Gamma(x,x) + Gamma(y,y) -> 1 on the circle
Verdict convergence() {
    std::vector<double> med;
    for (int n : {500, 1000, 2000}) {
        std::vector<double> rms;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto s = sample(ManifoldSpec::circle(), n, 700 + seed);
            PipelineOptions opt;
            opt.dim = 1;
            opt.curvature = false;
            const auto r = analyze(s.cloud, opt);
            const Vector x = s.cloud.coordinate(0), y = s.cloud.coordinate(1);
            const Vector total = gamma(r.op, x, x) + gamma(r.op, y, y);
            rms.push_back(std::sqrt((total.array() - 1.0).square().mean()));
        }
        med.push_back(median(rms));
    }
    return {med[0] > med[1] && med[1] > med[2],
            fmt("median RMS deviation n=500 %.4f, n=1000 %.4f, n=2000 %.4f (strictly decreasing)", med[0], med[1], med[2])};
}

// 8: determinism and rigid-motion equivariance
Verdict determinism() {
    const auto spec = ManifoldSpec::torus();
    const auto a = make_run_data(spec, 1500, 0.02, 88);
    const auto b = make_run_data(spec, 1500, 0.02, 88);
    const auto ra = analyze(a.cloud), rb = analyze(b.cloud);
    bool identical = a.cloud.points() == b.cloud.points() && ra.pointwise_dims == rb.pointwise_dims &&
                     ra.c == rb.c && ra.curvature->scalar == rb.curvature->scalar &&
                     ra.metric.eigenvalues == rb.metric.eigenvalues;
    for (Eigen::Index i = 0; i < ra.frames.size(); ++i) identical = identical && ra.frames.tangents[i] == rb.frames.tangents[i];

    const Matrix U = random_rotation(3, 8);
    const Vector shift{{1.0, -2.0, 0.5}};
    const PointCloud moved((a.cloud.points() * U.transpose()).rowwise() + shift.transpose());
    const auto rm = analyze(moved);
    const bool dims_same = rm.pointwise_dims == ra.pointwise_dims && rm.global_dim == ra.global_dim;
    const double ds = (rm.curvature->scalar - ra.curvature->scalar).cwiseAbs().maxCoeff();
    return {identical && dims_same && ds < 1e-8,
            fmt("rerun bitwise identical: %s; rotation: dimensions %s, max |dS| %.2e (< 1e-8)", identical ? "yes" : "no",
                dims_same ? "unchanged" : "CHANGED", ds)};
}

}  // namespace

int main() {
    criterion(1, "curvature tensor identities", 5.0, tensor_identities);
    criterion(2, "Gram matrix equals tangent projection on S^2", 0.0, gram_projection);
    criterion(3, "dimension, clean suite", 0.0, dimension_clean);
    criterion(4, "dimension, noisy torus", 0.0, dimension_noisy);
    criterion(5, "tangent error angle vs local PCA", 600.0, tangents);
    criterion(6, "torus scalar curvature", 0.0, curvature);
    criterion(7, "carre du champ convergence on the circle", 0.0, convergence);
    criterion(8, "determinism and rigid-motion equivariance", 0.0, determinism);
    std::printf("%d of 8 criteria passed\n", 8 - failures);
    return failures == 0 ? 0 : 1;
}
