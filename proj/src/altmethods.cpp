#include "spectrakit/altmethods.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "spectrakit/errors.hpp"
#include "spectrakit/linalg.hpp"
#include "rng.hpp"

namespace spectrakit {

std::uint64_t replication_seed(std::uint64_t seed, int replication) {
    return detail::stream_seed(seed, static_cast<std::uint64_t>(replication));
}

void MCConfig::validate() const {
    if (N < 2) throw std::invalid_argument("mc: N must be >= 2");
    if (N > 20000) throw std::invalid_argument("mc: N > 20000 is not supported");
    if (replications < 1) throw std::invalid_argument("mc: replications must be >= 1");
    if (top < 1) throw std::invalid_argument("mc: top must be >= 1");
    kernel.validate();
    weight.validate();
    if (!support_compatible(kernel, weight))
        throw std::invalid_argument("mc: kernel support " + to_string(kernel_support(kernel)) +
                                    " does not match weight support " + to_string(weight.support()));
}

Spectrum nystrom_mc(const MCConfig& cfg, int replication, Execution exec) {
    cfg.validate();
    const int d = cfg.weight.dim;
    const std::int64_t n = cfg.N;
    std::mt19937_64 eng(replication_seed(cfg.seed, replication));
    std::vector<double> y(static_cast<std::size_t>(n) * d);
    switch (cfg.weight.kind) {
    case BasisKind::Legendre01: {
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        for (auto& v : y) v = dist(eng);
        break;
    }
    case BasisKind::LaguerreExp: {
        std::exponential_distribution<double> dist(cfg.weight.gamma);
        for (auto& v : y) v = dist(eng);
        break;
    }
    case BasisKind::HermiteGauss:
    case BasisKind::TensorHermite: {
        std::normal_distribution<double> dist(0.0, std::sqrt(0.5 / cfg.weight.gamma));
        for (auto& v : y) v = dist(eng);
        break;
    }
    case BasisKind::CharlierPoisson: {
        std::poisson_distribution<int> dist(cfg.weight.rho);
        for (auto& v : y) v = dist(eng);
        break;
    }
    }

    Spectrum out;
    auto& pv = out.provenance;
    pv.method = "nystrom";
    pv.kernel = cfg.kernel;
    pv.basis = cfg.weight;
    pv.mc_N = n;
    pv.mc_replication = replication;
    pv.seed = cfg.seed;
    const double mass = cfg.weight.weight_mass();

    Eigen::VectorXd top;
    if (cfg.weight.kind == BasisKind::CharlierPoisson) {
        // repeated sample values collapse exactly: B_ij = K(u_i,u_j) sqrt(c_i c_j) / N
        std::map<double, std::int64_t> counts;
        for (double v : y) ++counts[v];
        std::vector<double> u;
        std::vector<double> c;
        for (const auto& [val, cnt] : counts) {
            u.push_back(val);
            c.push_back(static_cast<double>(cnt));
        }
        const Eigen::Index m = static_cast<Eigen::Index>(u.size());
        Eigen::MatrixXd b(m, m);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = i; j < m; ++j)
                b(i, j) = b(j, i) = kernel_eval(cfg.kernel, u[i], u[j]) * std::sqrt(c[i] * c[j]) / double(n);
        Eigen::VectorXd all = sym_eig(b, false).values;
        top = Eigen::VectorXd::Zero(cfg.top);
        for (int i = 0; i < cfg.top && i < all.size(); ++i) top[i] = all[i];
    } else {
        Eigen::MatrixXd k(n, n);
        const double inv = 1.0 / double(n);
#pragma omp parallel for schedule(dynamic, 16) num_threads(thread_count()) if (exec == Execution::Parallel)
        for (std::int64_t i = 0; i < n; ++i) {
            std::span<const double> yi(y.data() + i * d, d);
            for (std::int64_t j = i; j < n; ++j) {
                std::span<const double> yj(y.data() + j * d, d);
                double v = d == 1 ? kernel_eval_unchecked(cfg.kernel, yi[0], yj[0]) : kernel_eval(cfg.kernel, yi, yj);
                k(i, j) = v * inv;
            }
        }
        for (std::int64_t i = 0; i < n; ++i)
            for (std::int64_t j = 0; j < i; ++j) k(i, j) = k(j, i);
        top = top_eigenvalues(k, cfg.top, exec);
    }
    out.eigenvalues.resize(cfg.top);
    for (int i = 0; i < cfg.top; ++i) {
        double v = top[i] * mass;
        if (v < 0.0) {
            v = 0.0;
            ++pv.clip_count;
        }
        out.eigenvalues[i] = v;
    }
    return out;
}

MCSummary mc_replicate(const MCConfig& cfg, Execution exec) {
    cfg.validate();
    MCSummary s;
    s.values.assign(cfg.replications, std::vector<double>(cfg.top, 0.0));
#pragma omp parallel for schedule(dynamic) num_threads(thread_count()) if (exec == Execution::Parallel)
    for (int r = 0; r < cfg.replications; ++r) s.values[r] = nystrom_mc(cfg, r, Execution::Serial).eigenvalues;

    s.mean.assign(cfg.top, 0.0);
    s.sd.assign(cfg.top, 0.0);
    for (int i = 0; i < cfg.top; ++i) {
        double sum = 0.0;
        for (int r = 0; r < cfg.replications; ++r) sum += s.values[r][i];
        double mean = sum / cfg.replications;
        double ss = 0.0;
        for (int r = 0; r < cfg.replications; ++r) ss += (s.values[r][i] - mean) * (s.values[r][i] - mean);
        s.mean[i] = mean;
        s.sd[i] = cfg.replications > 1 ? std::sqrt(ss / (cfg.replications - 1)) : 0.0;
    }
    return s;
}

void GridConfig::validate() const {
    if (!(A > 0.0) || !std::isfinite(A)) throw std::invalid_argument("grid: A must be positive");
    if (m < 10) throw std::invalid_argument("grid: m must be >= 10");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("grid: gamma must be >= 0");
    if (top < 1) throw std::invalid_argument("grid: top must be >= 1");
    kernel.validate();
    if (kernel.dim() != 1) throw std::invalid_argument("grid: multivariate kernels are not supported");
    Support want;
    if (weight_class == BasisKind::LaguerreExp)
        want = Support::HalfLine;
    else if (weight_class == BasisKind::HermiteGauss)
        want = Support::RealLine;
    else
        throw std::invalid_argument("grid: weight must be laguerre ([0,A]) or hermite ([-A,A])");
    Support ks = kernel_support(kernel);
    if (ks != Support::Any && ks != want)
        throw std::invalid_argument("grid: kernel support " + to_string(ks) + " does not match the grid support " +
                                    to_string(want));
}

std::vector<double> GridConfig::nodes() const {
    std::vector<double> x;
    if (weight_class == BasisKind::LaguerreExp) {
        for (int j = 0; j <= m; ++j) x.push_back(j * A / m);
    } else {
        for (int i = -m; i <= m; ++i) x.push_back(i * A / m);
    }
    return x;
}

double GridConfig::step_size() const {
    if (step == GridStep::Spacing) return A / m;
    if (weight_class == BasisKind::LaguerreExp) return A / (m + 1.0);
    return 2.0 * A / (2.0 * m + 1.0);
}

namespace {

double grid_weight(const GridConfig& cfg, double x) {
    if (cfg.gamma == 0.0) return 1.0;
    return cfg.weight_class == BasisKind::LaguerreExp ? std::exp(-cfg.gamma * x) : std::exp(-cfg.gamma * x * x);
}

}  // namespace

Eigen::MatrixXd grid_matrix(const GridConfig& cfg, Execution exec) {
    cfg.validate();
    std::vector<double> x = cfg.nodes();
    const Eigen::Index n = static_cast<Eigen::Index>(x.size());
    std::vector<double> sw(n);
    for (Eigen::Index i = 0; i < n; ++i) sw[i] = std::sqrt(grid_weight(cfg, x[i]));
    Eigen::MatrixXd mat(n, n);
#pragma omp parallel for schedule(dynamic, 16) num_threads(thread_count()) if (exec == Execution::Parallel)
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = j; i < n; ++i) mat(i, j) = kernel_eval_unchecked(cfg.kernel, x[i], x[j]) * sw[i] * sw[j];
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (exec == Execution::Parallel)
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < j; ++i) mat(i, j) = mat(j, i);
    return mat;
}

Eigen::MatrixXd grid_matrix_reference(const GridConfig& cfg) {
    cfg.validate();
    std::vector<double> x = cfg.nodes();
    const Eigen::Index n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd mat(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            mat(i, j) = kernel_eval(cfg.kernel, x[i], x[j]) * std::sqrt(grid_weight(cfg, x[i]) * grid_weight(cfg, x[j]));
    return mat;
}

Spectrum grid_spectrum(const GridConfig& cfg, Execution exec) {
    Eigen::MatrixXd mat = grid_matrix(cfg, exec);
    double h = cfg.step_size();
    Eigen::VectorXd top = top_eigenvalues(mat, cfg.top, exec);
    Spectrum out;
    auto& pv = out.provenance;
    pv.method = "grid";
    pv.kernel = cfg.kernel;
    pv.basis.kind = cfg.weight_class;
    pv.basis.gamma = cfg.gamma;
    pv.grid_A = cfg.A;
    pv.grid_m = cfg.m;
    pv.grid_h = h;
    out.eigenvalues.resize(cfg.top);
    for (int i = 0; i < cfg.top; ++i) {
        double v = h * top[i];
        if (v < 0.0) {
            v = 0.0;
            ++pv.clip_count;
        }
        out.eigenvalues[i] = v;
    }
    return out;
}

}  // namespace spectrakit
