#include "spectrakit/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "spectrakit/errors.hpp"
#include "spectrakit/quadrature.hpp"
#include "rng.hpp"
#include "split_rules.hpp"

namespace spectrakit {

TailModel::TailModel(std::vector<double> eigenvalues, std::string source)
    : lambda_(std::move(eigenvalues)), source_(std::move(source)) {
    if (lambda_.empty()) throw std::invalid_argument("tail model: no eigenvalues");
    bool positive = false;
    for (double v : lambda_) {
        if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("tail model: eigenvalues must be finite and >= 0");
        if (v > 0.0) positive = true;
    }
    if (!positive) throw std::invalid_argument("tail model: at least one eigenvalue must be positive");
    std::sort(lambda_.begin(), lambda_.end(), std::greater<double>());
}

std::string to_string(CumulantRoute r) {
    return r == CumulantRoute::EigenPowerSums ? "eigen_power_sums" : "kernel_iterates";
}

namespace {

constexpr std::array<double, 4> kCoeff = {1.0, 2.0, 8.0, 48.0};

}  // namespace

CumulantSet cumulants_from_eigs(const std::vector<double>& eigenvalues) {
    if (eigenvalues.empty()) throw std::invalid_argument("cumulants: empty model");
    std::vector<double> lam = eigenvalues;
    // smallest first
    std::sort(lam.begin(), lam.end());
    CumulantSet c;
    c.route = CumulantRoute::EigenPowerSums;
    std::array<double, 4> s{};
    for (double l : lam) {
        double p = l;
        for (int r = 0; r < 4; ++r) {
            s[r] += p;
            p *= l;
        }
    }
    for (int r = 0; r < 4; ++r) c.kappa[r] = kCoeff[r] * s[r];
    return c;
}

CumulantSet cumulants_from_eigs(const TailModel& model) { return cumulants_from_eigs(model.eigenvalues()); }

std::array<double, 4> trace_cumulants(const Eigen::MatrixXd& b) {
    if (b.rows() != b.cols()) throw std::invalid_argument("trace_cumulants: matrix is not square");
    Eigen::MatrixXd b2 = b * b;
    std::array<double, 4> k{};
    k[0] = b.trace();
    k[1] = 2.0 * b2.trace();
    k[2] = 8.0 * b2.cwiseProduct(b).sum();
    k[3] = 48.0 * b2.cwiseProduct(b2).sum();
    return k;
}

namespace {

void check_direct(const KernelSpec& kernel, const BasisFamily& weight) {
    kernel.validate();
    weight.validate();
    if (kernel.dim() != 1 || weight.dim != 1) throw std::invalid_argument("cumulants_direct: multivariate kernel");
    if (!support_compatible(kernel, weight))
        throw std::invalid_argument("cumulants_direct: kernel support " + to_string(kernel_support(kernel)) +
                                    " does not match weight support " + to_string(weight.support()));
}

QuadratureRule direct_rule(const BasisFamily& weight, const DirectOptions& opts) {
    if (weight.kind == BasisKind::CharlierPoisson) {
        int v = opts.charlier_v > 0 ? opts.charlier_v : charlier_default_v(weight.rho);
        return gauss_rule(weight, 1, v);
    }
    int q = opts.quad_order > 0 ? opts.quad_order : 128;
    if (q < 64) throw std::invalid_argument("cumulants_direct: needs at least 64 nodes");
    return gauss_rule(weight, q);
}

}  // namespace

Eigen::MatrixXd weighted_node_matrix(const KernelSpec& kernel, const BasisFamily& weight, const DirectOptions& opts) {
    check_direct(kernel, weight);
    QuadratureRule rule = direct_rule(weight, opts);
    const Eigen::Index n = static_cast<Eigen::Index>(rule.size());
    Eigen::MatrixXd b(n, n);
    for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index q = p; q < n; ++q)
            b(p, q) = b(q, p) = kernel_eval_unchecked(kernel, rule.nodes[p], rule.nodes[q]) *
                                std::sqrt(rule.weights[p] * rule.weights[q]);
    return b;
}

CumulantSet cumulants_direct(const KernelSpec& kernel, const BasisFamily& weight, const DirectOptions& opts) {
    check_direct(kernel, weight);
    CumulantSet out;
    out.route = CumulantRoute::KernelIterates;
    bool split = is_kinked(kernel.id) &&
                 (weight.kind == BasisKind::Legendre01 || weight.kind == BasisKind::LaguerreExp);
    if (!split) {
        out.kappa = trace_cumulants(weighted_node_matrix(kernel, weight, opts));
        return out;
    }

    // iterated kernels with every inner integral broken at its kinks
    QuadratureRule rule = direct_rule(weight, opts);
    const int q = rule.order;
    const Eigen::Index np = static_cast<Eigen::Index>(rule.size());
    std::vector<std::array<double, 4>> part(np);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count()) if (opts.exec == Execution::Parallel)
    for (Eigen::Index p = 0; p < np; ++p) {
        double s = rule.nodes[p];
        detail::Nodes in = detail::piecewise_rule(weight, {s}, q, rule);
        double a2 = 0.0, a3 = 0.0, a4 = 0.0;
        for (std::size_t j = 0; j < in.x.size(); ++j) {
            double t = in.x[j];
            double k1 = kernel_eval_unchecked(kernel, s, t);
            detail::Nodes mid = detail::piecewise_rule(weight, {std::min(s, t), std::max(s, t)}, q, rule);
            double k2 = 0.0;
            for (std::size_t u = 0; u < mid.x.size(); ++u)
                k2 += mid.w[u] * kernel_eval_unchecked(kernel, s, mid.x[u]) * kernel_eval_unchecked(kernel, mid.x[u], t);
            a2 += in.w[j] * k1 * k1;
            a3 += in.w[j] * k1 * k2;
            a4 += in.w[j] * k2 * k2;
        }
        part[p] = {kernel_eval_unchecked(kernel, s, s), a2, a3, a4};
    }
    std::array<double, 4> sum{};
    for (Eigen::Index p = 0; p < np; ++p)
        for (int r = 0; r < 4; ++r) sum[r] += rule.weights[p] * part[p][r];
    for (int r = 0; r < 4; ++r) out.kappa[r] = kCoeff[r] * sum[r];
    return out;
}

namespace {

// standardized eigenvalues (largest = 1), zeros dropped
std::vector<double> standardized(const TailModel& model) {
    std::vector<double> out;
    double top = model.lambda_max();
    for (double v : model.eigenvalues())
        if (v > 0.0) out.push_back(v / top);
    return out;
}

double imhof_integrand(const std::vector<double>& lam, double x, double u) {
    double theta = 0.0, log_rho = 0.0;
    for (double l : lam) {
        double z = l * u;
        theta += std::atan(z);
        log_rho += std::log1p(z * z);
    }
    theta = 0.5 * theta - 0.5 * x * u;
    return std::sin(theta) / (u * std::exp(0.25 * log_rho));
}

// bound on the integral of 1/(u rho(u)) over [U, inf), using the best prefix of eigenvalues
double tail_bound(const std::vector<double>& lam, double u) {
    double best = std::numeric_limits<double>::infinity();
    double log_prod = 0.0;
    for (std::size_t k = 1; k <= lam.size(); ++k) {
        log_prod += 0.5 * std::log(lam[k - 1] * u);
        double b = 2.0 / double(k) * std::exp(-log_prod);
        best = std::min(best, b);
    }
    return best;
}

double wynn_epsilon(const std::vector<double>& s) {
    // epsilon table: eps_{k+1}(n) = eps_{k-1}(n+1) + 1/(eps_k(n+1) - eps_k(n)); even columns estimate the limit
    std::vector<double> col = s;
    std::vector<double> colm1(s.size() + 1, 0.0);
    double best = s.back();
    for (int k = 1; col.size() > 1; ++k) {
        std::vector<double> next(col.size() - 1);
        for (std::size_t i = 0; i + 1 < col.size(); ++i) {
            double diff = col[i + 1] - col[i];
            if (diff == 0.0) return (k % 2 == 1) ? col[i + 1] : best;
            next[i] = colm1[i + 1] + 1.0 / diff;
        }
        colm1 = std::move(col);
        col = std::move(next);
        if (k % 2 == 0) best = col.back();
    }
    return best;
}

}  // namespace

double imhof_tail(const TailModel& model, double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("imhof_tail: x must be finite");
    if (x < 0.0) throw std::invalid_argument("imhof_tail: x must be >= 0");
    if (x == 0.0) return 1.0;
    std::vector<double> lam = standardized(model);
    const double xs = x / model.lambda_max();

    // one panel per asymptotic half-period of sin(theta), split into pieces of width <= pi
    const double half = 2.0 * std::numbers::pi / xs;
    const int pieces = std::max(1, static_cast<int>(std::ceil(half / std::numbers::pi)));
    const double width = half / pieces;
    const QuadratureRule base = gauss_rule(BasisKind::Legendre01, 24);

    std::vector<double> partial;
    double total = 0.0, last_est = 0.0;
    int stable = 0;
    constexpr double target = 1e-10;
    for (int panel = 0; panel < 200000; ++panel) {
        double a = panel * half;
        for (int piece = 0; piece < pieces; ++piece) {
            double lo = a + piece * width;
            for (std::size_t i = 0; i < base.size(); ++i) {
                double u = lo + width * base.nodes[i];
                total += width * base.weights[i] * imhof_integrand(lam, xs, u);
            }
        }
        partial.push_back(total);
        double upper = (panel + 1) * half;
        if (tail_bound(lam, upper) / std::numbers::pi < target) {
            return std::clamp(0.5 + total / std::numbers::pi, 0.0, 1.0);
        }
        if (partial.size() >= 12) {
            std::vector<double> window(partial.end() - std::min<std::size_t>(partial.size(), 21), partial.end());
            double est = wynn_epsilon(window);
            if (std::abs(est - last_est) < 1e-12 * std::max(1.0, std::abs(est)))
                ++stable;
            else
                stable = 0;
            last_est = est;
            if (stable >= 3) return std::clamp(0.5 + est / std::numbers::pi, 0.0, 1.0);
        }
    }
    throw NumericalError("imhof_tail: integral did not converge");
}

double quantile(const TailModel& model, double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile: p must lie in (0,1)");
    // work on the standardized model so that scaling commutes exactly with the search
    std::vector<double> lam = standardized(model);
    TailModel unit(lam);
    CumulantSet c = cumulants_from_eigs(unit);
    double target = 1.0 - p;
    double lo = 0.0, hi = c.kappa[0] + 20.0 * std::sqrt(c.kappa[1]);
    while (imhof_tail(unit, hi) > target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw NumericalError("quantile: bracket expansion failed");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (imhof_tail(unit, mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi) * model.lambda_max();
}

TailModel trace_completed(const TailModel& model, double kappa1_total, int k) {
    if (k < 1) throw std::invalid_argument("trace_completed: k must be >= 1");
    double sum = 0.0;
    for (double v : model.eigenvalues()) sum += v;
    double deficit = kappa1_total - sum;
    std::vector<double> lam = model.eigenvalues();
    if (deficit > 0.0)
        for (int i = 0; i < k; ++i) lam.push_back(deficit / k);
    return TailModel(lam, model.source());
}

double empirical_quantile(std::vector<double> sample, double p) {
    if (sample.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("empirical_quantile: p must lie in (0,1)");
    std::size_t idx = static_cast<std::size_t>(std::ceil(p * sample.size()));
    idx = std::clamp<std::size_t>(idx, 1, sample.size()) - 1;
    std::nth_element(sample.begin(), sample.begin() + idx, sample.end());
    return sample[idx];
}

Simulation simulate_w(const TailModel& model, std::int64_t reps, std::uint64_t seed,
                      const std::vector<double>& probabilities, Execution exec) {
    if (reps < 1) throw std::invalid_argument("simulate_w: reps must be >= 1");
    std::vector<double> lam;
    for (double v : model.eigenvalues())
        if (v > 0.0) lam.push_back(v);
    constexpr std::int64_t chunk = 8192;
    const std::int64_t chunks = (reps + chunk - 1) / chunk;
    Simulation out;
    out.draws.resize(reps);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count()) if (exec == Execution::Parallel)
    for (std::int64_t c = 0; c < chunks; ++c) {
        std::mt19937_64 eng(detail::stream_seed(seed, static_cast<std::uint64_t>(c)));
        std::normal_distribution<double> norm(0.0, 1.0);
        std::int64_t end = std::min(reps, (c + 1) * chunk);
        for (std::int64_t i = c * chunk; i < end; ++i) {
            double w = 0.0;
            for (double l : lam) {
                double z = norm(eng);
                w += l * z * z;
            }
            out.draws[i] = w;
        }
    }
    double sum = 0.0;
    for (double v : out.draws) sum += v;
    out.mean = sum / double(reps);
    out.probabilities = probabilities;
    for (double p : probabilities) out.quantiles.push_back(empirical_quantile(out.draws, p));
    return out;
}

}  // namespace spectrakit
