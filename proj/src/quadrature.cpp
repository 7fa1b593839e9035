#include "spectrakit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "spectrakit/errors.hpp"

namespace spectrakit {

double QuadratureRule::total_mass() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

namespace {

struct Recurrence {
    std::vector<double> alpha;  // alpha_0..alpha_{q-1}
    std::vector<double> beta;   // beta_0 = mass, beta_1..beta_q
};

Recurrence standard_recurrence(BasisKind kind, int q) {
    Recurrence r;
    r.alpha.assign(q, 0.0);
    r.beta.assign(q + 1, 0.0);
    switch (kind) {
    case BasisKind::Legendre01:
        r.beta[0] = 2.0;
        for (int k = 1; k <= q; ++k) r.beta[k] = double(k) * k / (4.0 * k * k - 1.0);
        break;
    case BasisKind::LaguerreExp:
        r.beta[0] = 1.0;
        for (int k = 0; k < q; ++k) r.alpha[k] = 2.0 * k + 1.0;
        for (int k = 1; k <= q; ++k) r.beta[k] = double(k) * k;
        break;
    case BasisKind::HermiteGauss:
        r.beta[0] = std::sqrt(std::numbers::pi);
        for (int k = 1; k <= q; ++k) r.beta[k] = 0.5 * k;
        break;
    default:
        throw std::invalid_argument("gauss_rule: no continuous recurrence for this class");
    }
    return r;
}

// p_q(u)/p_q'(u) and log of sum_{k<q} p_k(u)^2 for the orthonormal family
struct NodeEval {
    double newton_step;
    double log_christoffel_sum;
};

NodeEval evaluate_at(const Recurrence& r, int q, double u) {
    double p_prev = 0.0, p = 1.0 / std::sqrt(r.beta[0]);
    double d_prev = 0.0, d = 0.0;
    double sum = 0.0, log_scale = 0.0;
    constexpr double big = 1e150;
    for (int k = 0; k < q; ++k) {
        sum += p * p;
        double sb_next = std::sqrt(r.beta[k + 1]);
        double sb = k > 0 ? std::sqrt(r.beta[k]) : 0.0;
        double p_next = ((u - r.alpha[k]) * p - sb * p_prev) / sb_next;
        double d_next = ((u - r.alpha[k]) * d + p - sb * d_prev) / sb_next;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
        if (std::abs(p) > big) {
            p *= 1.0 / big;
            p_prev *= 1.0 / big;
            d *= 1.0 / big;
            d_prev *= 1.0 / big;
            sum *= 1.0 / big / big;
            log_scale += 2.0 * std::log(big);
        }
    }
    return {p / d, std::log(sum) + log_scale};
}

QuadratureRule continuous_rule(BasisKind kind, int q, const QuadParams& params) {
    Recurrence rec = standard_recurrence(kind, q);
    Eigen::VectorXd diag(q), sub(std::max(q - 1, 0));
    for (int k = 0; k < q; ++k) diag[k] = rec.alpha[k];
    for (int k = 0; k + 1 < q; ++k) sub[k] = std::sqrt(rec.beta[k + 1]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("gauss_rule: tridiagonal eigensolve failed");

    std::vector<double> u(q), w(q);
    for (int i = 0; i < q; ++i) {
        double x = es.eigenvalues()[i];
        for (int it = 0; it < 3; ++it) {
            double step = evaluate_at(rec, q, x).newton_step;
            if (!std::isfinite(step)) break;
            x -= step;
        }
        u[i] = x;
        w[i] = std::exp(-evaluate_at(rec, q, x).log_christoffel_sum);
    }

    QuadratureRule rule;
    rule.weight_class = kind;
    rule.dim = 1;
    rule.order = q;
    rule.nodes.resize(q);
    rule.weights.resize(q);
    switch (kind) {
    case BasisKind::Legendre01:
        for (int i = 0; i < q; ++i) {
            rule.nodes[i] = 0.5 * (u[i] + 1.0);
            rule.weights[i] = 0.5 * w[i];
        }
        for (int i = 0; i < q / 2; ++i) {
            double wm = 0.5 * (rule.weights[i] + rule.weights[q - 1 - i]);
            rule.weights[i] = rule.weights[q - 1 - i] = wm;
        }
        break;
    case BasisKind::LaguerreExp:
        for (int i = 0; i < q; ++i) {
            rule.nodes[i] = u[i] / params.gamma;
            rule.weights[i] = w[i] / params.gamma;
        }
        break;
    case BasisKind::HermiteGauss: {
        double s = std::sqrt(params.gamma);
        for (int i = 0; i < q / 2; ++i) {
            double a = 0.5 * (u[q - 1 - i] - u[i]);
            double wm = 0.5 * (w[i] + w[q - 1 - i]);
            u[i] = -a;
            u[q - 1 - i] = a;
            w[i] = w[q - 1 - i] = wm;
        }
        if (q % 2 == 1) u[q / 2] = 0.0;
        for (int i = 0; i < q; ++i) {
            rule.nodes[i] = u[i] / s;
            rule.weights[i] = w[i] / s;
        }
        break;
    }
    default:
        break;
    }
    for (int i = 1; i < q; ++i)
        if (!(rule.nodes[i] > rule.nodes[i - 1])) throw NumericalError("gauss_rule: nodes not increasing");
    return rule;
}

double poisson_upper_tail(double rho, int v) {
    // P(X > v)
    double w = std::exp(-rho);
    for (int t = 1; t <= v; ++t) w *= rho / t;
    double tail = 0.0;
    for (int t = v + 1; t < v + 2000; ++t) {
        w *= rho / t;
        tail += w;
        if (t > rho && w < 1e-30 * tail) break;
    }
    return tail;
}

}  // namespace

int charlier_default_v(double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("charlier: rho must be positive");
    int v = 10;
    while (poisson_upper_tail(rho, v) >= 1e-14) ++v;
    return v;
}

int charlier_v_for_degree(double rho, int degree) {
    if (!(rho > 0.0)) throw std::invalid_argument("charlier: rho must be positive");
    if (degree < 0) throw std::invalid_argument("charlier: negative degree");
    BasisFamily fam = BasisFamily::charlier(rho);
    fam.max_degree = std::max(fam.max_degree, degree);
    // terms w(x) sum_k phi_k(x)^2, summed from the top down
    std::vector<double> terms;
    std::vector<double> phi(degree + 1);
    double w = std::exp(-rho);
    for (int x = 0;; ++x) {
        if (x > 0) w *= rho / x;
        eval_all(fam, degree, double(x), phi);
        double s = 0.0;
        for (double p : phi) s += p * p;
        if (!std::isfinite(s))
            throw NumericalError("charlier: basis values overflow before the Poisson tail is reached; lower the degree");
        terms.push_back(w * s);
        if (x > rho + degree + 20 && w * s < 1e-40) break;
        if (x > 100000) throw NumericalError("charlier: truncation search did not terminate");
    }
    double tail = 0.0;
    int v = static_cast<int>(terms.size()) - 1;
    for (int x = static_cast<int>(terms.size()) - 1; x >= 0; --x) {
        if (tail + terms[x] >= 1e-14) {
            v = x;
            break;
        }
        tail += terms[x];
    }
    return std::max(v, charlier_default_v(rho));
}

QuadratureRule gauss_rule(BasisKind weight_class, int order, const QuadParams& params) {
    if (order < 1) throw std::invalid_argument("gauss_rule: order must be >= 1");
    switch (weight_class) {
    case BasisKind::Legendre01:
        return continuous_rule(weight_class, order, params);
    case BasisKind::LaguerreExp:
    case BasisKind::HermiteGauss:
        if (!(params.gamma > 0.0)) throw std::invalid_argument("gauss_rule: missing or invalid gamma");
        return continuous_rule(weight_class, order, params);
    case BasisKind::CharlierPoisson: {
        if (!(params.rho > 0.0)) throw std::invalid_argument("gauss_rule: missing or invalid rho");
        int v = params.v > 0 ? params.v : charlier_default_v(params.rho);
        QuadratureRule rule;
        rule.weight_class = weight_class;
        rule.order = v + 1;
        rule.nodes.resize(v + 1);
        rule.weights.resize(v + 1);
        double w = std::exp(-params.rho);
        for (int t = 0; t <= v; ++t) {
            if (t > 0) w *= params.rho / t;
            rule.nodes[t] = t;
            rule.weights[t] = w;
        }
        return rule;
    }
    case BasisKind::TensorHermite:
        throw std::invalid_argument("gauss_rule: use product_rule for the tensor class");
    }
    throw std::invalid_argument("gauss_rule: unknown class");
}

QuadratureRule gauss_rule(const BasisFamily& family, int order, int charlier_v) {
    family.validate();
    QuadParams p{family.gamma, family.rho, charlier_v};
    if (family.kind == BasisKind::TensorHermite)
        return product_rule(gauss_rule(BasisKind::HermiteGauss, order, p), family.dim);
    return gauss_rule(family.kind, order, p);
}

QuadratureRule legendre_on(double a, double b, int order) {
    if (!(b >= a)) throw std::invalid_argument("legendre_on: empty interval");
    static thread_local std::vector<QuadratureRule> cache;
    const QuadratureRule* base = nullptr;
    for (const auto& r : cache)
        if (r.order == order) base = &r;
    if (!base) {
        cache.push_back(gauss_rule(BasisKind::Legendre01, order));
        base = &cache.back();
    }
    QuadratureRule out = *base;
    double h = b - a;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.nodes[i] = a + h * base->nodes[i];
        out.weights[i] = h * base->weights[i];
    }
    return out;
}

double integrate_2d(const std::function<double(double, double)>& f, const QuadratureRule& rule) {
    if (rule.dim != 1) throw std::invalid_argument("integrate_2d: needs a 1-D rule");
    double total = 0.0;
    for (std::size_t p = 0; p < rule.size(); ++p) {
        double row = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) row += rule.weights[q] * f(rule.nodes[p], rule.nodes[q]);
        total += rule.weights[p] * row;
    }
    return total;
}

QuadratureRule product_rule(const QuadratureRule& rule_1d, int d) {
    if (rule_1d.dim != 1) throw std::invalid_argument("product_rule: input must be 1-D");
    if (d < 1) throw std::invalid_argument("product_rule: d must be >= 1");
    if (d > 3) throw std::invalid_argument("product_rule: d > 3 not supported");
    QuadratureRule out;
    out.weight_class = rule_1d.weight_class == BasisKind::HermiteGauss && d > 1 ? BasisKind::TensorHermite
                                                                               : rule_1d.weight_class;
    out.dim = d;
    out.order = rule_1d.order;
    std::size_t q = rule_1d.size();
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= q;
    out.nodes.resize(total * d);
    out.weights.resize(total);
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t n = 0; n < total; ++n) {
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
            out.nodes[n * d + i] = rule_1d.nodes[idx[i]];
            w *= rule_1d.weights[idx[i]];
        }
        out.weights[n] = w;
        for (int i = d - 1; i >= 0; --i) {
            if (++idx[i] < q) break;
            idx[i] = 0;
        }
    }
    return out;
}

}  // namespace spectrakit
