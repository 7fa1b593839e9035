#include "spectrakit/polybasis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace spectrakit {

BasisFamily BasisFamily::legendre01() { return {BasisKind::Legendre01, 0.0, 0.0, 1}; }
BasisFamily BasisFamily::laguerre(double gamma) { return {BasisKind::LaguerreExp, gamma, 0.0, 1}; }
BasisFamily BasisFamily::hermite(double gamma) { return {BasisKind::HermiteGauss, gamma, 0.0, 1}; }
BasisFamily BasisFamily::charlier(double rho) { return {BasisKind::CharlierPoisson, 0.0, rho, 1}; }
BasisFamily BasisFamily::tensor_hermite(double gamma, int dim) {
    return {BasisKind::TensorHermite, gamma, 0.0, dim};
}

void BasisFamily::validate() const {
    switch (kind) {
    case BasisKind::LaguerreExp:
    case BasisKind::HermiteGauss:
    case BasisKind::TensorHermite:
        if (!(gamma > 0.0) || !std::isfinite(gamma))
            throw std::invalid_argument("basis: gamma must be positive");
        break;
    case BasisKind::CharlierPoisson:
        if (!(rho > 0.0) || !std::isfinite(rho))
            throw std::invalid_argument("basis: rho must be positive");
        break;
    case BasisKind::Legendre01:
        break;
    }
    if (dim < 1) throw std::invalid_argument("basis: dim must be >= 1");
    if (dim > 1 && kind != BasisKind::TensorHermite)
        throw std::invalid_argument("basis: dim > 1 requires the tensor Hermite family");
    if (max_degree < 0) throw std::invalid_argument("basis: negative degree bound");
}

Support BasisFamily::support() const {
    switch (kind) {
    case BasisKind::Legendre01: return Support::UnitInterval;
    case BasisKind::LaguerreExp: return Support::HalfLine;
    case BasisKind::HermiteGauss: return Support::RealLine;
    case BasisKind::CharlierPoisson: return Support::Naturals;
    case BasisKind::TensorHermite: return dim == 1 ? Support::RealLine : Support::RealSpace;
    }
    return Support::Any;
}

double BasisFamily::weight_mass() const {
    switch (kind) {
    case BasisKind::Legendre01: return 1.0;
    case BasisKind::LaguerreExp: return 1.0 / gamma;
    case BasisKind::HermiteGauss: return std::sqrt(std::numbers::pi / gamma);
    case BasisKind::CharlierPoisson: return 1.0;
    case BasisKind::TensorHermite: return std::pow(std::numbers::pi / gamma, 0.5 * dim);
    }
    return 0.0;
}

double BasisFamily::weight(std::span<const double> x) const {
    switch (kind) {
    case BasisKind::Legendre01: return 1.0;
    case BasisKind::LaguerreExp: return std::exp(-gamma * x[0]);
    case BasisKind::HermiteGauss: return std::exp(-gamma * x[0] * x[0]);
    case BasisKind::CharlierPoisson:
        return std::exp(-rho + x[0] * std::log(rho) - std::lgamma(x[0] + 1.0));
    case BasisKind::TensorHermite: {
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        return std::exp(-gamma * r2);
    }
    }
    return 0.0;
}

int MultiIndex::total_degree() const {
    int s = 0;
    for (int c : components) s += c;
    return s;
}

std::vector<MultiIndex> multi_indices(int dim, int n) {
    if (dim < 1) throw std::invalid_argument("multi_indices: dim must be >= 1");
    if (n < 0) throw std::invalid_argument("multi_indices: negative degree");
    std::vector<MultiIndex> out;
    std::vector<int> c(dim, 0);
    for (int deg = 0; deg <= n; ++deg) {
        // lexicographic ascending over compositions of deg into dim parts
        std::fill(c.begin(), c.end(), 0);
        c[dim - 1] = deg;
        while (true) {
            out.push_back({c});
            // next composition in lexicographic order
            int i = dim - 2;
            while (i >= 0) {
                int tail = 0;
                for (int j = i + 1; j < dim; ++j) tail += c[j];
                if (tail > 0) break;
                --i;
            }
            if (i < 0) break;
            int tail = 0;
            for (int j = i + 1; j < dim; ++j) tail += c[j];
            c[i] += 1;
            tail -= 1;
            for (int j = i + 1; j < dim; ++j) c[j] = 0;
            c[dim - 1] = tail;
        }
    }
    return out;
}

namespace {

void check_point(const BasisFamily& f, double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("basis: non-finite point");
    switch (f.kind) {
    case BasisKind::Legendre01:
        if (x < 0.0 || x > 1.0) throw std::invalid_argument("basis: point outside [0,1]");
        break;
    case BasisKind::LaguerreExp:
        if (x < 0.0) throw std::invalid_argument("basis: point outside [0,inf)");
        break;
    case BasisKind::CharlierPoisson:
        if (x < 0.0 || x != std::floor(x))
            throw std::invalid_argument("basis: point is not a nonnegative integer");
        break;
    default:
        break;
    }
}

void charlier_forward(double r, double x, int n, double* out) {
    out[0] = 1.0;
    if (n >= 1) out[1] = (x - r) / std::sqrt(r);
    for (int k = 1; k < n; ++k)
        out[k + 1] = ((x - k - r) * out[k] - std::sqrt(k * r) * out[k - 1]) / std::sqrt((k + 1.0) * r);
}

}  // namespace

void eval_all(const BasisFamily& family, int n, double x, std::span<double> out) {
    if (n < 0) throw std::invalid_argument("basis: negative degree");
    if (n > family.max_degree) throw std::invalid_argument("basis: degree beyond configured bound");
    if (out.size() < static_cast<std::size_t>(n + 1))
        throw std::invalid_argument("basis: output buffer too small");
    check_point(family, x);

    switch (family.kind) {
    case BasisKind::Legendre01: {
        double u = 2.0 * x - 1.0;
        out[0] = 1.0;
        if (n >= 1) out[1] = std::sqrt(3.0) * u;
        for (int k = 1; k < n; ++k) {
            double a = std::sqrt((2.0 * k + 1.0) * (2.0 * k + 3.0)) / (k + 1.0);
            double b = k / (k + 1.0) * std::sqrt((2.0 * k + 3.0) / (2.0 * k - 1.0));
            out[k + 1] = a * u * out[k] - b * out[k - 1];
        }
        break;
    }
    case BasisKind::LaguerreExp: {
        double u = family.gamma * x;
        double s = std::sqrt(family.gamma);
        out[0] = s;
        if (n >= 1) out[1] = s * (1.0 - u);
        for (int k = 1; k < n; ++k)
            out[k + 1] = ((2.0 * k + 1.0 - u) * out[k] - k * out[k - 1]) / (k + 1.0);
        break;
    }
    case BasisKind::HermiteGauss:
    case BasisKind::TensorHermite: {
        double u = std::sqrt(family.gamma) * x;
        out[0] = std::pow(family.gamma / std::numbers::pi, 0.25);
        if (n >= 1) out[1] = std::sqrt(2.0) * u * out[0];
        for (int k = 1; k < n; ++k)
            out[k + 1] = std::sqrt(2.0 / (k + 1.0)) * u * out[k] - std::sqrt(k / (k + 1.0)) * out[k - 1];
        break;
    }
    case BasisKind::CharlierPoisson: {
        // forward recurrence up to degree x; past that phi_k(x) is the minimal
        // solution, so use the self-duality C_k(x) = (-1)^(k+x) C_x(k)
        double r = family.rho;
        int xi = static_cast<int>(x);
        int m = std::min(n, xi);
        charlier_forward(r, x, m, out.data());
        if (n > xi) {
            std::vector<double> dual(xi + 1);
            for (int k = xi + 1; k <= n; ++k) {
                charlier_forward(r, double(k), xi, dual.data());
                double f = std::exp(0.5 * ((k - xi) * std::log(r) - std::lgamma(k + 1.0) + std::lgamma(xi + 1.0)));
                out[k] = ((k + xi) % 2 ? -f : f) * dual[xi];
            }
        }
        break;
    }
    }
}

std::vector<double> eval_all(const BasisFamily& family, int n, double x) {
    std::vector<double> out(n < 0 ? 0 : n + 1);
    eval_all(family, n, x, out);
    return out;
}

double eval_basis(const BasisFamily& family, int k, double x) {
    family.validate();
    if (family.kind == BasisKind::TensorHermite && family.dim > 1)
        throw std::invalid_argument("basis: tensor family needs a multi-index");
    auto v = eval_all(family, k, x);
    return v[k];
}

double eval_basis(const BasisFamily& family, const MultiIndex& k, std::span<const double> x) {
    family.validate();
    if (static_cast<int>(k.components.size()) != family.dim || static_cast<int>(x.size()) != family.dim)
        throw std::invalid_argument("basis: index/point dimension mismatch");
    double prod = 1.0;
    for (int i = 0; i < family.dim; ++i) {
        int ki = k.components[i];
        if (ki < 0) throw std::invalid_argument("basis: negative index component");
        auto v = eval_all(family, ki, x[i]);
        prod *= v[ki];
    }
    return prod;
}

std::string to_string(BasisKind kind) {
    switch (kind) {
    case BasisKind::Legendre01: return "legendre01";
    case BasisKind::LaguerreExp: return "laguerre";
    case BasisKind::HermiteGauss: return "hermite";
    case BasisKind::CharlierPoisson: return "charlier";
    case BasisKind::TensorHermite: return "tensor_hermite";
    }
    return "?";
}

BasisKind basis_kind_from_string(const std::string& name) {
    if (name == "legendre01" || name == "legendre") return BasisKind::Legendre01;
    if (name == "laguerre" || name == "laguerre_exp") return BasisKind::LaguerreExp;
    if (name == "hermite" || name == "hermite_gauss") return BasisKind::HermiteGauss;
    if (name == "charlier" || name == "charlier_poisson") return BasisKind::CharlierPoisson;
    if (name == "tensor_hermite") return BasisKind::TensorHermite;
    throw std::invalid_argument("unknown basis '" + name + "'");
}

std::string to_string(Support s) {
    switch (s) {
    case Support::UnitInterval: return "[0,1]";
    case Support::HalfLine: return "[0,inf)";
    case Support::RealLine: return "R";
    case Support::Naturals: return "N0";
    case Support::RealSpace: return "R^d";
    case Support::Any: return "any";
    }
    return "?";
}

BasisKind univariate_kind(BasisKind kind) {
    return kind == BasisKind::TensorHermite ? BasisKind::HermiteGauss : kind;
}

}  // namespace spectrakit
