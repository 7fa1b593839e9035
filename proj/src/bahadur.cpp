#include "spectrakit/bahadur.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spectrakit/errors.hpp"

namespace spectrakit {

namespace {

void check(const SlopeInputs& in) {
    if (!(in.lambda1 > 0.0) || !std::isfinite(in.lambda1)) throw std::invalid_argument("bahadur: lambda1 must be positive");
    if (!(in.h > 0.0)) throw std::invalid_argument("bahadur: step h must be positive");
    if (!in.b) throw std::invalid_argument("bahadur: missing limit function b");
}

}  // namespace

std::vector<std::string> SlopeInputs::diagnose() const {
    check(*this);
    std::vector<std::string> out;
    double b0 = b(0.0);
    if (std::abs(b0) > 1e-10) out.push_back("b(0) = " + std::to_string(b0) + " is not zero");
    return out;
}

double approx_slope(const SlopeInputs& in, double theta) {
    check(in);
    double v = in.b(theta);
    return in.convention == SlopeConvention::RootN ? v * v / in.lambda1 : v / in.lambda1;
}

double second_derivative_at_zero(const std::function<double(double)>& f, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("bahadur: step h must be positive");
    double f0 = f(0.0);
    auto d2 = [&](double s) { return (f(s) - 2.0 * f0 + f(-s)) / (s * s); };
    double a = d2(h), b = d2(0.5 * h);
    double scale = std::max(std::abs(b), 1e-8);
    if (std::abs(a - b) > 1e-4 * scale)
        throw NumericalError("bahadur: second difference unstable (h and h/2 disagree)");
    return (4.0 * b - a) / 3.0;
}

double local_slope(const SlopeInputs& in, double theta) {
    check(in);
    return second_derivative_at_zero(in.b, in.h) * theta * theta / (2.0 * in.lambda1);
}

Efficiency local_efficiency(const SlopeInputs& in, double theta) {
    check(in);
    if (!in.kl) throw std::invalid_argument("bahadur: missing Kullback-Leibler function");
    double k = in.kl(theta);
    if (!(k > 0.0)) throw std::invalid_argument("bahadur: kl(theta) must be positive");
    Efficiency e;
    e.value = local_slope(in, theta) / (2.0 * k);
    if (e.value > 1.0 + 1e-6) e.warning = "efficiency exceeds 1; inputs are inconsistent";
    return e;
}

namespace alternatives {

double weibull(double x, double theta) {
    if (x < 0.0) return 0.0;
    return std::exp(-std::pow(x, 1.0 + theta)) * (1.0 + theta) * std::pow(x, theta);
}

double gamma(double x, double theta) {
    if (x < 0.0) return 0.0;
    return std::pow(x, theta) * std::exp(-x) / std::tgamma(theta + 1.0);
}

double makeham(double x, double theta) {
    if (x < 0.0) return 0.0;
    return std::exp(-x - theta * std::expm1(x)) * (1.0 + theta * std::exp(x));
}

double linear_failure_rate(double x, double theta) {
    if (x < 0.0) return 0.0;
    return std::exp(-x - theta * x * x / 2.0) * (1.0 + theta * x);
}

double emnw(double x, double theta, double beta) {
    if (!(beta > 1.0) || !(theta > 0.0) || theta > 1.0 / (beta - 1.0))
        throw std::invalid_argument("emnw: need beta > 1 and 0 < theta <= 1/(beta-1)");
    if (x < 0.0) return 0.0;
    return (1.0 + theta) * std::exp(-x) - theta * beta * std::exp(-beta * x);
}

double lehmann(double x, double theta, const Density& f, const Density& F) {
    return (1.0 + theta) * std::pow(F(x), theta) * f(x);
}

double ley_paindaveine_1(double x, double theta, const Density& f, const Density& F) {
    double u = F(x);
    return f(x) * std::exp(-theta * (1.0 - u)) * (1.0 + theta * u);
}

double ley_paindaveine_2(double x, double theta, const Density& f, const Density& F) {
    return f(x) * (1.0 - theta * std::numbers::pi * std::cos(std::numbers::pi * F(x)));
}

double contamination(double x, double theta, double mu, double sigma, const Density& f) {
    if (!(sigma > 0.0)) throw std::invalid_argument("contamination: sigma must be positive");
    return (1.0 - theta) * f(x) + theta / sigma * f((x - mu) / sigma);
}

}  // namespace alternatives

}  // namespace spectrakit
