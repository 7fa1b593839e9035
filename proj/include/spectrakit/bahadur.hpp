#pragma once

#include <functional>
#include <string>
#include <vector>

namespace spectrakit {

// how b was normalized by the caller:
//   RootN: b = plim T_n / sqrt(n), slope a_T b^2
//   N:     b = plim T_n / n,       slope a_T b
// with a_T = 1 / lambda_1 in both cases
enum class SlopeConvention { RootN, N };

struct SlopeInputs {
    double lambda1 = 1.0;
    std::function<double(double)> b;
    std::function<double(double)> kl;  // Kullback-Leibler distance to the null class
    double h = 1e-3;
    SlopeConvention convention = SlopeConvention::RootN;

    // empty when consistent; lambda1 <= 0 or h <= 0 throw instead
    std::vector<std::string> diagnose() const;
};

double approx_slope(const SlopeInputs& in, double theta);

// b''(0) theta^2 / (2 lambda1), b''(0) by Richardson-refined central differences
double local_slope(const SlopeInputs& in, double theta);
double second_derivative_at_zero(const std::function<double(double)>& f, double h);

struct Efficiency {
    double value = 0.0;
    std::string warning;  // set when value exceeds 1 + 1e-6
};

// local_slope / (2 kl(theta))
Efficiency local_efficiency(const SlopeInputs& in, double theta);

// alternatives used with the exponentiality tests (densities on x >= 0)
namespace alternatives {
double weibull(double x, double theta);
double gamma(double x, double theta);
double makeham(double x, double theta);
double linear_failure_rate(double x, double theta);
double emnw(double x, double theta, double beta);  // theta in (0, 1/(beta-1)]

// alternatives to a null density f with distribution function F
using Density = std::function<double(double)>;
double lehmann(double x, double theta, const Density& f, const Density& F);
double ley_paindaveine_1(double x, double theta, const Density& f, const Density& F);
double ley_paindaveine_2(double x, double theta, const Density& f, const Density& F);
double contamination(double x, double theta, double mu, double sigma, const Density& f);
}  // namespace alternatives

}  // namespace spectrakit
