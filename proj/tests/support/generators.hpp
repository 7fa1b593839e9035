#pragma once

// small hand-rolled generators for the property tests

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "spectrakit/kernels.hpp"
#include "spectrakit/polybasis.hpp"

namespace gen {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng_); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

// random coordinate inside a support; scale is the spread on unbounded supports
inline double coordinate(Rng& r, spectrakit::Support s, double scale = 2.0) {
    using spectrakit::Support;
    switch (s) {
    case Support::UnitInterval: return r.uniform(0.0, 1.0);
    case Support::HalfLine: return -scale * std::log(r.uniform(1e-12, 1.0));
    case Support::Naturals: return static_cast<double>(r.integer(0, 12));
    default: return scale * r.normal();
    }
}

inline std::vector<double> point(Rng& r, const spectrakit::KernelSpec& k, double scale = 2.0) {
    std::vector<double> p(k.dim());
    auto s = spectrakit::kernel_support(k);
    if (s == spectrakit::Support::RealSpace || s == spectrakit::Support::Any) s = spectrakit::Support::RealLine;
    for (double& x : p) x = coordinate(r, s, scale);
    return p;
}

struct Case {
    spectrakit::KernelSpec kernel;
    spectrakit::BasisFamily basis;
};

// a catalog kernel with random admissible parameters and its natural basis
inline Case catalog_case(Rng& r, spectrakit::KernelId id) {
    using namespace spectrakit;
    Case c;
    c.kernel.id = id;
    switch (natural_basis(id)) {
    case BasisKind::Legendre01: c.basis = BasisFamily::legendre01(); break;
    case BasisKind::LaguerreExp: c.basis = BasisFamily::laguerre(r.uniform(0.5, 2.0)); break;
    case BasisKind::HermiteGauss:
        c.basis = BasisFamily::hermite(id == KernelId::HJM_C ? r.uniform(1.5, 3.0) : r.uniform(0.5, 3.0));
        break;
    case BasisKind::CharlierPoisson:
        c.kernel.tau = r.uniform(0.5, 5.0);
        c.basis = BasisFamily::charlier(r.uniform(0.5, 2.0));
        break;
    case BasisKind::TensorHermite:
        c.kernel.d = r.integer(1, 2);
        c.basis = c.kernel.d == 1 ? BasisFamily::hermite(r.uniform(0.5, 2.0))
                                  : BasisFamily::tensor_hermite(r.uniform(0.5, 2.0), c.kernel.d);
        break;
    }
    return c;
}

inline Eigen::MatrixXd symmetric(Rng& r, int n) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = r.normal();
    return a;
}

// positive eigenvalue sequence, descending, spread over several decades
inline std::vector<double> spectrum(Rng& r, int count) {
    std::vector<double> v(count);
    for (double& x : v) x = std::pow(10.0, r.uniform(-4.0, 0.0));
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

}  // namespace gen
