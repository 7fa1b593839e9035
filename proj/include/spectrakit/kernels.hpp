#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "spectrakit/polybasis.hpp"

namespace spectrakit {

enum class KernelId {
    CvM,
    HN2000,
    EKS2021,
    BH_rho,
    K0_exp,
    K2001,
    EbnerKZ,
    HJM_C,
    DEH_K,
    VonMises,
    BHEP,
    Constant,  // K == value, for testing
};

struct KernelSpec {
    KernelId id = KernelId::CvM;
    double tau = 1.0;    // VonMises concentration
    double mu = 0.0;     // VonMises location, only 0 is supported
    int d = 1;           // BHEP dimension
    double value = 1.0;  // Constant

    void validate() const;
    int dim() const { return id == KernelId::BHEP ? d : 1; }
};

Support kernel_support(const KernelSpec& spec);
bool is_kinked(KernelId id);
// K(-s,-t) = K(s,t); lets Hermite bases split into parity blocks
bool is_reflection_symmetric(KernelId id);
BasisKind natural_basis(KernelId id);
bool support_compatible(const KernelSpec& spec, const BasisFamily& basis);

double kernel_eval(const KernelSpec& spec, std::span<const double> s, std::span<const double> t);
double kernel_eval(const KernelSpec& spec, double s, double t);
// same as kernel_eval without argument checks, for inner loops
double kernel_eval_unchecked(const KernelSpec& spec, double s, double t);

std::string to_string(KernelId id);
KernelId kernel_id_from_string(const std::string& name);
std::vector<KernelId> catalog();  // the eleven catalog kernels

// modified Bessel I_nu(x) for real nu > -1 by the ascending series
double bessel_i(double nu, double x);
// q(s;tau) = I_|s|(tau) / I_0(tau)
double bessel_ratio(double s, double tau);
// d/ds q(s;tau), central difference h = 1e-5 on the real-order series
double bessel_ratio_dorder(double s, double tau);
// d/dtau q(s;tau) for integer s >= 0
double bessel_ratio_dtau(int s, double tau);

struct SeparableFactor {
    enum class Kind { Bivariate, Product };
    Kind kind = Kind::Bivariate;
    std::function<double(double, double)> bivariate;
    std::function<double(double)> left;
    std::function<double(double)> right;

    double operator()(double s, double t) const {
        return kind == Kind::Bivariate ? bivariate(s, t) : left(s) * right(t);
    }
};

struct SeparableTerm {
    double coeff = 1.0;
    std::vector<SeparableFactor> factors;  // one per coordinate
};

struct SeparableForm {
    int dim = 1;
    std::vector<SeparableTerm> terms;
    double eval(std::span<const double> s, std::span<const double> t) const;
};

SeparableForm separable_form(const KernelSpec& spec);

}  // namespace spectrakit
