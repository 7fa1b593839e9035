#pragma once

#include <span>
#include <string>
#include <vector>

namespace spectrakit {

enum class BasisKind { Legendre01, LaguerreExp, HermiteGauss, CharlierPoisson, TensorHermite };

enum class Support { UnitInterval, HalfLine, RealLine, Naturals, RealSpace, Any };

struct BasisFamily {
    BasisKind kind = BasisKind::Legendre01;
    double gamma = 0.0;  // LaguerreExp, HermiteGauss, TensorHermite
    double rho = 0.0;    // CharlierPoisson
    int dim = 1;
    int max_degree = 200;

    static BasisFamily legendre01();
    static BasisFamily laguerre(double gamma);
    static BasisFamily hermite(double gamma);
    static BasisFamily charlier(double rho);
    static BasisFamily tensor_hermite(double gamma, int dim);

    Support support() const;
    // integral of the weight over the support (1 for the Poisson pmf)
    double weight_mass() const;
    double weight(std::span<const double> x) const;
    void validate() const;
};

struct MultiIndex {
    std::vector<int> components;
    int total_degree() const;
    bool operator==(const MultiIndex&) const = default;
};

// multi-indices with total degree <= n, ordered by (total degree, lexicographic)
std::vector<MultiIndex> multi_indices(int dim, int n);

// univariate families: phi_k(x)
double eval_basis(const BasisFamily& family, int k, double x);
// TensorHermite (any dim) or a univariate family with a 1-component index
double eval_basis(const BasisFamily& family, const MultiIndex& k, std::span<const double> x);

// phi_0(x)..phi_n(x) of a univariate family into out (size n+1)
void eval_all(const BasisFamily& family, int n, double x, std::span<double> out);
std::vector<double> eval_all(const BasisFamily& family, int n, double x);

std::string to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& name);
std::string to_string(Support s);

// per-coordinate family (TensorHermite -> HermiteGauss)
BasisKind univariate_kind(BasisKind kind);

}  // namespace spectrakit
