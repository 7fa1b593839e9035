#pragma once

#include <functional>
#include <span>
#include <vector>

#include "spectrakit/polybasis.hpp"

namespace spectrakit {

struct QuadParams {
    double gamma = 0.0;
    double rho = 0.0;
    int v = 0;  // Charlier truncation point; 0 = default
};

struct QuadratureRule {
    BasisKind weight_class = BasisKind::Legendre01;
    int dim = 1;
    int order = 0;               // nodes per dimension
    std::vector<double> nodes;   // size() * dim, point-major
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
    std::span<const double> point(std::size_t i) const {
        return {nodes.data() + i * dim, static_cast<std::size_t>(dim)};
    }
    double total_mass() const;
};

QuadratureRule gauss_rule(BasisKind weight_class, int order, const QuadParams& params = {});
QuadratureRule gauss_rule(const BasisFamily& family, int order, int charlier_v = 0);

// Gauss-Legendre on [a,b] with unit weight
QuadratureRule legendre_on(double a, double b, int order);

// smallest v >= 10 with Poisson(rho) mass above v below 1e-14
int charlier_default_v(double rho);
// truncation that also keeps phi_0..phi_degree orthonormal to 1e-12
int charlier_v_for_degree(double rho, int degree);

double integrate_2d(const std::function<double(double, double)>& f, const QuadratureRule& rule);

QuadratureRule product_rule(const QuadratureRule& rule_1d, int d);

}  // namespace spectrakit
