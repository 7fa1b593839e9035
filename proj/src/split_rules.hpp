#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "spectrakit/polybasis.hpp"
#include "spectrakit/quadrature.hpp"

namespace spectrakit::detail {

struct Nodes {
    std::vector<double> x, w;
};

// rule for f(t) w(t) dt over [0,1] (Legendre01) or [0,inf) with w = exp(-gamma t)
// (LaguerreExp), broken at the ascending points in breaks; q nodes per piece,
// the last half-line piece uses the Laguerre rule tail shifted to its start
inline Nodes piecewise_rule(const BasisFamily& basis, const std::vector<double>& breaks, int q,
                            const QuadratureRule& tail) {
    Nodes out;
    double a = 0.0;
    auto add_legendre = [&](double lo, double hi) {
        if (hi <= lo) return;
        QuadratureRule r = legendre_on(lo, hi, q);
        for (std::size_t i = 0; i < r.size(); ++i) {
            out.x.push_back(r.nodes[i]);
            double w = r.weights[i];
            if (basis.kind == BasisKind::LaguerreExp) w *= std::exp(-basis.gamma * r.nodes[i]);
            out.w.push_back(w);
        }
    };
    for (double b : breaks) {
        add_legendre(a, b);
        a = std::max(a, b);
    }
    if (basis.kind == BasisKind::Legendre01) {
        add_legendre(a, 1.0);
    } else {
        double shift = std::exp(-basis.gamma * a);
        for (std::size_t i = 0; i < tail.size(); ++i) {
            out.x.push_back(a + tail.nodes[i]);
            out.w.push_back(shift * tail.weights[i]);
        }
    }
    return out;
}

}  // namespace spectrakit::detail
