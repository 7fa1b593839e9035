#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spectrakit/kernels.hpp"
#include "spectrakit/polybasis.hpp"

namespace spectrakit {

struct Provenance {
    std::string method;  // "rayleigh-ritz", "grid", "nystrom"
    KernelSpec kernel;
    BasisFamily basis;   // weight class and parameters
    int max_degree = 0;
    int basis_size = 0;
    int quad_order = 0;
    int charlier_v = 0;
    int clip_count = 0;
    // grid
    double grid_A = 0.0;
    int grid_m = 0;
    double grid_h = 0.0;
    // monte carlo
    std::int64_t mc_N = 0;
    int mc_replication = 0;
    std::uint64_t seed = 0;
};

struct Spectrum {
    std::vector<double> eigenvalues;   // descending, clipped at 0
    Eigen::MatrixXd coefficients;      // column i = Ritz vector of eigenvalue i (may be empty)
    std::vector<MultiIndex> indices;   // basis ordering of the coefficient rows
    Provenance provenance;
};

}  // namespace spectrakit
