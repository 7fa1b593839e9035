#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "spectrakit/kernels.hpp"
#include "spectrakit/parallel.hpp"
#include "spectrakit/polybasis.hpp"
#include "spectrakit/spectrum.hpp"

namespace spectrakit {

struct MCConfig {
    std::int64_t N = 1000;
    int replications = 1;
    std::uint64_t seed = 0;
    KernelSpec kernel;
    BasisFamily weight;  // weight class and parameters; samples come from w / mass
    int top = 5;

    void validate() const;
};

// seed of replication r: a SplitMix64 hash of (seed, r)
std::uint64_t replication_seed(std::uint64_t seed, int replication);

// one replication of the Monte Carlo Nystrom method; eigenvalues scaled by the weight mass
Spectrum nystrom_mc(const MCConfig& cfg, int replication = 0, Execution exec = Execution::Parallel);

struct MCSummary {
    std::vector<double> mean;  // per rank
    std::vector<double> sd;    // sample standard deviation (divisor reps - 1)
    std::vector<std::vector<double>> values;  // [replication][rank]
};

MCSummary mc_replicate(const MCConfig& cfg, Execution exec = Execution::Parallel);

enum class GridStep {
    PointCount,  // interval length / number of grid points
    Spacing,     // A / m, the node spacing
};

struct GridConfig {
    double A = 1.0;
    int m = 100;
    KernelSpec kernel;
    // LaguerreExp: [0,A] with w = exp(-gamma t); HermiteGauss: [-A,A] with w = exp(-gamma t^2).
    // gamma = 0 gives the unit weight.
    BasisKind weight_class = BasisKind::HermiteGauss;
    double gamma = 1.0;
    GridStep step = GridStep::PointCount;
    int top = 5;

    void validate() const;
    std::vector<double> nodes() const;
    double step_size() const;
};

// symmetrized grid matrix K(x_i,x_j) sqrt(w_i w_j) (without the step factor)
Eigen::MatrixXd grid_matrix(const GridConfig& cfg, Execution exec = Execution::Parallel);
Eigen::MatrixXd grid_matrix_reference(const GridConfig& cfg);

Spectrum grid_spectrum(const GridConfig& cfg, Execution exec = Execution::Parallel);

}  // namespace spectrakit
