#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spectrakit/kernels.hpp"
#include "spectrakit/linalg.hpp"
#include "spectrakit/parallel.hpp"
#include "spectrakit/polybasis.hpp"
#include "spectrakit/spectrum.hpp"

namespace spectrakit {

struct GramOptions {
    int quad_order = 0;   // 0 = default_quad_order
    int charlier_v = 0;   // 0 = automatic truncation
    bool split_kinks = true;
    Execution exec = Execution::Parallel;
};

struct GramMatrix {
    Eigen::MatrixXd entries;
    std::vector<MultiIndex> indices;
    KernelSpec kernel;
    BasisFamily basis;
    int max_degree = 0;
    int quad_order = 0;
    int charlier_v = 0;

    int size() const { return static_cast<int>(entries.rows()); }
};

// max(64, 2*basis_size + 16), doubled for kinked kernels
int default_quad_order(int basis_size, bool kinked);
int basis_size(const BasisFamily& basis, int max_degree);

// Gram matrix on the polynomials of (total) degree <= max_degree
GramMatrix gram_matrix(const KernelSpec& kernel, const BasisFamily& basis, int max_degree,
                       const GramOptions& opts = {});
// straightforward serial evaluation entry by entry; reference for tests
GramMatrix gram_matrix_reference(const KernelSpec& kernel, const BasisFamily& basis, int max_degree,
                                 const GramOptions& opts = {});

struct RrOptions {
    GramOptions gram;
    bool vectors = true;
    bool parity_blocks = true;
};

Spectrum spectrum_from_gram(const GramMatrix& gram, const RrOptions& opts = {});
Spectrum rr_spectrum(const KernelSpec& kernel, const BasisFamily& basis, int max_degree, const RrOptions& opts = {});

struct SweepTable {
    std::vector<int> degrees;
    std::vector<std::vector<double>> rows;  // top_m values per degree
    bool monotone = true;
    double worst_decrease = 0.0;
};

SweepTable convergence_sweep(const KernelSpec& kernel, const BasisFamily& basis, const std::vector<int>& degrees,
                             int top_m, const RrOptions& opts = {});

// rank is 1-based
double eigenfunction_eval(const Spectrum& spectrum, int rank, std::span<const double> x);
double eigenfunction_eval(const Spectrum& spectrum, int rank, double x);

}  // namespace spectrakit
