#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spectrakit/kernels.hpp"
#include "spectrakit/parallel.hpp"
#include "spectrakit/polybasis.hpp"

namespace spectrakit {

// law of W = sum_j lambda_j N_j^2
class TailModel {
public:
    // sorts descending; rejects negative, non-finite or all-zero input
    explicit TailModel(std::vector<double> eigenvalues, std::string source = {});

    const std::vector<double>& eigenvalues() const { return lambda_; }
    const std::string& source() const { return source_; }
    double lambda_max() const { return lambda_.front(); }

private:
    std::vector<double> lambda_;
    std::string source_;
};

enum class CumulantRoute { EigenPowerSums, KernelIterates };
std::string to_string(CumulantRoute r);

struct CumulantSet {
    std::array<double, 4> kappa{};
    CumulantRoute route = CumulantRoute::EigenPowerSums;
};

// kappa_r = 2^(r-1) (r-1)! sum lambda^r
CumulantSet cumulants_from_eigs(const TailModel& model);
CumulantSet cumulants_from_eigs(const std::vector<double>& eigenvalues);

// 2^(r-1) (r-1)! trace(B^r) for a symmetric matrix
std::array<double, 4> trace_cumulants(const Eigen::MatrixXd& b);

struct DirectOptions {
    int quad_order = 0;  // 0 = 128 (continuous weights)
    int charlier_v = 0;  // 0 = default Poisson truncation
    Execution exec = Execution::Parallel;
};

// cumulants straight from the kernel: trace of the weighted node matrix
// B_pq = K(t_p,t_q) sqrt(w_p w_q) for smooth kernels, kink-split iterated
// kernels for kernels with a diagonal kink
CumulantSet cumulants_direct(const KernelSpec& kernel, const BasisFamily& weight, const DirectOptions& opts = {});
// the node matrix used by the smooth route
Eigen::MatrixXd weighted_node_matrix(const KernelSpec& kernel, const BasisFamily& weight, const DirectOptions& opts = {});

// P(W > x) by Imhof's inversion formula; absolute error target 1e-8
double imhof_tail(const TailModel& model, double x);

// x with P(W <= x) = p
double quantile(const TailModel& model, double p);

// adds k equal eigenvalues carrying the trace deficit kappa1_total - sum(lambda); heuristic
TailModel trace_completed(const TailModel& model, double kappa1_total, int k);

struct Simulation {
    std::vector<double> draws;
    std::vector<double> probabilities;
    std::vector<double> quantiles;
    double mean = 0.0;
};

// reps draws of W; deterministic in (seed, reps) for any thread count
Simulation simulate_w(const TailModel& model, std::int64_t reps, std::uint64_t seed,
                      const std::vector<double>& probabilities = {}, Execution exec = Execution::Parallel);
double empirical_quantile(std::vector<double> sample, double p);

}  // namespace spectrakit
