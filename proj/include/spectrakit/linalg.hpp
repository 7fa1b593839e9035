#pragma once

#include <functional>

#include <Eigen/Dense>

#include "spectrakit/parallel.hpp"

namespace spectrakit {

struct EigenPairs {
    Eigen::VectorXd values;   // descending
    Eigen::MatrixXd vectors;  // columns, empty when not requested
};

// dense symmetric eigensolver (Eigen's Householder tridiagonalization + QR)
EigenPairs sym_eig(const Eigen::MatrixXd& m, bool vectors = true);

double max_asymmetry(const Eigen::MatrixXd& m);

// k largest eigenvalues of a symmetric operator given by its matvec; Lanczos
// with full reorthogonalization, deterministic start
Eigen::VectorXd lanczos_top(const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& matvec,
                            Eigen::Index n, int k, double tol = 1e-13);

// y = m x with a fixed per-row summation order (bit-identical across thread counts)
void symv(const Eigen::MatrixXd& m, const Eigen::VectorXd& x, Eigen::VectorXd& y, Execution exec);

// k largest eigenvalues of a dense symmetric matrix; dense solve below a size
// threshold, Lanczos above it
Eigen::VectorXd top_eigenvalues(const Eigen::MatrixXd& m, int k, Execution exec);

}  // namespace spectrakit
