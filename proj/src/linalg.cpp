#include "spectrakit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "spectrakit/errors.hpp"

namespace spectrakit {

double max_asymmetry(const Eigen::MatrixXd& m) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = j + 1; i < m.rows(); ++i) worst = std::max(worst, std::abs(m(i, j) - m(j, i)));
    return worst;
}

EigenPairs sym_eig(const Eigen::MatrixXd& m, bool vectors) {
    if (m.rows() != m.cols()) throw std::invalid_argument("sym_eig: matrix is not square");
    double scale = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
    if (!std::isfinite(scale)) throw std::invalid_argument("sym_eig: non-finite entries");
    if (max_asymmetry(m) > 1e-10 * std::max(scale, 1e-300))
        throw std::invalid_argument("sym_eig: matrix is not symmetric");
    EigenPairs out;
    if (m.rows() == 0) return out;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, vectors ? Eigen::ComputeEigenvectors
                                                                  : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("sym_eig: eigensolver did not converge");
    out.values = es.eigenvalues().reverse();
    if (vectors) out.vectors = es.eigenvectors().rowwise().reverse();
    return out;
}

void symv(const Eigen::MatrixXd& m, const Eigen::VectorXd& x, Eigen::VectorXd& y, Execution exec) {
    const Eigen::Index n = m.rows();
    y.resize(n);
    const double* a = m.data();
    // column-major and symmetric: row i equals column i
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (exec == Execution::Parallel)
    for (Eigen::Index i = 0; i < n; ++i) {
        const double* col = a + i * n;
        double s = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) s += col[j] * x[j];
        y[i] = s;
    }
}

Eigen::VectorXd lanczos_top(const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& matvec,
                            Eigen::Index n, int k, double tol) {
    if (k < 1) throw std::invalid_argument("lanczos: k must be >= 1");
    if (n < 1) throw std::invalid_argument("lanczos: empty operator");
    k = static_cast<int>(std::min<Eigen::Index>(k, n));
    std::mt19937_64 rng(0x5eed5eedULL);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    auto random_vector = [&]() {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * unif(rng);
        return v;
    };

    const Eigen::Index cap = std::min<Eigen::Index>(n, std::max<Eigen::Index>(20 * k + 200, 400));
    Eigen::MatrixXd basis(n, cap);
    std::vector<double> alpha, beta;
    auto orthogonalize = [&](Eigen::VectorXd& w, Eigen::Index cols) {
        // two passes of classical Gram-Schmidt against the whole basis
        for (int pass = 0; pass < 2; ++pass) {
            Eigen::VectorXd c = basis.leftCols(cols).transpose() * w;
            w -= basis.leftCols(cols) * c;
        }
    };
    auto ritz = [&](Eigen::Index m, Eigen::VectorXd& vals, Eigen::VectorXd& resid) {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        vals = es.eigenvalues().reverse();
        Eigen::MatrixXd vecs = es.eigenvectors().rowwise().reverse();
        resid = (beta[m - 1] * vecs.row(m - 1)).transpose().cwiseAbs();
    };

    Eigen::VectorXd v = random_vector();
    v.normalize();
    Eigen::VectorXd w(n), vals, resid;
    for (Eigen::Index m = 0; m < cap; ++m) {
        basis.col(m) = v;
        matvec(v, w);
        alpha.push_back(v.dot(w));
        orthogonalize(w, m + 1);
        double b = w.norm();
        double scale = 0.0;
        for (double a : alpha) scale = std::max(scale, std::abs(a));
        bool breakdown = b <= 1e-12 * std::max(scale, 1e-300);
        beta.push_back(breakdown ? 0.0 : b);
        Eigen::Index dim = m + 1;
        bool check = breakdown || dim == cap || (dim >= k + 2 && dim % 5 == 0);
        if (check) {
            ritz(dim, vals, resid);
            double top = std::max(std::abs(vals[0]), 1e-300);
            bool ok = true;
            for (int i = 0; i < std::min<Eigen::Index>(k, dim); ++i)
                if (resid[i] > tol * top) ok = false;
            if ((ok && dim >= std::min<Eigen::Index>(k, n)) || dim == n) {
                Eigen::VectorXd out = Eigen::VectorXd::Zero(k);
                for (int i = 0; i < std::min<Eigen::Index>(k, dim); ++i) out[i] = vals[i];
                return out;
            }
        }
        if (breakdown) {
            // invariant subspace reached: continue from a fresh orthogonal direction
            Eigen::VectorXd r = random_vector();
            orthogonalize(r, m + 1);
            double rn = r.norm();
            if (rn < 1e-300) break;
            v = r / rn;
        } else {
            v = w / b;
        }
    }
    throw NumericalError("lanczos: no convergence within the Krylov dimension cap");
}

Eigen::VectorXd top_eigenvalues(const Eigen::MatrixXd& m, int k, Execution exec) {
    if (m.rows() <= 400) {
        Eigen::VectorXd all = sym_eig(m, false).values;
        Eigen::VectorXd out = Eigen::VectorXd::Zero(k);
        for (int i = 0; i < std::min<Eigen::Index>(k, all.size()); ++i) out[i] = all[i];
        return out;
    }
    return lanczos_top([&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { symv(m, x, y, exec); }, m.rows(), k);
}

}  // namespace spectrakit
