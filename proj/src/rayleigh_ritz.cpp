#include "spectrakit/rayleigh_ritz.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "spectrakit/errors.hpp"
#include "spectrakit/quadrature.hpp"
#include "split_rules.hpp"

namespace spectrakit {

int default_quad_order(int basis_size, bool kinked) {
    int q = std::max(64, 2 * basis_size + 16);
    return kinked ? 2 * q : q;
}

int basis_size(const BasisFamily& basis, int max_degree) {
    if (max_degree < 0) throw std::invalid_argument("basis size: negative degree");
    if (basis.kind != BasisKind::TensorHermite) return max_degree + 1;
    // C(n+d, d)
    long long c = 1;
    for (int i = 1; i <= basis.dim; ++i) c = c * (max_degree + i) / i;
    return static_cast<int>(c);
}

namespace {

using detail::Nodes;

void check_inputs(const KernelSpec& kernel, const BasisFamily& basis, int max_degree) {
    kernel.validate();
    basis.validate();
    if (max_degree < 0) throw std::invalid_argument("gram_matrix: negative degree");
    if (max_degree > basis.max_degree) throw std::invalid_argument("gram_matrix: degree beyond configured bound");
    if (!support_compatible(kernel, basis))
        throw std::invalid_argument("gram_matrix: kernel support " + to_string(kernel_support(kernel)) +
                                    " does not match basis support " + to_string(basis.support()));
    if (basis.dim > 1 && kernel.id != KernelId::BHEP && kernel.id != KernelId::Constant)
        throw std::invalid_argument("gram_matrix: kernel has no separable form for d > 1");
}

bool can_split(const KernelSpec& kernel, const BasisFamily& basis) {
    return is_kinked(kernel.id) &&
           (basis.kind == BasisKind::Legendre01 || basis.kind == BasisKind::LaguerreExp);
}

Nodes split_nodes(const BasisFamily& basis, double s, int q, const QuadratureRule& tail) {
    return detail::piecewise_rule(basis, {s}, q, tail);
}

struct UnivariateSetup {
    QuadratureRule outer;
    QuadratureRule tail;  // Laguerre rule for the split half-line
    bool split = false;
    int q = 0;
    int v = 0;
};

UnivariateSetup univariate_setup(const KernelSpec& kernel, const BasisFamily& basis, int max_degree,
                                 const GramOptions& opts) {
    UnivariateSetup st;
    int nb = max_degree + 1;
    if (basis.kind == BasisKind::CharlierPoisson) {
        st.v = opts.charlier_v > 0 ? opts.charlier_v : charlier_v_for_degree(basis.rho, max_degree);
        st.outer = gauss_rule(basis, 1, st.v);
        st.q = st.v + 1;
        return st;
    }
    st.q = opts.quad_order > 0 ? opts.quad_order : default_quad_order(nb, is_kinked(kernel.id));
    if (st.q < nb) throw std::invalid_argument("gram_matrix: quadrature order below basis size");
    st.outer = gauss_rule(basis, st.q);
    st.split = opts.split_kinks && can_split(kernel, basis);
    if (st.split && basis.kind == BasisKind::LaguerreExp) st.tail = st.outer;
    return st;
}

Eigen::MatrixXd basis_table(const BasisFamily& basis, int max_degree, const std::vector<double>& x) {
    Eigen::MatrixXd phi(max_degree + 1, static_cast<Eigen::Index>(x.size()));
    for (std::size_t p = 0; p < x.size(); ++p)
        eval_all(basis, max_degree, x[p], std::span<double>(phi.col(p).data(), max_degree + 1));
    return phi;
}

Eigen::MatrixXd assemble_univariate(const KernelSpec& kernel, const BasisFamily& basis, int max_degree,
                                    const UnivariateSetup& st, Execution exec) {
    const int nb = max_degree + 1;
    const auto& rule = st.outer;
    const Eigen::Index np = static_cast<Eigen::Index>(rule.size());
    Eigen::MatrixXd phi = basis_table(basis, max_degree, rule.nodes);
    Eigen::MatrixXd g(np, nb);  // g(p,k) = inner integral of K(s_p,t) phi_k(t)

#pragma omp parallel for schedule(dynamic) num_threads(thread_count()) if (exec == Execution::Parallel)
    for (Eigen::Index p = 0; p < np; ++p) {
        double s = rule.nodes[p];
        std::vector<double> kw;
        if (st.split) {
            Nodes in = split_nodes(basis, s, st.q, st.tail);
            Eigen::MatrixXd phi_in = basis_table(basis, max_degree, in.x);
            kw.resize(in.x.size());
            for (std::size_t q = 0; q < in.x.size(); ++q) kw[q] = in.w[q] * kernel_eval_unchecked(kernel, s, in.x[q]);
            for (int k = 0; k < nb; ++k) {
                double acc = 0.0;
                for (std::size_t q = 0; q < kw.size(); ++q) acc += kw[q] * phi_in(k, q);
                g(p, k) = acc;
            }
        } else {
            kw.resize(np);
            for (Eigen::Index q = 0; q < np; ++q) kw[q] = rule.weights[q] * kernel_eval_unchecked(kernel, s, rule.nodes[q]);
            for (int k = 0; k < nb; ++k) {
                double acc = 0.0;
                for (Eigen::Index q = 0; q < np; ++q) acc += kw[q] * phi(k, q);
                g(p, k) = acc;
            }
        }
    }

    Eigen::MatrixXd m(nb, nb);
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (exec == Execution::Parallel)
    for (int j = 0; j < nb; ++j)
        for (int k = 0; k < nb; ++k) {
            double acc = 0.0;
            for (Eigen::Index p = 0; p < np; ++p) acc += rule.weights[p] * phi(j, p) * g(p, k);
            m(j, k) = acc;
        }
    Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    return sym;
}

// per-coordinate factor matrices A_ab for one separable factor
Eigen::MatrixXd factor_matrix(const SeparableFactor& f, int max_degree,
                              const QuadratureRule& rule, const Eigen::MatrixXd& phi) {
    const int nb = max_degree + 1;
    const Eigen::Index np = static_cast<Eigen::Index>(rule.size());
    Eigen::MatrixXd a(nb, nb);
    if (f.kind == SeparableFactor::Kind::Product) {
        Eigen::VectorXd u = Eigen::VectorXd::Zero(nb), v = Eigen::VectorXd::Zero(nb);
        for (Eigen::Index p = 0; p < np; ++p) {
            double hl = rule.weights[p] * f.left(rule.nodes[p]);
            double hr = rule.weights[p] * f.right(rule.nodes[p]);
            for (int k = 0; k < nb; ++k) {
                u[k] += hl * phi(k, p);
                v[k] += hr * phi(k, p);
            }
        }
        for (int i = 0; i < nb; ++i)
            for (int j = 0; j < nb; ++j) a(i, j) = u[i] * v[j];
    } else {
        Eigen::MatrixXd g(np, nb);
        for (Eigen::Index p = 0; p < np; ++p) {
            std::vector<double> kw(np);
            for (Eigen::Index q = 0; q < np; ++q) kw[q] = rule.weights[q] * f.bivariate(rule.nodes[p], rule.nodes[q]);
            for (int k = 0; k < nb; ++k) {
                double acc = 0.0;
                for (Eigen::Index q = 0; q < np; ++q) acc += kw[q] * phi(k, q);
                g(p, k) = acc;
            }
        }
        for (int i = 0; i < nb; ++i)
            for (int j = 0; j < nb; ++j) {
                double acc = 0.0;
                for (Eigen::Index p = 0; p < np; ++p) acc += rule.weights[p] * phi(i, p) * g(p, j);
                a(i, j) = acc;
            }
    }
    return 0.5 * (a + a.transpose());
}

Eigen::MatrixXd assemble_tensor(const KernelSpec& kernel, const BasisFamily& basis, int max_degree, int q,
                                const std::vector<MultiIndex>& idx, Execution exec) {
    const int d = basis.dim;
    SeparableForm form = separable_form(kernel);
    if (kernel.id == KernelId::Constant) {
        // constant kernel: one product term of constant factors
        form.terms.clear();
        SeparableTerm t{kernel.value, {}};
        for (int i = 0; i < d; ++i) {
            SeparableFactor f;
            f.kind = SeparableFactor::Kind::Product;
            f.left = [](double) { return 1.0; };
            f.right = [](double) { return 1.0; };
            t.factors.push_back(f);
        }
        form.terms.push_back(t);
        form.dim = d;
    }
    BasisFamily b1 = BasisFamily::hermite(basis.gamma);
    b1.max_degree = basis.max_degree;
    QuadratureRule rule = gauss_rule(b1, q);
    Eigen::MatrixXd phi = basis_table(b1, max_degree, rule.nodes);

    const std::size_t nt = form.terms.size();
    std::vector<std::vector<Eigen::MatrixXd>> fac(nt, std::vector<Eigen::MatrixXd>(d));
#pragma omp parallel for schedule(dynamic) num_threads(thread_count()) if (exec == Execution::Parallel)
    for (std::size_t r = 0; r < nt * d; ++r) {
        std::size_t t = r / d, i = r % d;
        fac[t][i] = factor_matrix(form.terms[t].factors[i], max_degree, rule, phi);
    }

    const Eigen::Index n = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd m(n, n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(thread_count()) if (exec == Execution::Parallel)
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& J = idx[j].components;
        for (Eigen::Index k = j; k < n; ++k) {
            const auto& K = idx[k].components;
            double acc = 0.0;
            for (std::size_t t = 0; t < nt; ++t) {
                double p = form.terms[t].coeff;
                for (int i = 0; i < d; ++i) p *= fac[t][i](J[i], K[i]);
                acc += p;
            }
            m(j, k) = acc;
        }
    }
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < j; ++k) m(j, k) = m(k, j);
    return m;
}

std::vector<MultiIndex> index_set(const BasisFamily& basis, int max_degree) {
    if (basis.kind == BasisKind::TensorHermite) return multi_indices(basis.dim, max_degree);
    std::vector<MultiIndex> out;
    for (int k = 0; k <= max_degree; ++k) out.push_back({{k}});
    return out;
}

}  // namespace

GramMatrix gram_matrix(const KernelSpec& kernel, const BasisFamily& basis, int max_degree, const GramOptions& opts) {
    check_inputs(kernel, basis, max_degree);
    GramMatrix out;
    out.kernel = kernel;
    out.basis = basis;
    out.max_degree = max_degree;
    out.indices = index_set(basis, max_degree);
    if (basis.kind == BasisKind::TensorHermite) {
        int q = opts.quad_order > 0 ? opts.quad_order : default_quad_order(max_degree + 1, false);
        if (q < max_degree + 1) throw std::invalid_argument("gram_matrix: quadrature order below basis size");
        out.quad_order = q;
        out.entries = assemble_tensor(kernel, basis, max_degree, q, out.indices, opts.exec);
        return out;
    }
    UnivariateSetup st = univariate_setup(kernel, basis, max_degree, opts);
    out.quad_order = st.q;
    out.charlier_v = st.v;
    out.entries = assemble_univariate(kernel, basis, max_degree, st, opts.exec);
    return out;
}

GramMatrix gram_matrix_reference(const KernelSpec& kernel, const BasisFamily& basis, int max_degree,
                                 const GramOptions& opts) {
    check_inputs(kernel, basis, max_degree);
    if (basis.kind == BasisKind::TensorHermite && basis.dim > 1)
        throw std::invalid_argument("gram_matrix_reference: univariate bases only");
    GramMatrix out;
    out.kernel = kernel;
    out.basis = basis;
    out.max_degree = max_degree;
    out.indices = index_set(basis, max_degree);
    UnivariateSetup st = univariate_setup(kernel, basis, max_degree, opts);
    out.quad_order = st.q;
    out.charlier_v = st.v;
    const int nb = max_degree + 1;
    const auto& rule = st.outer;
    out.entries.resize(nb, nb);
    for (int j = 0; j < nb; ++j)
        for (int k = 0; k < nb; ++k) {
            double total = 0.0;
            for (std::size_t p = 0; p < rule.size(); ++p) {
                double s = rule.nodes[p];
                Nodes in;
                if (st.split) {
                    in = split_nodes(basis, s, st.q, st.tail);
                } else {
                    in.x = rule.nodes;
                    in.w = rule.weights;
                }
                double inner = 0.0;
                for (std::size_t q = 0; q < in.x.size(); ++q)
                    inner += in.w[q] * kernel_eval(kernel, s, in.x[q]) * eval_basis(basis, k, in.x[q]);
                total += rule.weights[p] * eval_basis(basis, j, s) * inner;
            }
            out.entries(j, k) = total;
        }
    out.entries = (0.5 * (out.entries + out.entries.transpose())).eval();
    return out;
}

namespace {

int parity_key(const MultiIndex& m) {
    int key = 0;
    for (std::size_t i = 0; i < m.components.size(); ++i)
        if (m.components[i] % 2) key |= 1 << i;
    return key;
}

}  // namespace

Spectrum spectrum_from_gram(const GramMatrix& gram, const RrOptions& opts) {
    const Eigen::Index n = gram.entries.rows();
    Spectrum out;
    out.indices = gram.indices;
    auto& pv = out.provenance;
    pv.method = "rayleigh-ritz";
    pv.kernel = gram.kernel;
    pv.basis = gram.basis;
    pv.max_degree = gram.max_degree;
    pv.basis_size = static_cast<int>(n);
    pv.quad_order = gram.quad_order;
    pv.charlier_v = gram.charlier_v;

    // group indices into parity classes when the kernel allows it
    std::map<int, std::vector<Eigen::Index>> groups;
    bool hermite = gram.basis.kind == BasisKind::HermiteGauss || gram.basis.kind == BasisKind::TensorHermite;
    if (opts.parity_blocks && hermite && is_reflection_symmetric(gram.kernel.id)) {
        for (Eigen::Index i = 0; i < n; ++i) groups[parity_key(gram.indices[i])].push_back(i);
        double scale = n ? gram.entries.cwiseAbs().maxCoeff() : 0.0;
        double off = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (parity_key(gram.indices[i]) != parity_key(gram.indices[j]))
                    off = std::max(off, std::abs(gram.entries(i, j)));
        if (off > 1e-12 * std::max(scale, 1e-300)) groups.clear();
    }
    if (groups.empty()) {
        std::vector<Eigen::Index> all(n);
        std::iota(all.begin(), all.end(), 0);
        groups[0] = all;
    }

    struct Pair {
        double value;
        int group;
        Eigen::Index col;
    };
    std::vector<Pair> pairs;
    std::vector<EigenPairs> solved;
    std::vector<const std::vector<Eigen::Index>*> members;
    int g = 0;
    for (const auto& [key, ids] : groups) {
        const Eigen::Index m = static_cast<Eigen::Index>(ids.size());
        Eigen::MatrixXd block(m, m);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) block(i, j) = gram.entries(ids[i], ids[j]);
        solved.push_back(sym_eig(block, opts.vectors));
        members.push_back(&ids);
        for (Eigen::Index i = 0; i < m; ++i) pairs.push_back({solved.back().values[i], g, i});
        ++g;
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.value > b.value; });

    out.eigenvalues.resize(n);
    if (opts.vectors) out.coefficients = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        const Pair& p = pairs[c];
        double v = p.value;
        if (v < 0.0) {
            v = 0.0;
            ++pv.clip_count;
        }
        out.eigenvalues[c] = v;
        if (!opts.vectors) continue;
        const auto& ids = *members[p.group];
        for (std::size_t i = 0; i < ids.size(); ++i) out.coefficients(ids[i], c) = solved[p.group].vectors(i, p.col);
        for (Eigen::Index i = 0; i < n; ++i) {
            double a = out.coefficients(i, c);
            if (std::abs(a) > 1e-8) {
                if (a < 0.0) out.coefficients.col(c) *= -1.0;
                break;
            }
        }
    }
    return out;
}

Spectrum rr_spectrum(const KernelSpec& kernel, const BasisFamily& basis, int max_degree, const RrOptions& opts) {
    return spectrum_from_gram(gram_matrix(kernel, basis, max_degree, opts.gram), opts);
}

SweepTable convergence_sweep(const KernelSpec& kernel, const BasisFamily& basis, const std::vector<int>& degrees,
                             int top_m, const RrOptions& opts) {
    if (degrees.empty()) throw std::invalid_argument("convergence_sweep: empty degree list");
    if (top_m < 1) throw std::invalid_argument("convergence_sweep: top_m must be >= 1");
    for (std::size_t i = 1; i < degrees.size(); ++i)
        if (degrees[i] <= degrees[i - 1]) throw std::invalid_argument("convergence_sweep: degrees must ascend");
    SweepTable out;
    RrOptions o = opts;
    o.vectors = false;
    for (int n : degrees) {
        Spectrum sp = rr_spectrum(kernel, basis, n, o);
        std::vector<double> row(top_m, 0.0);
        for (int i = 0; i < top_m && i < static_cast<int>(sp.eigenvalues.size()); ++i) row[i] = sp.eigenvalues[i];
        if (!out.rows.empty()) {
            for (int i = 0; i < top_m; ++i) {
                double drop = out.rows.back()[i] - row[i];
                out.worst_decrease = std::max(out.worst_decrease, drop);
                if (drop > 1e-10) out.monotone = false;
            }
        }
        out.degrees.push_back(n);
        out.rows.push_back(row);
    }
    return out;
}

double eigenfunction_eval(const Spectrum& spectrum, int rank, std::span<const double> x) {
    const Eigen::Index n = spectrum.coefficients.cols();
    if (n == 0) throw std::invalid_argument("eigenfunction_eval: spectrum has no coefficient vectors");
    if (rank < 1 || rank > n) throw std::invalid_argument("eigenfunction_eval: rank out of range");
    const BasisFamily& basis = spectrum.provenance.basis;
    double total = 0.0;
    if (basis.kind == BasisKind::TensorHermite) {
        for (Eigen::Index j = 0; j < spectrum.coefficients.rows(); ++j)
            total += spectrum.coefficients(j, rank - 1) * eval_basis(basis, spectrum.indices[j], x);
        return total;
    }
    if (x.size() != 1) throw std::invalid_argument("eigenfunction_eval: point dimension mismatch");
    std::vector<double> phi = eval_all(basis, spectrum.provenance.max_degree, x[0]);
    for (Eigen::Index j = 0; j < spectrum.coefficients.rows(); ++j) total += spectrum.coefficients(j, rank - 1) * phi[j];
    return total;
}

double eigenfunction_eval(const Spectrum& spectrum, int rank, double x) {
    double a[1] = {x};
    return eigenfunction_eval(spectrum, rank, std::span<const double>(a, 1));
}

}  // namespace spectrakit
