#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../support/generators.hpp"
#include "../support/printed.hpp"
#include "spectrakit/linalg.hpp"
#include "spectrakit/quadrature.hpp"
#include "spectrakit/rayleigh_ritz.hpp"

using namespace spectrakit;

namespace {

const double pi2 = std::numbers::pi * std::numbers::pi;

KernelSpec spec(KernelId id) {
    KernelSpec k;
    k.id = id;
    return k;
}

// trace integral of K(t,t) w by a high-order rule of the basis weight
double kappa1(const KernelSpec& k, const BasisFamily& b) {
    int v = b.kind == BasisKind::CharlierPoisson ? charlier_default_v(b.rho) : 0;
    auto rule = product_rule(gauss_rule(univariate_kind(b.kind), 160, {b.gamma, b.rho, v}), k.dim());
    double s = 0.0;
    for (std::size_t p = 0; p < rule.size(); ++p) s += rule.weights[p] * kernel_eval(k, rule.point(p), rule.point(p));
    return s;
}

int degree_cap(const gen::Case& c) { return c.kernel.dim() > 1 ? 8 : 14; }

}  // namespace

TEST_CASE("single-function Gram matrices") {
    auto g = gram_matrix(spec(KernelId::CvM), BasisFamily::legendre01(), 0);
    REQUIRE(g.size() == 1);
    CHECK(g.entries(0, 0) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    // closed form: 2(1/2 - 1/3) - 1/4
    auto k0 = gram_matrix(spec(KernelId::K0_exp), BasisFamily::laguerre(1.0), 0);
    CHECK(k0.entries(0, 0) == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
}

TEST_CASE("sym_eig examples") {
    Eigen::MatrixXd a(2, 2);
    a << 2, 0, 0, 1;
    auto e = sym_eig(a);
    CHECK(e.values[0] == 2.0);
    CHECK(e.values[1] == 1.0);
    a << 0, 1, 1, 0;
    e = sym_eig(a);
    CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e.values[1] == doctest::Approx(-1.0).epsilon(1e-15));
    a << 0, 1, 1.1, 0;
    CHECK_THROWS_AS(sym_eig(a), std::invalid_argument);
}

TEST_CASE("sym_eig residuals and reconstruction") {
    gen::Rng r(8);
    for (int trial = 0; trial < 40; ++trial) {
        int n = trial == 0 ? 8 : r.integer(1, 60);
        Eigen::MatrixXd m = gen::symmetric(r, n);
        auto e = sym_eig(m);
        double norm = m.norm();
        for (int i = 0; i < n; ++i) {
            CHECK((m * e.vectors.col(i) - e.values[i] * e.vectors.col(i)).norm() <= 1e-12 * norm);
            if (i) CHECK(e.values[i] <= e.values[i - 1]);
        }
        CHECK((e.vectors.transpose() * e.vectors - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
        Eigen::MatrixXd rec = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
        CHECK((rec - m).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, norm));
    }
}

TEST_CASE("Lanczos agrees with the dense solver") {
    gen::Rng r(21);
    for (int n : {50, 401, 700}) {
        Eigen::MatrixXd b = Eigen::MatrixXd::NullaryExpr(n, 30, [&]() { return r.normal(); });
        Eigen::MatrixXd m = b * b.transpose() / n;
        auto dense = sym_eig(m, false);
        auto top = top_eigenvalues(m, 5, Execution::Parallel);
        for (int i = 0; i < 5; ++i) CHECK(std::abs(top[i] - dense.values[i]) < 1e-11 * dense.values[0]);
        auto lz = lanczos_top([&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = m * x; }, n, 5);
        for (int i = 0; i < 5; ++i) CHECK(std::abs(lz[i] - dense.values[i]) < 1e-11 * dense.values[0]);
    }
}

TEST_CASE("Gram matrices are symmetric and PSD") {
    gen::Rng r(1234);
    for (int trial = 0; trial < 4; ++trial)
        for (KernelId id : catalog()) {
            auto c = gen::catalog_case(r, id);
            int n = r.integer(0, degree_cap(c));
            auto g = gram_matrix(c.kernel, c.basis, n);
            CAPTURE(to_string(id));
            CAPTURE(n);
            CHECK(g.entries == g.entries.transpose());
            auto e = sym_eig(g.entries, false);
            CHECK(e.values.minCoeff() >= -1e-9 * std::max(e.values.maxCoeff(), 0.0));
        }
}

TEST_CASE("Gram trace grows with n and stays below the trace integral") {
    gen::Rng r(77);
    for (KernelId id : catalog()) {
        auto c = gen::catalog_case(r, id);
        double k1 = kappa1(c.kernel, c.basis);
        double prev = 0.0;
        for (int n = 0; n <= degree_cap(c); n += 2) {
            double tr = gram_matrix(c.kernel, c.basis, n).entries.trace();
            CAPTURE(to_string(id));
            CAPTURE(n);
            CHECK(tr >= prev - 1e-12);
            CHECK(tr <= k1 + 1e-8);
            prev = tr;
        }
    }
}

TEST_CASE("spectrum invariants") {
    gen::Rng r(5150);
    for (KernelId id : catalog()) {
        auto c = gen::catalog_case(r, id);
        int n = r.integer(1, degree_cap(c));
        auto g = gram_matrix(c.kernel, c.basis, n);
        auto s = spectrum_from_gram(g);
        int m = g.size();
        CAPTURE(to_string(id));
        REQUIRE(int(s.eigenvalues.size()) == m);
        double sum = 0.0;
        for (int i = 0; i < m; ++i) {
            CHECK(s.eigenvalues[i] >= 0.0);
            if (i) CHECK(s.eigenvalues[i] <= s.eigenvalues[i - 1]);
            sum += s.eigenvalues[i];
        }
        CHECK((s.coefficients.transpose() * s.coefficients - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-10);
        if (s.provenance.clip_count == 0) CHECK(std::abs(sum - g.entries.trace()) < 1e-12 * std::max(1.0, sum));
        CHECK(sum <= kappa1(c.kernel, c.basis) + 1e-8);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                double a = s.coefficients(j, i);
                if (std::abs(a) > 1e-8) {
                    CHECK(a > 0.0);
                    break;
                }
            }
        }
    }
}

TEST_CASE("reference spectra") {
    auto cvm = rr_spectrum(spec(KernelId::CvM), BasisFamily::legendre01(), 15);
    const char* cvm_row[] = {"1.013212e-1", "2.533030e-2", "1.1257909e-2", "6.332574e-3", "4.052847e-3"};
    for (int i = 0; i < 5; ++i) {
        CAPTURE(i);
        CHECK(printed::matches(cvm.eigenvalues[i], cvm_row[i]));
    }

    auto k0 = rr_spectrum(spec(KernelId::K0_exp), BasisFamily::laguerre(1.0), 30);
    CHECK(printed::matches(k0.eigenvalues[0], "1.013211e-1"));
    CHECK(std::abs(k0.eigenvalues[1] - 2.531704e-2) < 2e-5);

    auto hjm = rr_spectrum(spec(KernelId::HJM_C), BasisFamily::hermite(3.0), 13);
    CHECK(printed::matches(hjm.eigenvalues[0], "1.388070e-2"));
    CHECK(printed::matches(hjm.eigenvalues[1], "1.271400e-2"));

    KernelSpec vm = spec(KernelId::VonMises);
    vm.tau = 1.0;
    RrOptions o;
    o.gram.charlier_v = 10;
    auto v = rr_spectrum(vm, BasisFamily::charlier(0.5), 15, o);
    CHECK(std::abs(v.eigenvalues[0] / 6.288772e-2 - 1) < 1e-5);
    CHECK(std::abs(v.eigenvalues[1] / 9.849896e-3 - 1) < 1e-5);
}

TEST_CASE("convergence sweeps") {
    std::vector<int> ns;
    for (int n = 3; n <= 15; ++n) ns.push_back(n);
    auto cvm = convergence_sweep(spec(KernelId::CvM), BasisFamily::legendre01(), ns, 5);
    CHECK(cvm.monotone);
    CHECK(printed::matches(cvm.rows[0][0], "1.012648e-1"));
    CHECK(printed::matches(cvm.rows[1][0], "1.013212e-1"));
    auto hn = convergence_sweep(spec(KernelId::HN2000), BasisFamily::legendre01(), ns, 5);
    CHECK(hn.monotone);
    CHECK(printed::matches(hn.rows.back()[0], "3.196395e-2"));

    CHECK_THROWS(convergence_sweep(spec(KernelId::CvM), BasisFamily::legendre01(), {5, 4}, 2));
    CHECK_THROWS(convergence_sweep(spec(KernelId::CvM), BasisFamily::legendre01(), {}, 2));
}

TEST_CASE("Ritz values never decrease along nested bases") {
    gen::Rng r(600);
    for (KernelId id : catalog()) {
        auto c = gen::catalog_case(r, id);
        std::vector<int> ns;
        for (int n = 0; n <= degree_cap(c); ++n) ns.push_back(n);
        auto sw = convergence_sweep(c.kernel, c.basis, ns, 4);
        CAPTURE(to_string(id));
        for (std::size_t i = 1; i < sw.rows.size(); ++i)
            for (std::size_t k = 0; k < sw.rows[i - 1].size(); ++k) CHECK(sw.rows[i][k] >= sw.rows[i - 1][k] - 1e-10);
        CHECK(sw.monotone);
    }
}

TEST_CASE("CvM Ritz values stay below the exact eigenvalues") {
    for (int n = 0; n <= 20; ++n) {
        auto s = rr_spectrum(spec(KernelId::CvM), BasisFamily::legendre01(), n);
        for (std::size_t i = 0; i < s.eigenvalues.size() && i < 8; ++i) {
            double exact = 1.0 / ((i + 1) * (i + 1) * pi2);
            CHECK(s.eigenvalues[i] <= exact + 1e-14);
        }
    }
}

TEST_CASE("K0 shares the CvM eigenvalues") {
    auto s = rr_spectrum(spec(KernelId::K0_exp), BasisFamily::laguerre(1.0), 30);
    CHECK(std::abs(s.eigenvalues[0] - 1.0 / pi2) < 2e-6);
    CHECK(std::abs(s.eigenvalues[1] - 1.0 / (4 * pi2)) < 2e-5);
}

TEST_CASE("eigenfunctions") {
    auto s = rr_spectrum(spec(KernelId::CvM), BasisFamily::legendre01(), 15);
    CHECK(std::abs(eigenfunction_eval(s, 1, 0.5) - std::sqrt(2.0)) < 1e-4);
    CHECK(std::abs(std::abs(eigenfunction_eval(s, 2, 0.25)) - std::sqrt(2.0)) < 1e-4);
    // first coefficient of f2 is on P1; <sqrt2 sin(2 pi x), P1> < 0 so the sign flips
    CHECK(eigenfunction_eval(s, 2, 0.25) < 0.0);
    auto rule = gauss_rule(BasisKind::Legendre01, 40);
    for (int i = 1; i <= 5; ++i) {
        double nrm = 0.0;
        for (std::size_t p = 0; p < rule.size(); ++p) nrm += rule.weights[p] * std::pow(eigenfunction_eval(s, i, rule.nodes[p]), 2);
        CHECK(std::abs(nrm - 1.0) < 1e-10);
    }
    CHECK_THROWS(eigenfunction_eval(s, 0, 0.5));
    CHECK_THROWS(eigenfunction_eval(s, 17, 0.5));
    CHECK_THROWS(eigenfunction_eval(s, 1, 1.5));
    RrOptions novec;
    novec.vectors = false;
    auto bare = rr_spectrum(spec(KernelId::CvM), BasisFamily::legendre01(), 5, novec);
    CHECK_THROWS(eigenfunction_eval(bare, 1, 0.5));
}

TEST_CASE("kernel approximant converges in the product norm") {
    // ||K - K_n||^2 = ||K||^2 - ||M_n||_F^2 for an orthonormal basis
    struct C {
        KernelId id;
        BasisFamily b;
    } cases[] = {{KernelId::EbnerKZ, BasisFamily::hermite(1.0)}, {KernelId::HJM_C, BasisFamily::hermite(2.0)},
                 {KernelId::DEH_K, BasisFamily::hermite(1.0)}};
    for (const auto& c : cases) {
        auto rule = gauss_rule(BasisKind::HermiteGauss, 120, {c.b.gamma, 0.0, 0});
        double full = integrate_2d([&](double s, double t) { return std::pow(kernel_eval(spec(c.id), s, t), 2); }, rule);
        double prev = full;
        for (int n = 0; n <= 20; n += 4) {
            double res = full - gram_matrix(spec(c.id), c.b, n).entries.squaredNorm();
            CAPTURE(to_string(c.id));
            CAPTURE(n);
            CHECK(res >= -1e-12 * full);
            CHECK(res <= prev + 1e-14);
            prev = res;
        }
        CHECK(prev < 1e-4 * full);
    }
}

TEST_CASE("parallel assembly is bit-identical to serial and matches the reference") {
    gen::Rng r(31337);
    set_thread_count(4);
    for (KernelId id : catalog()) {
        auto c = gen::catalog_case(r, id);
        int n = std::min(degree_cap(c), 10);
        GramOptions ser, par;
        ser.exec = Execution::Serial;
        par.exec = Execution::Parallel;
        auto a = gram_matrix(c.kernel, c.basis, n, ser);
        auto b = gram_matrix(c.kernel, c.basis, n, par);
        CAPTURE(to_string(id));
        CHECK(a.entries == b.entries);
        RrOptions so, po;
        so.gram = ser;
        po.gram = par;
        CHECK(rr_spectrum(c.kernel, c.basis, n, so).eigenvalues == rr_spectrum(c.kernel, c.basis, n, po).eigenvalues);
        if (c.kernel.dim() == 1) {
            auto ref = gram_matrix_reference(c.kernel, c.basis, n);
            double scale = ref.entries.cwiseAbs().maxCoeff();
            CHECK((ref.entries - a.entries).cwiseAbs().maxCoeff() <= 1e-12 * scale);
        }
    }
    set_thread_count(0);
}

TEST_CASE("tensor Gram matches brute-force product quadrature") {
    for (int d : {2, 3}) {
        KernelSpec k = spec(KernelId::BHEP);
        k.d = d;
        double g = 1.0;
        int n = d == 2 ? 5 : 3;
        BasisFamily fam = BasisFamily::tensor_hermite(g, d);
        auto gm = gram_matrix(k, fam, n);
        int q = d == 2 ? 40 : 24;
        auto rule = product_rule(gauss_rule(BasisKind::HermiteGauss, q, {g, 0.0, 0}), d);
        auto idx = multi_indices(d, n);
        Eigen::MatrixXd phi(idx.size(), rule.size());
        for (std::size_t p = 0; p < rule.size(); ++p)
            for (std::size_t j = 0; j < idx.size(); ++j) phi(j, p) = eval_basis(fam, idx[j], rule.point(p));
        Eigen::MatrixXd brute = Eigen::MatrixXd::Zero(idx.size(), idx.size());
        Eigen::VectorXd tmp(idx.size());
        for (std::size_t p = 0; p < rule.size(); ++p) {
            tmp.setZero();
            for (std::size_t s = 0; s < rule.size(); ++s)
                tmp += rule.weights[s] * kernel_eval(k, rule.point(p), rule.point(s)) * phi.col(s);
            brute += rule.weights[p] * phi.col(p) * tmp.transpose();
        }
        CAPTURE(d);
        CHECK((brute - gm.entries).cwiseAbs().maxCoeff() < 1e-10 * brute.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("parity blocks give the full-matrix spectrum") {
    gen::Rng r(2);
    for (KernelId id : catalog()) {
        if (!is_reflection_symmetric(id)) continue;
        auto c = gen::catalog_case(r, id);
        int n = degree_cap(c);
        RrOptions blk, full;
        full.parity_blocks = false;
        auto a = rr_spectrum(c.kernel, c.basis, n, blk);
        auto b = rr_spectrum(c.kernel, c.basis, n, full);
        CAPTURE(to_string(id));
        for (std::size_t i = 0; i < a.eigenvalues.size(); ++i)
            CHECK(std::abs(a.eigenvalues[i] - b.eigenvalues[i]) < 1e-12 * a.eigenvalues[0]);
    }
}

TEST_CASE("Gram errors") {
    CHECK_THROWS_AS(gram_matrix(spec(KernelId::K0_exp), BasisFamily::legendre01(), 3), std::invalid_argument);
    CHECK_THROWS_AS(gram_matrix(spec(KernelId::CvM), BasisFamily::hermite(1.0), 3), std::invalid_argument);
    GramOptions low;
    low.quad_order = 4;
    CHECK_THROWS_AS(gram_matrix(spec(KernelId::CvM), BasisFamily::legendre01(), 8, low), std::invalid_argument);
    KernelSpec b = spec(KernelId::BHEP);
    b.d = 2;
    CHECK_THROWS_AS(gram_matrix(b, BasisFamily::hermite(1.0), 3), std::invalid_argument);
    CHECK_THROWS_AS(gram_matrix(spec(KernelId::CvM), BasisFamily::legendre01(), -1), std::invalid_argument);
}

TEST_CASE("provenance") {
    auto s = rr_spectrum(spec(KernelId::K2001), BasisFamily::laguerre(1.5), 12);
    CHECK(s.provenance.method == "rayleigh-ritz");
    CHECK(s.provenance.max_degree == 12);
    CHECK(s.provenance.basis_size == 13);
    CHECK(s.provenance.quad_order == default_quad_order(13, true));
    CHECK(s.provenance.basis.gamma == 1.5);
    CHECK(default_quad_order(13, false) == 64);
    CHECK(default_quad_order(40, false) == 96);
    CHECK(default_quad_order(40, true) == 192);
}
