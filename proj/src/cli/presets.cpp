#include "presets.hpp"

#include "spectrakit/altmethods.hpp"
#include "spectrakit/distribution.hpp"
#include "spectrakit/rayleigh_ritz.hpp"

namespace spectrakit::cli {

using nlohmann::json;

namespace {

KernelSpec kernel(KernelId id) {
    KernelSpec k;
    k.id = id;
    return k;
}

std::vector<int> range(int from, int to, int step = 1) {
    std::vector<int> v;
    for (int n = from; n <= to; n += step) v.push_back(n);
    return v;
}

// sweep of the m leading Ritz values, optionally with leading parameter columns
void add_sweep(Table& t, const KernelSpec& k, const BasisFamily& b, const std::vector<int>& degrees, int m,
               const std::vector<Cell>& lead, int charlier_v = 0) {
    RrOptions o;
    o.gram.charlier_v = charlier_v;
    o.vectors = false;
    SweepTable sw = convergence_sweep(k, b, degrees, m, o);
    for (std::size_t r = 0; r < sw.degrees.size(); ++r) {
        std::vector<Cell> row = lead;
        row.push_back(std::int64_t(sw.degrees[r]));
        for (double v : sw.rows[r]) row.push_back(v);
        t.rows.push_back(row);
    }
}

std::vector<std::string> lambda_columns(std::vector<std::string> lead, int m) {
    for (int i = 1; i <= m; ++i) lead.push_back("lambda" + std::to_string(i));
    return lead;
}

Table legendre_table(const std::string& name, KernelId id) {
    Table t;
    t.columns = lambda_columns({"n"}, 5);
    add_sweep(t, kernel(id), BasisFamily::legendre01(), range(3, 15), 5, {});
    t.provenance = {{"preset", name}, {"method", "rayleigh-ritz"}, {"kernel", to_string(id)}, {"basis", "legendre01"}};
    return t;
}

Table gamma_table(const std::string& name, KernelId id, const std::vector<double>& gammas,
                  const std::vector<int>& degrees) {
    Table t;
    t.columns = lambda_columns({"gamma", "n"}, 2);
    BasisKind kind = natural_basis(id);
    for (double g : gammas) {
        BasisFamily b = kind == BasisKind::LaguerreExp ? BasisFamily::laguerre(g) : BasisFamily::hermite(g);
        add_sweep(t, kernel(id), b, degrees, 2, {g});
    }
    t.provenance = {{"preset", name},
                    {"method", "rayleigh-ritz"},
                    {"kernel", to_string(id)},
                    {"basis", to_string(kind)}};
    return t;
}

Table deh_table() {
    Table t;
    t.columns = {"gamma", "n", "lambda1"};
    for (double g : {0.5, 1.0, 2.0, 3.0}) {
        Spectrum s = rr_spectrum(kernel(KernelId::DEH_K), BasisFamily::hermite(g), 14, {{}, false, true});
        t.rows.push_back({g, std::int64_t(14), s.eigenvalues[0]});
    }
    t.provenance = {{"preset", "table-deh"},
                    {"method", "rayleigh-ritz"},
                    {"kernel", "deh_k"},
                    {"basis", "hermite"},
                    {"basis_size", 15}};
    return t;
}

Table vm_table() {
    Table t;
    t.columns = lambda_columns({"rho", "tau", "n"}, 2);
    for (double rho : {0.5, 1.0})
        for (double tau : {1.0, 5.0}) {
            KernelSpec k = kernel(KernelId::VonMises);
            k.tau = tau;
            add_sweep(t, k, BasisFamily::charlier(rho), {10, 15, 20}, 2, {rho, tau}, 10);
        }
    t.provenance = {{"preset", "table-vm"},
                    {"method", "rayleigh-ritz"},
                    {"kernel", "vonmises"},
                    {"basis", "charlier"},
                    {"charlier_v", 10},
                    {"mu", 0}};
    return t;
}

Table vm_mc_table() {
    const std::uint64_t seed = 42;
    Table t;
    t.columns = {"rho", "tau", "N", "mean1", "sd1", "mean2", "sd2"};
    for (double rho : {0.5, 1.0})
        for (double tau : {1.0, 5.0})
            for (int N : {50, 100, 250, 1000, 2000, 3000, 4000, 5000}) {
                MCConfig c;
                c.N = N;
                c.replications = 500;
                c.seed = seed;
                c.kernel = kernel(KernelId::VonMises);
                c.kernel.tau = tau;
                c.weight = BasisFamily::charlier(rho);
                c.top = 2;
                MCSummary s = mc_replicate(c);
                t.rows.push_back({rho, tau, std::int64_t(N), s.mean[0], s.sd[0], s.mean[1], s.sd[1]});
            }
    t.provenance = {{"preset", "table-vm-mc"}, {"method", "nystrom"}, {"kernel", "vonmises"},
                    {"replications", 500},     {"seed", seed}};
    return t;
}

Table kz_cumulant_table() {
    Table t;
    t.columns = {"gamma", "route", "n", "kappa1", "kappa2", "kappa3", "kappa4"};
    for (double g : {0.5, 1.0, 2.0}) {
        BasisFamily b = BasisFamily::hermite(g);
        CumulantSet d = cumulants_direct(kernel(KernelId::EbnerKZ), b);
        t.rows.push_back({g, to_string(d.route), std::string("-"), d.kappa[0], d.kappa[1], d.kappa[2], d.kappa[3]});
        for (int n : range(10, 30, 5)) {
            RrOptions o;
            o.vectors = false;
            CumulantSet c = cumulants_from_eigs(rr_spectrum(kernel(KernelId::EbnerKZ), b, n, o).eigenvalues);
            t.rows.push_back(
                {g, to_string(c.route), std::int64_t(n), c.kappa[0], c.kappa[1], c.kappa[2], c.kappa[3]});
        }
    }
    t.provenance = {{"preset", "table-kz-cumulants"}, {"kernel", "ebner_kz"}, {"basis", "hermite"}};
    return t;
}

Table bhep_table(int d) {
    Table t;
    t.columns = {"gamma", "route", "n", "kappa1", "kappa2", "kappa3"};
    KernelSpec k = kernel(KernelId::BHEP);
    k.d = d;
    for (double g : {0.5, 1.0, 2.0}) {
        BasisFamily b = BasisFamily::tensor_hermite(g, d);
        if (d == 1) {
            CumulantSet c = cumulants_direct(k, BasisFamily::hermite(g));
            t.rows.push_back({g, to_string(c.route), std::string("-"), c.kappa[0], c.kappa[1], c.kappa[2]});
        }
        for (int n : range(10, 30, 5)) {
            RrOptions o;
            o.vectors = false;
            CumulantSet c = cumulants_from_eigs(rr_spectrum(k, b, n, o).eigenvalues);
            t.rows.push_back({g, to_string(c.route), std::int64_t(n), c.kappa[0], c.kappa[1], c.kappa[2]});
        }
    }
    t.provenance = {{"preset", "table-bhep-d" + std::to_string(d)},
                    {"kernel", "bhep"},
                    {"d", d},
                    {"basis", "tensor_hermite"}};
    return t;
}

struct GridRow {
    KernelId id;
    double gamma;
    double A;
};

Table grid_table(const std::string& name, const std::vector<GridRow>& rows, BasisKind weight) {
    Table t;
    t.columns = {"kernel", "gamma", "A", "m", "lambda1"};
    for (const auto& r : rows)
        for (int m : {100, 500, 1000, 2000, 5000}) {
            GridConfig g;
            g.kernel = kernel(r.id);
            g.gamma = r.gamma;
            g.A = r.A;
            g.m = m;
            g.weight_class = weight;
            g.top = 1;
            Spectrum s = grid_spectrum(g);
            t.rows.push_back({to_string(r.id), r.gamma, r.A, std::int64_t(m), s.eigenvalues[0]});
        }
    t.provenance = {{"preset", name}, {"method", "grid"}, {"grid_step", "points"}, {"weight", to_string(weight)}};
    return t;
}

Table grid_exp_table() {
    std::vector<GridRow> rows;
    for (KernelId id : {KernelId::BH_rho, KernelId::K2001})
        for (double g : {0.0, 1.0, 2.0, 3.0}) rows.push_back({id, g, 10.0});
    return grid_table("table-grid-exp", rows, BasisKind::LaguerreExp);
}

Table grid_norm_table() {
    std::vector<GridRow> rows = {
        {KernelId::EbnerKZ, 0.5, 5}, {KernelId::EbnerKZ, 1, 4}, {KernelId::EbnerKZ, 2, 3}, {KernelId::EbnerKZ, 3, 3},
        {KernelId::HJM_C, 1.5, 4},   {KernelId::HJM_C, 2, 3},   {KernelId::HJM_C, 3, 3},   {KernelId::DEH_K, 0.5, 5},
        {KernelId::DEH_K, 1, 4},     {KernelId::DEH_K, 2, 3},   {KernelId::DEH_K, 3, 3},
    };
    return grid_table("table-grid-norm", rows, BasisKind::HermiteGauss);
}

}  // namespace

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = {
        {"table-cvm", "CvM kernel, five largest Ritz values, n=3..15",
         [] { return legendre_table("table-cvm", KernelId::CvM); }},
        {"table-hn2000", "HN2000 kernel, five largest Ritz values, n=3..15",
         [] { return legendre_table("table-hn2000", KernelId::HN2000); }},
        {"table-eks2021", "EKS2021 kernel, five largest Ritz values, n=3..15",
         [] { return legendre_table("table-eks2021", KernelId::EKS2021); }},
        {"table-k0", "K0 exponentiality kernel, two largest, gamma=1,2, n=10(5)30",
         [] { return gamma_table("table-k0", KernelId::K0_exp, {1.0, 2.0}, range(10, 30, 5)); }},
        {"table-k2001", "K2001 kernel, two largest, gamma=0.5,1,1.5, n=10(5)30",
         [] { return gamma_table("table-k2001", KernelId::K2001, {0.5, 1.0, 1.5}, range(10, 30, 5)); }},
        {"table-kz-cumulants", "EbnerKZ kernel, four cumulants, gamma=0.5,1,2, n=10(5)30", kz_cumulant_table},
        {"table-hjm", "HJM_C kernel, two largest, gamma=1.5,2,3, n=5..13",
         [] { return gamma_table("table-hjm", KernelId::HJM_C, {1.5, 2.0, 3.0}, range(5, 13)); }},
        {"table-deh", "DEH_K kernel, largest eigenvalue with 15 basis functions, gamma=0.5,1,2,3", deh_table},
        {"table-vm", "von Mises kernel, two largest, v=10, n=10,15,20", vm_table},
        {"table-vm-mc", "von Mises kernel, Monte Carlo mean and sd over 500 replications", vm_mc_table},
        {"table-bhep-d1", "BHEP d=1, three cumulants, n=10(5)30", [] { return bhep_table(1); }},
        {"table-bhep-d2", "BHEP d=2, three cumulants, n=10(5)30", [] { return bhep_table(2); }},
        {"table-bhep-d3", "BHEP d=3, three cumulants, n=10(5)30", [] { return bhep_table(3); }},
        {"table-grid-exp", "grid method, exponentiality kernels, A=10", grid_exp_table},
        {"table-grid-norm", "grid method, normality kernels", grid_norm_table},
    };
    return all;
}

const Preset& find_preset(const std::string& name) {
    for (const auto& p : presets())
        if (p.name == name) return p;
    throw UsageError("unknown preset '" + name + "' (try `reproduce list`)");
}

}  // namespace spectrakit::cli
