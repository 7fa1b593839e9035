#include "run.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "presets.hpp"
#include "spectrakit/altmethods.hpp"
#include "spectrakit/bahadur.hpp"
#include "spectrakit/distribution.hpp"
#include "spectrakit/errors.hpp"
#include "spectrakit/rayleigh_ritz.hpp"

namespace spectrakit::cli {

using nlohmann::json;

std::string format_cell(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10e", std::get<double>(c));
    return buf;
}

void write_csv(const Table& t, std::ostream& out) {
    if (!t.provenance.empty()) out << "# " << t.provenance.dump() << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
        out << '\n';
    }
}

void write_json(const Table& t, std::ostream& out) {
    json doc = json::object();
    doc["columns"] = t.columns;
    json rows = json::array();
    for (const auto& row : t.rows) {
        json r = json::array();
        for (const auto& c : row) std::visit([&](const auto& v) { r.push_back(v); }, c);
        rows.push_back(r);
    }
    doc["rows"] = rows;
    doc["provenance"] = t.provenance;
    for (auto& [k, v] : t.extra.items()) doc[k] = v;
    out << doc.dump(2) << '\n';
}

namespace {

json kernel_json(const KernelSpec& k) {
    json j = {{"id", to_string(k.id)}};
    if (k.id == KernelId::VonMises) {
        j["tau"] = k.tau;
        j["mu"] = k.mu;
    }
    if (k.id == KernelId::BHEP) j["d"] = k.d;
    if (k.id == KernelId::Constant) j["value"] = k.value;
    return j;
}

json basis_json(const BasisFamily& b) {
    json j = {{"kind", to_string(b.kind)}};
    switch (b.kind) {
    case BasisKind::Legendre01: break;
    case BasisKind::CharlierPoisson: j["rho"] = b.rho; break;
    case BasisKind::TensorHermite: j["dim"] = b.dim; [[fallthrough]];
    default: j["gamma"] = b.gamma;
    }
    return j;
}

}  // namespace

json provenance_json(const Provenance& p) {
    json j = {{"method", p.method}, {"kernel", kernel_json(p.kernel)}};
    if (p.method == "grid") {
        j["weight"] = {{"kind", to_string(p.basis.kind)}, {"gamma", p.basis.gamma}};
        j["A"] = p.grid_A;
        j["m"] = p.grid_m;
        j["h"] = p.grid_h;
    } else {
        j["basis"] = basis_json(p.basis);
    }
    if (p.method == "rayleigh-ritz") {
        j["max_degree"] = p.max_degree;
        j["basis_size"] = p.basis_size;
        j["quad_order"] = p.quad_order;
        if (p.basis.kind == BasisKind::CharlierPoisson) j["charlier_v"] = p.charlier_v;
    }
    if (p.method == "nystrom") {
        j["N"] = p.mc_N;
        j["seed"] = p.seed;
    }
    j["clip_count"] = p.clip_count;
    return j;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) {
        while (!item.empty() && (item.back() == '\r' || item.back() == ' ')) item.pop_back();
        while (!item.empty() && item.front() == ' ') item.erase(item.begin());
        out.push_back(item);
    }
    return out;
}

double to_double(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError(where + ": not a number '" + s + "'");
    }
}

// data rows of a CSV file, '#' lines skipped, header returned separately
std::vector<std::vector<std::string>> read_csv(const std::string& text, std::vector<std::string>& header,
                                               bool expect_header) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    bool first = true;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#' || line == "\r") continue;
        auto cells = split(line, ',');
        if (first && expect_header) {
            header = cells;
            first = false;
            continue;
        }
        if (first && !cells.empty()) {
            // optional header in tables without a required one
            bool numeric = true;
            try {
                (void)std::stod(cells[0]);
            } catch (...) {
                numeric = false;
            }
            first = false;
            if (!numeric) {
                header = cells;
                continue;
            }
        }
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

std::vector<double> read_eigenvalues(const std::string& path) {
    std::string text = read_file(path);
    std::vector<double> eigs;
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json doc;
        try {
            doc = json::parse(text);
            if (doc.contains("eigenvalues")) return doc["eigenvalues"].get<std::vector<double>>();
            auto cols = doc.at("columns").get<std::vector<std::string>>();
            auto it = std::find(cols.begin(), cols.end(), "eigenvalue");
            if (it == cols.end()) throw UsageError(path + ": no eigenvalue column");
            std::size_t c = it - cols.begin();
            for (const auto& r : doc.at("rows")) eigs.push_back(r.at(c).get<double>());
        } catch (const json::exception& e) {
            throw UsageError(path + ": " + e.what());
        }
        return eigs;
    }
    std::vector<std::string> header;
    auto rows = read_csv(text, header, true);
    auto it = std::find(header.begin(), header.end(), "eigenvalue");
    if (it == header.end()) throw UsageError(path + ": no eigenvalue column");
    std::size_t c = it - header.begin();
    for (const auto& r : rows) {
        if (c >= r.size()) throw UsageError(path + ": short row");
        eigs.push_back(to_double(r[c], path));
    }
    return eigs;
}

namespace {

RrOptions rr_options(const RunConfig& cfg) {
    RrOptions o;
    o.gram.quad_order = cfg.quad_order;
    o.gram.charlier_v = cfg.charlier_v;
    return o;
}

void clip_note(const Provenance& p, std::ostream& err) {
    if (p.clip_count > 0) err << "note: " << p.clip_count << " negative Ritz values clipped to zero\n";
}

Table spectrum_table(const Spectrum& s, int top) {
    Table t;
    t.columns = {"rank", "eigenvalue"};
    int k = std::min<int>(top, static_cast<int>(s.eigenvalues.size()));
    for (int i = 0; i < k; ++i) t.rows.push_back({std::int64_t(i + 1), s.eigenvalues[i]});
    t.provenance = provenance_json(s.provenance);
    t.extra["eigenvalues"] = s.eigenvalues;
    return t;
}

Table cumulant_table(const std::vector<CumulantSet>& sets, int count) {
    Table t;
    t.columns = {"route"};
    for (int r = 1; r <= count; ++r) t.columns.push_back("kappa" + std::to_string(r));
    for (const auto& c : sets) {
        std::vector<Cell> row{to_string(c.route)};
        for (int r = 0; r < count; ++r) row.push_back(c.kappa[r]);
        t.rows.push_back(row);
    }
    return t;
}

struct Source {
    std::vector<double> eigs;
    json provenance;
    std::string label;
};

Source spectral_source(const RunConfig& cfg, std::ostream& err) {
    Source src;
    if (!cfg.eigs_from.empty()) {
        src.eigs = read_eigenvalues(cfg.eigs_from);
        src.provenance = {{"eigs_from", cfg.eigs_from}, {"count", src.eigs.size()}};
        src.label = cfg.eigs_from;
        return src;
    }
    Spectrum s = rr_spectrum(kernel_spec(cfg), basis_family(cfg), *cfg.n, rr_options(cfg));
    clip_note(s.provenance, err);
    src.eigs = s.eigenvalues;
    src.provenance = provenance_json(s.provenance);
    src.label = cfg.kernel + " n=" + std::to_string(*cfg.n);
    return src;
}

Table run_rr(const RunConfig& cfg, std::ostream& err) {
    KernelSpec k = kernel_spec(cfg);
    BasisFamily b = basis_family(cfg);
    if (!cfg.n_list.empty()) {
        std::vector<int> degrees = cfg.n_list;
        if (!std::is_sorted(degrees.begin(), degrees.end())) throw UsageError("n_list must be ascending");
        int top = cfg.top.value_or(5);
        SweepTable sw = convergence_sweep(k, b, degrees, top, rr_options(cfg));
        Table t;
        t.columns = {"n"};
        for (int i = 1; i <= top; ++i) t.columns.push_back("lambda" + std::to_string(i));
        for (std::size_t r = 0; r < sw.degrees.size(); ++r) {
            std::vector<Cell> row{std::int64_t(sw.degrees[r])};
            for (double v : sw.rows[r]) row.push_back(v);
            t.rows.push_back(row);
        }
        t.provenance = {{"method", "rayleigh-ritz"},
                        {"kernel", kernel_json(k)},
                        {"basis", basis_json(b)},
                        {"quad_order", cfg.quad_order},
                        {"monotone", sw.monotone}};
        if (!sw.monotone) err << "warning: sweep not monotone, worst decrease " << sw.worst_decrease << '\n';
        return t;
    }
    Spectrum s = rr_spectrum(k, b, *cfg.n, rr_options(cfg));
    clip_note(s.provenance, err);
    if (cfg.emit == "cumulants") {
        Table t = cumulant_table({cumulants_from_eigs(s.eigenvalues)}, 4);
        t.provenance = provenance_json(s.provenance);
        return t;
    }
    return spectrum_table(s, cfg.top.value_or(std::min<int>(10, static_cast<int>(s.eigenvalues.size()))));
}

Table run_grid(const RunConfig& cfg, std::ostream& err) {
    GridConfig g;
    g.kernel = kernel_spec(cfg);
    g.A = *cfg.A;
    g.m = *cfg.m;
    g.gamma = *cfg.gamma;
    g.weight_class =
        kernel_support(g.kernel) == Support::HalfLine ? BasisKind::LaguerreExp : BasisKind::HermiteGauss;
    g.step = cfg.grid_step == "spacing" ? GridStep::Spacing : GridStep::PointCount;
    g.top = cfg.top.value_or(5);
    try {
        g.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    Spectrum s = grid_spectrum(g);
    clip_note(s.provenance, err);
    Table t = spectrum_table(s, g.top);
    t.provenance["grid_step"] = cfg.grid_step;
    return t;
}

Table run_mc(const RunConfig& cfg, std::ostream&) {
    MCConfig m;
    m.N = *cfg.N;
    m.replications = cfg.reps;
    m.seed = cfg.seed;
    m.kernel = kernel_spec(cfg);
    m.weight = basis_family(cfg);
    m.top = cfg.top.value_or(5);
    try {
        m.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    MCSummary s = mc_replicate(m);
    Table t;
    t.columns = {"rank", "mean", "sd"};
    for (std::size_t i = 0; i < s.mean.size(); ++i) t.rows.push_back({std::int64_t(i + 1), s.mean[i], s.sd[i]});
    t.provenance = {{"method", "nystrom"},   {"kernel", kernel_json(m.kernel)}, {"basis", basis_json(m.weight)},
                    {"N", m.N},              {"replications", m.replications},  {"seed", m.seed},
                    {"replication_seeds", "splitmix64(seed, replication)"}};
    return t;
}

Table run_cumulants(const RunConfig& cfg, std::ostream& err) {
    Source src = spectral_source(cfg, err);
    std::vector<CumulantSet> sets{cumulants_from_eigs(src.eigs)};
    if (cfg.eigs_from.empty()) {
        KernelSpec k = kernel_spec(cfg);
        if (k.dim() == 1) {
            DirectOptions o;
            o.charlier_v = cfg.charlier_v;
            sets.push_back(cumulants_direct(k, basis_family(cfg), o));
        }
    }
    Table t = cumulant_table(sets, 4);
    t.provenance = src.provenance;
    return t;
}

Table run_quantile(const RunConfig& cfg, std::ostream& err) {
    Source src = spectral_source(cfg, err);
    TailModel model(src.eigs, src.label);
    if (cfg.trace_complete > 0) {
        DirectOptions o;
        o.charlier_v = cfg.charlier_v;
        double k1 = cumulants_direct(kernel_spec(cfg), basis_family(cfg), o).kappa[0];
        model = trace_completed(model, k1, cfg.trace_complete);
        err << "note: trace completion is a heuristic\n";
    }
    Table t;
    t.columns = {"p", "quantile"};
    Simulation sim;
    if (cfg.simulate > 0) {
        t.columns.push_back("simulated");
        sim = simulate_w(model, cfg.simulate, cfg.seed, cfg.p);
    }
    for (std::size_t i = 0; i < cfg.p.size(); ++i) {
        std::vector<Cell> row{cfg.p[i], quantile(model, cfg.p[i])};
        if (cfg.simulate > 0) row.push_back(sim.quantiles[i]);
        t.rows.push_back(row);
    }
    t.provenance = {{"source", src.provenance}, {"terms", model.eigenvalues().size()}};
    if (cfg.trace_complete > 0) t.provenance["trace_complete"] = cfg.trace_complete;
    if (cfg.simulate > 0) {
        t.provenance["simulate"] = cfg.simulate;
        t.provenance["seed"] = cfg.seed;
    }
    return t;
}

Table run_tail(const RunConfig& cfg, std::ostream& err) {
    Source src = spectral_source(cfg, err);
    TailModel model(src.eigs, src.label);
    Table t;
    t.columns = {"x", "tail"};
    for (double x : cfg.x) t.rows.push_back({x, imhof_tail(model, x)});
    t.provenance = {{"source", src.provenance}, {"terms", model.eigenvalues().size()}};
    return t;
}

Table run_bahadur(const RunConfig& cfg, std::ostream& err) {
    double lambda1;
    json prov;
    if (cfg.lambda1) {
        lambda1 = *cfg.lambda1;
        prov = {{"lambda1", lambda1}};
    } else {
        Source src = spectral_source(cfg, err);
        lambda1 = *std::max_element(src.eigs.begin(), src.eigs.end());
        prov = {{"source", src.provenance}};
    }
    std::vector<std::string> header;
    auto rows = read_csv(read_file(cfg.table), header, false);
    if (rows.empty()) throw UsageError(cfg.table + ": no rows");
    std::size_t width = rows.front().size();
    if (width < 2 || width > 3) throw UsageError(cfg.table + ": expected theta,b[,kl]");

    SlopeInputs in;
    in.lambda1 = lambda1;
    in.convention = cfg.convention == "n" ? SlopeConvention::N : SlopeConvention::RootN;
    Table t;
    t.columns = {"theta", "b", "approx_slope"};
    if (width == 3) t.columns.insert(t.columns.end(), {"kl", "efficiency"});
    for (const auto& r : rows) {
        if (r.size() != width) throw UsageError(cfg.table + ": ragged row");
        double theta = to_double(r[0], cfg.table), b = to_double(r[1], cfg.table);
        in.b = [b](double) { return b; };
        double slope = approx_slope(in, theta);
        std::vector<Cell> row{theta, b, slope};
        if (width == 3) {
            double kl = to_double(r[2], cfg.table);
            if (!(kl > 0.0)) throw UsageError(cfg.table + ": kl must be positive");
            double eff = slope / (2.0 * kl);
            if (eff > 1.0 + 1e-6) err << "warning: efficiency " << eff << " > 1 at theta=" << theta << '\n';
            row.push_back(kl);
            row.push_back(eff);
        }
        t.rows.push_back(row);
    }
    prov["convention"] = cfg.convention;
    prov["table"] = cfg.table;
    t.provenance = prov;
    return t;
}

Table run_reproduce(const RunConfig& cfg, std::ostream&) {
    if (cfg.preset == "list") {
        Table t;
        t.columns = {"preset", "description"};
        for (const auto& p : presets()) t.rows.push_back({p.name, p.description});
        return t;
    }
    return find_preset(cfg.preset).build();
}

}  // namespace

Table execute(const RunConfig& cfg, std::ostream& err) {
    switch (cfg.command) {
    case Command::Rr: return run_rr(cfg, err);
    case Command::Grid: return run_grid(cfg, err);
    case Command::Mc: return run_mc(cfg, err);
    case Command::Cumulants: return run_cumulants(cfg, err);
    case Command::Quantile: return run_quantile(cfg, err);
    case Command::Tail: return run_tail(cfg, err);
    case Command::Bahadur: return run_bahadur(cfg, err);
    case Command::Reproduce: return run_reproduce(cfg, err);
    }
    throw UsageError("unknown command");
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Table t = execute(cfg, err);
    std::ofstream file;
    std::ostream* sink = &out;
    if (!cfg.output.empty()) {
        file.open(cfg.output);
        if (!file) throw UsageError("cannot write '" + cfg.output + "'");
        sink = &file;
    }
    if (cfg.format == Format::Json) write_json(t, *sink);
    else write_csv(t, *sink);
    return 0;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
        RunConfig cfg = parse_config(argc, argv);
        return run(cfg, out, err);
    } catch (const HelpRequested& h) {
        out << h.what();
        return 0;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace spectrakit::cli
