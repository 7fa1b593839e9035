#include "config.hpp"

#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace spectrakit::cli {

using nlohmann::json;

Command command_from_string(const std::string& s) {
    if (s == "rr") return Command::Rr;
    if (s == "grid") return Command::Grid;
    if (s == "mc") return Command::Mc;
    if (s == "cumulants") return Command::Cumulants;
    if (s == "quantile") return Command::Quantile;
    if (s == "tail") return Command::Tail;
    if (s == "bahadur") return Command::Bahadur;
    if (s == "reproduce") return Command::Reproduce;
    throw UsageError("unknown command '" + s + "'");
}

namespace {

template <class T>
T get_as(const json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw UsageError("config: bad value for key '" + key + "'");
    }
}

template <class T>
std::vector<T> get_list(const json& v, const std::string& key) {
    if (v.is_array()) return get_as<std::vector<T>>(v, key);
    return {get_as<T>(v, key)};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

void apply_json(RunConfig& cfg, const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw UsageError("config: top level must be an object");
    for (auto& [key, v] : doc.items()) {
        if (key == "command") {
            cfg.command_name = get_as<std::string>(v, key);
        } else if (key == "kernel") {
            cfg.kernel = get_as<std::string>(v, key);
        } else if (key == "gamma") {
            cfg.gamma = get_as<double>(v, key);
        } else if (key == "tau") {
            cfg.tau = get_as<double>(v, key);
        } else if (key == "rho") {
            cfg.rho = get_as<double>(v, key);
        } else if (key == "mu") {
            cfg.mu = get_as<double>(v, key);
        } else if (key == "d") {
            cfg.d = get_as<int>(v, key);
        } else if (key == "basis") {
            cfg.basis = get_as<std::string>(v, key);
        } else if (key == "n") {
            if (v.is_array()) cfg.n_list = get_as<std::vector<int>>(v, key);
            else cfg.n = get_as<int>(v, key);
        } else if (key == "n_list") {
            cfg.n_list = get_list<int>(v, key);
        } else if (key == "top") {
            cfg.top = get_as<int>(v, key);
        } else if (key == "quad_order") {
            cfg.quad_order = get_as<int>(v, key);
        } else if (key == "charlier_v") {
            cfg.charlier_v = get_as<int>(v, key);
        } else if (key == "emit") {
            cfg.emit = get_as<std::string>(v, key);
        } else if (key == "A") {
            cfg.A = get_as<double>(v, key);
        } else if (key == "m") {
            cfg.m = get_as<int>(v, key);
        } else if (key == "grid_step") {
            cfg.grid_step = get_as<std::string>(v, key);
        } else if (key == "N") {
            cfg.N = get_as<std::int64_t>(v, key);
        } else if (key == "reps") {
            cfg.reps = get_as<int>(v, key);
        } else if (key == "seed") {
            cfg.seed = get_as<std::uint64_t>(v, key);
        } else if (key == "eigs_from") {
            cfg.eigs_from = get_as<std::string>(v, key);
        } else if (key == "p") {
            cfg.p = get_list<double>(v, key);
        } else if (key == "x") {
            cfg.x = get_list<double>(v, key);
        } else if (key == "trace_complete") {
            cfg.trace_complete = get_as<int>(v, key);
        } else if (key == "simulate") {
            cfg.simulate = get_as<std::int64_t>(v, key);
        } else if (key == "table") {
            cfg.table = get_as<std::string>(v, key);
        } else if (key == "lambda1") {
            cfg.lambda1 = get_as<double>(v, key);
        } else if (key == "convention") {
            cfg.convention = get_as<std::string>(v, key);
        } else if (key == "preset") {
            cfg.preset = get_as<std::string>(v, key);
        } else if (key == "format") {
            std::string f = get_as<std::string>(v, key);
            if (f == "csv") cfg.format = Format::Csv;
            else if (f == "json") cfg.format = Format::Json;
            else throw UsageError("config: format must be csv or json");
        } else if (key == "output") {
            cfg.output = get_as<std::string>(v, key);
        } else {
            throw UsageError("config: unknown key '" + key + "'");
        }
    }
}

RunConfig parse_config(int argc, const char* const* argv) {
    RunConfig cfg;

    // the file goes in first so that flags win
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        std::string path;
        if (a == "--config") {
            if (i + 1 >= argc) throw UsageError("--config needs a path");
            path = argv[i + 1];
        } else if (a.rfind("--config=", 0) == 0) {
            path = a.substr(9);
        }
        if (!path.empty()) apply_json(cfg, read_file(path));
    }

    CLI::App app{"spectrakit: eigenvalues of Gaussian-process covariance operators"};
    std::string config_path, format;
    std::vector<std::string> positional;
    app.add_option("args", positional, "command [preset]");
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--kernel", cfg.kernel);
    app.add_option("--gamma", cfg.gamma);
    app.add_option("--tau", cfg.tau);
    app.add_option("--rho", cfg.rho);
    app.add_option("--mu", cfg.mu);
    app.add_option("--d", cfg.d);
    app.add_option("--basis", cfg.basis);
    app.add_option("--n", cfg.n);
    app.add_option("--n-list", cfg.n_list)->delimiter(',');
    app.add_option("--top", cfg.top);
    app.add_option("--quad-order", cfg.quad_order);
    app.add_option("--charlier-v,--v", cfg.charlier_v);
    app.add_option("--emit", cfg.emit);
    app.add_option("--A", cfg.A);
    app.add_option("--m", cfg.m);
    app.add_option("--grid-step", cfg.grid_step);
    app.add_option("--N", cfg.N);
    app.add_option("--reps", cfg.reps);
    app.add_option("--seed", cfg.seed);
    app.add_option("--eigs-from", cfg.eigs_from);
    app.add_option("--p", cfg.p)->delimiter(',');
    app.add_option("--x", cfg.x)->delimiter(',');
    app.add_option("--trace-complete", cfg.trace_complete);
    app.add_option("--simulate", cfg.simulate);
    app.add_option("--table", cfg.table);
    app.add_option("--lambda1", cfg.lambda1);
    app.add_option("--convention", cfg.convention);
    app.add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--output,-o", cfg.output);

    try {
        std::vector<std::string> args;
        for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help() +
                            "\ncommands: rr grid mc cumulants quantile tail bahadur reproduce\n");
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (!format.empty()) cfg.format = format == "json" ? Format::Json : Format::Csv;
    if (positional.size() > 2) throw UsageError("too many positional arguments");
    if (!positional.empty()) cfg.command_name = positional[0];
    if (positional.size() == 2) cfg.preset = positional[1];
    if (cfg.command_name.empty()) throw UsageError("missing field: command");
    cfg.command = command_from_string(cfg.command_name);
    validate(cfg);
    return cfg;
}

namespace {

void require(bool ok, const std::string& field) {
    if (!ok) throw UsageError("missing field: " + field);
}

bool needs_kernel(const RunConfig& cfg) {
    switch (cfg.command) {
    case Command::Rr:
    case Command::Grid:
    case Command::Mc: return true;
    case Command::Cumulants:
    case Command::Quantile:
    case Command::Tail: return cfg.eigs_from.empty();
    case Command::Bahadur: return cfg.eigs_from.empty() && !cfg.lambda1;
    case Command::Reproduce: return false;
    }
    return false;
}

}  // namespace

KernelSpec kernel_spec(const RunConfig& cfg) {
    KernelSpec k;
    try {
        k.id = kernel_id_from_string(cfg.kernel);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (k.id == KernelId::VonMises) {
        require(cfg.tau.has_value(), "tau");
        k.tau = *cfg.tau;
    }
    k.mu = cfg.mu;
    k.d = cfg.d;
    try {
        k.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return k;
}

BasisFamily basis_family(const RunConfig& cfg) {
    KernelSpec k = kernel_spec(cfg);
    BasisKind kind;
    try {
        kind = cfg.basis.empty() ? natural_basis(k.id) : basis_kind_from_string(cfg.basis);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (kind == BasisKind::HermiteGauss && k.dim() > 1) kind = BasisKind::TensorHermite;
    BasisFamily b;
    switch (kind) {
    case BasisKind::Legendre01: b = BasisFamily::legendre01(); break;
    case BasisKind::LaguerreExp:
        require(cfg.gamma.has_value(), "gamma");
        b = BasisFamily::laguerre(*cfg.gamma);
        break;
    case BasisKind::HermiteGauss:
        require(cfg.gamma.has_value(), "gamma");
        b = BasisFamily::hermite(*cfg.gamma);
        break;
    case BasisKind::CharlierPoisson:
        require(cfg.rho.has_value(), "rho");
        b = BasisFamily::charlier(*cfg.rho);
        break;
    case BasisKind::TensorHermite:
        require(cfg.gamma.has_value(), "gamma");
        b = BasisFamily::tensor_hermite(*cfg.gamma, k.dim());
        break;
    }
    if (cfg.n && *cfg.n > b.max_degree) b.max_degree = *cfg.n;
    for (int n : cfg.n_list)
        if (n > b.max_degree) b.max_degree = n;
    try {
        b.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (!support_compatible(k, b))
        throw UsageError("support mismatch: kernel " + cfg.kernel + " lives on " + to_string(kernel_support(k)) +
                         " but basis " + to_string(b.kind) + " on " + to_string(b.support()));
    return b;
}

void validate(const RunConfig& cfg) {
    if (needs_kernel(cfg)) {
        require(!cfg.kernel.empty(), "kernel");
        kernel_spec(cfg);
    }
    if (cfg.top && *cfg.top < 1) throw UsageError("top must be >= 1");
    if (cfg.quad_order < 0) throw UsageError("quad_order must be >= 0");
    if (cfg.charlier_v < 0) throw UsageError("charlier_v must be >= 0");

    bool spectral_source = needs_kernel(cfg) && cfg.command != Command::Rr && cfg.command != Command::Grid &&
                           cfg.command != Command::Mc;
    switch (cfg.command) {
    case Command::Rr:
        require(cfg.n.has_value() || !cfg.n_list.empty(), "n");
        if (cfg.emit != "spectrum" && cfg.emit != "cumulants") throw UsageError("emit must be spectrum or cumulants");
        basis_family(cfg);
        break;
    case Command::Grid: {
        require(cfg.A.has_value(), "A");
        require(cfg.m.has_value(), "m");
        require(cfg.gamma.has_value(), "gamma");
        if (cfg.grid_step != "points" && cfg.grid_step != "spacing")
            throw UsageError("grid_step must be points or spacing");
        Support s = kernel_support(kernel_spec(cfg));
        if (s != Support::HalfLine && s != Support::RealLine)
            throw UsageError("grid: kernel " + cfg.kernel + " lives on " + to_string(s) +
                             "; the grid method needs [0,inf) or R");
        break;
    }
    case Command::Mc:
        require(cfg.N.has_value(), "N");
        if (cfg.reps < 1) throw UsageError("reps must be >= 1");
        basis_family(cfg);
        break;
    case Command::Cumulants: break;
    case Command::Quantile:
        require(!cfg.p.empty(), "p");
        for (double p : cfg.p)
            if (!(p > 0.0 && p < 1.0)) throw UsageError("p must lie in (0,1)");
        if (cfg.trace_complete < 0) throw UsageError("trace_complete must be >= 0");
        if (cfg.simulate < 0) throw UsageError("simulate must be >= 0");
        if (cfg.trace_complete > 0) {
            require(!cfg.kernel.empty(), "kernel");
            basis_family(cfg);
        }
        break;
    case Command::Tail:
        require(!cfg.x.empty(), "x");
        for (double x : cfg.x)
            if (!(x >= 0.0)) throw UsageError("x must be >= 0");
        break;
    case Command::Bahadur:
        require(!cfg.table.empty(), "table");
        if (cfg.convention != "rootn" && cfg.convention != "n") throw UsageError("convention must be rootn or n");
        break;
    case Command::Reproduce: require(!cfg.preset.empty(), "preset"); break;
    }
    if (spectral_source) {
        require(cfg.n.has_value(), "n");
        basis_family(cfg);
    }
}

}  // namespace spectrakit::cli
