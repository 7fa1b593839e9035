#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spectrakit/kernels.hpp"
#include "spectrakit/polybasis.hpp"

namespace spectrakit::cli {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -h/--help; carries the help text
struct HelpRequested : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Command { Rr, Grid, Mc, Cumulants, Quantile, Tail, Bahadur, Reproduce };
enum class Format { Csv, Json };

struct RunConfig {
    Command command = Command::Rr;
    std::string command_name;

    std::string kernel;
    std::optional<double> gamma;
    std::optional<double> tau;
    std::optional<double> rho;
    double mu = 0.0;
    int d = 1;

    std::string basis;  // empty: the kernel's natural basis
    std::optional<int> n;
    std::vector<int> n_list;
    std::optional<int> top;
    int quad_order = 0;
    int charlier_v = 0;
    std::string emit = "spectrum";  // rr: spectrum | cumulants

    std::optional<double> A;
    std::optional<int> m;
    std::string grid_step = "points";

    std::optional<std::int64_t> N;
    int reps = 1;
    std::uint64_t seed = 0;

    std::string eigs_from;
    std::vector<double> p;
    std::vector<double> x;
    int trace_complete = 0;     // quantile: extra surrogate terms, 0 = off
    std::int64_t simulate = 0;  // quantile: Monte Carlo draws next to Imhof

    std::string table;  // bahadur: CSV of theta,b[,kl]
    std::optional<double> lambda1;
    std::string convention = "rootn";

    std::string preset;

    Format format = Format::Csv;
    std::string output;  // empty: stdout
};

// argv[0] is skipped; throws UsageError
RunConfig parse_config(int argc, const char* const* argv);
// merges a JSON document into cfg; unknown keys are errors
void apply_json(RunConfig& cfg, const std::string& json_text);

Command command_from_string(const std::string& s);

// checks that everything the command needs is present; throws UsageError naming the field
void validate(const RunConfig& cfg);

KernelSpec kernel_spec(const RunConfig& cfg);
BasisFamily basis_family(const RunConfig& cfg);

}  // namespace spectrakit::cli
