#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "spectrakit/spectrum.hpp"

namespace spectrakit::cli {

using Cell = std::variant<std::string, double, std::int64_t>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::json provenance = nlohmann::json::object();
    nlohmann::json extra = nlohmann::json::object();  // JSON output only
};

std::string format_cell(const Cell& c);
void write_csv(const Table& t, std::ostream& out);
void write_json(const Table& t, std::ostream& out);

nlohmann::json provenance_json(const Provenance& p);

// eigenvalues from a spectrum file written by `rr` (JSON or CSV)
std::vector<double> read_eigenvalues(const std::string& path);

// builds the table for cfg; diagnostics go to err
Table execute(const RunConfig& cfg, std::ostream& err);

// full run including output; returns the exit code
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// parse + run with the documented exit codes (0 ok, 1 numerical, 2 usage)
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spectrakit::cli
