// cli.hpp — Batch command runner: config schema, sweeps and CSV/JSON rendering

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace usqed::cli {

inline constexpr const char* kToolkitVersion = "1.0.0";

inline const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names{"spectrum", "validity-map", "steady", "g2", "floquet", "gauge-scan"};
    return names;
}

// Config or argument violation; maps to exit code 2.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

struct RunConfig {
    std::string command;
    nlohmann::json params;  // validated, defaults filled in
    std::string out;        // empty means stdout
    std::string format{"csv"};
    std::uint64_t seed{0};
    int threads{1};
    std::uint64_t hash{0};  // FNV-1a of the canonical (sorted, compact) config text

    std::string hash_hex() const;
};

// Validates `raw` against the command schema: unknown keys, wrong types and
// out-of-range values throw SchemaError. Defaults are filled in.
RunConfig parse_config(const std::string& command, const nlohmann::json& raw);
RunConfig load_config(const std::string& command, const std::string& path);

using Cell = std::variant<long long, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

Table run_command(const RunConfig& cfg);

// CSV: one "# ..." header line with toolkit version, command and config hash,
// then the column line and rows; doubles as %.12e, LF line endings.
std::string render_csv(const Table& t, const RunConfig& cfg);
std::string render_json(const Table& t, const RunConfig& cfg);

// Full command-line entry point; returns the process exit code
// (0 success, 2 schema or argument error, 3 numerical failure).
int main_entry(int argc, char** argv);

} // namespace usqed::cli
