// test_cli.cpp — usqed command-line contract: schemas, exit codes, byte-stable output

#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "usqed/cli.hpp"

using namespace usqed;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct Run {
    int code{-1};
    std::string out;
    std::string err;
};

struct ScratchDir {
    fs::path path = fs::temp_directory_path() / ("usqed_cli_" + std::to_string(::getpid()));
    ScratchDir() { fs::create_directories(path); }
    ~ScratchDir()
    {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

fs::path scratch()
{
    static const ScratchDir dir;
    return dir.path;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const std::string& name, const std::string& text)
{
    const fs::path p = scratch() / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

Run invoke(const std::string& args, const std::string& env = "")
{
    const fs::path out = scratch() / "stdout.txt", err = scratch() / "stderr.txt";
    const std::string cmd = env + (env.empty() ? "" : " ") + std::string(USQED_CLI_PATH) + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("FNV-1a reference vectors and config hashing")
{
    CHECK(cli::fnv1a("") == 0xcbf29ce484222325ull);
    CHECK(cli::fnv1a("a") == 0xaf63dc4c8601ec8cull);
    CHECK(cli::fnv1a("foobar") == 0x85944171f73967e8ull);

    const auto a = cli::parse_config("spectrum", json::parse(R"({"g": 0.5, "Omega": 0.7})"));
    const auto b = cli::parse_config("spectrum", json::parse(R"({ "Omega":0.7,   "g":0.5, "format":"json" })"));
    const auto c = cli::parse_config("spectrum", json::parse(R"({"g": 0.5, "Omega": 0.71})"));
    const auto d = cli::parse_config("spectrum", json::parse(R"({"g": 0.5, "Omega": 0.7, "seed": 9})"));
    CHECK(a.hash == b.hash);
    CHECK(a.hash != c.hash);
    CHECK(a.hash != d.hash);
    CHECK(a.hash_hex().size() == 16);
    CHECK(a.params["n_levels"] == 8);
    CHECK(a.params["method"] == "exact");
}

TEST_CASE("schema validation rejects unknown keys, wrong types and bad ranges")
{
    const char* bad[] = {R"({"g": 0.1, "colour": 1})",      R"({"g": "0.1"})",          R"({"g": -0.1})",
                         R"({"n_levels": 2.5})",            R"({"method": "magic"})",    R"({"command": "steady"})",
                         R"({"cutoff_start": 40, "cutoff_max": 20})", R"([1, 2])",       R"({"n_levels": 0})"};
    for (const char* text : bad) {
        CAPTURE(text);
        CHECK_THROWS_AS(cli::parse_config("spectrum", json::parse(text)), cli::SchemaError);
    }
    CHECK_THROWS_AS(cli::parse_config("steady", json::parse("{}")), cli::SchemaError);  // g_grid required
    CHECK_THROWS_AS(cli::parse_config("steady", json::parse(R"({"g_grid": []})")), cli::SchemaError);
    CHECK_THROWS_AS(cli::parse_config("no-such-command", json::parse("{}")), cli::SchemaError);
    CHECK_NOTHROW(cli::parse_config("g2", json::parse(R"({"omega_d": 0.95})")));
}

TEST_CASE("spectrum at g = 0 reproduces n omega +- Omega/2")
{
    const auto cfg = write_config("s0.json", R"({"g": 0.0, "Omega": 0.7, "omega": 1.3, "n_levels": 8})");
    const Run r = invoke("spectrum --config " + cfg.string());
    REQUIRE(r.code == 0);
    std::vector<double> expect;
    for (int n = 0; n < 10; ++n)
        for (double s : {-0.35, 0.35}) expect.push_back(1.3 * n + s);
    std::sort(expect.begin(), expect.end());
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 9);
    CHECK(rows[0] == std::vector<std::string>{"level_index", "parity", "energy", "method", "cutoff_used"});
    for (int i = 0; i < 8; ++i) {
        CHECK(std::stoi(rows[i + 1][0]) == i);
        CHECK(std::abs(std::stod(rows[i + 1][2]) - expect[i]) < 1e-10);
        CHECK(rows[i + 1][3] == "exact");
    }
}

TEST_CASE("CSV header, formatting and byte stability")
{
    const auto cfg = write_config("v.json", R"({"g_grid": [0.05, 0.3], "Omega_grid": [0.5, 1.0], "n_levels": 4})");
    const fs::path o1 = scratch() / "v1.csv", o2 = scratch() / "v2.csv", o3 = scratch() / "v3.csv";
    REQUIRE(invoke("validity-map --config " + cfg.string() + " --out " + o1.string()).code == 0);
    REQUIRE(invoke("validity-map --config " + cfg.string() + " --out " + o2.string()).code == 0);
    REQUIRE(invoke("validity-map --config " + cfg.string() + " --out " + o3.string() + " --threads 3").code == 0);
    const std::string a = slurp(o1);
    CHECK(a == slurp(o2));
    CHECK(a == slurp(o3));
    CHECK(a.find('\r') == std::string::npos);
    CHECK(a.back() == '\n');

    const std::string header = a.substr(0, a.find('\n'));
    const auto parsed = cli::load_config("validity-map", cfg.string());
    CHECK(header == "# usqed " + std::string(cli::kToolkitVersion) + " command=validity-map config_fnv1a=" +
                        parsed.hash_hex());
    const auto rows = csv_rows(a);
    REQUIRE(rows.size() == 1 + 2 * 2 * 3);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        // %.12e: mantissa with 12 decimals and a signed two-digit exponent.
        const std::string& e = rows[i][3];
        CHECK(e.size() == std::string("1.234567890123e-02").size());
        CHECK(e[1] == '.');
        CHECK(e[14] == 'e');
    }
}

TEST_CASE("variational spectrum is deterministic for a fixed seed")
{
    const auto cfg = write_config("var.json", R"({"g": 0.8, "Omega": 1.0, "method": "variational", "seed": 17})");
    const Run a = invoke("spectrum --config " + cfg.string());
    const Run b = invoke("spectrum --config " + cfg.string());
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(csv_rows(a.out).size() == 2);
}

TEST_CASE("gauge-scan g = 0 rows vanish and JSON output mirrors the table")
{
    const auto cfg = write_config("gs.json", R"({"g_grid": [0.0, 0.1], "orders": [2, 4]})");
    const Run r = invoke("gauge-scan --config " + cfg.string());
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 1 + 2 * 3);
    for (int i = 1; i <= 3; ++i) {
        CHECK(std::stod(rows[i][0]) == 0.0);
        CHECK(std::abs(std::stod(rows[i][3])) < 1e-12);
        CHECK(rows[i][4] == "1");
    }
    const Run j = invoke("gauge-scan --config " + cfg.string() + " --format json");
    REQUIRE(j.code == 0);
    const json doc = json::parse(j.out);
    CHECK(doc["command"] == "gauge-scan");
    CHECK(doc["rows"].size() == 6);
    CHECK(doc["columns"][3] == "deviation");
}

TEST_CASE("steady sweep: phenomenological excess grows with g, dressed state is the ground state")
{
    const auto cfg = write_config("st.json", R"({"g_grid": [0.2, 0.5, 0.8], "cutoff": 14})");
    const Run r = invoke("steady --config " + cfg.string());
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 4);
    double prev = 0.0;
    for (int i = 1; i <= 3; ++i) {
        const double excess = std::stod(rows[i][3]);
        CHECK(excess > prev);
        prev = excess;
        CHECK(std::abs(std::stod(rows[i][4]) - 1.0) < 1e-9);
    }
}

TEST_CASE("g2 and floquet commands produce their records")
{
    const auto g2 = write_config("g2.json", R"({"tau_grid": [0.0, 5.0], "omega_grid": [0.95]})");
    const Run a = invoke("g2 --config " + g2.string());
    REQUIRE(a.code == 0);
    std::set<std::string> kinds;
    for (const auto& row : csv_rows(a.out)) kinds.insert(row[0]);
    CHECK(kinds == std::set<std::string>{"quantity", "omega_d", "flux", "g2_zero", "g2_tau", "spectrum"});
    const auto rows = csv_rows(a.out);
    CHECK(std::stod(rows[3][2]) < 1.0);  // g2_zero

    const auto fl = write_config("fl.json", R"({"g": 0.3, "cutoff": 16, "n_keep": 4, "omega_d_grid": [0.9, 1.1]})");
    const Run b = invoke("floquet --config " + fl.string() + " --threads 2");
    REQUIRE(b.code == 0);
    int zone = 0, flux = 0;
    for (const auto& row : csv_rows(b.out)) {
        zone += row[1] == "zone_eigenvalue";
        flux += row[1] == "flux_avg";
    }
    CHECK(zone == 2 * 16);
    CHECK(flux == 2);
}

TEST_CASE("exit code 2 on schema and argument errors")
{
    const auto unknown = write_config("bad1.json", R"({"g": 0.1, "bogus": true})");
    const auto broken = write_config("bad2.json", R"({"g": 0.1,)");
    Run r = invoke("spectrum --config " + unknown.string());
    CHECK(r.code == 2);
    const json diag = json::parse(r.err);
    CHECK(diag["error"] == "schema");
    CHECK(diag["message"].get<std::string>().find("bogus") != std::string::npos);
    CHECK(r.out.empty());
    CHECK(invoke("spectrum --config " + broken.string()).code == 2);
    CHECK(invoke("spectrum --config " + (scratch() / "missing.json").string()).code == 2);
    CHECK(invoke("spectrum --config " + unknown.string() + " --format xml").code == 2);
    CHECK(invoke("spectrum").code == 2);
    CHECK(invoke("transmogrify --config " + unknown.string()).code == 2);
    CHECK(invoke("").code == 2);
}

TEST_CASE("exit code 3 with the module payload on numerical failure")
{
    const auto cfg =
        write_config("nf.json", R"({"g": 0.3, "cutoff": 10, "n_keep": 4, "omega_d_grid": [1.0], "n_f": 1, "n_f_cap": 1})");
    const fs::path out = scratch() / "never.csv";
    const Run r = invoke("floquet --config " + cfg.string() + " --out " + out.string());
    CHECK(r.code == 3);
    const json diag = json::parse(r.err.substr(r.err.find('{')));
    CHECK(diag["error"] == "numerical");
    CHECK(diag["kind"] == "nf_cap");
    CHECK(diag["details"].contains("n_f_cap"));
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("USQED_DIM_CAP bounds the Hilbert dimension")
{
    const auto cfg = write_config("cap.json", R"({"g": 0.3, "n_levels": 4})");
    const Run capped = invoke("spectrum --config " + cfg.string(), "USQED_DIM_CAP=30");
    CHECK(capped.code == 2);
    CHECK(capped.err.find("exceeds the cap") != std::string::npos);
    CHECK(invoke("spectrum --config " + cfg.string(), "USQED_DIM_CAP=100000").code == 0);
    CHECK(invoke("spectrum --config " + cfg.string(), "USQED_DIM_CAP=zero").code == 2);
}
