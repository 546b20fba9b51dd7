// output.cpp — CSV/JSON rendering and the command-line entry point

#include "usqed/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "usqed/error.hpp"

namespace usqed::cli {

namespace {

using nlohmann::json;

std::string csv_cell(const Cell& c)
{
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&c)) {
        if (std::isnan(*d)) return "nan";
        return format_double(*d);
    }
    const std::string& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

json json_cell(const Cell& c)
{
    if (const auto* i = std::get_if<long long>(&c)) return *i;
    if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? json(*d) : json(nullptr);
    return std::get<std::string>(c);
}

void emit_diagnostic(const json& j)
{
    std::cerr << j.dump() << '\n';
}

struct Invocation {
    std::string config;
    std::string out;
    std::string format;
    int threads{0};
};

} // namespace

std::string render_csv(const Table& t, const RunConfig& cfg)
{
    std::string s = "# usqed " + std::string(kToolkitVersion) + " command=" + cfg.command +
                    " config_fnv1a=" + cfg.hash_hex() + "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
    s += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + csv_cell(row[i]);
        s += "\n";
    }
    return s;
}

std::string render_json(const Table& t, const RunConfig& cfg)
{
    json rows = json::array();
    for (const auto& row : t.rows) {
        json r = json::array();
        for (const auto& c : row) r.push_back(json_cell(c));
        rows.push_back(std::move(r));
    }
    json doc = {{"toolkit_version", kToolkitVersion},
                {"command", cfg.command},
                {"config_fnv1a", cfg.hash_hex()},
                {"columns", t.columns},
                {"rows", std::move(rows)}};
    return doc.dump(1) + "\n";
}

int main_entry(int argc, char** argv)
{
    CLI::App app{"usqed: ultrastrong-coupling cavity-QED toolkit"};
    app.set_version_flag("--version", std::string(kToolkitVersion));
    app.require_subcommand(1);
    Invocation inv;
    for (const auto& name : command_names()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", inv.config, "JSON run config")->required();
        sub->add_option("--out", inv.out, "output path (default stdout)");
        sub->add_option("--format", inv.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--threads", inv.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    RunConfig cfg;
    try {
        cfg = load_config(command, inv.config);
        if (!inv.out.empty()) cfg.out = inv.out;
        if (!inv.format.empty()) cfg.format = inv.format;
        if (inv.threads > 0) cfg.threads = inv.threads;
        const Table t = run_command(cfg);
        const std::string text = cfg.format == "json" ? render_json(t, cfg) : render_csv(t, cfg);
        if (cfg.out.empty()) {
            std::cout << text << std::flush;
        } else {
            std::ofstream f(cfg.out, std::ios::binary | std::ios::trunc);
            if (!f) throw SchemaError("cannot open output path '" + cfg.out + "'");
            f << text;
            if (!f.flush()) throw SchemaError("failed writing output path '" + cfg.out + "'");
        }
        return 0;
    } catch (const SchemaError& e) {
        emit_diagnostic({{"error", "schema"}, {"command", command}, {"message", e.what()}});
        return 2;
    } catch (const std::invalid_argument& e) {
        emit_diagnostic({{"error", "schema"}, {"command", command}, {"message", e.what()}});
        return 2;
    } catch (const NumericalError& e) {
        emit_diagnostic({{"error", "numerical"},
                         {"command", command},
                         {"config_fnv1a", cfg.hash_hex()},
                         {"kind", e.kind()},
                         {"message", e.what()},
                         {"details", e.details()}});
        return 3;
    } catch (const std::exception& e) {
        emit_diagnostic({{"error", "numerical"},
                         {"command", command},
                         {"config_fnv1a", cfg.hash_hex()},
                         {"kind", "internal"},
                         {"message", e.what()}});
        return 3;
    }
}

} // namespace usqed::cli
