// config.cpp — Run-config schemas, validation and hashing

#include "usqed/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace usqed::cli {

namespace {

using nlohmann::json;

enum class Kind { number, integer, boolean, string, number_list, integer_list, string_list };

enum class Bound { none, positive, nonnegative };

struct Field {
    std::string name;
    Kind kind;
    json fallback;  // null means required
    Bound bound{Bound::none};
    std::vector<std::string> choices{};
    long long min_int{0};
};

Field num(std::string n, json d, Bound b = Bound::none) { return {std::move(n), Kind::number, std::move(d), b}; }
Field integer(std::string n, json d, long long lo) { return {std::move(n), Kind::integer, std::move(d), Bound::none, {}, lo}; }
Field numbers(std::string n, json d, Bound b) { return {std::move(n), Kind::number_list, std::move(d), b}; }

std::vector<Field> rabi_fields()
{
    return {num("omega", 1.0, Bound::positive), num("Omega", 1.0, Bound::nonnegative)};
}

std::vector<Field> policy_fields(int start, int step, int max, double tol)
{
    return {integer("cutoff_start", start, 2), integer("cutoff_step", step, 1), integer("cutoff_max", max, 2),
            num("cutoff_tol", tol, Bound::positive)};
}

std::vector<Field> schema(const std::string& command)
{
    std::vector<Field> f = rabi_fields();
    auto add = [&](std::vector<Field> more) { f.insert(f.end(), more.begin(), more.end()); };
    if (command == "spectrum") {
        add({num("g", 0.0, Bound::nonnegative),
             {"method", Kind::string, "exact", Bound::none, {"exact", "jc", "bs", "grwa", "braak", "variational"}},
             integer("n_levels", 8, 1), integer("cutoff", 40, 2), {"squeezing", Kind::boolean, true}});
        add(policy_fields(20, 20, 400, 1e-10));
    } else if (command == "validity-map") {
        add({numbers("g_grid", nullptr, Bound::nonnegative), numbers("Omega_grid", nullptr, Bound::nonnegative),
             {"methods", Kind::string_list, json::array({"jc", "bs", "grwa"}), Bound::none, {"jc", "bs", "grwa", "braak"}},
             integer("n_levels", 4, 1), integer("cutoff", 40, 2)});
        add(policy_fields(20, 20, 400, 1e-10));
    } else if (command == "steady") {
        add({numbers("g_grid", nullptr, Bound::nonnegative), num("gamma", 1.0 / 60.0, Bound::positive),
             num("kappa", 1.0 / 60.0, Bound::positive), integer("cutoff", 18, 2)});
    } else if (command == "g2") {
        add({num("g", 0.05, Bound::nonnegative), integer("cutoff", 40, 2), integer("n_keep", 8, 2),
             num("gamma0", 5e-3, Bound::positive), num("F", 5e-4, Bound::positive),
             // Absent omega_d means the dressed one-photon resonance E₁ − E₀.
             num("omega_d", "resonant", Bound::positive), num("phi", 0.0),
             numbers("tau_grid", json::array({0.0}), Bound::nonnegative), numbers("omega_grid", json::array(), Bound::none)});
    } else if (command == "floquet") {
        add({num("g", 0.6, Bound::nonnegative), integer("cutoff", 30, 2), integer("n_keep", 6, 2),
             num("gamma0", 5e-3, Bound::positive), num("F", 0.01, Bound::nonnegative), num("phi", 0.0),
             numbers("omega_d_grid", nullptr, Bound::positive), integer("n_f", 4, 1), integer("n_f_cap", 40, 1),
             num("conv_tol", 1e-8, Bound::positive)});
    } else if (command == "gauge-scan") {
        add({numbers("g_grid", nullptr, Bound::nonnegative),
             {"orders", Kind::integer_list, json::array({2, 4, 6}), Bound::none, {}, 0}, integer("n_levels", 6, 1)});
        add(policy_fields(20, 20, 160, 1e-10));
    } else {
        throw SchemaError("unknown command '" + command + "'");
    }
    return f;
}

[[noreturn]] void fail(const std::string& key, const std::string& what)
{
    throw SchemaError("config key '" + key + "': " + what);
}

void check_number(const std::string& key, const json& v, Bound b)
{
    if (!v.is_number()) fail(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(key, "must be finite");
    if (b == Bound::positive && !(x > 0.0)) fail(key, "must be > 0");
    if (b == Bound::nonnegative && !(x >= 0.0)) fail(key, "must be >= 0");
}

void check_integer(const std::string& key, const json& v, long long lo)
{
    if (!v.is_number_integer()) fail(key, "expected an integer");
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > 1000000000ull) fail(key, "must be <= 1000000000");
    if (v.get<long long>() < lo) fail(key, "must be >= " + std::to_string(lo));
    if (v.get<long long>() > 1000000000ll) fail(key, "must be <= 1000000000");
}

void check_choice(const std::string& key, const json& v, const std::vector<std::string>& choices)
{
    if (!v.is_string()) fail(key, "expected a string");
    if (choices.empty()) return;
    for (const auto& c : choices)
        if (v.get<std::string>() == c) return;
    fail(key, "unsupported value '" + v.get<std::string>() + "'");
}

void check_field(const Field& f, const json& v)
{
    switch (f.kind) {
    case Kind::number: check_number(f.name, v, f.bound); break;
    case Kind::integer: check_integer(f.name, v, f.min_int); break;
    case Kind::boolean:
        if (!v.is_boolean()) fail(f.name, "expected true or false");
        break;
    case Kind::string: check_choice(f.name, v, f.choices); break;
    case Kind::number_list:
    case Kind::integer_list:
    case Kind::string_list:
        if (!v.is_array()) fail(f.name, "expected an array");
        if (v.empty() && f.fallback.is_null()) fail(f.name, "must not be empty");
        for (const auto& x : v) {
            if (f.kind == Kind::number_list) check_number(f.name, x, f.bound);
            else if (f.kind == Kind::integer_list) check_integer(f.name, x, f.min_int);
            else check_choice(f.name, x, f.choices);
        }
        break;
    }
}

} // namespace

std::uint64_t fnv1a(std::string_view bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string RunConfig::hash_hex() const
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

RunConfig parse_config(const std::string& command, const json& raw)
{
    if (!raw.is_object()) throw SchemaError("config must be a JSON object");
    const std::vector<Field> fields = schema(command);
    RunConfig cfg;
    cfg.command = command;
    cfg.params = json::object();

    std::map<std::string, const Field*> by_name;
    for (const auto& f : fields) by_name[f.name] = &f;
    for (const auto& [key, value] : raw.items()) {
        if (key == "command") {
            if (!value.is_string() || value.get<std::string>() != command) fail(key, "does not match the subcommand");
        } else if (key == "seed") {
            check_integer(key, value, 0);
            cfg.seed = value.get<std::uint64_t>();
        } else if (key == "out") {
            if (!value.is_string()) fail(key, "expected a string");
            cfg.out = value.get<std::string>();
        } else if (key == "format") {
            check_choice(key, value, {"csv", "json"});
            cfg.format = value.get<std::string>();
        } else if (key == "threads") {
            check_integer(key, value, 1);
            cfg.threads = value.get<int>();
        } else if (key == "frequency_reference") {
            check_choice(key, value, {"omega"});
        } else if (auto it = by_name.find(key); it != by_name.end()) {
            check_field(*it->second, value);
            cfg.params[key] = value;
        } else {
            throw SchemaError("unknown config key '" + key + "' for command '" + command + "'");
        }
    }
    for (const auto& f : fields) {
        if (cfg.params.contains(f.name)) continue;
        if (f.fallback.is_null()) throw SchemaError("missing required config key '" + f.name + "'");
        cfg.params[f.name] = f.fallback;
    }
    if (cfg.params.contains("cutoff_max") && cfg.params["cutoff_max"].get<int>() < cfg.params["cutoff_start"].get<int>())
        fail("cutoff_max", "must be >= cutoff_start");
    if (command == "floquet" && cfg.params["n_f_cap"].get<int>() < cfg.params["n_f"].get<int>())
        fail("n_f_cap", "must be >= n_f");
    if (cfg.params.contains("n_keep") && cfg.params["n_keep"].get<int>() > 2 * cfg.params["cutoff"].get<int>())
        fail("n_keep", "must not exceed the Hilbert dimension 2*cutoff");

    // Output routing does not enter the hash; every run parameter and the seed do.
    json canonical = cfg.params;
    canonical["seed"] = cfg.seed;
    cfg.hash = fnv1a(command + "\n" + canonical.dump());
    return cfg;
}

RunConfig load_config(const std::string& command, const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    json raw;
    try {
        raw = json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(command, raw);
}

} // namespace usqed::cli
