// commands.cpp — Subcommand implementations over validated run configs

#include "usqed/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "usqed/error.hpp"
#include "usqed/floquet.hpp"
#include "usqed/gauge.hpp"
#include "usqed/numkern.hpp"
#include "usqed/open.hpp"
#include "usqed/qops.hpp"
#include "usqed/spectra.hpp"

namespace usqed::cli {

namespace {

using nlohmann::json;
using qops::Matrix;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs body(i) for i < n on up to `threads` workers; results are written by index,
// so the output order is independent of scheduling. The lowest-index failure is rethrown.
template <class Body>
void parallel_for(std::size_t n, int threads, Body&& body)
{
    const auto workers = static_cast<std::size_t>(std::max(1, std::min<int>(threads, static_cast<int>(n))));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex guard;
    std::size_t failed_at = n;
    std::exception_ptr failure;
    auto run = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(guard);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

qops::RabiParams rabi_params(const json& p, double g)
{
    return {p["omega"].get<double>(), p["Omega"].get<double>(), g};
}

spectra::CutoffPolicy policy_of(const json& p, int n_levels)
{
    spectra::CutoffPolicy c;
    c.n_levels = n_levels;
    c.N_start = p["cutoff_start"].get<int>();
    c.N_step = p["cutoff_step"].get<int>();
    c.N_max = p["cutoff_max"].get<int>();
    c.tol = p["cutoff_tol"].get<double>();
    return c;
}

open::BathSpec flat_bath(const Matrix& A, double gamma0)
{
    open::BathSpec b;
    b.coupling_op = A;
    b.gamma0 = gamma0;
    return b;
}

// Raises E_max until at least n Braak levels are found.
spectra::BraakSpectrum braak_levels(const qops::RabiParams& p, int n)
{
    double span = p.omega * (0.5 * n + 2.0);
    for (int attempt = 0; attempt < 6; ++attempt, span *= 2.0) {
        auto bs = spectra::braak_spectrum(p, -p.g * p.g / p.omega - 0.5 * p.Omega + span);
        if (static_cast<int>(bs.levels.size()) >= n) return bs;
    }
    throw NumericalError("braak_levels", "Braak root search returned fewer levels than requested",
                         {{"n_levels", std::to_string(n)}});
}

std::vector<spectra::SpectralLevel> head_levels(std::vector<spectra::SpectralLevel> levels, int n,
                                                const std::string& method)
{
    if (static_cast<int>(levels.size()) < n) {
        throw SchemaError("method '" + method + "' yields " + std::to_string(levels.size()) +
                          " levels at this cutoff; n_levels = " + std::to_string(n));
    }
    levels.resize(static_cast<std::size_t>(n));
    return levels;
}

Table spectrum(const RunConfig& cfg)
{
    const json& c = cfg.params;
    const auto p = rabi_params(c, c["g"].get<double>());
    const int n = c["n_levels"].get<int>();
    const int cutoff = c["cutoff"].get<int>();
    const std::string method = c["method"].get<std::string>();
    Table t{{"level_index", "parity", "energy", "method", "cutoff_used"}, {}};
    auto emit = [&](const std::vector<spectra::SpectralLevel>& levels, int used) {
        for (std::size_t i = 0; i < levels.size(); ++i)
            t.rows.push_back({static_cast<long long>(i), static_cast<long long>(levels[i].parity), levels[i].energy,
                              method, static_cast<long long>(used)});
    };
    if (method == "exact") {
        const auto cs = spectra::exact_spectrum(p, policy_of(c, n));
        std::vector<spectra::SpectralLevel> levels;
        for (int i = 0; i < n; ++i) levels.push_back({cs.eigen.values(i), cs.eigen.parity[i], 0});
        emit(levels, cs.cutoff_used);
    } else if (method == "jc") {
        const auto s = spectra::jc_spectrum({p.omega, p.Omega, p.g}, n);
        emit(head_levels(s.levels, n, method), s.space.fock_cutoff);
    } else if (method == "bs") {
        emit(head_levels(spectra::bloch_siegert_spectrum(p, n, cutoff).levels, n, method), cutoff);
    } else if (method == "grwa") {
        emit(head_levels(spectra::grwa_spectrum(p, cutoff).levels, n, method), cutoff);
    } else if (method == "braak") {
        emit(head_levels(braak_levels(p, n).levels, n, method), 0);
    } else {
        numkern::SimplexOptions o;
        o.seed = cfg.seed;
        const auto v = spectra::variational_polaron_ground(p, c["squeezing"].get<bool>(), o);
        const Matrix P = qops::parity_operator(v.space).matrix;
        const double par = (v.state.adjoint() * P * v.state)(0, 0).real();
        emit({{v.energy, par >= 0.0 ? 1 : -1, 0}}, v.space.fock_cutoff);
    }
    return t;
}

Table validity_map(const RunConfig& cfg)
{
    const json& c = cfg.params;
    const auto gs = c["g_grid"].get<std::vector<double>>();
    const auto Ws = c["Omega_grid"].get<std::vector<double>>();
    const auto methods = c["methods"].get<std::vector<std::string>>();
    const int n = c["n_levels"].get<int>();
    const int cutoff = c["cutoff"].get<int>();
    const std::size_t points = gs.size() * Ws.size();
    std::vector<std::vector<std::vector<Cell>>> blocks(points);
    parallel_for(points, cfg.threads, [&](std::size_t k) {
        const double g = gs[k / Ws.size()], W = Ws[k % Ws.size()];
        const qops::RabiParams p{c["omega"].get<double>(), W, g};
        const auto ref = spectra::exact_spectrum(p, policy_of(c, n));
        std::vector<double> e_ref(ref.eigen.values.data(), ref.eigen.values.data() + n);
        for (const auto& m : methods) {
            double err = kNaN;
            std::string flag;
            try {
                std::vector<spectra::SpectralLevel> lv;
                if (m == "jc") lv = spectra::jc_spectrum({p.omega, p.Omega, p.g}, n).levels;
                else if (m == "bs") lv = spectra::bloch_siegert_spectrum(p, n, cutoff).levels;
                else if (m == "grwa") lv = spectra::grwa_spectrum(p, cutoff).levels;
                else lv = braak_levels(p, n).levels;
                if (static_cast<int>(lv.size()) < n) flag = "too_few_levels";
                else err = spectra::max_level_error(spectra::energies(lv), e_ref, n);
            } catch (const NumericalError& e) {
                flag = e.kind();
            }
            blocks[k].push_back({g, W, m, err, flag});
        }
    });
    Table t{{"g", "Omega", "method", "max_error", "flag"}, {}};
    for (auto& b : blocks) t.rows.insert(t.rows.end(), b.begin(), b.end());
    return t;
}

Table steady(const RunConfig& cfg)
{
    const json& c = cfg.params;
    const auto gs = c["g_grid"].get<std::vector<double>>();
    const int N = c["cutoff"].get<int>();
    const double gamma = c["gamma"].get<double>(), kappa = c["kappa"].get<double>();
    std::vector<std::vector<Cell>> rows(gs.size());
    parallel_for(gs.size(), cfg.threads, [&](std::size_t k) {
        const auto space = qops::rabi_space(N);
        const auto H = qops::build_hamiltonian(rabi_params(c, gs[k]), space);
        const auto alg = qops::build_algebra(space);
        const Matrix P = qops::parity_operator(space).matrix;
        const auto es = numkern::eig_hermitian(H, &P);
        const Matrix n_op = alg.adag[0].matrix * alg.a[0].matrix;
        const qops::Vector ground = es.vectors.col(0);

        // Dressed rates are 2γ(ω), so γ0 = rate/2 matches the phenomenological channels.
        const auto Ld = open::build_dressed_lindbladian(
            es, {flat_bath(alg.a[0].matrix + alg.adag[0].matrix, 0.5 * gamma), flat_bath(alg.spin[0].x.matrix, 0.5 * kappa)});
        const auto sd = open::steady_state(Ld);
        const double n_d = (Ld.to_frame(n_op) * sd.rho.matrix).trace().real();
        const double f_d = sd.rho.matrix(0, 0).real();

        const auto sp = open::steady_state(open::phenomenological_rabi(H, gamma, kappa));
        const double n_p = (n_op * sp.rho.matrix).trace().real();
        const double f_p = (ground.adjoint() * sp.rho.matrix * ground)(0, 0).real();
        rows[k] = {gs[k], n_d, n_p, n_p - n_d, f_d, f_p};
    });
    return {{"g", "n_dressed", "n_phenomenological", "excess", "fidelity_dressed", "fidelity_phenomenological"},
            std::move(rows)};
}

Table g2(const RunConfig& cfg)
{
    const json& c = cfg.params;
    const int N = c["cutoff"].get<int>(), n_keep = c["n_keep"].get<int>();
    const double gamma0 = c["gamma0"].get<double>();
    const auto space = qops::rabi_space(N);
    const auto H = qops::build_hamiltonian(rabi_params(c, c["g"].get<double>()), space);
    const auto alg = qops::build_algebra(space);
    const Matrix P = qops::parity_operator(space).matrix;
    const auto es = numkern::eig_hermitian(H, &P);
    const Matrix X = alg.a[0].matrix + alg.adag[0].matrix;
    const double wd = c["omega_d"].is_number() ? c["omega_d"].get<double>() : es.values(1) - es.values(0);

    const auto wdm = floquet::weak_drive_model(es, {flat_bath(X, gamma0), flat_bath(alg.spin[0].x.matrix, gamma0)}, X,
                                               c["F"].get<double>(), wd, c["phi"].get<double>(), n_keep);
    const auto ss = open::steady_state(wdm.generator);
    const auto taus = c["tau_grid"].get<std::vector<double>>();
    const auto res = open::correlation_g2(wdm.generator, ss, wdm.detector, taus);
    Table t{{"quantity", "x", "value"}, {}};
    t.rows.push_back({std::string("omega_d"), 0.0, wd});
    t.rows.push_back({std::string("flux"), 0.0, res.flux});
    t.rows.push_back({std::string("g2_zero"), 0.0, res.g2_zero});
    for (std::size_t i = 0; i < res.tau.size(); ++i) t.rows.push_back({std::string("g2_tau"), res.tau[i], res.g2[i]});
    // The detector rotates at ω_d in the model frame; lab frequency = ω_d + frame frequency.
    const auto omegas = c["omega_grid"].get<std::vector<double>>();
    if (!omegas.empty()) {
        std::vector<double> shifted;
        for (double w : omegas) shifted.push_back(w - wd);
        const auto S = open::emission_spectrum(wdm.generator, ss, wdm.detector, shifted);
        for (std::size_t i = 0; i < omegas.size(); ++i) t.rows.push_back({std::string("spectrum"), omegas[i], S[i]});
    }
    return t;
}

Table floquet_map(const RunConfig& cfg)
{
    const json& c = cfg.params;
    const int N = c["cutoff"].get<int>(), n_keep = c["n_keep"].get<int>();
    const auto space = qops::rabi_space(N);
    const auto H = qops::build_hamiltonian(rabi_params(c, c["g"].get<double>()), space);
    const auto alg = qops::build_algebra(space);
    const Matrix P = qops::parity_operator(space).matrix;
    const auto es = numkern::eig_hermitian(H, &P);
    const Matrix X = alg.a[0].matrix + alg.adag[0].matrix;
    const double gamma0 = c["gamma0"].get<double>();
    const auto L0 =
        open::build_dressed_lindbladian(es, {flat_bath(X, gamma0), flat_bath(alg.spin[0].x.matrix, gamma0)}, n_keep);
    const Matrix Xp = open::xplus_energy(es, X, n_keep);
    const Matrix flux_op = Xp.adjoint() * Xp;
    const Matrix n_op = L0.to_frame(alg.adag[0].matrix * alg.a[0].matrix);
    floquet::FloquetOptions opts;
    opts.n_f = c["n_f"].get<int>();
    opts.n_f_cap = c["n_f_cap"].get<int>();
    opts.conv_tol = c["conv_tol"].get<double>();

    const auto wds = c["omega_d_grid"].get<std::vector<double>>();
    std::vector<std::vector<std::vector<Cell>>> blocks(wds.size());
    parallel_for(wds.size(), cfg.threads, [&](std::size_t k) {
        floquet::DriveSpec d;
        d.F = c["F"].get<double>();
        d.omega_d = wds[k];
        d.phi = c["phi"].get<double>();
        d.drive_op = X;
        const auto FL = floquet::build_floquet_liouvillian(L0, d, opts);
        for (Eigen::Index a = 0; a < FL.values.size(); ++a)
            blocks[k].push_back({wds[k], std::string("zone_eigenvalue"), static_cast<long long>(a), FL.values(a).real(),
                                 FL.values(a).imag()});
        const auto ps = floquet::floquet_steady_state(FL);
        blocks[k].push_back({wds[k], std::string("flux_avg"), 0LL, (flux_op * ps.average()).trace().real(), 0.0});
        blocks[k].push_back({wds[k], std::string("photon_number_avg"), 0LL, (n_op * ps.average()).trace().real(), 0.0});
        blocks[k].push_back({wds[k], std::string("n_f_used"), 0LL, static_cast<double>(FL.n_f), 0.0});
    });
    Table t{{"omega_d", "record", "index", "real", "imag"}, {}};
    for (auto& b : blocks) t.rows.insert(t.rows.end(), b.begin(), b.end());
    return t;
}

Table gauge_scan(const RunConfig& cfg)
{
    const json& c = cfg.params;
    const auto gs = c["g_grid"].get<std::vector<double>>();
    const auto orders = c["orders"].get<std::vector<int>>();
    gauge::DeviationOptions o;
    o.n_levels = c["n_levels"].get<int>();
    o.policy = policy_of(c, o.n_levels);
    std::vector<std::vector<gauge::DeviationEntry>> parts(gs.size());
    parallel_for(gs.size(), cfg.threads, [&](std::size_t k) {
        parts[k] = gauge::gauge_spectrum_deviation(rabi_params(c, 0.0), {gs[k]}, orders, o);
    });
    Table t{{"g", "variant", "order", "deviation", "converged", "cutoff_used", "flag"}, {}};
    for (const auto& part : parts) {
        for (const auto& e : part) {
            const bool taylor = e.variant == gauge::Variant::coulomb_taylor;
            t.rows.push_back({e.g, std::string(taylor ? "coulomb_taylor" : "coulomb_full"),
                              static_cast<long long>(taylor ? e.order : -1), e.deviation,
                              static_cast<long long>(e.converged ? 1 : 0), static_cast<long long>(e.cutoff_used),
                              e.flag});
        }
    }
    return t;
}

} // namespace

Table run_command(const RunConfig& cfg)
{
    if (cfg.command == "spectrum") return spectrum(cfg);
    if (cfg.command == "validity-map") return validity_map(cfg);
    if (cfg.command == "steady") return steady(cfg);
    if (cfg.command == "g2") return g2(cfg);
    if (cfg.command == "floquet") return floquet_map(cfg);
    if (cfg.command == "gauge-scan") return gauge_scan(cfg);
    throw SchemaError("unknown command '" + cfg.command + "'");
}

} // namespace usqed::cli
