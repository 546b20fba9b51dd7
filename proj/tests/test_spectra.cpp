// test_spectra.cpp — Exact, JC, Bloch–Siegert and GRWA spectra against oracles

#include "doctest.h"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/laguerre.hpp>

#include "usqed/error.hpp"
#include "usqed/numkern.hpp"
#include "usqed/qops.hpp"
#include "usqed/spectra.hpp"

using namespace usqed;
using namespace usqed::spectra;
using qops::Matrix;
using qops::Vector;

namespace {

std::vector<double> head(const Eigen::VectorXd& v, int n)
{
    return std::vector<double>(v.data(), v.data() + n);
}

// Independent GRWA oracle: closed-form polaron-frame block elements with
// β = g/ω and Laguerre polynomials, ⟨m|D(α)|n⟩ = √(m!/n!) e^{−|α|²/2} (−α*)^{n−m} L_m^{(n−m)}(|α|²).
std::vector<double> grwa_closed_form(double w, double W, double g, int n_max)
{
    const double b = g / w;
    const double x = 4.0 * b * b;
    const double damp = std::exp(-2.0 * b * b);
    std::vector<double> out;
    out.push_back(-g * g / w - 0.5 * W * damp);
    for (int n = 1; n <= n_max; ++n) {
        const double dd = w * n - g * g / w - 0.5 * W * damp * boost::math::laguerre(n, x);
        const double uu = w * (n - 1) - g * g / w + 0.5 * W * damp * boost::math::laguerre(n - 1, x);
        const double off = 0.5 * W * (2.0 * b / std::sqrt(static_cast<double>(n))) * damp *
                           boost::math::laguerre(n - 1, 1, x);
        const double mean = 0.5 * (dd + uu);
        const double rad = std::sqrt(0.25 * (dd - uu) * (dd - uu) + off * off);
        out.push_back(mean - rad);
        out.push_back(mean + rad);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("exact spectrum: decoupled and displaced-oscillator anchors")
{
    const auto free = exact_spectrum(qops::RabiParams{1.0, 1.0, 0.0});
    const double expect[] = {-0.5, 0.5, 0.5, 1.5, 1.5, 2.5, 2.5, 3.5};
    for (int i = 0; i < 8; ++i) CHECK(std::abs(free.eigen.values(i) - expect[i]) < 1e-10);

    const auto disp = exact_spectrum(qops::RabiParams{1.0, 0.0, 0.5});
    for (int i = 0; i < 8; ++i) CHECK(std::abs(disp.eigen.values(i) - (i / 2 - 0.25)) < 1e-10);
}

TEST_CASE("exact spectrum reference levels at (1, 0.4, 0.7)")
{
    // Reference: independent dense diagonalization at N = 140 (numpy eigh).
    const double ref[] = {-0.58359799300921, -0.43613645062236, 0.44057070763233, 0.58684906456042,
                          1.43382031659101, 1.58102179917282, 2.48277183723140, 2.53449460720118};
    const int parity[] = {-1, 1, -1, 1, 1, -1, -1, 1};
    CutoffPolicy pol;
    pol.tol = 1e-10;
    const auto cs = exact_spectrum(qops::RabiParams{1.0, 0.4, 0.7}, pol);
    CHECK(cs.n_converged == 8);
    CHECK(cs.cutoff_history.size() >= 2);
    CHECK(cs.cutoff_history.back().second < 1e-10);
    for (int i = 0; i < 8; ++i) {
        CHECK(std::abs(cs.eigen.values(i) - ref[i]) < 1e-10);
        CHECK(cs.eigen.parity[i] == parity[i]);
    }
}

TEST_CASE("every converged Rabi eigenvector has definite parity")
{
    for (double g : {0.3, 1.0}) {
        const auto cs = exact_spectrum(qops::RabiParams{1.0, 0.7, g});
        const Matrix P = qops::parity_operator(cs.space).matrix;
        for (int i = 0; i < 10; ++i) {
            const Vector v = cs.eigen.vectors.col(i);
            const double p = (v.adjoint() * P * v)(0, 0).real();
            CHECK(std::abs(std::abs(p) - 1.0) < 1e-8);
        }
    }
}

TEST_CASE("exact spectrum reports a cutoff cap")
{
    CutoffPolicy pol;
    pol.N_start = 4;
    pol.N_step = 2;
    pol.N_max = 8;
    CHECK_THROWS_AS(exact_spectrum(qops::RabiParams{1.0, 1.0, 1.5}, pol), NumericalError);
}

TEST_CASE("JC closed form")
{
    const auto free = jc_spectrum(qops::JCParams{1.0, 1.0, 0.0}, 4);
    const double expect[] = {-0.5, 0.5, 0.5, 1.5, 1.5};
    for (int i = 0; i < 5; ++i) CHECK(std::abs(free.levels[i].energy - expect[i]) < 1e-14);

    const double g = 0.37;
    const auto res = jc_spectrum(qops::JCParams{1.0, 1.0, g}, 3);
    CHECK(std::abs((res.levels[2].energy - res.levels[1].energy) - 2.0 * g) < 1e-14);

    // Against the numerical diagonalization of the truncated JC Hamiltonian; the
    // isolated |↑,N−1⟩ state at ω(N−1)+Ω/2 is a truncation artifact.
    const int N = 20;
    const qops::JCParams p{1.0, 0.8, 0.3};
    const auto es = numkern::eig_hermitian(qops::build_hamiltonian(p, qops::rabi_space(N)));
    std::vector<double> numeric(es.values.data(), es.values.data() + es.values.size());
    const double artifact = p.omega * (N - 1) + 0.5 * p.Omega;
    auto it = std::min_element(numeric.begin(), numeric.end(),
                               [&](double a, double b) { return std::abs(a - artifact) < std::abs(b - artifact); });
    CHECK(std::abs(*it - artifact) < 1e-12);
    numeric.erase(it);
    const auto cf = jc_spectrum(p, N - 1);
    REQUIRE(cf.levels.size() == numeric.size());
    CHECK(max_level_error(energies(cf.levels), numeric, static_cast<int>(numeric.size())) < 1e-10);

    // Closed-form states are eigenvectors of the numerical Hamiltonian.
    const auto small = jc_spectrum(p, 5);
    const Matrix H = qops::build_hamiltonian(p, small.space).matrix;
    for (std::size_t i = 0; i + 1 < small.levels.size(); ++i) {
        const Vector v = small.states.col(static_cast<Eigen::Index>(i));
        if (small.levels[i].manifold == 5) continue;
        CHECK((H * v - small.levels[i].energy * v).norm() < 1e-12);
    }
}

TEST_CASE("Bloch-Siegert spectrum")
{
    const auto bs0 = bloch_siegert_spectrum(qops::RabiParams{1.0, 0.8, 0.0}, 6, 12);
    const auto jc0 = jc_spectrum(qops::JCParams{1.0, 0.8, 0.0}, 6);
    CHECK(max_level_error(energies(bs0.levels), energies(jc0.levels), 13) < 1e-14);

    const qops::RabiParams p{1.0, 0.9, 0.12};
    const auto bs = bloch_siegert_spectrum(p, 6, 30);
    CHECK(std::abs(bs.levels[0].energy - (-0.5 * p.Omega - p.g * p.g / (p.omega + p.Omega))) < 1e-14);

    const qops::RabiParams q{1.0, 1.0, 0.1};
    const auto ex = exact_spectrum(q);
    const auto ref = head(ex.eigen.values, 6);
    const double err_bs = max_level_error(energies(bloch_siegert_spectrum(q, 8, 30).levels), ref, 6);
    const double err_jc = max_level_error(energies(jc_spectrum(qops::JCParams{1.0, 1.0, 0.1}, 8).levels), ref, 6);
    CHECK(err_bs < err_jc);

    // Lab-frame ground state from U₁U₂ is closer to the exact one than the JC ground state.
    const int N = 30;
    const auto exN = numkern::eig_hermitian(qops::build_hamiltonian(q, qops::rabi_space(N)));
    const Vector gs = exN.vectors.col(0);
    const auto bsN = bloch_siegert_spectrum(q, 8, N);
    Vector jc_gs = Vector::Zero(2 * N);
    jc_gs(N) = 1.0;
    const double inf_bs = 1.0 - std::norm(gs.dot(bsN.states.col(0)));
    const double inf_jc = 1.0 - std::norm(gs.dot(jc_gs));
    CHECK(inf_bs < inf_jc);
    CHECK(std::abs(bsN.states.col(0).norm() - 1.0) < 1e-12);
}

TEST_CASE("GRWA: exact at Omega = 0, free at g = 0, matches the Laguerre closed form")
{
    const auto om0 = grwa_spectrum(qops::RabiParams{1.0, 0.0, 0.6}, 40);
    for (int i = 0; i < 10; ++i) {
        // Doubly degenerate displaced-oscillator levels n − g².
        CHECK(std::abs(om0.levels[i].energy - (i / 2 - 0.36)) < 1e-10);
    }

    const auto g0 = grwa_spectrum(qops::RabiParams{1.0, 1.0, 0.0}, 20);
    const double expect[] = {-0.5, 0.5, 0.5, 1.5, 1.5};
    for (int i = 0; i < 5; ++i) CHECK(std::abs(g0.levels[i].energy - expect[i]) < 1e-12);

    for (double g : {0.2, 0.5, 0.9}) {
        const auto gr = grwa_spectrum(qops::RabiParams{1.0, 0.7, g}, 60);
        const auto cf = grwa_closed_form(1.0, 0.7, g, 10);
        for (int i = 0; i < 12; ++i) CHECK(std::abs(gr.levels[i].energy - cf[i]) < 1e-9);
    }
}

TEST_CASE("method ladder against the exact spectrum")
{
    for (double g : {0.02, 0.05, 0.1}) {
        const qops::RabiParams p{1.0, 1.0, g};
        const auto ref = head(exact_spectrum(p).eigen.values, 4);
        const double e_bs = max_level_error(energies(bloch_siegert_spectrum(p, 6, 20).levels), ref, 4);
        const double e_jc = max_level_error(energies(jc_spectrum(qops::JCParams{1.0, 1.0, g}, 6).levels), ref, 4);
        CHECK(e_bs <= e_jc);
    }
    for (double g : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8}) {
        const qops::RabiParams p{1.0, 1.0, g};
        const auto ref = head(exact_spectrum(p).eigen.values, 4);
        const double e_gr = max_level_error(energies(grwa_spectrum(p, 60).levels), ref, 4);
        const double e_jc = max_level_error(energies(jc_spectrum(qops::JCParams{1.0, 1.0, g}, 6).levels), ref, 4);
        CHECK(e_gr <= e_jc);
    }
}
