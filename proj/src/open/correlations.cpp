// correlations.cpp — Quantum-regression g²(τ) and incoherent emission spectra

#include "usqed/open.hpp"

#include <cmath>
#include <stdexcept>

#include "usqed/error.hpp"

namespace usqed::open {

namespace {

void check_mixing(const SteadyState& ss, const Matrix& Oplus, Eigen::Index d)
{
    if (ss.degenerate) {
        throw NumericalError("non_mixing", "Liouvillian has several zero modes; stationary correlations undefined",
                             {{"zero_modes", std::to_string(ss.slow_modes.size())}});
    }
    if (Oplus.rows() != d || Oplus.cols() != d || ss.rho.matrix.rows() != d) {
        throw std::invalid_argument("operator, state and generator dimensions differ");
    }
}

double flux_or_throw(const Matrix& Oplus, const Matrix& rho)
{
    const double flux = photon_flux(Oplus, rho);
    if (!(flux > 1e-14)) {
        throw NumericalError("dark_steady_state", "steady-state photon flux <O-O+> vanishes",
                             {{"flux", format_double(flux)}});
    }
    return flux;
}

} // namespace

G2Result correlation_g2(const LindbladGenerator& L, const SteadyState& ss, const Matrix& Oplus,
                        const std::vector<double>& tau_grid)
{
    const Eigen::Index d = L.dim();
    check_mixing(ss, Oplus, d);
    const Matrix& rho = ss.rho.matrix;
    const Matrix Om = Oplus.adjoint();
    G2Result out;
    out.flux = flux_or_throw(Oplus, rho);
    const double f2 = out.flux * out.flux;
    out.g2_zero = (Om * Om * Oplus * Oplus * rho).trace().real() / f2;
    if (tau_grid.empty()) return out;

    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        if (tau_grid[i] < 0.0 || (i > 0 && tau_grid[i] < tau_grid[i - 1])) {
            throw std::invalid_argument("tau grid must be non-negative and ascending");
        }
    }
    std::vector<double> grid;
    if (tau_grid.front() > 0.0) grid.push_back(0.0);
    grid.insert(grid.end(), tau_grid.begin(), tau_grid.end());

    const Matrix S = L.superoperator();
    const Matrix sigma0 = Oplus * rho * Om;
    const auto D = static_cast<std::size_t>(d * d);
    numkern::OdeRhs rhs = [&](const numkern::OdeState& y, numkern::OdeState& dy, double) {
        Eigen::Map<const Vector> yv(y.data(), static_cast<Eigen::Index>(D));
        Eigen::Map<Vector> dv(dy.data(), static_cast<Eigen::Index>(D));
        dv.noalias() = S * yv;
    };
    numkern::OdeOptions opts;
    opts.rtol = 1e-10;
    opts.atol = 1e-14;
    const auto states = numkern::propagate_ode(rhs, numkern::OdeState(sigma0.data(), sigma0.data() + D), grid, opts);
    const Matrix N = Om * Oplus;
    const std::size_t skip = grid.size() - tau_grid.size();
    for (std::size_t i = skip; i < states.size(); ++i) {
        const Matrix sigma = Eigen::Map<const Matrix>(states[i].data(), d, d);
        out.tau.push_back(grid[i]);
        out.g2.push_back((N * sigma).trace().real() / f2);
    }
    return out;
}

std::vector<double> emission_spectrum(const LindbladGenerator& L, const SteadyState& ss, const Matrix& Oplus,
                                      const std::vector<double>& omega_grid)
{
    const Eigen::Index d = L.dim();
    check_mixing(ss, Oplus, d);
    if (d * d > 1600) throw std::invalid_argument("emission_spectrum eigen-expansion is limited to d <= 40");
    const Matrix& rho = ss.rho.matrix;
    const Matrix Om = Oplus.adjoint();
    flux_or_throw(Oplus, rho);

    const numkern::GeneralEigenSystem es = numkern::eig_general(L.superoperator());
    if (es.defective) warn("emission_spectrum: Liouvillian eigenbasis is ill-conditioned");
    // Coherent part ⟨O⁺⟩ρ_ss removed: its zero-mode weight would be a δ peak.
    const cplx mean = (Oplus * rho).trace();
    const Matrix x = Oplus * rho - mean * rho;
    const Vector xv = Eigen::Map<const Vector>(x.data(), x.size());
    const Vector c = es.left * xv;
    // tr(O⁻ R) = Σ_ij O⁻_ij R_ji = vec(O⁻ᵀ)·vec(R).
    const Matrix OmT = Om.transpose();
    const Vector ov = Eigen::Map<const Vector>(OmT.data(), OmT.size());
    const Eigen::VectorXcd t = es.right.transpose() * ov;

    std::vector<double> out;
    out.reserve(omega_grid.size());
    for (double w : omega_grid) {
        cplx s = 0.0;
        for (Eigen::Index a = 0; a < es.values.size(); ++a) {
            if (std::abs(es.values(a)) < 1e-10) continue;
            s += c(a) * t(a) / (cplx(0.0, w) - es.values(a));
        }
        out.push_back(s.real());
    }
    return out;
}

} // namespace usqed::open
