// spectra.hpp — Closed-system spectral methods for the Rabi family

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "usqed/numkern.hpp"
#include "usqed/qops.hpp"

namespace usqed::spectra {

using qops::Matrix;
using qops::Vector;

struct CutoffPolicy {
    int n_levels{8};      // levels that must converge
    double tol{1e-10};    // max level shift between successive cutoffs
    int N_start{20};
    int N_step{20};
    int N_max{400};
};

struct ConvergedSpectrum {
    numkern::EigenSystem eigen;
    qops::HilbertSpec space;
    int cutoff_used{0};
    std::vector<std::pair<int, double>> cutoff_history;  // (N, max shift of the tracked levels)
    int n_converged{0};
};

// Raises the cutoff by N_step until the lowest n_levels move less than tol.
// `symmetry` may return an empty matrix when the model has none.
ConvergedSpectrum exact_spectrum(const std::function<qops::Operator(int)>& build,
                                 const std::function<Matrix(int)>& symmetry,
                                 const CutoffPolicy& policy);
// Rabi model with parity labels attached.
ConvergedSpectrum exact_spectrum(const qops::RabiParams& p, const CutoffPolicy& policy = {});

struct SpectralLevel {
    double energy{0.0};
    int parity{0};     // ±1 excitation-number parity
    int manifold{0};   // excitation number n of the block, 0 for the ground block
};

struct PerturbativeSpectrum {
    std::vector<SpectralLevel> levels;  // ascending
    Matrix states;                      // lab-frame eigenvectors as columns, on `space`
    qops::HilbertSpec space;
};

// Closed-form Jaynes–Cummings ladder: ground −Ω/2 on |↓,0⟩, and for n ≥ 1 the
// pair E± = ω(n − ½) ± ½√((Ω − ω)² + 4g²n) on {|↑,n−1⟩, |↓,n⟩}.
// Returns manifolds n = 0..n_max; states are embedded in a cutoff of n_max + 1.
PerturbativeSpectrum jc_spectrum(const qops::JCParams& p, int n_max);

// Bloch–Siegert effective Hamiltonian, block-diagonal in the excitation number;
// eigenstates are mapped to the lab frame by U₁U₂ on a cutoff of `cutoff`.
PerturbativeSpectrum bloch_siegert_spectrum(const qops::RabiParams& p, int n_max, int cutoff);

// GRWA: H̃ = U†HU with U = exp[(g/ω)σ_x(a − a†)], restricted to the 1×1 ground
// block |↓,0⟩ and the 2×2 blocks {|↓,n⟩, |↑,n−1⟩}. Blocks with n ≤ cutoff/2 are returned.
PerturbativeSpectrum grwa_spectrum(const qops::RabiParams& p, int cutoff);

// Truncated power series of the Bargmann solution at fixed x = E + g² (ω = 1 units):
// φ_j(z) = e^{−gz} ψ_j(z + g), ψ₂ = Σ b_n y^n, ψ₁ = Σ a_n y^n, a_n = Δ b_n / (x − n).
struct BraakSeries {
    double g{0.0};
    double Delta{0.0};  // Ω/2
    double x{0.0};
    std::vector<double> b;  // b_0 .. b_M
    std::vector<double> a;
    int order() const { return static_cast<int>(b.size()) - 1; }
};

struct BraakOptions {
    double tail_tol{1e-12};
    int max_order{4000};
    double guard{1e-4};   // pole guard band, units of ω
    double grid_step{2e-3};
    double collision_tol{1e-8};
};

// Coefficients with adaptive order: the last term is below tail_tol relative
// to Σ|terms| at y = g. Inputs are in ω = 1 units.
BraakSeries braak_series(double x, double g, double Delta, int order);

// Bargmann ODE residuals (first, second equation) of the truncated series at
// complex z, normalized by the magnitude of the individual terms.
std::pair<double, double> bargmann_residual(const BraakSeries& s, std::complex<double> z);

struct BraakValue {
    double G_plus{0.0};
    double G_minus{0.0};
    double scale{0.0};  // Σ|terms|, the natural magnitude of G± at this x
    int order{0};
};

BraakValue braak_g(double x, const qops::RabiParams& p, const BraakOptions& opts = {});

struct BraakSpectrum {
    std::vector<SpectralLevel> levels;  // E = x − g², ascending; manifold unused
    std::vector<std::pair<double, double>> collisions;  // opposite-parity roots closer than collision_tol
};

BraakSpectrum braak_spectrum(const qops::RabiParams& p, double E_max, const BraakOptions& opts = {});

struct VariationalResult {
    double energy{0.0};
    double beta{0.0};
    double lambda{0.0};
    Vector state;        // normalized, on `space`
    qops::HilbertSpec space;
    bool stagnated{false};
};

// Minimizes ⟨H⟩ over |ψ⟩ ∝ |+⟩D(−β)S(λ)|0⟩ − |−⟩D(β)S(λ)|0⟩ with λ ≥ 0.
VariationalResult variational_polaron_ground(const qops::RabiParams& p, bool with_squeezing,
                                             const numkern::SimplexOptions& opts = {});

struct PolaronAnsatz {
    int n_pol{1};
    std::vector<Eigen::VectorXd> alpha;  // per polaron, one real displacement per mode
    Eigen::VectorXd weights;             // C_n, normalized so that ⟨Ψ|Ψ⟩ = 1
};

struct MultiPolaronResult {
    double energy{0.0};
    PolaronAnsatz ansatz;
    bool stagnated{false};
};

// |Ψ⟩ = Σ_n C_n (|+, α⁽ⁿ⁾⟩ − |−, −α⁽ⁿ⁾⟩); energy from the analytic overlap kernel.
MultiPolaronResult multipolaron_spin_boson_ground(const qops::SpinBosonParams& p, int n_pol,
                                                  const numkern::SimplexOptions& opts = {});

// Energy of a given multi-polaron configuration (lowest generalized eigenvalue over C).
double multipolaron_energy(const qops::SpinBosonParams& p, const std::vector<Eigen::VectorXd>& alpha,
                           Eigen::VectorXd* weights = nullptr);

// Max |E_i^method − E_i^reference| over the first n levels, sorted order.
double max_level_error(const std::vector<double>& method, const std::vector<double>& reference, int n);

std::vector<double> energies(const std::vector<SpectralLevel>& levels);

} // namespace usqed::spectra
