// gauge.hpp — Dipole- and Coulomb-gauge Rabi Hamiltonians and spectral deviation sweeps

#pragma once

#include <string>
#include <vector>

#include "usqed/numkern.hpp"
#include "usqed/qops.hpp"
#include "usqed/spectra.hpp"

namespace usqed::gauge {

using qops::Matrix;

enum class Variant { dipole, coulomb_full, coulomb_taylor };

// dipole:         ω a†a + (Ω/2) σ_z + i g σ_x (a† − a) + g²/ω
// coulomb_full:   ω a†a + (Ω/2) [σ_z cos φ + σ_y sin φ],  φ = (2g/ω)(a + a†)
// coulomb_taylor: cos φ and sin φ replaced by their Taylor polynomials through φᵏ, k = order.
// The constant g²/ω is the dipole self-energy, so that T H_D T† = H_C with T = exp[i(g/ω) σ_x (a + a†)].
struct GaugeFamily {
    qops::RabiParams params;
    Variant variant{Variant::dipole};
    int order{0};
    int cutoff{40};

    void validate() const;
    std::string label() const;  // "dipole", "coulomb_full", "coulomb_taylor(k)"
};

// Max over Fock columns n < N/2 of the weight that T computed at cutoff 2N
// moves outside the first N Fock states.
double transformation_defect(const qops::RabiParams& p, int cutoff);

// Coulomb variants throw NumericalError "gauge_cutoff" when the defect exceeds 1e-6.
qops::Operator build_gauge_hamiltonian(const GaugeFamily& family);

// Max_i |E_i − E_i^ref| over the lowest n_levels of ref, pairing the r-th level of
// each parity sector in ref with the r-th level of the same sector in `levels`.
double paired_deviation(const numkern::EigenSystem& levels, const numkern::EigenSystem& ref, int n_levels);

struct DeviationOptions {
    int n_levels{6};
    spectra::CutoffPolicy policy{6, 1e-10, 20, 20, 160};
};

struct DeviationEntry {
    double g{0.0};
    Variant variant{Variant::dipole};
    int order{0};
    double deviation{0.0};  // NaN when excluded
    bool converged{false};
    int cutoff_used{0};
    std::string flag;       // reason for exclusion, empty when converged
};

// Rows ordered by g, then coulomb_full, then Taylor orders as given. Each spectrum
// is converged in the cutoff separately; failures are flagged and excluded.
std::vector<DeviationEntry> gauge_spectrum_deviation(const qops::RabiParams& base, const std::vector<double>& g_grid,
                                                     const std::vector<int>& orders, const DeviationOptions& opts = {});

} // namespace usqed::gauge
