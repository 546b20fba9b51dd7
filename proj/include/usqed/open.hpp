// open.hpp — Dressed and phenomenological master equations, photodetection, correlations, Langevin response

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "usqed/numkern.hpp"
#include "usqed/qops.hpp"

namespace usqed::open {

using qops::cplx;
using qops::Matrix;
using qops::Vector;

// Transitions closer than this are one frequency; |ω| below it is the ω = 0 block.
inline constexpr double kFrequencyTol = 1e-9;

enum class DensityKind { flat, sqrt, ohmic };

// System-bath channel with coupling A ⊗ B and spectral density γ(ω).
struct BathSpec {
    Matrix coupling_op;                          // Hermitian A in the lab basis
    DensityKind density_kind{DensityKind::flat};
    double gamma0{0.0};
    double omega_ref{1.0};
    std::function<double(double)> lamb_shift;    // D(ω); empty means absent
    double cluster_tol{0.0};                     // 0 is the strict secular limit

    double gamma(double omega) const;  // γ(ω) for ω > 0, 0 otherwise
    void validate(Eigen::Index dim) const;
};

// One frequency class Ã(ω̄) = Σ_{ω∈P(ω̄)} A(ω) of lowering transitions.
struct JumpClass {
    double frequency{0.0};  // class mean ω̄ > 0
    double width{0.0};      // max − min member frequency
    Matrix op;              // energy-basis matrix
    bool tie{false};        // a member sat exactly at the class boundary
};

struct JumpDecomposition {
    std::vector<JumpClass> classes;  // ascending ω̄
    Matrix zero_block;               // ω = 0 part (degenerate pairs and diagonal)
    bool tie_flagged{false};

    // Σ_ω̄ (Ã(ω̄) + Ã(ω̄)†) + zero block.
    Matrix reconstruct() const;
};

// Decomposition of A in the basis of the lowest n_keep levels of `eigen`
// (all levels when n_keep = 0).
JumpDecomposition dressed_jump_operators(const numkern::EigenSystem& eigen, const Matrix& A_lab,
                                         double cluster_tol = 0.0, int n_keep = 0);

// Lindblad term rate·(J ρ J† − ½{J†J, ρ}).
struct Jump {
    double rate{0.0};
    Matrix op;
    double frequency{0.0};
};

// ρ' = −i[H, ρ] + Σ jumps, all matrices in the frame basis. The frame columns
// are the basis vectors written in the lab space (an isometry).
struct LindbladGenerator {
    Matrix frame;
    Matrix H;
    std::vector<Jump> jumps;
    Eigen::VectorXd energies;  // dressed frame only: H_S eigenvalues of the frame vectors

    Eigen::Index dim() const { return H.rows(); }
    Matrix apply(const Matrix& rho) const;
    // Column-stacking superoperator: vec(L ρ) = S vec(ρ).
    Matrix superoperator() const;
    Matrix to_frame(const Matrix& lab_op) const;
    Matrix to_lab(const Matrix& frame_op) const;
};

enum class LindbladKind { dressed, phenomenological };

struct LindbladOptions {
    int n_keep{0};                          // dressed: lowest levels kept (0 = all)
    std::optional<Matrix> symmetry;         // dressed: degenerate-cluster disambiguation
    std::optional<Matrix> bare_hamiltonian; // phenomenological: uncoupled H defining the bare jumps
};

// Dressed: jumps from the eigenbasis of H at rates 2γ(ω̄), frame = kept eigenvectors.
// Phenomenological: jumps from the eigenbasis of the bare Hamiltonian, lab frame,
// each bath contributing the sum of its bare dissipators.
LindbladGenerator build_lindbladian(LindbladKind kind, const qops::Operator& H,
                                    const std::vector<BathSpec>& baths, const LindbladOptions& opts = {});

LindbladGenerator build_dressed_lindbladian(const numkern::EigenSystem& eigen, const std::vector<BathSpec>& baths,
                                            int n_keep = 0);

// Literal two-channel master equation ρ' = −i[H,ρ] + γ D[a]ρ + κ D[σ₋]ρ with
// D[J]ρ = JρJ† − ½{J†J,ρ}; a and σ₋ are the bare cavity and atom lowering operators.
LindbladGenerator phenomenological_rabi(const qops::Operator& H, double gamma_cavity, double kappa_atom);

struct DensityMatrix {
    Matrix matrix;

    double trace_error() const;
    double min_eigenvalue() const;
    // Throws NumericalError "invalid_density_matrix" outside |tr−1| < 1e-10, min eig > −1e-8.
    void validate() const;
};

struct SteadyState {
    DensityMatrix rho;
    double residual{0.0};          // ‖L ρ‖_max
    bool degenerate{false};        // more than one zero mode
    std::vector<Matrix> slow_modes;
};

SteadyState steady_state(const LindbladGenerator& L);
SteadyState steady_state(const Matrix& superop, Eigen::Index d);

// Trajectory ρ(t) in the frame basis; trace deviations above 1e-10 raise NumericalError.
std::vector<Matrix> propagate(const LindbladGenerator& L, const Matrix& rho0, const std::vector<double>& t_grid,
                              const numkern::OdeOptions& opts = {});

// X⁺ = Σ_{E_i<E_j} X_ij |i⟩⟨j| in the energy basis of the lowest n_keep levels.
Matrix xplus_energy(const numkern::EigenSystem& eigen, const Matrix& X_lab, int n_keep = 0);
// Same operator expressed in the lab basis.
Matrix xplus_operator(const numkern::EigenSystem& eigen, const Matrix& X_lab);
// Ô⁺ = √(2π) Σ_{E_i<E_j} g(ω_ji) X_ij |i⟩⟨j| in the energy basis.
Matrix detector_operator(const numkern::EigenSystem& eigen, const Matrix& X_lab,
                         const std::function<double(double)>& g, int n_keep = 0);
// Photodetection rate ⟨O⁻O⁺⟩ = tr(O⁺† O⁺ ρ).
double photon_flux(const Matrix& Oplus, const Matrix& rho);

struct G2Result {
    double flux{0.0};  // ⟨O⁻O⁺⟩_ss
    double g2_zero{0.0};
    std::vector<double> tau;
    std::vector<double> g2;
};

G2Result correlation_g2(const LindbladGenerator& L, const SteadyState& ss, const Matrix& Oplus,
                        const std::vector<double>& tau_grid);

// Incoherent emission spectrum Re ∫₀^∞ dτ e^{−iωτ} tr[O⁻ e^{Lτ}(O⁺ρ_ss − ⟨O⁺⟩ρ_ss)].
std::vector<double> emission_spectrum(const LindbladGenerator& L, const SteadyState& ss, const Matrix& Oplus,
                                      const std::vector<double>& omega_grid);

struct HopfieldResponse {
    std::vector<double> omega;
    std::vector<Matrix> U;            // 4×4 over (a, b, a†, b†)
    std::vector<double> transmission; // |U_aa − 1|²/4
    std::vector<double> reflection;   // |U_aa|²
    double omega_lower{0.0};          // closed-model polariton frequencies
    double omega_upper{0.0};
};

// Dynamical matrix K with dv/dt = −iKv for v = (a, b, a†, b†) of the closed model.
Matrix hopfield_dynamical_matrix(const qops::HopfieldParams& p);
// Positive normal-mode frequencies (lower, upper); throws NumericalError "spectral_instability".
std::pair<double, double> hopfield_normal_modes(const qops::HopfieldParams& p);

HopfieldResponse hopfield_langevin_response(const qops::HopfieldParams& p, double kappa_c, double kappa_x,
                                            const std::vector<double>& omega_grid);

} // namespace usqed::open
