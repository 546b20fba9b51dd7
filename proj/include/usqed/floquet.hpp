// floquet.hpp — Periodically driven open systems: Floquet–Liouville, Floquet–Markov and weak-drive models

#pragma once

#include <vector>

#include "usqed/numkern.hpp"
#include "usqed/open.hpp"
#include "usqed/qops.hpp"

namespace usqed::floquet {

using qops::cplx;
using qops::Matrix;
using qops::Vector;

// H(t) = H₀ + F cos(ω_d t + φ) X with X Hermitian in the lab basis.
struct DriveSpec {
    double F{0.0};
    double omega_d{1.0};
    double phi{0.0};
    Matrix drive_op;

    double period() const;
    void validate(Eigen::Index dim) const;
};

// Superoperator of ρ ↦ −i[X, ρ] in the column-stacking convention.
Matrix commutator_superop(const Matrix& X);

struct FloquetOptions {
    int n_f{4};            // initial Fourier cutoff
    int n_f_cap{40};       // NumericalError "nf_cap" beyond this
    double conv_tol{1e-8}; // max change of zone representatives when N_F grows by 2
};

// Block matrix over Fourier index n ∈ [−N_F, N_F]:
// L̃[(n,m)] = L⁽ⁿ⁻ᵐ⁾ + i n ω_d δ_nm, with L⁽⁰⁾ the undriven generator and
// L⁽±¹⁾ = (F/2) e^{∓iφ} C, C = −i[X, ·], so that ρ(t) = Σ_α c_α e^{Ω_α t} Σ_n R_α⁽ⁿ⁾ e^{−inω_d t}.
struct FloquetLiouvillian {
    open::LindbladGenerator generator;  // undriven L⁽⁰⁾
    DriveSpec drive;                    // drive_op in the lab basis
    Matrix drive_frame;                 // drive_op in the generator frame
    int n_f{0};
    Eigen::Index d{0};                  // Hilbert dimension of the frame
    Matrix L0, Lplus, Lminus;           // d² × d² blocks
    numkern::GeneralEigenSystem eigen;  // full block spectrum
    std::vector<Eigen::Index> selected; // one representative per zone family
    Eigen::VectorXcd values;            // representatives with Im Ω folded into (−ω_d/2, ω_d/2]
    std::vector<double> centroid;       // Fourier-index centroid of each representative
    bool defective{false};

    Matrix block_matrix() const;
    Eigen::Index block_dim() const { return d * d * (2 * n_f + 1); }
    // R⁽ⁿ⁾ of the full-spectrum eigenvector j as a d × d matrix.
    Matrix component(Eigen::Index j, int n) const;
    // Index of the representative with the smallest |Ω|.
    Eigen::Index zero_mode() const;
};

Matrix floquet_block_matrix(const Matrix& L0, const Matrix& Lplus, const Matrix& Lminus, double omega_d, int n_f);

// Builds and diagonalizes L̃, raising N_F by 2 from opts.n_f until the
// representatives change by less than opts.conv_tol.
FloquetLiouvillian build_floquet_liouvillian(const open::LindbladGenerator& L0, const DriveSpec& drive,
                                             const FloquetOptions& opts = {});

// Trajectory ρ(t) from one representative per zone family. Summing ⟨⟨L|ρ₀ ⊗ |0)⟩⟩
// over a family gives c_α = Σ_n ⟨L_α⁽ⁿ⁾|ρ₀⟩ for its representative.
// zone_shift = k uses the eigenpairs at Ω_α + ikω_d; the trajectory is invariant.
// A defective spectrum falls back to time integration with a warning.
std::vector<Matrix> floquet_dynamics(const FloquetLiouvillian& FL, const Matrix& rho0,
                                     const std::vector<double>& t_grid, int zone_shift = 0);

// Asymptotic periodic state ρ_ss(t) = Σ_n R⁽ⁿ⁾ e^{−inω_d t}, tr R⁽⁰⁾ = 1.
struct PeriodicState {
    double omega_d{1.0};
    int n_f{0};
    std::vector<Matrix> harmonics;  // R⁽ⁿ⁾ for n = −N_F … N_F

    Matrix at(double t) const;
    const Matrix& average() const { return harmonics[static_cast<std::size_t>(n_f)]; }
};

// Throws NumericalError "non_mixing" unless exactly one |Ω_α| < 1e-9.
PeriodicState floquet_steady_state(const FloquetLiouvillian& FL);

// Direct integration of ρ' = L⁽⁰⁾ρ + F cos(ω_d t + φ) Cρ in the generator frame;
// drive.drive_op is given in the lab basis.
std::vector<Matrix> propagate_driven(const open::LindbladGenerator& L0, const DriveSpec& drive, const Matrix& rho0,
                                     const std::vector<double>& t_grid, const numkern::OdeOptions& opts = {});

// Floquet states of H(t) from the one-period propagator.
struct FloquetStates {
    double omega_d{1.0};
    Eigen::VectorXd quasienergies;  // in (−ω_d/2, ω_d/2]
    Matrix u0;                      // columns |u_α(0)⟩ in the lab basis
    std::vector<double> t_samples;  // t_j = jT/M, j = 0 … M−1
    std::vector<Matrix> u_t;        // columns |u_α(t_j)⟩
    bool degenerate{false};         // two quasienergies within 1e-9 (mod ω_d)
    double monodromy_residual{0.0}; // max ‖U(T)u_α(0) − e^{−iε_αT}u_α(0)‖

    // A⁽ᵏ⁾_αβ = (1/T)∫ dt ⟨u_α(t)|A|u_β(t)⟩ e^{ikω_d t} by the trapezoidal rule.
    Matrix fourier(const Matrix& A_lab, int k) const;
    // All components k = −M/2 … M/2−1, index k + M/2.
    std::vector<Matrix> fourier_all(const Matrix& A_lab) const;
};

struct FloquetStatesOptions {
    int samples{256};      // initial M
    int samples_cap{4096};
    double conv_tol{1e-8}; // change of the Fourier components when M doubles
};

FloquetStates floquet_states(const Matrix& H0, const DriveSpec& drive, const FloquetStatesOptions& opts = {});

struct FloquetMarkov {
    FloquetStates states;
    open::LindbladGenerator generator;  // frame = |u_α(0)⟩, H = diag(ε)
};

// Secular Floquet–Markov master equation: jumps |u_α⟩⟨u_β| at rate
// Σ_k 2γ(Ω_αβ(k)) |A⁽ᵏ⁾_αβ|² over Ω_αβ(k) = ε_β − ε_α + kω_d > 0.
FloquetMarkov floquet_markov_me(const Matrix& H0, const std::vector<open::BathSpec>& baths, const DriveSpec& drive,
                                const FloquetStatesOptions& opts = {});

// Period-averaged ⟨O⟩ of a Floquet-frame state: Σ_αβ ρ_βα O⁽⁰⁾_αβ.
double period_average(const FloquetStates& states, const Matrix& rho_frame, const Matrix& O_lab);

// Weak drive near the dressed transitions. Level i belongs to manifold
// m_i = round((E_i − E_0)/ω_d); in the frame rotating with Σ m_i ω_d |i⟩⟨i|,
// H = diag(E_i − m_i ω_d) + (F/2) Σ_{m_j = m_i+1} (e^{iφ} X_ij |i⟩⟨j| + h.c.)
// and each dissipator class is split by manifold difference.
struct WeakDriveModel {
    std::vector<int> manifold;
    open::LindbladGenerator generator;  // energy basis of the kept levels
    Matrix detector;                    // Δm = 1 part of X⁺, energy basis
    double omega_d{1.0};
};

WeakDriveModel weak_drive_model(const numkern::EigenSystem& eigen, const std::vector<open::BathSpec>& baths,
                                const Matrix& X_lab, double F, double omega_d, double phi = 0.0, int n_keep = 0);

} // namespace usqed::floquet
