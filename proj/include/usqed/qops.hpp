// qops.hpp — Truncated Fock/spin operator algebra and model Hamiltonians

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace usqed::qops {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kHermitianTol = 1e-12;

// Dimension cap for dense builders; USQED_DIM_CAP overrides the default.
inline constexpr std::size_t kDefaultDimCap = 20000;
std::size_t dim_cap();

// Tensor order is spins ⊗ modes, row-major: spin 0 is the most significant
// factor, the last mode the least significant. Spin basis |0> = up (σ_z = +1).
struct HilbertSpec {
    int fock_cutoff{1};
    int n_modes{1};
    int n_spins{0};

    std::size_t dim() const;
    void validate() const;  // throws std::invalid_argument, including cap overflow
    bool operator==(const HilbertSpec&) const = default;
};

HilbertSpec rabi_space(int fock_cutoff);

struct Operator {
    HilbertSpec space;
    Matrix matrix;
    bool hermitian_hint{false};

    Operator() = default;
    Operator(HilbertSpec s, Matrix m, bool hermitian = false);

    Operator dagger() const;
    Eigen::Index dim() const { return matrix.rows(); }
};

Operator operator+(const Operator& a, const Operator& b);
Operator operator-(const Operator& a, const Operator& b);
Operator operator*(const Operator& a, const Operator& b);
Operator operator*(cplx s, const Operator& a);
Operator operator*(double s, const Operator& a);

double max_abs(const Matrix& m);
Matrix commutator(const Matrix& a, const Matrix& b);
Matrix kron(const Matrix& a, const Matrix& b);
bool is_hermitian(const Matrix& m, double tol = kHermitianTol);

struct SpinOps {
    Operator x, y, z, plus, minus;
};

struct Algebra {
    HilbertSpec space;
    Operator identity;
    std::vector<Operator> a;     // per mode
    std::vector<Operator> adag;  // per mode
    std::vector<SpinOps> spin;   // per spin
};

Algebra build_algebra(const HilbertSpec& space);

// Single-factor matrices embedded into the full tensor product.
Matrix embed_mode(const HilbertSpec& space, const Matrix& single_mode, int mode);
Matrix embed_spin(const HilbertSpec& space, const Matrix& single_spin, int spin);

Matrix annihilation(int cutoff);

// exp(K) for anti-Hermitian K, through the eigendecomposition of iK.
Matrix exp_antihermitian(const Matrix& K);
// cos(X), sin(X) of a Hermitian X through its eigendecomposition.
void cos_sin_hermitian(const Matrix& X, Matrix& cosX, Matrix& sinX);

// D(α) = exp(α a† − α* a). Throws NumericalError when the truncated exponential
// differs from a doubled-cutoff reference on the lower half of the Fock space.
Operator displacement(const HilbertSpec& space, cplx alpha, int mode = 0);
// S(λ) = exp(λ (a†² − a²)), so S† a S = a cosh 2λ + a† sinh 2λ.
Operator squeeze(const HilbertSpec& space, double lambda, int mode = 0);

struct RabiParams {
    double omega{1.0};
    double Omega{1.0};
    double g{0.0};
    void validate() const;
};

struct JCParams {
    double omega{1.0};
    double Omega{1.0};
    double g{0.0};
    void validate() const;
};

struct HopfieldParams {
    double omega_c{1.0};
    double omega_X{1.0};
    double g{0.0};
    double D_dia{0.0};
    void validate() const;
};

struct BosonMode {
    double omega{1.0};
    double g{0.0};
};

struct SpinBosonParams {
    double Omega{1.0};
    std::vector<BosonMode> modes;
    void validate() const;
};

// ω a†a + (Ω/2) σ_z + g σ_x (a + a†)
Operator build_hamiltonian(const RabiParams& p, const HilbertSpec& space);
// ω a†a + (Ω/2) σ_z + g (a σ_+ + a† σ_−)
Operator build_hamiltonian(const JCParams& p, const HilbertSpec& space);
// ω_c a†a + ω_X b†b + i g (a† + a)(b† − b) + D (a + a†)²; mode 0 is a, mode 1 is b
Operator build_hamiltonian(const HopfieldParams& p, const HilbertSpec& space);
// (Ω/2) σ_z + Σ_k ω_k a_k†a_k + σ_x Σ_k g_k (a_k + a_k†)
Operator build_hamiltonian(const SpinBosonParams& p, const HilbertSpec& space);

// P = σ_z e^{iπ a†a} on a one-spin, one-mode space.
Operator parity_operator(const HilbertSpec& space);
// N = a†a + σ_+σ_− on a one-spin, one-mode space.
Operator excitation_number(const HilbertSpec& space);

} // namespace usqed::qops
