// qops.cpp — Truncated operator algebra, exponentials and model Hamiltonians

#include "usqed/qops.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

#include "usqed/error.hpp"

namespace usqed::qops {

namespace {

Matrix sigma_plus_2()
{
    Matrix s = Matrix::Zero(2, 2);
    s(0, 1) = 1.0;
    return s;
}

Matrix sigma_minus_2() { return sigma_plus_2().transpose(); }

Matrix sigma_x_2()
{
    Matrix s = Matrix::Zero(2, 2);
    s(0, 1) = s(1, 0) = 1.0;
    return s;
}

Matrix sigma_y_2()
{
    Matrix s = Matrix::Zero(2, 2);
    s(0, 1) = cplx(0.0, -1.0);
    s(1, 0) = cplx(0.0, 1.0);
    return s;
}

Matrix sigma_z_2()
{
    Matrix s = Matrix::Zero(2, 2);
    s(0, 0) = 1.0;
    s(1, 1) = -1.0;
    return s;
}

// Factor sizes in tensor order (spins first).
std::vector<Eigen::Index> factor_dims(const HilbertSpec& space)
{
    std::vector<Eigen::Index> dims;
    for (int s = 0; s < space.n_spins; ++s) dims.push_back(2);
    for (int m = 0; m < space.n_modes; ++m) dims.push_back(space.fock_cutoff);
    return dims;
}

Matrix embed_factor(const HilbertSpec& space, const Matrix& local, std::size_t slot)
{
    const auto dims = factor_dims(space);
    if (slot >= dims.size()) throw std::invalid_argument("tensor slot out of range");
    if (local.rows() != dims[slot] || local.cols() != dims[slot]) {
        throw std::invalid_argument("local operator dimension does not match tensor factor");
    }
    Eigen::Index left = 1;
    Eigen::Index right = 1;
    for (std::size_t i = 0; i < slot; ++i) left *= dims[i];
    for (std::size_t i = slot + 1; i < dims.size(); ++i) right *= dims[i];
    const Eigen::Index d = local.rows();
    const Eigen::Index total = left * d * right;
    Matrix out = Matrix::Zero(total, total);
    for (Eigen::Index l = 0; l < left; ++l) {
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) {
                const cplx v = local(i, j);
                if (v == cplx(0.0)) continue;
                for (Eigen::Index r = 0; r < right; ++r) {
                    out((l * d + i) * right + r, (l * d + j) * right + r) = v;
                }
            }
        }
    }
    return out;
}

void require_rabi_space(const HilbertSpec& space)
{
    if (space.n_spins != 1 || space.n_modes != 1) {
        throw std::invalid_argument("operation requires a space with one spin and one mode");
    }
}

// Single-mode exp(K) on cutoff N compared against the same exponential on 2N.
// The retained subspace is the set of Fock columns whose doubled-cutoff image
// leaks less than 1e-10 beyond N; the truncated result must match there.
Matrix checked_single_mode_exp(const Matrix& K_small, const Matrix& K_big, const char* what)
{
    const Matrix U_small = exp_antihermitian(K_small);
    const Matrix U_big = exp_antihermitian(K_big);
    const Eigen::Index N = K_small.rows();
    double defect = 0.0;
    Eigen::Index retained = 0;
    for (Eigen::Index j = 0; j < N; ++j) {
        const double leak = U_big.col(j).tail(U_big.rows() - N).norm();
        if (leak >= 1e-10) continue;
        ++retained;
        defect = std::max(defect, (U_small.col(j) - U_big.col(j).head(N)).cwiseAbs().maxCoeff());
    }
    if (retained == 0 || defect > 1e-8) {
        throw NumericalError(
            "truncation_unitarity",
            std::string(what) + " is not converged in the Fock cutoff; increase fock_cutoff",
            {{"fock_cutoff", std::to_string(N)},
             {"retained_columns", std::to_string(retained)},
             {"defect", format_double(defect)}});
    }
    return U_small;
}

} // namespace

std::size_t dim_cap()
{
    if (const char* env = std::getenv("USQED_DIM_CAP")) {
        try {
            const long long v = std::stoll(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
        throw std::invalid_argument("USQED_DIM_CAP must be a positive integer");
    }
    return kDefaultDimCap;
}

std::size_t HilbertSpec::dim() const
{
    std::size_t d = 1;
    const std::size_t limit = std::numeric_limits<std::size_t>::max() / 4;
    for (int s = 0; s < n_spins; ++s) {
        d *= 2;
        if (d > limit) return limit;
    }
    for (int m = 0; m < n_modes; ++m) {
        d *= static_cast<std::size_t>(fock_cutoff);
        if (d > limit) return limit;
    }
    return d;
}

void HilbertSpec::validate() const
{
    if (fock_cutoff < 1) throw std::invalid_argument("fock_cutoff must be >= 1");
    if (n_modes < 1) throw std::invalid_argument("n_modes must be >= 1");
    if (n_spins < 0) throw std::invalid_argument("n_spins must be >= 0");
    if (dim() > dim_cap()) {
        throw std::invalid_argument("Hilbert dimension " + std::to_string(dim()) +
                                    " exceeds the cap " + std::to_string(dim_cap()) +
                                    " (set USQED_DIM_CAP to override)");
    }
}

HilbertSpec rabi_space(int fock_cutoff) { return HilbertSpec{fock_cutoff, 1, 1}; }

Operator::Operator(HilbertSpec s, Matrix m, bool hermitian)
    : space(s), matrix(std::move(m)), hermitian_hint(hermitian)
{
    if (matrix.rows() != matrix.cols()) throw std::invalid_argument("operator matrix must be square");
    if (static_cast<std::size_t>(matrix.rows()) != space.dim()) {
        throw std::invalid_argument("operator matrix dimension does not match its Hilbert space");
    }
    if (hermitian_hint && !is_hermitian(matrix)) {
        throw std::invalid_argument("operator flagged Hermitian fails the Hermiticity check");
    }
}

Operator Operator::dagger() const { return Operator(space, matrix.adjoint(), hermitian_hint); }

namespace {
void require_same_space(const Operator& a, const Operator& b)
{
    if (!(a.space == b.space)) throw std::invalid_argument("operators live on different spaces");
}
} // namespace

Operator operator+(const Operator& a, const Operator& b)
{
    require_same_space(a, b);
    return Operator(a.space, a.matrix + b.matrix, a.hermitian_hint && b.hermitian_hint);
}

Operator operator-(const Operator& a, const Operator& b)
{
    require_same_space(a, b);
    return Operator(a.space, a.matrix - b.matrix, a.hermitian_hint && b.hermitian_hint);
}

Operator operator*(const Operator& a, const Operator& b)
{
    require_same_space(a, b);
    return Operator(a.space, a.matrix * b.matrix, false);
}

Operator operator*(cplx s, const Operator& a)
{
    return Operator(a.space, s * a.matrix, a.hermitian_hint && s.imag() == 0.0);
}

Operator operator*(double s, const Operator& a)
{
    return Operator(a.space, s * a.matrix, a.hermitian_hint);
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

bool is_hermitian(const Matrix& m, double tol)
{
    if (m.rows() != m.cols()) return false;
    return max_abs(m - m.adjoint()) < tol * std::max(1.0, max_abs(m));
}

Matrix annihilation(int cutoff)
{
    Matrix a = Matrix::Zero(cutoff, cutoff);
    for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Matrix embed_mode(const HilbertSpec& space, const Matrix& single_mode, int mode)
{
    if (mode < 0 || mode >= space.n_modes) throw std::invalid_argument("mode index out of range");
    return embed_factor(space, single_mode, static_cast<std::size_t>(space.n_spins + mode));
}

Matrix embed_spin(const HilbertSpec& space, const Matrix& single_spin, int spin)
{
    if (spin < 0 || spin >= space.n_spins) throw std::invalid_argument("spin index out of range");
    return embed_factor(space, single_spin, static_cast<std::size_t>(spin));
}

Algebra build_algebra(const HilbertSpec& space)
{
    space.validate();
    Algebra alg;
    alg.space = space;
    const auto d = static_cast<Eigen::Index>(space.dim());
    alg.identity = Operator(space, Matrix::Identity(d, d), true);
    const Matrix a1 = annihilation(space.fock_cutoff);
    for (int m = 0; m < space.n_modes; ++m) {
        Matrix am = embed_mode(space, a1, m);
        alg.adag.emplace_back(space, am.adjoint(), false);
        alg.a.emplace_back(space, std::move(am), false);
    }
    for (int s = 0; s < space.n_spins; ++s) {
        alg.spin.push_back(SpinOps{
            Operator(space, embed_spin(space, sigma_x_2(), s), true),
            Operator(space, embed_spin(space, sigma_y_2(), s), true),
            Operator(space, embed_spin(space, sigma_z_2(), s), true),
            Operator(space, embed_spin(space, sigma_plus_2(), s), false),
            Operator(space, embed_spin(space, sigma_minus_2(), s), false),
        });
    }
    return alg;
}

Matrix exp_antihermitian(const Matrix& K)
{
    // K = -iH with H = iK Hermitian, so exp(K) = V e^{-iΛ} V†.
    const Matrix H = cplx(0.0, 1.0) * K;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (H + H.adjoint()));
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigensolver", "eigendecomposition of exponential generator failed");
    }
    Vector phases(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        phases(i) = std::exp(cplx(0.0, -es.eigenvalues()(i)));
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

void cos_sin_hermitian(const Matrix& X, Matrix& cosX, Matrix& sinX)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (X + X.adjoint()));
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigensolver", "eigendecomposition of trigonometric argument failed");
    }
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Matrix& V = es.eigenvectors();
    cosX = V * lam.array().cos().matrix().cast<cplx>().asDiagonal() * V.adjoint();
    sinX = V * lam.array().sin().matrix().cast<cplx>().asDiagonal() * V.adjoint();
}

Operator displacement(const HilbertSpec& space, cplx alpha, int mode)
{
    space.validate();
    const int N = space.fock_cutoff;
    if (std::norm(alpha) > N / 4.0) {
        warn("displacement |alpha|^2 = " + format_double(std::norm(alpha)) +
             " exceeds fock_cutoff/4; truncation effects likely");
    }
    auto generator = [&](int n) {
        const Matrix a = annihilation(n);
        return Matrix(alpha * a.adjoint() - std::conj(alpha) * a);
    };
    const Matrix D1 = checked_single_mode_exp(generator(N), generator(2 * N), "displacement");
    return Operator(space, embed_mode(space, D1, mode), false);
}

Operator squeeze(const HilbertSpec& space, double lambda, int mode)
{
    space.validate();
    const int N = space.fock_cutoff;
    auto generator = [&](int n) {
        const Matrix a = annihilation(n);
        const Matrix ad = a.adjoint();
        return Matrix(lambda * (ad * ad - a * a));
    };
    const Matrix S1 = checked_single_mode_exp(generator(N), generator(2 * N), "squeeze");
    return Operator(space, embed_mode(space, S1, mode), false);
}

void RabiParams::validate() const
{
    if (!(omega > 0.0)) throw std::invalid_argument("omega must be > 0");
    if (!(Omega >= 0.0)) throw std::invalid_argument("Omega must be >= 0");
    if (!(g >= 0.0)) throw std::invalid_argument("g must be >= 0");
}

void JCParams::validate() const
{
    RabiParams{omega, Omega, g}.validate();
}

void HopfieldParams::validate() const
{
    if (!(omega_c > 0.0) || !(omega_X > 0.0)) {
        throw std::invalid_argument("Hopfield frequencies must be > 0");
    }
    if (!(D_dia >= 0.0)) throw std::invalid_argument("D_dia must be >= 0");
    if (!std::isfinite(g)) throw std::invalid_argument("Hopfield coupling must be finite");
}

void SpinBosonParams::validate() const
{
    if (!(Omega >= 0.0)) throw std::invalid_argument("Omega must be >= 0");
    if (modes.empty()) throw std::invalid_argument("spin-boson model needs at least one mode");
    for (std::size_t k = 0; k < modes.size(); ++k) {
        if (!(modes[k].omega > 0.0)) throw std::invalid_argument("mode frequencies must be > 0");
        if (!(modes[k].g >= 0.0)) throw std::invalid_argument("mode couplings must be >= 0");
        if (k > 0 && !(modes[k].omega > modes[k - 1].omega)) {
            throw std::invalid_argument("mode frequencies must be strictly increasing");
        }
    }
}

Operator build_hamiltonian(const RabiParams& p, const HilbertSpec& space)
{
    p.validate();
    require_rabi_space(space);
    const Algebra alg = build_algebra(space);
    const Matrix& a = alg.a[0].matrix;
    const Matrix& ad = alg.adag[0].matrix;
    Matrix H = p.omega * ad * a + 0.5 * p.Omega * alg.spin[0].z.matrix +
               p.g * alg.spin[0].x.matrix * (a + ad);
    return Operator(space, std::move(H), true);
}

Operator build_hamiltonian(const JCParams& p, const HilbertSpec& space)
{
    p.validate();
    require_rabi_space(space);
    const Algebra alg = build_algebra(space);
    const Matrix& a = alg.a[0].matrix;
    const Matrix& ad = alg.adag[0].matrix;
    Matrix H = p.omega * ad * a + 0.5 * p.Omega * alg.spin[0].z.matrix +
               p.g * (a * alg.spin[0].plus.matrix + ad * alg.spin[0].minus.matrix);
    return Operator(space, std::move(H), true);
}

Operator build_hamiltonian(const HopfieldParams& p, const HilbertSpec& space)
{
    p.validate();
    if (space.n_spins != 0 || space.n_modes != 2) {
        throw std::invalid_argument("Hopfield model requires a space with two modes and no spins");
    }
    const Algebra alg = build_algebra(space);
    const Matrix& a = alg.a[0].matrix;
    const Matrix& ad = alg.adag[0].matrix;
    const Matrix& b = alg.a[1].matrix;
    const Matrix& bd = alg.adag[1].matrix;
    const Matrix xa = a + ad;
    Matrix H = p.omega_c * ad * a + p.omega_X * bd * b +
               cplx(0.0, p.g) * xa * (bd - b) + p.D_dia * xa * xa;
    return Operator(space, std::move(H), true);
}

Operator build_hamiltonian(const SpinBosonParams& p, const HilbertSpec& space)
{
    p.validate();
    if (space.n_spins != 1 || space.n_modes != static_cast<int>(p.modes.size())) {
        throw std::invalid_argument("spin-boson model requires one spin and one mode per bath mode");
    }
    const Algebra alg = build_algebra(space);
    Matrix H = 0.5 * p.Omega * alg.spin[0].z.matrix;
    Matrix coupling = Matrix::Zero(H.rows(), H.cols());
    for (std::size_t k = 0; k < p.modes.size(); ++k) {
        const Matrix& a = alg.a[k].matrix;
        const Matrix& ad = alg.adag[k].matrix;
        H += p.modes[k].omega * ad * a;
        coupling += p.modes[k].g * (a + ad);
    }
    H += alg.spin[0].x.matrix * coupling;
    return Operator(space, std::move(H), true);
}

Operator parity_operator(const HilbertSpec& space)
{
    require_rabi_space(space);
    space.validate();
    Matrix phase = Matrix::Zero(space.fock_cutoff, space.fock_cutoff);
    for (int n = 0; n < space.fock_cutoff; ++n) phase(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
    return Operator(space, kron(sigma_z_2(), phase), true);
}

Operator excitation_number(const HilbertSpec& space)
{
    require_rabi_space(space);
    const Algebra alg = build_algebra(space);
    Matrix N = alg.adag[0].matrix * alg.a[0].matrix +
               alg.spin[0].plus.matrix * alg.spin[0].minus.matrix;
    return Operator(space, std::move(N), true);
}

} // namespace usqed::qops
