// lindblad.cpp — Lindblad generators: action, dense superoperator, dressed and phenomenological builders

#include "usqed/open.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "usqed/error.hpp"

namespace usqed::open {

namespace {

struct Entry {
    Eigen::Index row;
    Eigen::Index col;
    cplx value;
};

std::vector<Entry> nonzeros(const Matrix& J)
{
    std::vector<Entry> out;
    for (Eigen::Index c = 0; c < J.cols(); ++c) {
        for (Eigen::Index r = 0; r < J.rows(); ++r) {
            if (J(r, c) != cplx(0.0, 0.0)) out.push_back({r, c, J(r, c)});
        }
    }
    return out;
}

// Drops entries far below the operator scale so that sparse jumps stay sparse.
Matrix cleaned(const Matrix& J)
{
    Matrix out = J;
    const double cut = 1e-15 * qops::max_abs(J);
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        for (Eigen::Index r = 0; r < out.rows(); ++r) {
            if (std::abs(out(r, c)) <= cut) out(r, c) = 0.0;
        }
    }
    return out;
}

void advise(const std::vector<Jump>& jumps, const std::vector<BathSpec>& baths)
{
    if (jumps.empty()) return;
    double min_gap = std::numeric_limits<double>::infinity();
    double max_rate = 0.0;
    std::vector<double> freqs;
    for (const auto& j : jumps) {
        min_gap = std::min(min_gap, j.frequency);
        max_rate = std::max(max_rate, j.rate);
        freqs.push_back(j.frequency);
    }
    for (const auto& b : baths) {
        if (b.gamma0 > 0.1 * min_gap) {
            warn("build_lindbladian: gamma0 = " + format_double(b.gamma0) +
                 " exceeds 0.1 x smallest retained gap " + format_double(min_gap));
        }
    }
    std::sort(freqs.begin(), freqs.end());
    int close = 0;
    for (std::size_t i = 1; i < freqs.size(); ++i) {
        const double sep = freqs[i] - freqs[i - 1];
        if (sep > kFrequencyTol && sep < 10.0 * max_rate) ++close;
    }
    if (close > 0) {
        warn("build_lindbladian: " + std::to_string(close) +
             " pairs of distinct jump frequencies are closer than 10x the largest rate; secular approximation is marginal");
    }
}

} // namespace

Matrix LindbladGenerator::apply(const Matrix& rho) const
{
    const cplx mi(0.0, -1.0);
    Matrix out = mi * (H * rho - rho * H);
    for (const auto& j : jumps) {
        const Matrix JdJ = j.op.adjoint() * j.op;
        out += j.rate * (j.op * rho * j.op.adjoint() - 0.5 * (JdJ * rho + rho * JdJ));
    }
    return out;
}

Matrix LindbladGenerator::superoperator() const
{
    const Eigen::Index d = dim();
    const Eigen::Index D = d * d;
    Matrix K = cplx(0.0, 1.0) * H;  // effective non-Hermitian part: −i(H − i/2 Σ rate J†J)
    Matrix S = Matrix::Zero(D, D);
    for (const auto& j : jumps) {
        K += 0.5 * j.rate * j.op.adjoint() * j.op;
        const auto nz = nonzeros(j.op);
        for (const auto& x : nz) {
            for (const auto& y : nz) {
                S(x.row * d + y.row, x.col * d + y.col) += j.rate * std::conj(x.value) * y.value;
            }
        }
    }
    // ρ ↦ −Kρ − ρK† with K = iH + ½ΣrJ†J: −kron(I,K) − kron(conj(K), I).
    const Matrix Kc = K.conjugate();
    for (Eigen::Index b = 0; b < d; ++b) S.block(b * d, b * d, d, d) -= K;
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
            const cplx v = Kc(r, c);
            if (v == cplx(0.0, 0.0)) continue;
            for (Eigen::Index k = 0; k < d; ++k) S(r * d + k, c * d + k) -= v;
        }
    }
    return S;
}

Matrix LindbladGenerator::to_frame(const Matrix& lab_op) const
{
    if (lab_op.rows() != frame.rows() || lab_op.cols() != frame.rows()) {
        throw std::invalid_argument("operator dimension does not match the generator's lab space");
    }
    return frame.adjoint() * lab_op * frame;
}

Matrix LindbladGenerator::to_lab(const Matrix& frame_op) const
{
    if (frame_op.rows() != dim() || frame_op.cols() != dim()) {
        throw std::invalid_argument("operator dimension does not match the generator frame");
    }
    return frame * frame_op * frame.adjoint();
}

LindbladGenerator build_dressed_lindbladian(const numkern::EigenSystem& eigen, const std::vector<BathSpec>& baths,
                                            int n_keep)
{
    const auto full = static_cast<int>(eigen.values.size());
    if (n_keep <= 0) n_keep = full;
    if (n_keep > full) throw std::invalid_argument("n_keep exceeds the number of eigenstates");
    LindbladGenerator L;
    L.frame = eigen.vectors.leftCols(n_keep);
    L.energies = eigen.values.head(n_keep);
    L.H = L.energies.cast<cplx>().asDiagonal();
    for (const auto& bath : baths) {
        bath.validate(eigen.vectors.rows());
        const JumpDecomposition dec = dressed_jump_operators(eigen, bath.coupling_op, bath.cluster_tol, n_keep);
        for (const auto& c : dec.classes) {
            if (bath.lamb_shift) L.H += bath.lamb_shift(c.frequency) * c.op.adjoint() * c.op;
            const double rate = 2.0 * bath.gamma(c.frequency);
            if (rate > 0.0) L.jumps.push_back({rate, cleaned(c.op), c.frequency});
        }
    }
    advise(L.jumps, baths);
    return L;
}

LindbladGenerator build_lindbladian(LindbladKind kind, const qops::Operator& H, const std::vector<BathSpec>& baths,
                                    const LindbladOptions& opts)
{
    if (!H.hermitian_hint) throw std::invalid_argument("build_lindbladian requires a Hermitian Hamiltonian");
    if (kind == LindbladKind::dressed) {
        const Matrix* sym = opts.symmetry ? &*opts.symmetry : nullptr;
        return build_dressed_lindbladian(numkern::eig_hermitian(H, sym), baths, opts.n_keep);
    }
    if (!opts.bare_hamiltonian) {
        throw std::invalid_argument("phenomenological master equation needs the bare (uncoupled) Hamiltonian");
    }
    const Matrix& H0 = *opts.bare_hamiltonian;
    if (H0.rows() != H.matrix.rows()) throw std::invalid_argument("bare Hamiltonian dimension mismatch");
    const numkern::EigenSystem bare = numkern::eig_hermitian(H0);
    const Eigen::Index d = H.matrix.rows();
    LindbladGenerator L;
    L.frame = Matrix::Identity(d, d);
    L.H = H.matrix;
    for (const auto& bath : baths) {
        bath.validate(d);
        const JumpDecomposition dec = dressed_jump_operators(bare, bath.coupling_op, bath.cluster_tol);
        for (const auto& c : dec.classes) {
            const Matrix J = bare.vectors * c.op * bare.vectors.adjoint();
            if (bath.lamb_shift) L.H += bath.lamb_shift(c.frequency) * J.adjoint() * J;
            const double rate = 2.0 * bath.gamma(c.frequency);
            if (rate > 0.0) L.jumps.push_back({rate, cleaned(J), c.frequency});
        }
    }
    return L;
}

LindbladGenerator phenomenological_rabi(const qops::Operator& H, double gamma_cavity, double kappa_atom)
{
    if (H.space.n_spins != 1 || H.space.n_modes != 1) {
        throw std::invalid_argument("phenomenological_rabi requires a one-spin one-mode space");
    }
    if (!(gamma_cavity >= 0.0) || !(kappa_atom >= 0.0)) throw std::invalid_argument("damping rates must be >= 0");
    const qops::Algebra alg = qops::build_algebra(H.space);
    const Eigen::Index d = H.matrix.rows();
    LindbladGenerator L;
    L.frame = Matrix::Identity(d, d);
    L.H = H.matrix;
    if (gamma_cavity > 0.0) L.jumps.push_back({gamma_cavity, alg.a[0].matrix, 0.0});
    if (kappa_atom > 0.0) L.jumps.push_back({kappa_atom, alg.spin[0].minus.matrix, 0.0});
    return L;
}

} // namespace usqed::open
