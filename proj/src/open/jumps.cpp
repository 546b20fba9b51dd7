// jumps.cpp — Spectral densities and the dressed decomposition A = Σ_ω A(ω)

#include "usqed/open.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "usqed/error.hpp"

namespace usqed::open {

double BathSpec::gamma(double omega) const
{
    if (!(omega > 0.0)) return 0.0;
    switch (density_kind) {
    case DensityKind::flat:
        return gamma0;
    case DensityKind::sqrt:
        return gamma0 * std::sqrt(omega / omega_ref);
    case DensityKind::ohmic:
        return gamma0 * omega / omega_ref;
    }
    return gamma0;
}

void BathSpec::validate(Eigen::Index dim) const
{
    if (coupling_op.rows() != dim || coupling_op.cols() != dim) {
        throw std::invalid_argument("bath coupling operator dimension does not match the system");
    }
    if (!qops::is_hermitian(coupling_op)) throw std::invalid_argument("bath coupling operator must be Hermitian");
    if (!(gamma0 >= 0.0) || !std::isfinite(gamma0)) throw std::invalid_argument("bath gamma0 must be finite and >= 0");
    if (!(omega_ref > 0.0)) throw std::invalid_argument("bath omega_ref must be > 0");
    if (!(cluster_tol >= 0.0)) throw std::invalid_argument("bath cluster_tol must be >= 0");
}

Matrix JumpDecomposition::reconstruct() const
{
    Matrix out = zero_block;
    for (const auto& c : classes) out += c.op + c.op.adjoint();
    return out;
}

JumpDecomposition dressed_jump_operators(const numkern::EigenSystem& eigen, const Matrix& A_lab,
                                         double cluster_tol, int n_keep)
{
    const auto full = static_cast<int>(eigen.values.size());
    if (n_keep <= 0) n_keep = full;
    if (n_keep > full) throw std::invalid_argument("n_keep exceeds the number of eigenstates");
    if (A_lab.rows() != eigen.vectors.rows() || A_lab.cols() != eigen.vectors.rows()) {
        throw std::invalid_argument("operator dimension does not match the eigenbasis");
    }
    if (!(cluster_tol >= 0.0)) throw std::invalid_argument("cluster_tol must be >= 0");

    const Matrix V = eigen.vectors.leftCols(n_keep);
    const Matrix A = V.adjoint() * A_lab * V;
    const Eigen::VectorXd E = eigen.values.head(n_keep);
    const double drop = 1e-14 * std::max(1.0, qops::max_abs(A));

    struct Transition {
        double omega;
        int i;  // lower level
        int k;  // upper level
    };
    std::vector<Transition> tr;
    JumpDecomposition out;
    out.zero_block = Matrix::Zero(n_keep, n_keep);
    for (int i = 0; i < n_keep; ++i) {
        for (int k = 0; k < n_keep; ++k) {
            const double w = E(k) - E(i);
            if (std::abs(w) <= kFrequencyTol) {
                out.zero_block(i, k) = A(i, k);
            } else if (w > 0.0 && std::abs(A(i, k)) > drop) {
                tr.push_back({w, i, k});
            }
        }
    }
    std::sort(tr.begin(), tr.end(), [](const Transition& a, const Transition& b) { return a.omega < b.omega; });

    // Classes anchored at their lowest member; width ≤ max(cluster_tol, kFrequencyTol).
    const double width = std::max(cluster_tol, kFrequencyTol);
    std::size_t s = 0;
    while (s < tr.size()) {
        const double lo = tr[s].omega;
        std::size_t e = s;
        JumpClass c;
        c.op = Matrix::Zero(n_keep, n_keep);
        double sum = 0.0;
        while (e < tr.size() && tr[e].omega - lo <= width + 1e-12 * std::max(1.0, lo)) {
            if (cluster_tol > 0.0 && std::abs(tr[e].omega - lo - cluster_tol) <= 1e-12 * std::max(1.0, lo)) {
                c.tie = true;
            }
            c.op(tr[e].i, tr[e].k) = A(tr[e].i, tr[e].k);
            sum += tr[e].omega;
            ++e;
        }
        c.frequency = sum / static_cast<double>(e - s);
        c.width = tr[e - 1].omega - lo;
        if (c.tie) {
            out.tie_flagged = true;
            warn("dressed_jump_operators: transition at exactly cluster_tol from class start near omega = " +
                 format_double(lo) + " assigned to the lower class");
        }
        out.classes.push_back(std::move(c));
        s = e;
    }
    return out;
}

} // namespace usqed::open
