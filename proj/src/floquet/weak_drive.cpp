// weak_drive.cpp — Rotating-frame dressed master equation for a weak drive near dressed transitions

#include "usqed/floquet.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace usqed::floquet {

WeakDriveModel weak_drive_model(const numkern::EigenSystem& eigen, const std::vector<open::BathSpec>& baths,
                                const Matrix& X_lab, double F, double omega_d, double phi, int n_keep)
{
    if (!(omega_d > 0.0)) throw std::invalid_argument("drive frequency must be > 0");
    if (!std::isfinite(F) || !std::isfinite(phi)) throw std::invalid_argument("drive amplitude and phase must be finite");
    const auto full = static_cast<int>(eigen.values.size());
    if (n_keep <= 0) n_keep = full;
    if (n_keep > full) throw std::invalid_argument("n_keep exceeds the number of eigenstates");
    const open::LindbladGenerator dressed = open::build_dressed_lindbladian(eigen, baths, n_keep);
    const Matrix X = dressed.to_frame(X_lab);

    WeakDriveModel out;
    out.omega_d = omega_d;
    const Eigen::VectorXd& E = dressed.energies;
    for (int i = 0; i < n_keep; ++i) out.manifold.push_back(static_cast<int>(std::lround((E(i) - E(0)) / omega_d)));
    const auto& m = out.manifold;

    auto& L = out.generator;
    L.frame = dressed.frame;
    L.energies = E;
    L.H = Matrix::Zero(n_keep, n_keep);
    for (int i = 0; i < n_keep; ++i) {
        for (int j = 0; j < n_keep; ++j) {
            if (m[i] == m[j]) L.H(i, j) = dressed.H(i, j);
        }
        L.H(i, i) -= m[i] * omega_d;
    }
    const cplx drive = 0.5 * F * std::exp(cplx(0.0, phi));
    out.detector = Matrix::Zero(n_keep, n_keep);
    for (int i = 0; i < n_keep; ++i) {
        for (int j = 0; j < n_keep; ++j) {
            if (m[j] != m[i] + 1) continue;
            L.H(i, j) += drive * X(i, j);
            L.H(j, i) += std::conj(drive * X(i, j));
            if (E(j) - E(i) > open::kFrequencyTol) out.detector(i, j) = X(i, j);
        }
    }
    // Terms J_Δ ρ J_Δ'† with Δ ≠ Δ' rotate at (Δ − Δ')ω_d and average out.
    for (const auto& j : dressed.jumps) {
        std::map<int, Matrix> parts;
        for (int r = 0; r < n_keep; ++r) {
            for (int c = 0; c < n_keep; ++c) {
                if (j.op(r, c) == cplx(0.0, 0.0)) continue;
                auto it = parts.try_emplace(m[c] - m[r], Matrix::Zero(n_keep, n_keep)).first;
                it->second(r, c) = j.op(r, c);
            }
        }
        for (auto& [dm, op] : parts) L.jumps.push_back({j.rate, op, j.frequency});
    }
    return out;
}

} // namespace usqed::floquet
