// grwa.cpp — Generalized rotating-wave approximation through the numerical polaron frame

#include "usqed/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "usqed/error.hpp"

namespace usqed::spectra {

PerturbativeSpectrum grwa_spectrum(const qops::RabiParams& p, int cutoff)
{
    p.validate();
    if (cutoff < 2) throw std::invalid_argument("grwa_spectrum needs cutoff >= 2");
    const qops::HilbertSpec space = qops::rabi_space(cutoff);
    const qops::Algebra alg = qops::build_algebra(space);
    const auto d = static_cast<Eigen::Index>(space.dim());
    const Matrix I = Matrix::Identity(d, d);
    const Matrix& sx = alg.spin[0].x.matrix;

    // U = P₊ ⊗ D(−g/ω) + P₋ ⊗ D(g/ω) with P± = (1 ± σ_x)/2.
    const double beta = p.g / p.omega;
    const Matrix Dm = qops::displacement(space, -beta).matrix;
    const Matrix Dp = qops::displacement(space, beta).matrix;
    const Matrix U = 0.5 * (I + sx) * Dm + 0.5 * (I - sx) * Dp;

    const Matrix H = qops::build_hamiltonian(p, space).matrix;
    Matrix Ht = U.adjoint() * H * U;
    Ht = 0.5 * (Ht + Ht.adjoint()).eval();

    auto up = [&](int n) { return static_cast<Eigen::Index>(n); };
    auto down = [&](int n) { return static_cast<Eigen::Index>(cutoff + n); };

    struct Item {
        SpectralLevel level;
        Vector state;
    };
    std::vector<Item> items;
    {
        Vector v = Vector::Zero(d);
        v(down(0)) = 1.0;
        items.push_back({{Ht(down(0), down(0)).real(), -1, 0}, U * v});
    }
    const int n_top = cutoff / 2;
    for (int n = 1; n <= n_top; ++n) {
        Eigen::Matrix2cd blk;
        blk << Ht(down(n), down(n)), Ht(down(n), up(n - 1)), Ht(up(n - 1), down(n)), Ht(up(n - 1), up(n - 1));
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(blk);
        const int parity = (n % 2 == 1) ? 1 : -1;  // (−1)^{n+1}
        for (int k = 0; k < 2; ++k) {
            Vector v = Vector::Zero(d);
            v(down(n)) = es.eigenvectors()(0, k);
            v(up(n - 1)) = es.eigenvectors()(1, k);
            items.push_back({{es.eigenvalues()(k), parity, n}, U * v});
        }
    }
    std::stable_sort(items.begin(), items.end(),
                     [](const Item& x, const Item& y) { return x.level.energy < y.level.energy; });
    PerturbativeSpectrum out;
    out.space = space;
    out.states = Matrix::Zero(d, static_cast<Eigen::Index>(items.size()));
    for (std::size_t k = 0; k < items.size(); ++k) {
        out.levels.push_back(items[k].level);
        out.states.col(static_cast<Eigen::Index>(k)) = items[k].state;
    }
    return out;
}

} // namespace usqed::spectra
