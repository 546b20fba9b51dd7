// perturbative.cpp — Jaynes–Cummings closed form and Bloch–Siegert corrections

#include "usqed/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "usqed/error.hpp"

namespace usqed::spectra {

namespace {

// Index of |spin, n⟩ in a Rabi space of cutoff N; spin 0 = up.
Eigen::Index idx(int spin, int n, int N) { return static_cast<Eigen::Index>(spin) * N + n; }

struct Block2 {
    double e_lo, e_hi;
    Eigen::Vector2d v_lo, v_hi;  // components on (|↑,n−1⟩, |↓,n⟩)
};

// Real symmetric 2×2 [[a, c], [c, b]].
Block2 diag2(double a, double b, double c)
{
    Eigen::Matrix2d m;
    m << a, c, c, b;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
    Block2 out;
    out.e_lo = es.eigenvalues()(0);
    out.e_hi = es.eigenvalues()(1);
    out.v_lo = es.eigenvectors().col(0);
    out.v_hi = es.eigenvectors().col(1);
    return out;
}

PerturbativeSpectrum sort_levels(std::vector<SpectralLevel> levels, std::vector<Vector> states,
                                 const qops::HilbertSpec& space)
{
    std::vector<std::size_t> order(levels.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return levels[i].energy < levels[j].energy; });
    PerturbativeSpectrum out;
    out.space = space;
    out.states = Matrix::Zero(static_cast<Eigen::Index>(space.dim()), static_cast<Eigen::Index>(levels.size()));
    for (std::size_t k = 0; k < order.size(); ++k) {
        out.levels.push_back(levels[order[k]]);
        out.states.col(static_cast<Eigen::Index>(k)) = states[order[k]];
    }
    return out;
}

// Ladder of blocks: ground energy e0 on |↓,0⟩ and for n ≥ 1 the 2×2 block
// [[a_n, c_n], [c_n, b_n]] on (|↑,n−1⟩, |↓,n⟩), states on a cutoff N.
template <class BlockFn>
PerturbativeSpectrum ladder(double e0, int n_max, int N, BlockFn block)
{
    const qops::HilbertSpec space = qops::rabi_space(N);
    const auto d = static_cast<Eigen::Index>(space.dim());
    std::vector<SpectralLevel> levels;
    std::vector<Vector> states;
    Vector g0 = Vector::Zero(d);
    g0(idx(1, 0, N)) = 1.0;
    levels.push_back({e0, -1, 0});
    states.push_back(g0);
    for (int n = 1; n <= n_max; ++n) {
        double a, b, c;
        block(n, a, b, c);
        const Block2 bl = diag2(a, b, c);
        const int parity = (n % 2 == 1) ? 1 : -1;  // (−1)^{n−1}
        for (int k = 0; k < 2; ++k) {
            const Eigen::Vector2d& v = (k == 0) ? bl.v_lo : bl.v_hi;
            Vector s = Vector::Zero(d);
            if (n - 1 < N) s(idx(0, n - 1, N)) = v(0);
            if (n < N) s(idx(1, n, N)) = v(1);
            levels.push_back({k == 0 ? bl.e_lo : bl.e_hi, parity, n});
            states.push_back(s);
        }
    }
    return sort_levels(std::move(levels), std::move(states), space);
}

} // namespace

PerturbativeSpectrum jc_spectrum(const qops::JCParams& p, int n_max)
{
    p.validate();
    if (n_max < 0) throw std::invalid_argument("jc_spectrum needs n_max >= 0");
    // Diagonal elements of the n-th block: ω(n−1) + Ω/2 and ωn − Ω/2; coupling g√n.
    return ladder(-0.5 * p.Omega, n_max, n_max + 1, [&](int n, double& a, double& b, double& c) {
        a = p.omega * (n - 1) + 0.5 * p.Omega;
        b = p.omega * n - 0.5 * p.Omega;
        c = p.g * std::sqrt(static_cast<double>(n));
    });
}

PerturbativeSpectrum bloch_siegert_spectrum(const qops::RabiParams& p, int n_max, int cutoff)
{
    p.validate();
    if (n_max < 0) throw std::invalid_argument("bloch_siegert_spectrum needs n_max >= 0");
    if (cutoff < n_max + 1) throw std::invalid_argument("bloch_siegert_spectrum needs cutoff >= n_max + 1");
    const double bound = 0.3 * std::min(p.omega, p.omega + p.Omega);
    if (p.g > bound) {
        warn("Bloch-Siegert correction used beyond the perturbative regime (g = " + format_double(p.g) +
             " > 0.3 min(omega, omega + Omega))");
    }
    const double s = p.g * p.g / (p.omega + p.Omega);
    // s[σ_z(a†a + ½) − ½] is s(n−1) on |↑,n−1⟩ and −s(n+1) on |↓,n⟩.
    PerturbativeSpectrum out =
        ladder(-0.5 * p.Omega - s, n_max, cutoff, [&](int n, double& a, double& b, double& c) {
            a = p.omega * (n - 1) + 0.5 * p.Omega + s * (n - 1);
            b = p.omega * n - 0.5 * p.Omega - s * (n + 1);
            c = p.g * std::sqrt(static_cast<double>(n));
        });

    const qops::Algebra alg = qops::build_algebra(out.space);
    const Matrix& a = alg.a[0].matrix;
    const Matrix& ad = alg.adag[0].matrix;
    const Matrix& sp = alg.spin[0].plus.matrix;
    const Matrix& sm = alg.spin[0].minus.matrix;
    const Matrix& sz = alg.spin[0].z.matrix;
    const Matrix U1 = qops::exp_antihermitian((p.g / (p.omega + p.Omega)) * (a * sm - ad * sp));
    const Matrix U2 = qops::exp_antihermitian(
        (p.g * p.g / (2.0 * p.omega * (p.omega + p.Omega))) * sz * (a * a - ad * ad));
    out.states = U1 * U2 * out.states;
    return out;
}

} // namespace usqed::spectra
