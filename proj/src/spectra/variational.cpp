// variational.cpp — Polaron and multi-polaron variational ground states

#include "usqed/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "usqed/error.hpp"

namespace usqed::spectra {

namespace {

using qops::cplx;

// exp(−i t G) applied to vectors through a cached eigendecomposition of Hermitian G.
struct ExpCache {
    Matrix V;
    Eigen::VectorXd mu;

    explicit ExpCache(const Matrix& G)
    {
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (G + G.adjoint()));
        if (es.info() != Eigen::Success) throw NumericalError("eigensolver", "generator diagonalization failed");
        V = es.eigenvectors();
        mu = es.eigenvalues();
    }

    Vector apply(double t, const Vector& v) const
    {
        Vector w = V.adjoint() * v;
        for (Eigen::Index i = 0; i < w.size(); ++i) w(i) *= std::exp(cplx(0.0, -t * mu(i)));
        return V * w;
    }
};

struct PolaronModel {
    int N;
    Matrix H;
    ExpCache disp;     // G = i(a† − a), D(β) = exp(−iβG)
    ExpCache squeeze;  // G = i(a†² − a²), S(λ) = exp(−iλG)

    PolaronModel(const qops::RabiParams& p, int cutoff)
        : N(cutoff),
          H(qops::build_hamiltonian(p, qops::rabi_space(cutoff)).matrix),
          disp(cplx(0.0, 1.0) * Matrix(qops::annihilation(cutoff).adjoint() - qops::annihilation(cutoff))),
          squeeze(cplx(0.0, 1.0) * Matrix(qops::annihilation(cutoff).adjoint() * qops::annihilation(cutoff).adjoint() -
                                            qops::annihilation(cutoff) * qops::annihilation(cutoff)))
    {
    }

    // |+⟩D(−β)S(λ)|0⟩ − |−⟩D(β)S(λ)|0⟩, normalized; |±⟩ = (|↑⟩ ± |↓⟩)/√2.
    Vector state(double beta, double lambda) const
    {
        Vector vac = Vector::Zero(N);
        vac(0) = 1.0;
        const Vector s = lambda == 0.0 ? vac : squeeze.apply(lambda, vac);
        const Vector dm = disp.apply(-beta, s);
        const Vector dp = disp.apply(beta, s);
        Vector psi(2 * N);
        psi.head(N) = (dm - dp) / std::sqrt(2.0);
        psi.tail(N) = (dm + dp) / std::sqrt(2.0);
        return psi / psi.norm();
    }

    double energy(const Vector& psi) const { return (psi.adjoint() * H * psi)(0, 0).real(); }
};

// Weight of the state on the top `band` Fock levels of either spin.
double tail_weight(const Vector& psi, int N, int band)
{
    double w = 0.0;
    for (int n = std::max(0, N - band); n < N; ++n) w += std::norm(psi(n)) + std::norm(psi(N + n));
    return w;
}

} // namespace

VariationalResult variational_polaron_ground(const qops::RabiParams& p, bool with_squeezing,
                                             const numkern::SimplexOptions& opts)
{
    p.validate();
    const double beta0 = p.g / p.omega;
    int N = std::max(30, static_cast<int>(std::ceil(6.0 * beta0 * beta0)) + 30);
    const int N_cap = 400;

    double beta = beta0, lambda = 0.0;
    for (;;) {
        const PolaronModel model(p, N);
        numkern::MinimizeResult best;
        bool have = false;
        // β-only search from the Ω = 0 optimum and from the uncoupled state.
        for (double start : {beta0, 0.5 * beta0, 0.0}) {
            Eigen::VectorXd x0(1);
            x0 << start;
            auto f = [&](const Eigen::VectorXd& x) { return model.energy(model.state(x(0), 0.0)); };
            numkern::MinimizeResult r = numkern::minimize(f, x0, opts);
            if (!have || r.fx < best.fx) {
                best = r;
                have = true;
            }
        }
        beta = std::abs(best.x(0));
        lambda = 0.0;
        bool stagnated = best.stagnated;
        double energy = best.fx;
        if (with_squeezing) {
            Eigen::VectorXd x0(2);
            x0 << beta, 0.0;
            auto f = [&](const Eigen::VectorXd& x) {
                return model.energy(model.state(x(0), std::abs(x(1))));
            };
            const numkern::MinimizeResult r = numkern::minimize(f, x0, opts);
            if (r.fx <= energy) {
                beta = std::abs(r.x(0));
                lambda = std::abs(r.x(1));
                energy = r.fx;
                stagnated = r.stagnated;
            }
        }
        const Vector psi = model.state(beta, lambda);
        if (tail_weight(psi, N, 8) < 1e-14 || N >= N_cap) {
            if (N >= N_cap && tail_weight(psi, N, 8) >= 1e-14) {
                warn("variational_polaron_ground: cutoff cap reached with tail weight " +
                     format_double(tail_weight(psi, N, 8)));
            }
            if (stagnated) warn("variational_polaron_ground: minimizer stagnated");
            VariationalResult out;
            out.energy = model.energy(psi);
            out.beta = beta;
            out.lambda = lambda;
            out.state = psi;
            out.space = qops::rabi_space(N);
            out.stagnated = stagnated;
            return out;
        }
        N = std::min(N_cap, N * 3 / 2);
    }
}

double multipolaron_energy(const qops::SpinBosonParams& p, const std::vector<Eigen::VectorXd>& alpha,
                           Eigen::VectorXd* weights)
{
    const auto n = static_cast<Eigen::Index>(alpha.size());
    const auto K = static_cast<Eigen::Index>(p.modes.size());
    if (n < 1) throw std::invalid_argument("multipolaron_energy needs at least one polaron");
    Eigen::MatrixXd S(n, n), T(n, n), H(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (alpha[i].size() != K) throw std::invalid_argument("displacement vector length must equal the mode count");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            S(i, j) = std::exp(-0.5 * (alpha[i] - alpha[j]).squaredNorm());
            T(i, j) = std::exp(-0.5 * (alpha[i] + alpha[j]).squaredNorm());
            double bos = 0.0;
            for (Eigen::Index k = 0; k < K; ++k) {
                bos += p.modes[k].omega * alpha[i](k) * alpha[j](k) + p.modes[k].g * (alpha[i](k) + alpha[j](k));
            }
            H(i, j) = 2.0 * S(i, j) * bos - p.Omega * T(i, j);
        }
    }
    const Eigen::MatrixXd Nm = 2.0 * S;
    // Canonical orthogonalization drops near-linearly-dependent polarons.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ns(Nm);
    const double smax = ns.eigenvalues().maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (ns.eigenvalues()(i) > 1e-10 * smax) keep.push_back(i);
    }
    Eigen::MatrixXd X(n, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
        X.col(static_cast<Eigen::Index>(c)) =
            ns.eigenvectors().col(keep[c]) / std::sqrt(ns.eigenvalues()(keep[c]));
    }
    const Eigen::MatrixXd Hp = X.transpose() * H * X;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> hs(0.5 * (Hp + Hp.transpose()));
    if (weights) *weights = X * hs.eigenvectors().col(0);
    return hs.eigenvalues()(0);
}

MultiPolaronResult multipolaron_spin_boson_ground(const qops::SpinBosonParams& p, int n_pol,
                                                  const numkern::SimplexOptions& opts)
{
    p.validate();
    if (n_pol < 1) throw std::invalid_argument("n_pol must be >= 1");
    const int K = static_cast<int>(p.modes.size());
    if (K * n_pol > 200) throw std::invalid_argument("K * n_pol exceeds the optimization cap of 200 variables");

    // Ω = 0 optimum of a single polaron: α_k = −g_k/ω_k.
    std::vector<Eigen::VectorXd> alpha(1, Eigen::VectorXd(K));
    for (int k = 0; k < K; ++k) alpha[0](k) = -p.modes[k].g / p.modes[k].omega;

    MultiPolaronResult out;
    for (int m = 1; m <= n_pol; ++m) {
        if (m > 1) alpha.push_back(0.5 * alpha[0]);
        Eigen::VectorXd x0(m * K);
        for (int i = 0; i < m; ++i) x0.segment(i * K, K) = alpha[i];
        auto unpack = [&](const Eigen::VectorXd& x) {
            std::vector<Eigen::VectorXd> al(m);
            for (int i = 0; i < m; ++i) al[i] = x.segment(i * K, K);
            return al;
        };
        auto f = [&](const Eigen::VectorXd& x) { return multipolaron_energy(p, unpack(x)); };
        const numkern::MinimizeResult r = numkern::minimize(f, x0, opts);
        alpha = unpack(r.x);
        out.stagnated = r.stagnated;
        out.energy = r.fx;
    }
    if (out.stagnated) warn("multipolaron_spin_boson_ground: minimizer stagnated");
    Eigen::VectorXd C;
    out.energy = multipolaron_energy(p, alpha, &C);
    out.ansatz.n_pol = n_pol;
    out.ansatz.alpha = alpha;
    out.ansatz.weights = C;
    return out;
}

} // namespace usqed::spectra
