// floquet_markov.cpp — Floquet states from the monodromy matrix and the secular Floquet–Markov master equation

#include "usqed/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "usqed/error.hpp"

namespace usqed::floquet {

namespace {

double fold_real(double e, double omega)
{
    double x = std::fmod(e + 0.5 * omega, omega);
    if (x <= 0.0) x += omega;
    return x - 0.5 * omega;
}

// Modified Gram–Schmidt on the columns.
Matrix orthonormalize(Matrix V)
{
    for (Eigen::Index c = 0; c < V.cols(); ++c) {
        for (Eigen::Index p = 0; p < c; ++p) V.col(c) -= V.col(p).dot(V.col(c)) * V.col(p);
        const double n = V.col(c).norm();
        if (!(n > 1e-12)) throw NumericalError("monodromy", "Floquet states are linearly dependent");
        V.col(c) /= n;
        // Phase gauge: the first largest-modulus entry is real and positive.
        Eigen::Index imax = 0;
        for (Eigen::Index r = 1; r < V.rows(); ++r)
            if (std::abs(V(r, c)) > std::abs(V(imax, c)) + 1e-12) imax = r;
        V.col(c) *= std::abs(V(imax, c)) / V(imax, c);
    }
    return V;
}

double max_change(const std::vector<Matrix>& coarse, const std::vector<Matrix>& fine, int k_max)
{
    const int mc = static_cast<int>(coarse.size()), mf = static_cast<int>(fine.size());
    double worst = 0.0;
    for (int k = -k_max; k <= k_max; ++k)
        worst = std::max(worst, (coarse[k + mc / 2].cwiseAbs2() - fine[k + mf / 2].cwiseAbs2()).cwiseAbs().maxCoeff());
    return worst;
}

} // namespace

FloquetStates floquet_states(const Matrix& H0, const DriveSpec& drive, const FloquetStatesOptions& opts)
{
    const Eigen::Index d = H0.rows();
    drive.validate(d);
    if (!qops::is_hermitian(H0, 1e-10)) throw std::invalid_argument("floquet_states requires a Hermitian H0");
    if (opts.samples < 4 || opts.samples % 2 != 0) throw std::invalid_argument("sample count must be even and >= 4");
    const int M = opts.samples;
    const double T = drive.period();

    std::vector<double> grid(static_cast<std::size_t>(M) + 1);
    for (int j = 0; j <= M; ++j) grid[j] = T * j / M;
    const cplx mi(0.0, -1.0);
    const auto D = d * d;
    numkern::OdeRhs rhs = [&](const numkern::OdeState& y, numkern::OdeState& dy, double t) {
        Eigen::Map<const Matrix> U(y.data(), d, d);
        Eigen::Map<Matrix> dU(dy.data(), d, d);
        dU.noalias() = mi * (H0 * U);
        dU.noalias() += (mi * drive.F * std::cos(drive.omega_d * t + drive.phi)) * (drive.drive_op * U);
    };
    const Matrix I = Matrix::Identity(d, d);
    numkern::OdeOptions o;
    o.rtol = 1e-10;
    o.atol = 1e-12;
    const auto traj = numkern::propagate_ode(rhs, numkern::OdeState(I.data(), I.data() + D), grid, o);
    const Matrix UT = Eigen::Map<const Matrix>(traj.back().data(), d, d);

    Eigen::ComplexEigenSolver<Matrix> es(UT);
    if (es.info() != Eigen::Success) throw NumericalError("monodromy", "monodromy eigensolve failed");
    std::vector<double> eps(static_cast<std::size_t>(d));
    for (Eigen::Index a = 0; a < d; ++a) eps[a] = fold_real(-std::arg(es.eigenvalues()(a)) / T, drive.omega_d);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return eps[a] < eps[b]; });

    FloquetStates out;
    out.omega_d = drive.omega_d;
    out.quasienergies.resize(d);
    Matrix V(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
        out.quasienergies(a) = eps[order[a]];
        V.col(a) = es.eigenvectors().col(order[a]);
    }
    out.u0 = orthonormalize(V);
    for (Eigen::Index a = 0; a < d; ++a) {
        const cplx ph = std::exp(cplx(0.0, -out.quasienergies(a) * T));
        out.monodromy_residual = std::max(out.monodromy_residual, (UT * out.u0.col(a) - ph * out.u0.col(a)).norm());
    }
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = a + 1; b < d; ++b) {
            if (std::abs(std::remainder(out.quasienergies(a) - out.quasienergies(b), drive.omega_d)) < 1e-9) {
                out.degenerate = true;
            }
        }
    }
    if (out.degenerate) warn("floquet_states: quasienergies degenerate within 1e-9; secular approximation breaks down");
    if (out.monodromy_residual > 1e-8) {
        throw NumericalError("monodromy", "Floquet states fail the monodromy check",
                             {{"residual", format_double(out.monodromy_residual)}});
    }

    for (int j = 0; j < M; ++j) {
        const Matrix U = Eigen::Map<const Matrix>(traj[j].data(), d, d);
        Eigen::VectorXcd phase(d);
        for (Eigen::Index a = 0; a < d; ++a) phase(a) = std::exp(cplx(0.0, out.quasienergies(a) * grid[j]));
        out.t_samples.push_back(grid[j]);
        out.u_t.push_back(U * out.u0 * phase.asDiagonal());
    }
    return out;
}

Matrix FloquetStates::fourier(const Matrix& A_lab, int k) const
{
    const auto M = static_cast<double>(u_t.size());
    Matrix out = Matrix::Zero(u0.cols(), u0.cols());
    for (std::size_t j = 0; j < u_t.size(); ++j)
        out += std::exp(cplx(0.0, k * omega_d * t_samples[j])) * (u_t[j].adjoint() * A_lab * u_t[j]);
    return out / M;
}

std::vector<Matrix> FloquetStates::fourier_all(const Matrix& A_lab) const
{
    const int M = static_cast<int>(u_t.size());
    std::vector<Matrix> f;
    f.reserve(u_t.size());
    for (const auto& u : u_t) f.push_back(u.adjoint() * A_lab * u);
    std::vector<Matrix> out;
    out.reserve(u_t.size());
    for (int k = -M / 2; k < M / 2; ++k) {
        Matrix acc = Matrix::Zero(u0.cols(), u0.cols());
        for (int j = 0; j < M; ++j) acc += std::exp(cplx(0.0, k * omega_d * t_samples[j])) * f[j];
        out.push_back(acc / static_cast<double>(M));
    }
    return out;
}

FloquetMarkov floquet_markov_me(const Matrix& H0, const std::vector<open::BathSpec>& baths, const DriveSpec& drive,
                                const FloquetStatesOptions& opts)
{
    const Eigen::Index d = H0.rows();
    for (const auto& b : baths) b.validate(d);

    FloquetStatesOptions cur = opts;
    FloquetStates states = floquet_states(H0, drive, cur);
    std::vector<std::vector<Matrix>> comps;
    for (const auto& b : baths) comps.push_back(states.fourier_all(b.coupling_op));
    for (;;) {
        if (2 * cur.samples > cur.samples_cap) {
            throw NumericalError("fourier_samples", "Floquet Fourier components not converged at the sample cap",
                                 {{"samples", std::to_string(cur.samples)}});
        }
        cur.samples *= 2;
        FloquetStates fine = floquet_states(H0, drive, cur);
        std::vector<std::vector<Matrix>> fine_comps;
        double change = 0.0;
        for (std::size_t i = 0; i < baths.size(); ++i) {
            fine_comps.push_back(fine.fourier_all(baths[i].coupling_op));
            change = std::max(change, max_change(comps[i], fine_comps[i], cur.samples / 8));
        }
        states = std::move(fine);
        comps = std::move(fine_comps);
        if (change < opts.conv_tol) break;
    }

    FloquetMarkov out;
    out.states = states;
    auto& L = out.generator;
    L.frame = states.u0;
    L.H = states.quasienergies.cast<cplx>().asDiagonal();
    const int M = static_cast<int>(states.u_t.size());
    const double w = states.omega_d;
    // Components below this fraction of ‖A‖ are quadrature and integration noise.
    std::vector<double> floor2;
    for (const auto& b : baths) floor2.push_back(std::pow(1e-9 * qops::max_abs(b.coupling_op), 2));
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
            double rate = 0.0, best = 0.0, freq = 0.0;
            for (std::size_t i = 0; i < baths.size(); ++i) {
                for (int k = -M / 2; k < M / 2; ++k) {
                    const double Om = states.quasienergies(b) - states.quasienergies(a) + k * w;
                    if (Om <= open::kFrequencyTol) continue;
                    const double a2 = std::norm(comps[i][k + M / 2](a, b));
                    if (a2 <= floor2[i]) continue;
                    const double r = 2.0 * baths[i].gamma(Om) * a2;
                    rate += r;
                    if (r > best) {
                        best = r;
                        freq = Om;
                    }
                }
            }
            if (!(rate > 0.0)) continue;
            Matrix P = Matrix::Zero(d, d);
            P(a, b) = 1.0;
            L.jumps.push_back({rate, P, freq});
        }
    }
    return out;
}

double period_average(const FloquetStates& states, const Matrix& rho_frame, const Matrix& O_lab)
{
    const Matrix O0 = states.fourier(O_lab, 0);
    return (O0 * rho_frame).trace().real();
}

} // namespace usqed::floquet
