// floquet_liouville.cpp — Fourier-block Floquet–Liouvillian, zone representatives and periodic steady states

#include "usqed/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/math/constants/constants.hpp>

#include "usqed/error.hpp"

namespace usqed::floquet {

namespace {

constexpr double kZeroMode = 1e-9;

// Folds Im z into (−ω/2, ω/2].
cplx fold(cplx z, double omega)
{
    double im = std::fmod(z.imag() + 0.5 * omega, omega);
    if (im <= 0.0) im += omega;
    return {z.real(), im - 0.5 * omega};
}

double centroid_of(const Vector& v, Eigen::Index D, int n_f)
{
    double num = 0.0, den = 0.0;
    for (int n = -n_f; n <= n_f; ++n) {
        const double w = v.segment((n + n_f) * D, D).squaredNorm();
        num += n * w;
        den += w;
    }
    return den > 0.0 ? num / den : 0.0;
}

void select_representatives(FloquetLiouvillian& FL)
{
    const Eigen::Index D = FL.d * FL.d;
    const Eigen::Index total = FL.eigen.values.size();
    std::vector<double> cent(static_cast<std::size_t>(total));
    for (Eigen::Index j = 0; j < total; ++j) cent[j] = centroid_of(FL.eigen.right.col(j), D, FL.n_f);

    FL.selected.clear();
    for (Eigen::Index j = 0; j < total; ++j)
        if (cent[j] >= -0.5 && cent[j] < 0.5) FL.selected.push_back(j);
    if (static_cast<Eigen::Index>(FL.selected.size()) != D) {
        warn("floquet: " + std::to_string(FL.selected.size()) + " eigenvectors centred in the central zone (expected " +
             std::to_string(D) + "); taking the most central ones");
        std::vector<Eigen::Index> order(static_cast<std::size_t>(total));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](Eigen::Index a, Eigen::Index b) { return std::abs(cent[a]) < std::abs(cent[b]); });
        FL.selected.assign(order.begin(), order.begin() + D);
    }
    std::sort(FL.selected.begin(), FL.selected.end(), [&](Eigen::Index a, Eigen::Index b) {
        const cplx x = fold(FL.eigen.values(a), FL.drive.omega_d), y = fold(FL.eigen.values(b), FL.drive.omega_d);
        return x.real() != y.real() ? x.real() > y.real() : x.imag() < y.imag();
    });
    FL.values.resize(D);
    FL.centroid.clear();
    for (Eigen::Index a = 0; a < D; ++a) {
        FL.values(a) = fold(FL.eigen.values(FL.selected[a]), FL.drive.omega_d);
        FL.centroid.push_back(cent[FL.selected[a]]);
    }
}

FloquetLiouvillian assemble(const open::LindbladGenerator& L0, const DriveSpec& drive, const Matrix& S0,
                            const Matrix& C, int n_f)
{
    FloquetLiouvillian FL;
    FL.generator = L0;
    FL.drive = drive;
    FL.drive_frame = L0.to_frame(drive.drive_op);
    FL.n_f = n_f;
    FL.d = L0.dim();
    FL.L0 = S0;
    FL.Lplus = 0.5 * drive.F * std::exp(cplx(0.0, -drive.phi)) * C;
    FL.Lminus = 0.5 * drive.F * std::exp(cplx(0.0, drive.phi)) * C;
    FL.eigen = numkern::eig_general(FL.block_matrix());
    FL.defective = FL.eigen.defective;
    select_representatives(FL);
    return FL;
}

double max_mismatch(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, double omega)
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < b.size(); ++j) {
            const cplx diff = a(i) - b(j);
            // Compare modulo the zone width.
            const double im = std::remainder(diff.imag(), omega);
            best = std::min(best, std::hypot(diff.real(), im));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

Vector vec(const Matrix& m)
{
    return Eigen::Map<const Vector>(m.data(), m.size());
}

} // namespace

double DriveSpec::period() const
{
    return 2.0 * boost::math::constants::pi<double>() / omega_d;
}

void DriveSpec::validate(Eigen::Index dim) const
{
    if (!(omega_d > 0.0) || !std::isfinite(omega_d)) throw std::invalid_argument("drive frequency must be > 0");
    if (!std::isfinite(F) || !std::isfinite(phi)) throw std::invalid_argument("drive amplitude and phase must be finite");
    if (drive_op.rows() != dim || drive_op.cols() != dim) {
        throw std::invalid_argument("drive operator dimension does not match the system");
    }
    if (!qops::is_hermitian(drive_op, 1e-10)) throw std::invalid_argument("drive operator must be Hermitian");
}

Matrix commutator_superop(const Matrix& X)
{
    const Eigen::Index d = X.rows();
    const Matrix I = Matrix::Identity(d, d);
    return cplx(0.0, -1.0) * (qops::kron(I, X) - qops::kron(X.transpose(), I));
}

Matrix floquet_block_matrix(const Matrix& L0, const Matrix& Lplus, const Matrix& Lminus, double omega_d, int n_f)
{
    const Eigen::Index D = L0.rows();
    const Eigen::Index M = 2 * n_f + 1;
    Matrix big = Matrix::Zero(D * M, D * M);
    for (Eigen::Index b = 0; b < M; ++b) {
        const double n = static_cast<double>(b - n_f);
        big.block(b * D, b * D, D, D) = L0;
        big.block(b * D, b * D, D, D).diagonal().array() += cplx(0.0, n * omega_d);
        if (b + 1 < M) {
            big.block((b + 1) * D, b * D, D, D) = Lplus;   // (n, n−1): L⁽⁺¹⁾
            big.block(b * D, (b + 1) * D, D, D) = Lminus;  // (n, n+1): L⁽⁻¹⁾
        }
    }
    return big;
}

Matrix FloquetLiouvillian::block_matrix() const
{
    return floquet_block_matrix(L0, Lplus, Lminus, drive.omega_d, n_f);
}

Matrix FloquetLiouvillian::component(Eigen::Index j, int n) const
{
    if (n < -n_f || n > n_f) throw std::out_of_range("Fourier index outside [-N_F, N_F]");
    const Eigen::Index D = d * d;
    const Vector seg = eigen.right.col(j).segment((n + n_f) * D, D);
    return Eigen::Map<const Matrix>(seg.data(), d, d);
}

Eigen::Index FloquetLiouvillian::zero_mode() const
{
    Eigen::Index best = 0;
    for (Eigen::Index a = 1; a < values.size(); ++a)
        if (std::abs(values(a)) < std::abs(values(best))) best = a;
    return best;
}

FloquetLiouvillian build_floquet_liouvillian(const open::LindbladGenerator& L0, const DriveSpec& drive_lab,
                                             const FloquetOptions& opts)
{
    if (opts.n_f < 1 || opts.n_f_cap < opts.n_f) throw std::invalid_argument("invalid Fourier cutoff options");
    drive_lab.validate(L0.frame.rows());
    const DriveSpec& drive = drive_lab;
    const Matrix X = L0.to_frame(drive.drive_op);
    const Matrix S0 = L0.superoperator();
    const Matrix C = commutator_superop(X);

    FloquetLiouvillian prev = assemble(L0, drive, S0, C, opts.n_f);
    double change = 0.0;
    for (int n_f = opts.n_f + 2; n_f <= opts.n_f_cap; n_f += 2) {
        FloquetLiouvillian next = assemble(L0, drive, S0, C, n_f);
        change = max_mismatch(next.values, prev.values, drive.omega_d);
        if (change < opts.conv_tol) return next;
        prev = std::move(next);
    }
    throw NumericalError("nf_cap", "Floquet-Liouville spectrum not converged in the Fourier cutoff",
                         {{"n_f_cap", std::to_string(opts.n_f_cap)}, {"last_change", format_double(change)}});
}

std::vector<Matrix> propagate_driven(const open::LindbladGenerator& L0, const DriveSpec& drive, const Matrix& rho0,
                                     const std::vector<double>& t_grid, const numkern::OdeOptions& opts)
{
    const Eigen::Index d = L0.dim();
    if (rho0.rows() != d || rho0.cols() != d) throw std::invalid_argument("initial state dimension mismatch");
    drive.validate(L0.frame.rows());
    const Matrix S = L0.superoperator();
    const Matrix C = commutator_superop(L0.to_frame(drive.drive_op));
    const auto D = static_cast<Eigen::Index>(d * d);
    numkern::OdeRhs rhs = [&](const numkern::OdeState& y, numkern::OdeState& dy, double t) {
        Eigen::Map<const Vector> yv(y.data(), D);
        Eigen::Map<Vector> dv(dy.data(), D);
        dv.noalias() = S * yv;
        dv.noalias() += (drive.F * std::cos(drive.omega_d * t + drive.phi)) * (C * yv);
    };
    const auto states =
        numkern::propagate_ode(rhs, numkern::OdeState(rho0.data(), rho0.data() + D), t_grid, opts);
    std::vector<Matrix> out;
    out.reserve(states.size());
    for (const auto& s : states) out.emplace_back(Eigen::Map<const Matrix>(s.data(), d, d));
    return out;
}

std::vector<Matrix> floquet_dynamics(const FloquetLiouvillian& FL, const Matrix& rho0,
                                     const std::vector<double>& t_grid, int zone_shift)
{
    const Eigen::Index d = FL.d;
    if (rho0.rows() != d || rho0.cols() != d) throw std::invalid_argument("initial state dimension mismatch");
    if (FL.defective) {
        warn("floquet_dynamics: defective Floquet-Liouville spectrum; integrating the driven master equation instead");
        numkern::OdeOptions o;
        o.rtol = 1e-10;
        o.atol = 1e-12;
        return propagate_driven(FL.generator, FL.drive, rho0, t_grid, o);
    }
    const Eigen::Index D = d * d;
    const int M = 2 * FL.n_f + 1;
    const Vector v0 = vec(rho0);
    const double w = FL.drive.omega_d;

    struct Mode {
        cplx value;
        cplx coeff;
        Eigen::Index col;
    };
    std::vector<Mode> modes;
    for (Eigen::Index a = 0; a < D; ++a) {
        Eigen::Index j = FL.selected[a];
        if (zone_shift != 0) {
            const cplx target = FL.eigen.values(j) + cplx(0.0, zone_shift * w);
            Eigen::Index best = 0;
            for (Eigen::Index k = 1; k < FL.eigen.values.size(); ++k)
                if (std::abs(FL.eigen.values(k) - target) < std::abs(FL.eigen.values(best) - target)) best = k;
            j = best;
        }
        cplx c = 0.0;
        for (int b = 0; b < M; ++b) c += FL.eigen.left.row(j).segment(b * D, D).transpose().cwiseProduct(v0).sum();
        modes.push_back({FL.eigen.values(j), c, j});
    }

    std::vector<Matrix> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        Vector acc = Vector::Zero(D);
        for (const auto& m : modes) {
            Vector R = Vector::Zero(D);
            for (int b = 0; b < M; ++b) {
                const int n = b - FL.n_f;
                R += std::exp(cplx(0.0, -n * w * t)) * FL.eigen.right.col(m.col).segment(b * D, D);
            }
            acc += m.coeff * std::exp(m.value * t) * R;
        }
        out.emplace_back(Eigen::Map<const Matrix>(acc.data(), d, d));
    }
    return out;
}

Matrix PeriodicState::at(double t) const
{
    Matrix out = Matrix::Zero(harmonics.front().rows(), harmonics.front().cols());
    for (int n = -n_f; n <= n_f; ++n) out += std::exp(cplx(0.0, -n * omega_d * t)) * harmonics[n + n_f];
    return out;
}

PeriodicState floquet_steady_state(const FloquetLiouvillian& FL)
{
    int zeros = 0;
    for (Eigen::Index a = 0; a < FL.values.size(); ++a) zeros += std::abs(FL.values(a)) < kZeroMode ? 1 : 0;
    if (zeros != 1) {
        throw NumericalError("non_mixing", "Floquet-Liouvillian does not have exactly one zero mode",
                             {{"zero_modes", std::to_string(zeros)}});
    }
    const Eigen::Index j = FL.selected[FL.zero_mode()];
    PeriodicState ps;
    ps.omega_d = FL.drive.omega_d;
    ps.n_f = FL.n_f;
    for (int n = -FL.n_f; n <= FL.n_f; ++n) ps.harmonics.push_back(FL.component(j, n));
    const cplx tr = ps.harmonics[FL.n_f].trace();
    if (!(std::abs(tr) > 0.0)) throw NumericalError("non_mixing", "Floquet zero mode has vanishing trace");
    for (auto& h : ps.harmonics) h /= tr;
    // Hermiticity of ρ(t) pairs R⁽⁻ⁿ⁾ with R⁽ⁿ⁾†; symmetrize to remove solver noise.
    for (int n = 0; n <= FL.n_f; ++n) {
        const Matrix avg = 0.5 * (ps.harmonics[FL.n_f + n] + ps.harmonics[FL.n_f - n].adjoint());
        ps.harmonics[FL.n_f + n] = avg;
        ps.harmonics[FL.n_f - n] = avg.adjoint();
    }
    return ps;
}

} // namespace usqed::floquet
