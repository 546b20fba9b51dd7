// steady.cpp — Density-matrix checks, Liouvillian zero modes and trajectory propagation

#include "usqed/open.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "usqed/error.hpp"

namespace usqed::open {

namespace {

Matrix unvec(const Vector& v, Eigen::Index d)
{
    return Eigen::Map<const Matrix>(v.data(), d, d);
}

Vector vec(const Matrix& m)
{
    return Eigen::Map<const Vector>(m.data(), m.size());
}

// A relative LU pivot below this marks a second zero mode.
constexpr double kZeroModePivot = 1e-10;

} // namespace

double DensityMatrix::trace_error() const
{
    return std::abs(matrix.trace() - cplx(1.0, 0.0));
}

double DensityMatrix::min_eigenvalue() const
{
    const Matrix h = 0.5 * (matrix + matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

void DensityMatrix::validate() const
{
    const double te = trace_error();
    const double me = min_eigenvalue();
    const double herm = qops::max_abs(matrix - matrix.adjoint());
    if (te >= 1e-10 || me <= -1e-8 || herm >= 1e-10) {
        throw NumericalError("invalid_density_matrix", "density matrix violates trace/PSD/Hermiticity tolerances",
                             {{"trace_error", format_double(te)},
                              {"min_eigenvalue", format_double(me)},
                              {"hermiticity_defect", format_double(herm)}});
    }
}

SteadyState steady_state(const LindbladGenerator& L)
{
    return steady_state(L.superoperator(), L.dim());
}

SteadyState steady_state(const Matrix& superop, Eigen::Index d)
{
    const Eigen::Index D = d * d;
    if (superop.rows() != D || superop.cols() != D) throw std::invalid_argument("superoperator dimension mismatch");

    // Row (0,0) is a combination of the other diagonal rows (trace preservation);
    // replacing it by the trace functional pins the normalization.
    Matrix A = superop;
    A.row(0).setZero();
    for (Eigen::Index i = 0; i < d; ++i) A(0, i * d + i) = 1.0;
    Eigen::PartialPivLU<Matrix> lu(A);
    const Matrix& LU = lu.matrixLU();
    double pmax = 0.0, pmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < D; ++i) {
        pmax = std::max(pmax, std::abs(LU(i, i)));
        pmin = std::min(pmin, std::abs(LU(i, i)));
    }

    SteadyState out;
    if (!(pmin > kZeroModePivot * pmax)) {
        Eigen::FullPivLU<Matrix> full(superop);
        full.setThreshold(kZeroModePivot);
        const Matrix ker = full.kernel();
        out.degenerate = true;
        for (Eigen::Index c = 0; c < ker.cols(); ++c) out.slow_modes.push_back(unvec(ker.col(c), d));
        warn("steady_state: Liouvillian has " + std::to_string(ker.cols()) +
             " zero modes; returning the slow-mode basis");
        Matrix rho = out.slow_modes.empty() ? Matrix::Zero(d, d) : out.slow_modes.front();
        const cplx tr = rho.trace();
        if (std::abs(tr) > 0.0) rho /= tr;
        out.rho.matrix = rho;
        out.residual = out.slow_modes.empty() ? 0.0 : (superop * vec(rho)).cwiseAbs().maxCoeff();
        return out;
    }

    Vector rhs = Vector::Zero(D);
    rhs(0) = 1.0;
    Matrix rho = unvec(lu.solve(rhs), d);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace();
    out.rho.matrix = rho;
    out.residual = (superop * vec(rho)).cwiseAbs().maxCoeff();
    if (out.residual >= 1e-10) {
        throw NumericalError("steady_state_residual", "steady-state residual above 1e-10",
                             {{"residual", format_double(out.residual)}, {"dim", std::to_string(d)}});
    }
    out.rho.validate();
    return out;
}

std::vector<Matrix> propagate(const LindbladGenerator& L, const Matrix& rho0, const std::vector<double>& t_grid,
                              const numkern::OdeOptions& opts)
{
    const Eigen::Index d = L.dim();
    if (rho0.rows() != d || rho0.cols() != d) throw std::invalid_argument("initial state dimension mismatch");
    const Matrix S = L.superoperator();
    const auto D = static_cast<std::size_t>(d * d);
    numkern::OdeRhs rhs = [&](const numkern::OdeState& y, numkern::OdeState& dy, double) {
        Eigen::Map<const Vector> yv(y.data(), static_cast<Eigen::Index>(D));
        Eigen::Map<Vector> dv(dy.data(), static_cast<Eigen::Index>(D));
        dv.noalias() = S * yv;
    };
    numkern::OdeState y0(rho0.data(), rho0.data() + D);
    const auto states = numkern::propagate_ode(rhs, y0, t_grid, opts);
    const cplx tr0 = rho0.trace();
    std::vector<Matrix> out;
    out.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        Matrix rho = Eigen::Map<const Matrix>(states[i].data(), d, d);
        const double drift = std::abs(rho.trace() - tr0);
        if (drift >= 1e-10) {
            throw NumericalError("trace_drift", "trace not conserved along the trajectory",
                                 {{"t", format_double(t_grid[i])}, {"drift", format_double(drift)}});
        }
        out.push_back(std::move(rho));
    }
    return out;
}

} // namespace usqed::open
