// numkern.cpp — Dense numerical kernels behind a narrow interface

#include "usqed/numkern.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "usqed/error.hpp"

namespace usqed::numkern {

namespace {

void fix_phase(Eigen::Ref<Vector> v)
{
    const double vmax = v.cwiseAbs().maxCoeff();
    if (vmax == 0.0) return;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) >= vmax * (1.0 - 1e-10)) {
            v *= std::conj(v(i)) / std::abs(v(i));
            v(i) = std::abs(v(i));
            return;
        }
    }
}

} // namespace

EigenSystem eig_hermitian(const qops::Operator& A, const Matrix* symmetry)
{
    if (!A.hermitian_hint) throw std::invalid_argument("eig_hermitian requires a Hermitian-flagged operator");
    return eig_hermitian(A.matrix, symmetry);
}

EigenSystem eig_hermitian(const Matrix& A, const Matrix* symmetry)
{
    if (A.rows() != A.cols()) throw std::invalid_argument("eig_hermitian requires a square matrix");
    if (!qops::is_hermitian(A)) throw std::invalid_argument("eig_hermitian input is not Hermitian");
    if (symmetry && (symmetry->rows() != A.rows() || symmetry->cols() != A.cols())) {
        throw std::invalid_argument("symmetry operator dimension mismatch");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigensolver", "Hermitian eigensolver did not converge",
                             {{"dim", std::to_string(A.rows())}});
    }
    EigenSystem out;
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
    const Eigen::Index n = A.rows();

    if (symmetry) {
        Eigen::Index start = 0;
        while (start < n) {
            Eigen::Index stop = start + 1;
            while (stop < n && out.values(stop) - out.values(stop - 1) < kDegeneracyGap) ++stop;
            const Eigen::Index width = stop - start;
            if (width > 1) {
                const Matrix Vc = out.vectors.middleCols(start, width);
                Matrix Sc = Vc.adjoint() * (*symmetry) * Vc;
                Sc = 0.5 * (Sc + Sc.adjoint()).eval();
                Eigen::SelfAdjointEigenSolver<Matrix> ss(Sc);
                out.vectors.middleCols(start, width) = Vc * ss.eigenvectors();
            }
            start = stop;
        }
    }
    for (Eigen::Index j = 0; j < n; ++j) fix_phase(out.vectors.col(j));

    double residual = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        residual = std::max(residual,
                            (A * out.vectors.col(j) - out.values(j) * out.vectors.col(j)).norm());
    }
    out.residual = residual;

    if (symmetry) {
        out.parity.resize(static_cast<std::size_t>(n));
        for (Eigen::Index j = 0; j < n; ++j) {
            const double s = (out.vectors.col(j).adjoint() * (*symmetry) * out.vectors.col(j))(0, 0).real();
            out.parity[static_cast<std::size_t>(j)] = std::abs(std::abs(s) - 1.0) < 1e-6 ? (s > 0 ? 1 : -1) : 0;
        }
    }
    return out;
}

GeneralEigenSystem eig_general(const Matrix& A)
{
    if (A.rows() != A.cols()) throw std::invalid_argument("eig_general requires a square matrix");
    Eigen::ComplexEigenSolver<Matrix> es(A);
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigensolver", "general eigensolver did not converge",
                             {{"dim", std::to_string(A.rows())}});
    }
    GeneralEigenSystem out;
    out.values = es.eigenvalues();
    out.right = es.eigenvectors();
    const Eigen::Index n = A.rows();
    Eigen::PartialPivLU<Matrix> lu(out.right);
    const double rcond = lu.rcond();
    out.left = lu.inverse();
    out.biorthogonality_error = qops::max_abs(out.left * out.right - Matrix::Identity(n, n));
    out.defective = !(rcond > 1e-12) || out.biorthogonality_error > 1e-8;
    if (out.defective) {
        warn("eig_general: eigenvector matrix is ill-conditioned (rcond " + format_double(rcond) +
             "); spectrum may be defective");
    }
    double residual = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        residual = std::max(residual, (A * out.right.col(j) - out.values(j) * out.right.col(j)).norm());
    }
    out.residual = residual;
    return out;
}

Vector solve_linear(const Matrix& A, const Vector& b)
{
    if (A.rows() != A.cols() || A.rows() != b.size()) {
        throw std::invalid_argument("solve_linear dimension mismatch");
    }
    Eigen::PartialPivLU<Matrix> lu(A);
    const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
    const double rcond = pivots.maxCoeff() > 0.0 ? std::min(lu.rcond(), pivots.minCoeff() / pivots.maxCoeff()) : 0.0;
    if (!(rcond > 1e-14)) {
        throw NumericalError("singular_matrix", "linear system is singular to working precision",
                             {{"rcond", format_double(rcond)}});
    }
    return lu.solve(b);
}

Vector solve_linear(const Matrix& A, const Vector& b, const Matrix& C, const Vector& d)
{
    if (A.cols() != C.cols() || A.rows() != b.size() || C.rows() != d.size()) {
        throw std::invalid_argument("constrained solve_linear dimension mismatch");
    }
    Matrix M(A.rows() + C.rows(), A.cols());
    M << A, C;
    Vector rhs(b.size() + d.size());
    rhs << b, d;
    Eigen::ColPivHouseholderQR<Matrix> qr(M);
    qr.setThreshold(1e-13);
    if (qr.rank() < A.cols()) {
        throw NumericalError("singular_matrix", "constrained linear system is rank deficient",
                             {{"rank", std::to_string(qr.rank())}, {"cols", std::to_string(A.cols())}});
    }
    return qr.solve(rhs);
}

double refine_root(const std::function<double(double)>& f, RootBracket bracket, int max_iter)
{
    double flo = f(bracket.lo);
    double fhi = f(bracket.hi);
    if (flo == 0.0) return bracket.lo;
    if (fhi == 0.0) return bracket.hi;
    if (!(flo * fhi < 0.0)) throw std::invalid_argument("refine_root: bracket has no sign change");
    boost::uintmax_t iters = static_cast<boost::uintmax_t>(max_iter);
    const auto result = boost::math::tools::toms748_solve(
        f, bracket.lo, bracket.hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52), iters);
    const double a = result.first;
    const double b = result.second;
    return std::abs(f(a)) <= std::abs(f(b)) ? a : b;
}

std::vector<double> find_roots(const std::function<double(double)>& f,
                               const std::vector<double>& grid, const RootOptions& opts)
{
    if (grid.size() < 2) throw std::invalid_argument("find_roots needs at least two grid points");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("find_roots grid must be increasing");
    }
    std::vector<double> fv(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) fv[i] = f(grid[i]);

    std::vector<double> roots;
    bool any_sign_change = false;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        double root = 0.0;
        if (fv[i] == 0.0) {
            root = grid[i];
        } else if (fv[i] * fv[i + 1] < 0.0) {
            root = refine_root(f, {grid[i], grid[i + 1]}, opts.max_iter);
        } else {
            continue;
        }
        any_sign_change = true;
        if (std::abs(f(root)) < 1e-10 * opts.scale) roots.push_back(root);
    }
    if (!std::isnan(fv.back()) && fv.back() == 0.0) {
        any_sign_change = true;
        roots.push_back(grid.back());
    }
    if (!any_sign_change && opts.require_sign_change) {
        throw NumericalError("no_sign_change", "find_roots: no sign change on the supplied grid",
                             {{"lo", format_double(grid.front())}, {"hi", format_double(grid.back())}});
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> unique;
    for (double r : roots) {
        if (unique.empty() || r - unique.back() > opts.dedupe_tol) unique.push_back(r);
    }
    return unique;
}

namespace {

struct GslObjective {
    const std::function<double(const Eigen::VectorXd&)>* f;
    const Eigen::VectorXd* origin;
    const Eigen::MatrixXd* rotation;
    int evaluations{0};
};

double gsl_trampoline(const gsl_vector* v, void* params)
{
    auto* obj = static_cast<GslObjective*>(params);
    const Eigen::Index n = obj->origin->size();
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = gsl_vector_get(v, static_cast<std::size_t>(i));
    ++obj->evaluations;
    const double val = (*obj->f)(*obj->origin + (*obj->rotation) * y);
    return std::isfinite(val) ? val : std::numeric_limits<double>::max();
}

} // namespace

MinimizeResult minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                        const Eigen::VectorXd& x0, const SimplexOptions& opts)
{
    const Eigen::Index n = x0.size();
    if (n == 0) throw std::invalid_argument("minimize requires at least one variable");

    // Seeded runs search in randomly rotated coordinates.
    Eigen::MatrixXd rotation = Eigen::MatrixXd::Identity(n, n);
    if (opts.seed) {
        std::mt19937_64 rng(*opts.seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::MatrixXd G(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) G(i, j) = normal(rng);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
        rotation = qr.householderQ();
    }

    gsl_set_error_handler_off();
    MinimizeResult best;
    best.x = x0;
    best.fx = f(x0);
    best.evaluations = 1;
    best.stagnated = false;

    Eigen::VectorXd origin = x0;
    double step = opts.initial_step;
    for (int round = 0; round <= opts.restarts; ++round) {
        GslObjective obj{&f, &origin, &rotation, 0};
        gsl_multimin_function fn{&gsl_trampoline, static_cast<std::size_t>(n), &obj};
        gsl_vector* start = gsl_vector_calloc(static_cast<std::size_t>(n));
        gsl_vector* steps = gsl_vector_alloc(static_cast<std::size_t>(n));
        gsl_vector_set_all(steps, step);
        gsl_multimin_fminimizer* s =
            gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, static_cast<std::size_t>(n));
        gsl_multimin_fminimizer_set(s, &fn, start, steps);

        bool converged = false;
        double prev = s->fval;
        int flat_iters = 0;
        while (obj.evaluations < opts.max_evals) {
            if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
            const double size = gsl_multimin_fminimizer_size(s);
            flat_iters = (std::abs(prev - s->fval) <= opts.ftol * (1.0 + std::abs(s->fval))) ? flat_iters + 1 : 0;
            prev = s->fval;
            if (size < opts.xtol || (flat_iters > 20 * n && size < 1e3 * opts.xtol)) {
                converged = true;
                break;
            }
        }
        Eigen::VectorXd y(n);
        for (Eigen::Index i = 0; i < n; ++i) y(i) = gsl_vector_get(s->x, static_cast<std::size_t>(i));
        const Eigen::VectorXd x = origin + rotation * y;
        const double fx = s->fval;
        best.evaluations += obj.evaluations;
        const bool improved = fx < best.fx;
        if (fx <= best.fx) {
            best.x = x;
            best.fx = fx;
        }
        best.stagnated = !converged;
        gsl_multimin_fminimizer_free(s);
        gsl_vector_free(start);
        gsl_vector_free(steps);

        // A restart that finds no improvement confirms the optimum.
        if (round > 0 && !improved && converged) break;
        origin = best.x;
        step = std::max(opts.initial_step * 0.1, 10.0 * opts.xtol);
    }
    return best;
}

std::vector<OdeState> propagate_ode(const OdeRhs& rhs, const OdeState& y0,
                                    const std::vector<double>& t_grid, const OdeOptions& opts)
{
    namespace ode = boost::numeric::odeint;
    if (t_grid.empty()) return {};
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] >= t_grid[i - 1])) throw std::invalid_argument("propagate_ode times must be non-decreasing");
    }
    if (!(opts.rtol > 0.0) || !(opts.atol > 0.0)) throw std::invalid_argument("ODE tolerances must be > 0");

    std::vector<OdeState> out;
    out.reserve(t_grid.size());
    OdeState y = y0;
    auto system = [&](const OdeState& s, OdeState& d, double t) {
        d.resize(s.size());
        rhs(s, d, t);
    };
    auto observer = [&](const OdeState& s, double) { out.push_back(s); };

    // Repeated grid times are emitted by copying the last state.
    std::vector<double> distinct;
    std::vector<std::size_t> counts;
    for (double t : t_grid) {
        if (!distinct.empty() && t == distinct.back()) {
            ++counts.back();
        } else {
            distinct.push_back(t);
            counts.push_back(1);
        }
    }
    if (distinct.size() == 1) {
        out.assign(t_grid.size(), y0);
        return out;
    }
    auto stepper = ode::make_controlled(opts.atol, opts.rtol, ode::runge_kutta_dopri5<OdeState>());
    const double span = distinct.back() - distinct.front();
    const double dt0 = std::min(opts.initial_dt, span / 10.0);
    try {
        ode::integrate_times(stepper, system, y, distinct.begin(), distinct.end(), dt0, observer,
                             ode::max_step_checker(10000000));
    } catch (const std::exception& e) {
        throw NumericalError("ode_failure", std::string("ODE integration failed: ") + e.what());
    }
    std::vector<OdeState> expanded;
    expanded.reserve(t_grid.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t c = 0; c < counts[i]; ++c) expanded.push_back(out[i]);
    }
    return expanded;
}

} // namespace usqed::numkern
