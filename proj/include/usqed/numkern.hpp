// numkern.hpp — Dense kernels: eigensolvers, linear solves, roots, minimization, ODEs

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "usqed/qops.hpp"

namespace usqed::numkern {

using qops::cplx;
using qops::Matrix;
using qops::Vector;

inline constexpr double kDegeneracyGap = 1e-9;

struct EigenSystem {
    Eigen::VectorXd values;           // ascending
    Matrix vectors;                   // columns orthonormal
    double residual{0.0};             // max_i ‖A v_i − λ_i v_i‖
    std::vector<int> parity;          // ±1 per level when a symmetry was supplied, else empty
};

// Hermitian eigendecomposition. Within clusters whose gaps are below
// kDegeneracyGap the basis is re-diagonalized against `symmetry` when given;
// every vector then has its first max-modulus entry real and positive.
EigenSystem eig_hermitian(const qops::Operator& A, const Matrix* symmetry = nullptr);
EigenSystem eig_hermitian(const Matrix& A, const Matrix* symmetry = nullptr);

struct GeneralEigenSystem {
    Eigen::VectorXcd values;
    Matrix right;          // columns R_α
    Matrix left;           // rows L_α with left * right = I
    double residual{0.0};
    double biorthogonality_error{0.0};
    bool defective{false};
};

GeneralEigenSystem eig_general(const Matrix& A);

// Solves A x = b through partial-pivot LU; throws NumericalError when singular.
Vector solve_linear(const Matrix& A, const Vector& b);
// Solves [A; C] x = [b; d] in the least-squares sense, for consistent systems
// whose constraint rows remove the null space of A.
Vector solve_linear(const Matrix& A, const Vector& b, const Matrix& C, const Vector& d);

struct RootBracket {
    double lo{0.0};
    double hi{0.0};
};

struct RootOptions {
    double scale{1.0};        // accepted roots satisfy |f| < 1e-10·scale
    double dedupe_tol{1e-8};
    int max_iter{200};
    bool require_sign_change{true};  // throw when the grid holds no sign change
};

// Scans consecutive grid points for sign changes and refines each bracket.
// Brackets whose refined point fails the |f| acceptance (poles) are dropped.
std::vector<double> find_roots(const std::function<double(double)>& f,
                               const std::vector<double>& grid,
                               const RootOptions& opts = {});

// Refines one bracket; f(lo)·f(hi) < 0 is required.
double refine_root(const std::function<double(double)>& f, RootBracket bracket, int max_iter = 200);

struct SimplexOptions {
    double initial_step{0.1};
    double xtol{1e-10};
    double ftol{1e-14};
    int max_evals{20000};
    int restarts{2};
    std::optional<std::uint64_t> seed;  // randomizes the initial simplex orientation
};

struct MinimizeResult {
    Eigen::VectorXd x;
    double fx{0.0};
    int evaluations{0};
    bool stagnated{false};  // evaluation budget hit before tolerances were met
};

MinimizeResult minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                        const Eigen::VectorXd& x0, const SimplexOptions& opts = {});

using OdeState = std::vector<cplx>;
using OdeRhs = std::function<void(const OdeState& y, OdeState& dydt, double t)>;

struct OdeOptions {
    double rtol{1e-8};
    double atol{1e-10};
    double initial_dt{1e-3};
};

// Adaptive Dormand–Prince integration; returns y at each requested time.
std::vector<OdeState> propagate_ode(const OdeRhs& rhs, const OdeState& y0,
                                    const std::vector<double>& t_grid,
                                    const OdeOptions& opts = {});

} // namespace usqed::numkern
