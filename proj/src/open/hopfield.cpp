// hopfield.cpp — Langevin input-output response of the quadratic Hopfield model

#include "usqed/open.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "usqed/error.hpp"

namespace usqed::open {

namespace {

std::map<std::string, std::string> payload(const qops::HopfieldParams& p)
{
    return {{"omega_c", format_double(p.omega_c)},
            {"omega_X", format_double(p.omega_X)},
            {"g", format_double(p.g)},
            {"D_dia", format_double(p.D_dia)}};
}

} // namespace

// Heisenberg equations of H = ω_c a†a + ω_X b†b + ig(a†+a)(b†−b) + D(a+a†)²:
// i da/dt = (ω_c+2D)a + 2Da† − ig b + ig b†, i db/dt = ω_X b + ig(a + a†),
// with the a†, b† rows the negated conjugates.
Matrix hopfield_dynamical_matrix(const qops::HopfieldParams& p)
{
    p.validate();
    const cplx ig(0.0, p.g);
    const double wa = p.omega_c + 2.0 * p.D_dia;
    const double D2 = 2.0 * p.D_dia;
    Matrix K(4, 4);
    K << wa, -ig, D2, ig,
        ig, p.omega_X, ig, 0.0,
        -D2, ig, -wa, -ig,
        ig, 0.0, ig, -p.omega_X;
    return K;
}

std::pair<double, double> hopfield_normal_modes(const qops::HopfieldParams& p)
{
    const Matrix K = hopfield_dynamical_matrix(p);
    Eigen::ComplexEigenSolver<Matrix> es(K, false);
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver", "Hopfield dynamical matrix eigensolve failed", payload(p));
    const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    std::vector<double> pos;
    for (Eigen::Index i = 0; i < 4; ++i) {
        const cplx v = es.eigenvalues()(i);
        if (std::abs(v.imag()) > 1e-9 * std::max(1.0, scale)) {
            throw NumericalError("spectral_instability",
                                 "Hopfield model has a complex normal-mode frequency (g too large for this D_dia)",
                                 payload(p));
        }
        if (v.real() > 0.0) pos.push_back(v.real());
    }
    if (pos.size() != 2) {
        throw NumericalError("spectral_instability", "Hopfield model has a zero-frequency normal mode", payload(p));
    }
    std::sort(pos.begin(), pos.end());
    return {pos[0], pos[1]};
}

// dv/dt = −iKv − (Γ/2)v − √Γ v_in and v_out = v_in + √Γ v give, per frequency,
// U(ω) = I − √Γ [i(K − ω) + Γ/2]⁻¹ √Γ.
HopfieldResponse hopfield_langevin_response(const qops::HopfieldParams& p, double kappa_c, double kappa_x,
                                            const std::vector<double>& omega_grid)
{
    if (!(kappa_c >= 0.0) || !(kappa_x >= 0.0)) throw std::invalid_argument("Hopfield damping rates must be >= 0");
    const auto modes = hopfield_normal_modes(p);
    const Matrix K = hopfield_dynamical_matrix(p);
    Eigen::Vector4d gam(kappa_c, kappa_x, kappa_c, kappa_x);
    const Matrix sq = gam.cwiseSqrt().cast<cplx>().asDiagonal();
    const Matrix half = (0.5 * gam).cast<cplx>().asDiagonal();
    const Matrix I = Matrix::Identity(4, 4);

    HopfieldResponse out;
    out.omega_lower = modes.first;
    out.omega_upper = modes.second;
    for (double w : omega_grid) {
        const Matrix M = cplx(0.0, 1.0) * (K - w * I) + half;
        Matrix G(4, 4);
        for (Eigen::Index c = 0; c < 4; ++c) G.col(c) = numkern::solve_linear(M, I.col(c));
        const Matrix U = I - sq * G * sq;
        out.omega.push_back(w);
        out.transmission.push_back(std::norm(U(0, 0) - 1.0) / 4.0);
        out.reflection.push_back(std::norm(U(0, 0)));
        out.U.push_back(U);
    }
    return out;
}

} // namespace usqed::open
