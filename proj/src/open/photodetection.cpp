// photodetection.cpp — Positive-frequency operators X⁺ and detector operators in the dressed basis

#include "usqed/open.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>

namespace usqed::open {

namespace {

Matrix energy_basis(const numkern::EigenSystem& eigen, const Matrix& X_lab, int n_keep)
{
    const auto full = static_cast<int>(eigen.values.size());
    if (n_keep <= 0) n_keep = full;
    if (n_keep > full) throw std::invalid_argument("n_keep exceeds the number of eigenstates");
    if (X_lab.rows() != eigen.vectors.rows() || X_lab.cols() != eigen.vectors.rows()) {
        throw std::invalid_argument("operator dimension does not match the eigenbasis");
    }
    const Matrix V = eigen.vectors.leftCols(n_keep);
    return V.adjoint() * X_lab * V;
}

} // namespace

Matrix xplus_energy(const numkern::EigenSystem& eigen, const Matrix& X_lab, int n_keep)
{
    return detector_operator(eigen, X_lab, {}, n_keep);
}

Matrix xplus_operator(const numkern::EigenSystem& eigen, const Matrix& X_lab)
{
    const Matrix Xp = xplus_energy(eigen, X_lab, 0);
    return eigen.vectors * Xp * eigen.vectors.adjoint();
}

Matrix detector_operator(const numkern::EigenSystem& eigen, const Matrix& X_lab,
                         const std::function<double(double)>& g, int n_keep)
{
    const Matrix X = energy_basis(eigen, X_lab, n_keep);
    const Eigen::Index n = X.rows();
    const double pref = g ? std::sqrt(2.0 * boost::math::constants::pi<double>()) : 1.0;
    Matrix out = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double w = eigen.values(j) - eigen.values(i);
            if (w > kFrequencyTol) out(i, j) = (g ? pref * g(w) : 1.0) * X(i, j);
        }
    }
    return out;
}

double photon_flux(const Matrix& Oplus, const Matrix& rho)
{
    if (Oplus.rows() != rho.rows()) throw std::invalid_argument("operator and state dimensions differ");
    return (Oplus.adjoint() * Oplus * rho).trace().real();
}

} // namespace usqed::open
