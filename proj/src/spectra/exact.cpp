// exact.cpp — Cutoff-converged exact diagonalization

#include "usqed/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "usqed/error.hpp"

namespace usqed::spectra {

ConvergedSpectrum exact_spectrum(const std::function<qops::Operator(int)>& build,
                                 const std::function<Matrix(int)>& symmetry,
                                 const CutoffPolicy& policy)
{
    if (!(policy.tol > 0.0)) throw std::invalid_argument("cutoff policy tol must be > 0");
    if (policy.n_levels < 1) throw std::invalid_argument("cutoff policy n_levels must be >= 1");
    if (policy.N_start < 1 || policy.N_step < 1 || policy.N_max < policy.N_start) {
        throw std::invalid_argument("cutoff policy needs 1 <= N_start <= N_max and N_step >= 1");
    }

    ConvergedSpectrum out;
    std::optional<Eigen::VectorXd> previous;
    for (int N = policy.N_start; N <= policy.N_max; N += policy.N_step) {
        const qops::Operator H = build(N);
        Matrix S;
        if (symmetry) S = symmetry(N);
        numkern::EigenSystem es = numkern::eig_hermitian(H, S.size() ? &S : nullptr);
        if (es.values.size() < policy.n_levels) continue;
        const Eigen::VectorXd head = es.values.head(policy.n_levels);
        if (previous) {
            const Eigen::VectorXd shift = (head - *previous).cwiseAbs();
            const double max_shift = shift.maxCoeff();
            out.cutoff_history.emplace_back(N, max_shift);
            if (max_shift < policy.tol) {
                out.eigen = std::move(es);
                out.space = H.space;
                out.cutoff_used = N;
                out.n_converged = policy.n_levels;
                return out;
            }
        } else {
            out.cutoff_history.emplace_back(N, std::nan(""));
        }
        previous = head;
    }
    const double last = out.cutoff_history.empty() ? std::nan("") : out.cutoff_history.back().second;
    throw NumericalError("cutoff_cap", "exact_spectrum: cutoff cap reached before convergence",
                         {{"N_max", std::to_string(policy.N_max)},
                          {"last_shift", format_double(last)},
                          {"tol", format_double(policy.tol)}});
}

ConvergedSpectrum exact_spectrum(const qops::RabiParams& p, const CutoffPolicy& policy)
{
    p.validate();
    return exact_spectrum(
        [&](int N) { return qops::build_hamiltonian(p, qops::rabi_space(N)); },
        [](int N) { return qops::parity_operator(qops::rabi_space(N)).matrix; }, policy);
}

double max_level_error(const std::vector<double>& method, const std::vector<double>& reference, int n)
{
    if (n < 1) throw std::invalid_argument("max_level_error needs n >= 1");
    if (static_cast<int>(method.size()) < n || static_cast<int>(reference.size()) < n) {
        throw std::invalid_argument("max_level_error: fewer levels than requested");
    }
    std::vector<double> a(method), b(reference);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double err = 0.0;
    for (int i = 0; i < n; ++i) err = std::max(err, std::abs(a[i] - b[i]));
    return err;
}

std::vector<double> energies(const std::vector<SpectralLevel>& levels)
{
    std::vector<double> e;
    e.reserve(levels.size());
    for (const auto& l : levels) e.push_back(l.energy);
    return e;
}

} // namespace usqed::spectra
