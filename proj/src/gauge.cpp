// gauge.cpp — Dipole- and Coulomb-gauge Rabi Hamiltonians and spectral deviation sweeps

#include "usqed/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "usqed/error.hpp"

namespace usqed::gauge {

namespace {

constexpr double kDefectTol = 1e-6;

// Taylor polynomials of cos φ and sin φ through φᵏ.
void cos_sin_taylor(const Matrix& phi, int order, Matrix& c, Matrix& s)
{
    const Eigen::Index n = phi.rows();
    c = Matrix::Zero(n, n);
    s = Matrix::Zero(n, n);
    Matrix term = Matrix::Identity(n, n);  // φʲ / j!
    for (int j = 0; j <= order; ++j) {
        const double sign = (j / 2) % 2 == 0 ? 1.0 : -1.0;
        (j % 2 == 0 ? c : s) += sign * term;
        term = (phi * term) / static_cast<double>(j + 1);
    }
}

qops::Operator build_unchecked(const GaugeFamily& f)
{
    const qops::HilbertSpec space = qops::rabi_space(f.cutoff);
    const qops::Algebra alg = qops::build_algebra(space);
    const Matrix& a = alg.a[0].matrix;
    const Matrix& ad = alg.adag[0].matrix;
    const auto& sp = alg.spin[0];
    const auto& p = f.params;
    Matrix H = p.omega * ad * a;
    if (f.variant == Variant::dipole) {
        H += 0.5 * p.Omega * sp.z.matrix + qops::cplx(0.0, p.g) * sp.x.matrix * (ad - a);
        H.diagonal().array() += p.g * p.g / p.omega;
        return qops::Operator(space, std::move(H), true);
    }
    const Matrix a1 = qops::annihilation(f.cutoff);
    const Matrix phi = (2.0 * p.g / p.omega) * (a1 + a1.adjoint());
    Matrix c, s;
    if (f.variant == Variant::coulomb_full) qops::cos_sin_hermitian(phi, c, s);
    else cos_sin_taylor(phi, f.order, c, s);
    H += 0.5 * p.Omega * (sp.z.matrix * qops::embed_mode(space, c, 0) + sp.y.matrix * qops::embed_mode(space, s, 0));
    return qops::Operator(space, std::move(H), true);
}

numkern::EigenSystem converged_levels(const GaugeFamily& f, const DeviationOptions& opts, int& cutoff_used)
{
    spectra::CutoffPolicy policy = opts.policy;
    policy.n_levels = opts.n_levels;
    const auto cs = spectra::exact_spectrum(
        [&](int N) {
            GaugeFamily g = f;
            g.cutoff = N;
            return build_unchecked(g);
        },
        [](int N) { return qops::parity_operator(qops::rabi_space(N)).matrix; }, policy);
    cutoff_used = cs.cutoff_used;
    return cs.eigen;
}

} // namespace

void GaugeFamily::validate() const
{
    params.validate();
    if (cutoff < 2) throw std::invalid_argument("gauge cutoff must be >= 2");
    if (variant == Variant::coulomb_taylor && order < 0) throw std::invalid_argument("Taylor order must be >= 0");
}

std::string GaugeFamily::label() const
{
    switch (variant) {
    case Variant::dipole: return "dipole";
    case Variant::coulomb_full: return "coulomb_full";
    case Variant::coulomb_taylor: return "coulomb_taylor(" + std::to_string(order) + ")";
    }
    return "unknown";
}

double transformation_defect(const qops::RabiParams& p, int cutoff)
{
    p.validate();
    if (cutoff < 2) throw std::invalid_argument("gauge cutoff must be >= 2");
    // On σ_x = ±1 the transformation is the displacement D(±iθ), θ = g/ω; both signs leak alike.
    const int big = 2 * cutoff;
    const Matrix a = qops::annihilation(big);
    const double theta = p.g / p.omega;
    const Matrix D = qops::exp_antihermitian(qops::cplx(0.0, theta) * (a + a.adjoint()));
    double worst = 0.0;
    for (int n = 0; n < cutoff / 2; ++n) worst = std::max(worst, D.col(n).tail(big - cutoff).squaredNorm());
    return worst;
}

qops::Operator build_gauge_hamiltonian(const GaugeFamily& family)
{
    family.validate();
    if (family.variant != Variant::dipole) {
        const double defect = transformation_defect(family.params, family.cutoff);
        if (defect > kDefectTol) {
            throw NumericalError("gauge_cutoff", "cutoff too small for the dipole-to-Coulomb transformation",
                                 {{"cutoff", std::to_string(family.cutoff)},
                                  {"defect", format_double(defect)},
                                  {"g", format_double(family.params.g)}});
        }
    }
    return build_unchecked(family);
}

double paired_deviation(const numkern::EigenSystem& levels, const numkern::EigenSystem& ref, int n_levels)
{
    if (n_levels < 1 || ref.values.size() < n_levels) throw std::invalid_argument("paired_deviation: too few levels");
    if (ref.parity.empty() || levels.parity.empty()) throw std::invalid_argument("paired_deviation needs parity labels");
    double worst = 0.0;
    for (int i = 0; i < n_levels; ++i) {
        const int sector = ref.parity[i];
        const auto rank = std::count(ref.parity.begin(), ref.parity.begin() + i, sector);
        std::ptrdiff_t seen = 0;
        double match = std::numeric_limits<double>::quiet_NaN();
        for (Eigen::Index j = 0; j < levels.values.size(); ++j) {
            if (levels.parity[j] != sector) continue;
            if (seen++ == rank) {
                match = levels.values(j);
                break;
            }
        }
        if (std::isnan(match)) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, std::abs(match - ref.values(i)));
    }
    return worst;
}

std::vector<DeviationEntry> gauge_spectrum_deviation(const qops::RabiParams& base, const std::vector<double>& g_grid,
                                                     const std::vector<int>& orders, const DeviationOptions& opts)
{
    if (opts.n_levels < 1) throw std::invalid_argument("n_levels must be >= 1");
    for (int k : orders)
        if (k < 0) throw std::invalid_argument("Taylor order must be >= 0");
    std::vector<DeviationEntry> rows;
    for (double g : g_grid) {
        qops::RabiParams p = base;
        p.g = g;
        p.validate();
        std::vector<GaugeFamily> variants{{p, Variant::coulomb_full, 0, 0}};
        for (int k : orders) variants.push_back({p, Variant::coulomb_taylor, k, 0});

        int ref_cutoff = 0;
        numkern::EigenSystem ref;
        bool ref_ok = true;
        try {
            ref = converged_levels({p, Variant::dipole, 0, 0}, opts, ref_cutoff);
        } catch (const NumericalError&) {
            ref_ok = false;
        }
        for (const auto& f : variants) {
            DeviationEntry e;
            e.g = g;
            e.variant = f.variant;
            e.order = f.order;
            e.deviation = std::numeric_limits<double>::quiet_NaN();
            if (!ref_ok) {
                e.flag = "dipole_not_converged";
                rows.push_back(e);
                continue;
            }
            try {
                const auto lv = converged_levels(f, opts, e.cutoff_used);
                if (transformation_defect(p, e.cutoff_used) > kDefectTol) {
                    e.flag = "gauge_cutoff";
                } else {
                    e.deviation = paired_deviation(lv, ref, opts.n_levels);
                    e.converged = true;
                }
            } catch (const NumericalError& err) {
                e.flag = err.kind();
            }
            rows.push_back(e);
        }
    }
    return rows;
}

} // namespace usqed::gauge
