// braak.cpp — Exact Rabi spectrum from the zeros of G±(x)

#include "usqed/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "usqed/error.hpp"

namespace usqed::spectra {

namespace {

using cd = std::complex<double>;

void check_off_pole(double x, int n_max)
{
    const double nearest = std::round(x);
    if (nearest >= 0.0 && nearest <= n_max && x == nearest) {
        throw std::invalid_argument("Braak series evaluated on the pole set x = n");
    }
}

} // namespace

// Substituting ψ₂ = Σ b_n yⁿ, ψ₁ = Σ a_n yⁿ (y = z + g, x = E + g²) into the
// Bargmann equations gives y ψ₁' − x ψ₁ + Δ ψ₂ = 0, so a_n = Δ b_n/(x − n), and
// (y − 2g) ψ₂' + (4g² − x − 2g y) ψ₂ + Δ ψ₁ = 0, so
// 2g(n+1) b_{n+1} = (n + 4g² − x + Δ²/(x − n)) b_n − 2g b_{n−1}.
BraakSeries braak_series(double x, double g, double Delta, int order)
{
    if (!(g > 0.0)) throw std::invalid_argument("Braak series requires g > 0");
    if (order < 1) throw std::invalid_argument("Braak series order must be >= 1");
    check_off_pole(x, order);
    BraakSeries s;
    s.g = g;
    s.Delta = Delta;
    s.x = x;
    s.b.resize(static_cast<std::size_t>(order) + 1);
    s.a.resize(static_cast<std::size_t>(order) + 1);
    double bm1 = 0.0;
    double bn = 1.0;
    for (int n = 0; n <= order; ++n) {
        s.b[n] = bn;
        s.a[n] = Delta * bn / (x - n);
        const double f = n + 4.0 * g * g - x + Delta * Delta / (x - n);
        const double next = (f * bn - 2.0 * g * bm1) / (2.0 * g * (n + 1));
        bm1 = bn;
        bn = next;
    }
    return s;
}

std::pair<double, double> bargmann_residual(const BraakSeries& s, std::complex<double> z)
{
    const double g = s.g;
    const double E = s.x - g * g;
    const cd y = z + g;
    cd psi1 = 0.0, psi2 = 0.0, dpsi1 = 0.0, dpsi2 = 0.0;
    cd yn = 1.0;
    cd ynm1 = 0.0;
    for (int n = 0; n <= s.order(); ++n) {
        psi1 += s.a[n] * yn;
        psi2 += s.b[n] * yn;
        if (n > 0) {
            dpsi1 += static_cast<double>(n) * s.a[n] * ynm1;
            dpsi2 += static_cast<double>(n) * s.b[n] * ynm1;
        }
        ynm1 = yn;
        yn *= y;
    }
    const cd w = std::exp(-g * z);
    const cd phi1 = w * psi1, phi2 = w * psi2;
    const cd dphi1 = w * (dpsi1 - g * psi1), dphi2 = w * (dpsi2 - g * psi2);
    const cd t1a = (z + g) * dphi1, t1b = (g * z - E) * phi1, t1c = s.Delta * phi2;
    const cd t2a = (z - g) * dphi2, t2b = -(g * z + E) * phi2, t2c = s.Delta * phi1;
    const double r1 = std::abs(t1a + t1b + t1c) / (std::abs(t1a) + std::abs(t1b) + std::abs(t1c));
    const double r2 = std::abs(t2a + t2b + t2c) / (std::abs(t2a) + std::abs(t2b) + std::abs(t2c));
    return {r1, r2};
}

BraakValue braak_g(double x, const qops::RabiParams& p, const BraakOptions& opts)
{
    p.validate();
    if (!(p.g > 0.0)) throw std::invalid_argument("braak_g requires g > 0");
    // ω = 1 units.
    const double g = p.g / p.omega;
    const double Delta = 0.5 * p.Omega / p.omega;
    const double xs = x / p.omega;
    check_off_pole(xs, opts.max_order);

    BraakValue out;
    double bm1 = 0.0, bn = 1.0, gn = 1.0;
    double gp = 0.0, gm = 0.0, abs_sum = 0.0;
    int small_run = 0;
    const int n_min = static_cast<int>(std::max(xs, 4.0 * g * g)) + 20;
    for (int n = 0; n <= opts.max_order; ++n) {
        const double r = Delta / (xs - n);
        const double t = bn * gn;
        gp += t * (1.0 - r);
        gm += t * (1.0 + r);
        const double mag = std::abs(t) * (1.0 + std::abs(r));
        abs_sum += mag;
        // Tail relative to Σ|terms|: the partial sum itself vanishes at a root.
        small_run = (mag < opts.tail_tol * abs_sum) ? small_run + 1 : 0;
        if (n >= n_min && small_run >= 3) {
            out.G_plus = gp;
            out.G_minus = gm;
            out.scale = abs_sum;
            out.order = n;
            return out;
        }
        const double f = n + 4.0 * g * g - xs + Delta * Delta / (xs - n);
        const double next = (f * bn - 2.0 * g * bm1) / (2.0 * g * (n + 1));
        bm1 = bn;
        bn = next;
        gn *= g;
        if (!std::isfinite(bn) || !std::isfinite(gn)) break;
    }
    throw NumericalError("series_nonconvergence", "Braak series did not converge within the order cap",
                         {{"x", format_double(x)}, {"max_order", std::to_string(opts.max_order)}});
}

BraakSpectrum braak_spectrum(const qops::RabiParams& p, double E_max, const BraakOptions& opts)
{
    p.validate();
    if (!(p.g > 0.0)) throw std::invalid_argument("braak_spectrum requires g > 0");
    if (!(p.Omega > 0.0)) {
        throw std::invalid_argument("braak_spectrum requires Omega > 0 (Omega = 0 levels sit on the pole set)");
    }
    const double w = p.omega;
    const double g2 = (p.g / w) * (p.g / w);
    const double Delta = 0.5 * p.Omega / w;
    // E ≥ −g²/ω − Ω/2, so x = E/ω + (g/ω)² ≥ −Δ.
    const double x_lo = -Delta - 1e-3;
    const double x_hi = E_max / w + g2;
    if (!(x_hi > x_lo)) throw std::invalid_argument("braak_spectrum: E_max lies below the spectrum");

    std::vector<std::pair<double, double>> segments;
    double lo = x_lo;
    for (int n = 0; n <= static_cast<int>(std::floor(x_hi)); ++n) {
        if (n - opts.guard > lo) segments.emplace_back(lo, n - opts.guard);
        lo = std::max(lo, n + opts.guard);
    }
    if (x_hi > lo) segments.emplace_back(lo, x_hi);

    struct Root {
        double x;
        int parity;
    };
    std::vector<Root> roots;
    numkern::RootOptions ropts;
    ropts.require_sign_change = false;
    for (const auto& [a, b] : segments) {
        const int steps = std::max(2, static_cast<int>(std::ceil((b - a) / opts.grid_step)));
        std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
        for (int i = 0; i <= steps; ++i) grid[i] = a + (b - a) * i / steps;
        grid.back() = b;
        const qops::RabiParams unit{1.0, 2.0 * Delta, p.g / w};
        for (int parity : {+1, -1}) {
            auto f = [&](double x) {
                const BraakValue v = braak_g(x, unit, opts);
                return (parity > 0 ? v.G_plus : v.G_minus) / v.scale;
            };
            for (double r : numkern::find_roots(f, grid, ropts)) roots.push_back({r, parity});
        }
    }
    std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return a.x < b.x; });

    BraakSpectrum out;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        out.levels.push_back({w * (roots[i].x - g2), roots[i].parity, 0});
        if (i + 1 < roots.size() && roots[i + 1].x - roots[i].x < opts.collision_tol &&
            roots[i + 1].parity != roots[i].parity) {
            const double e1 = w * (roots[i].x - g2), e2 = w * (roots[i + 1].x - g2);
            out.collisions.emplace_back(e1, e2);
            warn("braak_spectrum: opposite-parity levels coincide near E = " + format_double(e1) +
                 " (possible Juddian degeneracy)");
        }
    }
    return out;
}

} // namespace usqed::spectra
