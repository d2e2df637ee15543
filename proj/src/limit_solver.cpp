#include "bllimit/limit_solver.hpp"

#include <cmath>
#include <string>

#include "bllimit/closures.hpp"
#include "bllimit/error.hpp"
#include "bllimit/quadrature.hpp"

namespace bll {

double g_integral(double u, double i0, double exponent, double abs_tol) {
    if (!(i0 > 0.0)) throw Error(ErrorKind::NonPhysicalParameter, "i0: must be > 0");
    if (!(exponent >= 0.0)) throw Error(ErrorKind::NonPhysicalParameter, "exponent: must be >= 0");
    const double bound = std::sqrt(2.0 * i0) * (1.0 - ClosureSet::default_margin);
    if (!(std::abs(u) < bound))
        throw Error(ErrorKind::OutOfValidityRange,
                    "g_integral: |u| = " + std::to_string(std::abs(u)) + " outside validity range");
    if (u == 0.0) return 0.0;
    const double two_i0 = 2.0 * i0;
    auto integrand = [two_i0, exponent](double s) { return sigma_pow(1.0 - s * s / two_i0, exponent); };
    const double magnitude = integrate_gk15(integrand, 0.0, std::abs(u), abs_tol).value;
    return u < 0.0 ? -magnitude : magnitude;
}

VelocityProfile solve_limit_profile(double h, double U, const DerivedConstants& constants, std::size_t n,
                                    const LimitOptions& opts, double column_x) {
    if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorKind::NonPositiveLength, "h: must be > 0");
    if (n < 2) throw Error(ErrorKind::GridTooCoarse, "limit profile needs n >= 2");
    if (!(U >= 0.0) || !std::isfinite(U)) throw Error(ErrorKind::NonPhysicalParameter, "U: must be >= 0");
    const double bound = std::sqrt(2.0 * constants.i0) * (1.0 - ClosureSet::default_margin);
    if (!(U < bound))
        throw Error(ErrorKind::ValidityViolation,
                    "U = " + std::to_string(U) + " m/s violates U^2 < 2 i0");

    VelocityProfile p;
    p.column_x = column_x;
    p.y.resize(n);
    p.u.assign(n, 0.0);
    const double last = static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) p.y[j] = h * static_cast<double>(j) / last;
    p.y[n - 1] = h;
    if (U == 0.0) return p;

    auto G = [&](double u) { return g_integral(u, constants.i0, opts.exponent, opts.quadrature_tol); };
    const double g_roof = G(-U);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double target = g_roof * (static_cast<double>(j) / last);
        double lo = -U, hi = 0.0;
        double g_lo = g_roof, g_hi = 0.0;
        if (!(g_lo <= target && target <= g_hi))
            throw Error(ErrorKind::BracketFailure, "G(-U) <= K y <= 0 does not bracket the root");
        while (hi - lo > 0.0) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const double g = G(mid);
            if (g > target) {
                hi = mid;
                g_hi = g;
            } else {
                lo = mid;
                g_lo = g;
            }
            if (hi - lo <= opts.bisection_tol * 1e-4) break;
        }
        if (!(g_lo <= target && target <= g_hi))
            throw Error(ErrorKind::BracketFailure, "G is not monotone on [-U, 0]");
        p.u[j] = (target - g_lo) <= (g_hi - target) ? lo : hi;
    }
    p.u[n - 1] = -U;
    return p;
}

ResidualReport residual_check(const VelocityProfile& profile, const DerivedConstants& constants, double exponent) {
    const std::size_t n = profile.y.size();
    if (n < 16 || profile.u.size() != n)
        throw Error(ErrorKind::GridTooCoarse, "residual_check needs a profile with n >= 16 nodes");
    const double h = profile.y.back() - profile.y.front();
    const double dy = h / static_cast<double>(n - 1);
    for (std::size_t j = 1; j < n; ++j)
        if (std::abs(profile.y[j] - profile.y[j - 1] - dy) > 1e-9 * dy)
            throw Error(ErrorKind::GridTooCoarse, "residual_check needs a uniform grid");

    const ClosureSet closures(constants);
    double scale = std::abs(profile.u.back());
    if (scale == 0.0) scale = 1.0;
    std::vector<double> uh(n), f(n);
    for (std::size_t j = 0; j < n; ++j) {
        uh[j] = profile.u[j] / scale;
        f[j] = sigma_pow(closures.sigma(profile.u[j]), -exponent);
    }
    const double d = 1.0 / static_cast<double>(n - 1);  // spacing in y/h
    ResidualReport r;
    double sum = 0.0;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double upp = (uh[j + 1] - 2.0 * uh[j] + uh[j - 1]) / (d * d);
        const double up = (uh[j + 1] - uh[j - 1]) / (2.0 * d);
        const double fp = (f[j + 1] - f[j - 1]) / (2.0 * d);
        const double res = f[j] * upp - fp * up;
        r.max_abs = std::max(r.max_abs, std::abs(res));
        sum += res * res;
    }
    r.interior_nodes = n - 2;
    r.l2 = std::sqrt(sum * d);
    return r;
}

}  // namespace bll
