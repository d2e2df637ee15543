#include "bllimit/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bllimit/error.hpp"

namespace bll {

std::string_view to_string(CurveFamily family) noexcept {
    switch (family) {
        case CurveFamily::Parabolic: return "parabolic";
        case CurveFamily::Sine: return "sine";
        case CurveFamily::Table: return "table";
    }
    return "unknown";
}

CurveFamily curve_family_from_string(std::string_view name) {
    if (name == "parabolic") return CurveFamily::Parabolic;
    if (name == "sine") return CurveFamily::Sine;
    if (name == "table") return CurveFamily::Table;
    throw Error(ErrorKind::ValidationError,
                "curve: expected one of parabolic, sine, table (got '" + std::string(name) + "')");
}

double HeightCurve::operator()(double x) const {
    const double L = desc_.length;
    switch (desc_.family) {
        case CurveFamily::Parabolic:
            return delta_ + 4.0 * (height_ - delta_) * x * (L - x) / (L * L);
        case CurveFamily::Sine:
            // fold onto [0, L/2] so both endpoints evaluate to delta exactly
            return delta_ + (height_ - delta_) * std::sin(std::numbers::pi * std::min(x, L - x) / L);
        case CurveFamily::Table:
            return spline_(x);
    }
    return 0.0;
}

double HeightCurve::slope(double x) const {
    const double L = desc_.length;
    switch (desc_.family) {
        case CurveFamily::Parabolic:
            return 4.0 * (height_ - delta_) * (L - 2.0 * x) / (L * L);
        case CurveFamily::Sine:
            return (height_ - delta_) * std::numbers::pi / L * std::cos(std::numbers::pi * x / L);
        case CurveFamily::Table:
            return spline_.derivative(x);
    }
    return 0.0;
}

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NonPhysicalParameter, std::string(name) + ": must be finite");
}

void require_positive(double v, const char* name) {
    require_finite(v, name);
    if (!(v > 0.0))
        throw Error(ErrorKind::NonPhysicalParameter,
                    std::string(name) + ": must be > 0 (got " + std::to_string(v) + ")");
}

// golden-section refinement of a sampled maximum
double refine_max(const HeightCurve& h, double a, double b) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * h.length(); ++it) {
        if (h(c) > h(d)) b = d; else a = c;
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    return 0.5 * (a + b);
}

}  // namespace

HeightCurve build_height_curve(const CurveDescriptor& descriptor) {
    HeightCurve curve;
    curve.desc_ = descriptor;
    CurveDescriptor& d = curve.desc_;

    if (d.family == CurveFamily::Table) {
        if (d.table_x.size() != d.table_h.size() || d.table_x.size() < 4)
            throw Error(ErrorKind::ValidationError, "table: need at least 4 (x, h) samples of equal count");
        if (d.table_x.front() != 0.0)
            throw Error(ErrorKind::ValidationError, "table: first abscissa must be 0");
        for (std::size_t k = 1; k < d.table_x.size(); ++k)
            if (!(d.table_x[k] > d.table_x[k - 1]))
                throw Error(ErrorKind::ValidationError, "table: abscissae must be strictly increasing");
        d.length = d.table_x.back();
    }
    require_finite(d.length, "L");
    if (!(d.length > 0.0))
        throw Error(ErrorKind::NonPositiveLength, "L: must be > 0 (got " + std::to_string(d.length) + ")");

    if (d.family == CurveFamily::Table) {
        for (double v : d.table_h) require_positive(v, "h");
        const double scale = *std::max_element(d.table_h.begin(), d.table_h.end());
        if (std::abs(d.table_h.front() - d.table_h.back()) > 1e-12 * scale)
            throw Error(ErrorKind::EndpointMismatch, "h(0) != h(L) (" + std::to_string(d.table_h.front()) +
                                                         " vs " + std::to_string(d.table_h.back()) + ")");
        curve.spline_ = CubicSpline(d.table_x, d.table_h);
        curve.delta_ = d.table_h.front();
        d.delta = curve.delta_;
    } else {
        require_positive(d.delta, "delta");
        require_positive(d.height, "H");
        curve.delta_ = d.delta;
        curve.height_ = d.height;
    }

    // single-maximum check on sampled h': signs must run + ... + - ... -
    const std::size_t n = HeightCurve::validation_samples;
    const double L = d.length;
    double slope_scale = 0.0;
    std::vector<double> slope(n);
    for (std::size_t k = 0; k < n; ++k) {
        slope[k] = curve.slope(L * static_cast<double>(k) / static_cast<double>(n - 1));
        slope_scale = std::max(slope_scale, std::abs(slope[k]));
    }
    const double zero = 1e-12 * std::max(slope_scale, 1e-300);
    int last_sign = 0;
    int changes = 0;
    int first_sign = 0;
    for (double s : slope) {
        const int sign = s > zero ? 1 : (s < -zero ? -1 : 0);
        if (sign == 0) continue;
        if (first_sign == 0) first_sign = sign;
        if (last_sign != 0 && sign != last_sign) ++changes;
        last_sign = sign;
    }
    if (slope_scale == 0.0 || first_sign == 0)
        throw Error(ErrorKind::MultipleCriticalPoints, "h is constant: no interior maximum");
    if (changes != 1 || first_sign != 1)
        throw Error(ErrorKind::MultipleCriticalPoints,
                    "h must have exactly one interior critical point, a maximum (found " +
                        std::to_string(changes) + " sign changes of h')");

    std::size_t kmax = 0;
    for (std::size_t k = 0; k < n; ++k)
        if (slope[k] > zero) kmax = k;
    const double dx = L / static_cast<double>(n - 1);
    const double a = dx * static_cast<double>(kmax);
    if (d.family == CurveFamily::Table) {
        curve.crest_ = refine_max(curve, a, std::min(L, a + 2.0 * dx));
        curve.height_ = curve(curve.crest_);
        d.height = curve.height_;
    } else {
        curve.crest_ = 0.5 * L;  // both analytic families are symmetric
    }
    return curve;
}

HeightCurve HeightCurve::scaled(double lx, double ly) const {
    if (!(lx > 0.0) || !(ly > 0.0))
        throw Error(ErrorKind::NonPhysicalParameter, "scale factors must be > 0");
    CurveDescriptor d = desc_;
    d.length *= lx;
    d.delta *= ly;
    d.height *= ly;
    for (double& x : d.table_x) x *= lx;
    for (double& h : d.table_h) h *= ly;
    return build_height_curve(d);
}

HeightCurve HeightCurve::with_epsilon(double eps) const {
    require_positive(eps, "eps");
    return scaled(1.0, eps * desc_.length / height_);
}

double sigma_pow(double sigma, double a) { return std::exp(a * std::log(sigma)); }

DerivedConstants derive_constants(const GasParameters& gas) {
    require_finite(gas.U, "U");
    if (gas.U < 0.0)
        throw Error(ErrorKind::NonPhysicalParameter, "U: must be >= 0 (got " + std::to_string(gas.U) + ")");
    require_positive(gas.T_h, "T_h");
    require_positive(gas.mu_h, "mu_h");
    require_positive(gas.c_p, "c_p");
    require_positive(gas.R, "R");
    require_positive(gas.p0, "p0");
    require_finite(gas.power_law_exp, "power_law_exp");
    if (gas.power_law_exp < 0.0)
        throw Error(ErrorKind::NonPhysicalParameter, "power_law_exp: must be >= 0");
    require_finite(gas.b, "b");
    if (!(gas.b > 1.0))
        throw Error(ErrorKind::InvalidPolytropicExponent,
                    "b: must satisfy b > 1 (got " + std::to_string(gas.b) + ")");

    DerivedConstants c;
    c.gas = gas;
    const double kinetic = 0.5 * gas.U * gas.U;
    c.T0 = gas.T_h + kinetic / gas.c_p;
    c.i0 = gas.c_p * gas.T_h + kinetic;
    if (!(gas.U * gas.U < 2.0 * c.i0))
        throw Error(ErrorKind::NonPhysicalParameter, "U^2 must be below 2 i0");
    c.k = gas.b / (gas.b - 1.0);
    c.sigma0 = gas.c_p * gas.T_h / c.i0;
    c.c1 = gas.p0;
    c.c2 = c.c1 / (gas.R * c.T0);
    c.c3 = gas.mu_h * std::pow(c.T0 / gas.T_h, gas.power_law_exp);
    c.C_big = c.c3 * c.c2 * c.c2 * sigma_pow(c.sigma0, 2.0 * c.k);
    return c;
}

}  // namespace bll
