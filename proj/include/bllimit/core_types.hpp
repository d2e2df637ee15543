#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bllimit/interpolation.hpp"

namespace bll {

enum class CurveFamily { Parabolic, Sine, Table };

std::string_view to_string(CurveFamily family) noexcept;
CurveFamily curve_family_from_string(std::string_view name);

struct CurveDescriptor {
    CurveFamily family = CurveFamily::Parabolic;
    double length = 1.0;  // L
    double delta = 0.1;   // h(0) = h(L)
    double height = 0.2;  // H, analytic families only
    std::vector<double> table_x;
    std::vector<double> table_h;
};

// Roof h: [0, L] -> (0, inf) with equal endpoints and a single interior maximum.
class HeightCurve {
public:
    static constexpr std::size_t validation_samples = 2048;

    double operator()(double x) const;
    double slope(double x) const;

    double length() const noexcept { return desc_.length; }
    double delta() const noexcept { return delta_; }
    double max_height() const noexcept { return height_; }
    double epsilon() const noexcept { return height_ / desc_.length; }
    double crest() const noexcept { return crest_; }
    const CurveDescriptor& descriptor() const noexcept { return desc_; }

    // x -> lx * x, h -> ly * h
    HeightCurve scaled(double lx, double ly) const;
    // same L and shape, roof rescaled vertically so that H / L = eps
    HeightCurve with_epsilon(double eps) const;

    friend HeightCurve build_height_curve(const CurveDescriptor& descriptor);

private:
    HeightCurve() = default;

    CurveDescriptor desc_;
    CubicSpline spline_;
    double delta_ = 0.0;
    double height_ = 0.0;
    double crest_ = 0.0;
};

HeightCurve build_height_curve(const CurveDescriptor& descriptor);

struct GasParameters {
    double U = 4.0;            // m/s
    double T_h = 288.15;       // K
    double mu_h = 1.789e-5;    // Pa s
    double c_p = 1004.0;       // J/(kg K)
    double R = 287.05;         // J/(kg K)
    double b = 1.405;
    double p0 = 101325.0;      // Pa
    double power_law_exp = 19.0 / 25.0;
};

struct DerivedConstants {
    GasParameters gas;
    double T0 = 0.0;
    double i0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double sigma0 = 0.0;
    double C_big = 0.0;
    double k = 0.0;  // b / (b - 1)
};

DerivedConstants derive_constants(const GasParameters& gas);

// sigma^a for 0 < sigma <= 1, as exp(a ln sigma)
double sigma_pow(double sigma, double a);

}  // namespace bll
