#pragma once

#include <cstddef>
#include <vector>

#include "bllimit/core_types.hpp"

namespace bll {

struct VelocityProfile {
    std::vector<double> y;  // 0 = y_0 < ... < y_{n-1} = h
    std::vector<double> u;  // signed, u(0) = 0, u(h) = -U
    double column_x = 0.0;
};

struct LimitOptions {
    double exponent = 6.0 / 25.0;  // f = sigma^-exponent
    double quadrature_tol = 1e-12;
    double bisection_tol = 1e-12;  // absolute, m/s
};

// G(u) = int_0^u (1 - s^2 / (2 i0))^exponent ds
double g_integral(double u, double i0, double exponent = 6.0 / 25.0, double abs_tol = 1e-12);

VelocityProfile solve_limit_profile(double h, double U, const DerivedConstants& constants, std::size_t n,
                                    const LimitOptions& opts = {}, double column_x = 0.0);

struct ResidualReport {
    double max_abs = 0.0;
    double l2 = 0.0;
    std::size_t interior_nodes = 0;
};

// f u'' - f' u' with f = sigma^-exponent, centred differences in u/U and y/h
ResidualReport residual_check(const VelocityProfile& profile, const DerivedConstants& constants,
                              double exponent = 6.0 / 25.0);

}  // namespace bll
