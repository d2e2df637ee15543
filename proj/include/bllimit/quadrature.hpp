#pragma once

#include <cstddef>
#include <functional>

namespace bll {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t subdivisions = 0;
};

// Globally adaptive 7/15-point Gauss-Kronrod; throws QuadratureNonConvergence.
QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b,
                                double abs_tol = 1e-12, std::size_t max_subdivisions = 10000);

}  // namespace bll
