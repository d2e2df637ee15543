#include "bllimit/closures.hpp"

#include <cmath>
#include <string>

#include "bllimit/error.hpp"

namespace bll {

ClosureSet::ClosureSet(const DerivedConstants& constants, double margin)
    : c_(constants), bound_(std::sqrt(2.0 * constants.i0) * (1.0 - margin)) {
    if (!(margin >= 0.0 && margin < 1.0))
        throw Error(ErrorKind::NonPhysicalParameter, "validity margin must lie in [0, 1)");
    rho_cp_ = c_.c2 * sigma_pow(c_.sigma0, c_.k);
}

bool ClosureSet::valid(double u) const noexcept { return std::abs(u) <= bound_; }

void ClosureSet::check(double u) const {
    if (!valid(u))
        throw Error(ErrorKind::OutOfValidityRange,
                    "|u| = " + std::to_string(std::abs(u)) + " m/s outside validity range (max " +
                        std::to_string(bound_) + ")");
}

double ClosureSet::sigma(double u) const {
    check(u);
    // fused form keeps full relative accuracy as sigma -> 0
    const double two_i0 = 2.0 * c_.i0;
    return std::fma(-u, u, two_i0) / two_i0;
}

double ClosureSet::temperature(double u) const {
    check(u);
    return c_.gas.T_h + (c_.gas.U * c_.gas.U - u * u) / (2.0 * c_.gas.c_p);
}

double ClosureSet::temperature_stagnation_form(double u) const { return c_.T0 * sigma(u); }

double ClosureSet::pressure(double u) const { return c_.c1 * sigma_pow(sigma(u), c_.k); }

double ClosureSet::density(double u) const { return c_.c2 * sigma_pow(sigma(u), c_.k - 1.0); }

double ClosureSet::density_constant_pressure(double u) const {
    return density_constant_pressure_from_sigma(sigma(u));
}

double ClosureSet::density_constant_pressure_from_sigma(double sigma) const noexcept {
    return rho_cp_ / sigma;
}

double ClosureSet::viscosity_factor(double sigma) const noexcept {
    return sigma_pow(sigma, c_.gas.power_law_exp);
}

double ClosureSet::viscosity(double u) const { return c_.c3 * viscosity_factor(sigma(u)); }

double ClosureSet::conductivity(double u) const { return c_.gas.c_p * viscosity(u); }

double ClosureSet::total_energy(double u) const { return c_.gas.c_p * temperature(u) + 0.5 * u * u; }

}  // namespace bll
