#pragma once

#include "bllimit/core_types.hpp"

namespace bll {

// Thermodynamic state as a function of the horizontal velocity u (m/s).
class ClosureSet {
public:
    static constexpr double default_margin = 1e-9;

    explicit ClosureSet(const DerivedConstants& constants, double margin = default_margin);

    const DerivedConstants& constants() const noexcept { return c_; }
    double validity_bound() const noexcept { return bound_; }
    bool valid(double u) const noexcept;

    double sigma(double u) const;
    double temperature(double u) const;                 // T_h + (U^2 - u^2) / (2 c_p)
    double temperature_stagnation_form(double u) const; // T0 sigma
    double pressure(double u) const;
    double density(double u) const;
    double density_constant_pressure(double u) const;
    double viscosity(double u) const;
    double conductivity(double u) const;                // Pr = 1
    double total_energy(double u) const;

    // sigma-only variants, no range check
    double density_constant_pressure_from_sigma(double sigma) const noexcept;
    double viscosity_factor(double sigma) const noexcept;  // sigma^power_law_exp

private:
    void check(double u) const;

    DerivedConstants c_;
    double bound_;
    double rho_cp_;  // c2 sigma0^k
};

}  // namespace bll
