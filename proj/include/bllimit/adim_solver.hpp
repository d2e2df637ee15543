#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <vector>

#include "bllimit/closures.hpp"
#include "bllimit/grid.hpp"

namespace bll {

struct AdimOptions {
    double relaxation = 0.7;
    std::size_t max_iterations = 10000;
    double tolerance = 1e-10;  // max |du| / U_eps
    bool convection = true;
    // NaN: use the gas power-law exponent
    double viscosity_exponent = std::numeric_limits<double>::quiet_NaN();
};

struct SolveReport {
    std::size_t iterations = 0;
    double final_update_norm = 0.0;
    double continuity_residual_l2 = 0.0;
    double momentum_residual = 0.0;
    bool converged = false;
};

struct AdimSolution {
    Field2D u;
    Field2D v;
    SolveReport report;
};

AdimSolution solve_adimensional(const std::shared_ptr<const Grid2D>& grid, const DerivedConstants& constants,
                                double eps, const AdimOptions& opts = {});

// rho_eps from the constant-pressure closure at L u_eps
Field2D density_field(const Field2D& u, const ClosureSet& closures);

// rho v from rho u by trapezoidal accumulation of the discrete continuity equation, rho v = 0 at the wall
Field2D recover_mass_flux_v(const Field2D& rho_u);
Field2D recover_v(const Field2D& u, const DerivedConstants& constants);

double continuity_residual(const Field2D& u, const Field2D& v, const DerivedConstants& constants);
double continuity_residual_fluxes(const Field2D& rho_u, const Field2D& rho_v);

// centred second-order evaluation of the momentum equation, normalised by c3 U_eps
double momentum_residual(const Field2D& u, const Field2D& v, const DerivedConstants& constants, double eps,
                         const AdimOptions& opts = {});
// same, as an L2 over tau_hat at each station 0 .. n_s - 2; NaN at the two stations touching the seam
std::vector<double> momentum_residual_by_station(const Field2D& u, const Field2D& v, const DerivedConstants& constants,
                                                 double eps, const AdimOptions& opts = {});

}  // namespace bll
