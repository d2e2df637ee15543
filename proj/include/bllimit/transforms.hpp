#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bllimit/closures.hpp"
#include "bllimit/grid.hpp"

namespace bll {

struct DorodnitzynMap {
    Field2D eta1;
    Field2D eta2;
    Field2D branch_points;  // ascending-branch preimage s~ for nodes above delta_hat, NaN below
    Field2D jacobian;       // det D eta, NaN where no stencil fits inside the domain
    double jacobian_max_dev = 0.0;
    double max_du_ds = 0.0;  // max |du/ds| at fixed tau, relative to U_eps
    std::vector<std::string> warnings;
};

// s~ in [0, crest] with h_eps(s~) = tau, for delta_hat <= tau <= max h_eps
double ascending_preimage(const Grid2D& grid, double tau);

DorodnitzynMap build_dorodnitzyn_map(const Field2D& u, const DerivedConstants& constants);
DorodnitzynMap build_dorodnitzyn_map(const Field2D& u, const DerivedConstants& constants, const HeightCurve& curve);

// eta1 at an arbitrary (s, tau) inside the domain
double eta1_at(const Field2D& u, const DerivedConstants& constants, double s, double tau);

struct StreamfunctionOptions {
    bool verify = true;
    std::size_t loops = 100;
    double tolerance = 1e-8;
    std::uint64_t seed = 0x5eed5eedULL;
};

Field2D build_streamfunction(const Field2D& u, const Field2D& v, const DerivedConstants& constants,
                             const StreamfunctionOptions& opts = {});
// from mass fluxes (rho u, rho v) directly
Field2D streamfunction_from_fluxes(const Field2D& rho_u, const Field2D& rho_v, const StreamfunctionOptions& opts = {});
// largest |closed line integral| of -rho v ds + rho u dtau over random grid rectangles
double max_loop_integral(const Field2D& rho_u, const Field2D& rho_v, std::size_t loops, std::uint64_t seed);

struct IncompressibleField {
    Field2D F1;
    Field2D F2;
    Field2D psi;
    Field2D eta1;
    Field2D eta2;
    double f2_boundary_max = 0.0;     // stored trace
    double f2_boundary_defect = 0.0;  // |-rho^2 v| on the boundary before the trace is imposed
    double f1_roof_spread = 0.0;      // max - min of F1 along the roof
};

IncompressibleField build_incompressible_field(const DorodnitzynMap& map, const Field2D& psi, const Field2D& u,
                                               const Field2D& v, const DerivedConstants& constants);

// P1 quantities on the eta-image mesh (each grid cell split into two triangles)
double gradient_norm_sq(const IncompressibleField& field);
double divergence_l2(const IncompressibleField& field);
double f2_laplacian_l2(const IncompressibleField& field);

struct EnergyReport {
    double lhs = 0.0;  // squared seminorm
    double rhs = 0.0;  // c2 U^3 / (2 C)
    bool satisfied = false;
    double margin = 0.0;
    double lhs_sqrt = 0.0;
    bool satisfied_sqrt = false;
    double margin_sqrt = 0.0;
};

EnergyReport energy_bound_check(const IncompressibleField& field, const DerivedConstants& constants);

// u(s, tau) = g(tau) sampled on the grid, v = 0
Field2D s_independent_field(const std::shared_ptr<const Grid2D>& grid, const std::function<double(double)>& g);

}  // namespace bll
