#include "bllimit/adim_solver.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "bllimit/error.hpp"
#include "bllimit/tridiagonal.hpp"

namespace bll {

Field2D density_field(const Field2D& u, const ClosureSet& closures) {
    const double L = u.grid().length();
    Field2D rho(u.grid_ptr());
    auto in = u.values();
    auto out = rho.values();
    for (std::size_t k = 0; k < in.size(); ++k) {
        const double phys = L * in[k];
        if (!closures.valid(phys))
            throw Error(ErrorKind::ValidityViolation,
                        "|L u_eps| = " + std::to_string(std::abs(phys)) + " m/s reached the validity bound");
        out[k] = closures.density_constant_pressure_from_sigma(closures.sigma(phys));
        if (!(out[k] > 0.0) || !std::isfinite(out[k]))
            throw Error(ErrorKind::DegenerateDensity, "non-positive density");
    }
    return rho;
}

namespace {

// Q = h rho W = rho v - tau_hat h' rho u, from the accumulated continuity equation
Field2D contravariant_flux(const Field2D& rho_u) {
    const Grid2D& g = rho_u.grid();
    const std::size_t ns = g.n_s(), nt = g.n_t(), N = ns - 1;
    const double dxi = g.ds(), dt = g.dtau_hat();
    Field2D Q(rho_u.grid_ptr());
    std::vector<double> dM(nt);
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < nt; ++j)
            dM[j] = (g.h(i + 1) * rho_u(i + 1, j) - g.h(i) * rho_u(i, j)) / dxi;
        Q(i, 0) = 0.0;
        for (std::size_t j = 0; j + 1 < nt; ++j) Q(i, j + 1) = Q(i, j) - 0.5 * dt * (dM[j] + dM[j + 1]);
    }
    for (std::size_t j = 0; j < nt; ++j) Q(N, j) = Q(0, j);
    return Q;
}

double viscosity_exponent(const DerivedConstants& c, const AdimOptions& opts) {
    return std::isnan(opts.viscosity_exponent) ? c.gas.power_law_exp : opts.viscosity_exponent;
}

}  // namespace

Field2D recover_mass_flux_v(const Field2D& rho_u) {
    const Grid2D& g = rho_u.grid();
    Field2D rho_v = contravariant_flux(rho_u);
    for (std::size_t i = 0; i < g.n_s(); ++i)
        for (std::size_t j = 0; j < g.n_t(); ++j) rho_v(i, j) += g.tau_hat(j) * g.h_slope(i) * rho_u(i, j);
    return rho_v;
}

Field2D recover_v(const Field2D& u, const DerivedConstants& constants) {
    const ClosureSet closures(constants);
    const Field2D rho = density_field(u, closures);
    Field2D rho_u(u.grid_ptr());
    for (std::size_t k = 0; k < rho_u.values().size(); ++k) rho_u.values()[k] = rho.values()[k] * u.values()[k];
    Field2D v = recover_mass_flux_v(rho_u);
    for (std::size_t k = 0; k < v.values().size(); ++k) v.values()[k] /= rho.values()[k];
    return v;
}

double continuity_residual_fluxes(const Field2D& rho_u, const Field2D& rho_v) {
    require_same_grid(rho_u, rho_v, "continuity_residual");
    const Grid2D& g = rho_u.grid();
    const std::size_t nt = g.n_t(), N = g.n_s() - 1;
    const double dxi = g.ds(), dt = g.dtau_hat();
    auto Q = [&](std::size_t i, std::size_t j) { return rho_v(i, j) - g.tau_hat(j) * g.h_slope(i) * rho_u(i, j); };
    auto dM = [&](std::size_t i, std::size_t j) {
        return (g.h(i + 1) * rho_u(i + 1, j) - g.h(i) * rho_u(i, j)) / dxi;
    };
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j + 1 < nt; ++j) {
            const double r = (0.5 * (dM(i, j) + dM(i, j + 1)) + (Q(i, j + 1) - Q(i, j)) / dt) / g.h(i);
            sum += r * r * g.h(i);
        }
    return std::sqrt(sum * dxi * dt);
}

double continuity_residual(const Field2D& u, const Field2D& v, const DerivedConstants& constants) {
    require_same_grid(u, v, "continuity_residual");
    const ClosureSet closures(constants);
    const Field2D rho = density_field(u, closures);
    Field2D ru(u.grid_ptr()), rv(u.grid_ptr());
    for (std::size_t k = 0; k < ru.values().size(); ++k) {
        ru.values()[k] = rho.values()[k] * u.values()[k];
        rv.values()[k] = rho.values()[k] * v.values()[k];
    }
    return continuity_residual_fluxes(ru, rv);
}

std::vector<double> momentum_residual_by_station(const Field2D& u, const Field2D& v, const DerivedConstants& constants,
                                                 double eps, const AdimOptions& opts) {
    require_same_grid(u, v, "momentum_residual");
    const Grid2D& g = u.grid();
    const double L = g.length();
    const double Ueps = constants.gas.U / L;
    const std::size_t nt = g.n_t(), N = g.n_s() - 1;
    std::vector<double> out(N, std::numeric_limits<double>::quiet_NaN());
    if (Ueps == 0.0) {
        for (std::size_t i = 1; i + 1 < N; ++i) out[i] = 0.0;
        return out;
    }
    const ClosureSet closures(constants);
    const Field2D rho = density_field(u, closures);
    const double a = viscosity_exponent(constants, opts);
    const double dxi = g.ds(), dt = g.dtau_hat();
    const double A = L * L * eps * eps;
    Field2D m(u.grid_ptr());
    for (std::size_t k = 0; k < m.values().size(); ++k) {
        const double ul = L * u.values()[k];
        m.values()[k] = sigma_pow(closures.sigma(ul), a);
    }
    // the roof has a corner at the periodic seam, so centred s-stencils at stations 0 and N - 1 are skipped
    for (std::size_t i = 1; i + 1 < N; ++i) {
        const double h = g.h(i);
        double sum = 0.0;
        for (std::size_t j = 1; j + 1 < nt; ++j) {
            double conv = 0.0;
            if (opts.convection) {
                const double Q = rho(i, j) * v(i, j) - g.tau_hat(j) * g.h_slope(i) * rho(i, j) * u(i, j);
                const double W = Q / (h * rho(i, j));
                conv = A * rho(i, j) *
                       (u(i, j) * (u(i + 1, j) - u(i - 1, j)) / (2.0 * dxi) +
                        W * (u(i, j + 1) - u(i, j - 1)) / (2.0 * dt));
            }
            const double mp = 0.5 * (m(i, j) + m(i, j + 1));
            const double mm = 0.5 * (m(i, j - 1) + m(i, j));
            const double diff = constants.c3 / (h * h * dt * dt) *
                                (mp * (u(i, j + 1) - u(i, j)) - mm * (u(i, j) - u(i, j - 1)));
            const double r = (conv - diff) / (constants.c3 * Ueps);
            sum += r * r;
        }
        out[i] = std::sqrt(sum * h * dt);
    }
    return out;
}

double momentum_residual(const Field2D& u, const Field2D& v, const DerivedConstants& constants, double eps,
                         const AdimOptions& opts) {
    const std::vector<double> r = momentum_residual_by_station(u, v, constants, eps, opts);
    double sum = 0.0;
    for (double x : r)
        if (!std::isnan(x)) sum += x * x;
    return std::sqrt(sum * u.grid().ds());
}

AdimSolution solve_adimensional(const std::shared_ptr<const Grid2D>& grid, const DerivedConstants& constants,
                                double eps, const AdimOptions& opts) {
    if (!grid) throw Error(ErrorKind::GridMismatch, "solve_adimensional: no grid");
    if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorKind::NonPhysicalParameter, "eps: must be > 0");
    if (std::abs(eps - grid->epsilon()) > 1e-9 * eps)
        throw Error(ErrorKind::GridMismatch, "eps = " + std::to_string(eps) + " does not match the grid's H/L = " +
                                                 std::to_string(grid->epsilon()));
    if (!(opts.relaxation > 0.0 && opts.relaxation <= 1.0))
        throw Error(ErrorKind::ValidationError, "relaxation: must lie in (0, 1]");
    if (!(opts.tolerance > 0.0)) throw Error(ErrorKind::ValidationError, "tolerance: must be > 0");
    if (opts.max_iterations == 0) throw Error(ErrorKind::ValidationError, "max_iterations: must be >= 1");

    const ClosureSet closures(constants);
    const Grid2D& g = *grid;
    const double L = g.length();
    const double Ueps = constants.gas.U / L;
    if (!closures.valid(constants.gas.U))
        throw Error(ErrorKind::ValidityViolation, "free-stream speed exceeds the validity bound");
    const double A = L * L * eps * eps;
    const double a = viscosity_exponent(constants, opts);
    const std::size_t ns = g.n_s(), nt = g.n_t(), N = ns - 1, n = nt - 2;
    const double dxi = g.ds(), dt = g.dtau_hat();
    const double omega = opts.relaxation;

    Field2D u(grid);
    for (std::size_t i = 0; i < ns; ++i) {
        for (std::size_t j = 0; j < nt; ++j) u(i, j) = -Ueps * g.tau_hat(j);
        u(i, 0) = 0.0;
        u(i, nt - 1) = -Ueps;
    }

    std::vector<double> lower(n), diag(n), upper(n);
    std::vector<std::vector<double>> rhs(N, std::vector<double>(n)), couple(N, std::vector<double>(n));
    std::vector<TridiagonalFactor> factors(N);
    Eigen::MatrixXd P(n, n);
    Eigen::VectorXd q(n);
    std::vector<double> x0(n), next(n), cur(n);
    Field2D m(grid), rho(grid), W(grid);

    AdimSolution out{u, Field2D(grid), {}};
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        rho = density_field(u, closures);
        for (std::size_t k = 0; k < u.values().size(); ++k)
            m.values()[k] = sigma_pow(closures.sigma(L * u.values()[k]), a);
        bool coupled = false;
        if (opts.convection) {
            Field2D ru(grid);
            for (std::size_t k = 0; k < ru.values().size(); ++k) ru.values()[k] = rho.values()[k] * u.values()[k];
            const Field2D Q = contravariant_flux(ru);
            for (std::size_t i = 0; i < ns; ++i)
                for (std::size_t j = 0; j < nt; ++j) W(i, j) = Q(i, j) / (g.h(i) * rho(i, j));
        }

        for (std::size_t i = 0; i < N; ++i) {
            const double h = g.h(i);
            const double dphi = constants.c3 / (h * h * dt * dt);
            const std::size_t im = i == 0 ? N - 1 : i - 1;
            for (std::size_t r = 0; r < n; ++r) {
                const std::size_t j = r + 1;
                const double mp = 0.5 * (m(i, j) + m(i, j + 1));
                const double mm = 0.5 * (m(i, j - 1) + m(i, j));
                double lo = -dphi * mm, up = -dphi * mp, di = dphi * (mp + mm);
                double b = 0.0, d = 0.0;
                if (opts.convection) {
                    const double uk = u(i, j);
                    const double cu = A * rho(i, j) * std::abs(uk) / dxi;
                    di += cu;
                    if (uk <= 0.0) d = cu;              // upstream is station i + 1
                    else b += cu * u(im, j);            // reversed flow, lagged upstream value
                    const double wk = W(i, j);
                    const double cw = A * rho(i, j) * std::abs(wk) / dt;
                    di += cw;
                    if (wk > 0.0) lo -= cw;
                    else up -= cw;
                }
                if (r + 1 == n) b -= up * (-Ueps);
                lower[r] = lo;
                diag[r] = di;
                upper[r] = up;
                rhs[i][r] = b;
                couple[i][r] = d;
                if (d != 0.0) coupled = true;
            }
            factors[i].factor(lower, diag, upper);
        }

        // periodic closure: column 0 = P column 0 + q, from the affine upwind march
        if (coupled) {
            P.setIdentity();
            q.setZero();
            for (std::size_t i = N; i-- > 0;) {
                const auto& d = couple[i];
                for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(n); ++c) {
                    double* col = P.col(c).data();
                    for (std::size_t r = 0; r < n; ++r) col[r] *= d[r];
                    factors[i].solve_in_place(std::span<double>(col, n));
                }
                for (std::size_t r = 0; r < n; ++r) q[r] = rhs[i][r] + d[r] * q[r];
                factors[i].solve_in_place(std::span<double>(q.data(), n));
            }
            const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - P;
            const Eigen::VectorXd sol = system.partialPivLu().solve(q);
            if (!sol.allFinite()) throw Error(ErrorKind::SolveFailure, "periodic closure solve failed");
            for (std::size_t r = 0; r < n; ++r) x0[r] = sol[r];
        } else {
            x0 = rhs[0];
            factors[0].solve_in_place(x0);
        }

        double update = 0.0;
        auto relax_column = [&](std::size_t i, const std::vector<double>& x) {
            for (std::size_t r = 0; r < n; ++r) {
                const double nv = omega * x[r] + (1.0 - omega) * u(i, r + 1);
                update = std::max(update, std::abs(nv - u(i, r + 1)));
                out.u(i, r + 1) = nv;
            }
            out.u(i, 0) = 0.0;
            out.u(i, nt - 1) = -Ueps;
        };
        next = x0;
        for (std::size_t i = N; i-- > 1;) {
            for (std::size_t r = 0; r < n; ++r) cur[r] = rhs[i][r] + couple[i][r] * next[r];
            factors[i].solve_in_place(cur);
            relax_column(i, cur);
            next = cur;
        }
        relax_column(0, x0);
        for (std::size_t j = 0; j < nt; ++j) out.u(N, j) = out.u(0, j);

        for (double value : out.u.values())
            if (!std::isfinite(value) || !closures.valid(L * value))
                throw Error(ErrorKind::ValidityViolation,
                            "iterate left the validity range at iteration " + std::to_string(it));

        const double norm = Ueps > 0.0 ? update / Ueps : update;
        u = out.u;
        out.report.iterations = it;
        out.report.final_update_norm = norm;
        if (norm <= opts.tolerance) {
            out.report.converged = true;
            break;
        }
    }
    if (!out.report.converged)
        throw Error(ErrorKind::NonConvergence,
                    "Picard iteration stalled: update " + std::to_string(out.report.final_update_norm) + " after " +
                        std::to_string(out.report.iterations) + " iterations");

    out.v = recover_v(out.u, constants);
    out.report.continuity_residual_l2 = continuity_residual(out.u, out.v, constants);
    out.report.momentum_residual = momentum_residual(out.u, out.v, constants, eps, opts);
    return out;
}

}  // namespace bll
