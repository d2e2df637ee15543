#include "bllimit/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bllimit/adim_solver.hpp"
#include "bllimit/error.hpp"
#include "bllimit/interpolation.hpp"

namespace bll {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// off-grid density and the row / column integrals that define eta
class MapEvaluator {
public:
    MapEvaluator(const Field2D& u, const DerivedConstants& constants)
        : g_(u.grid()), u_(u), closures_(constants), slopes_(u.grid_ptr()), rho_(density_field(u, closures_)),
          eta2_(u.grid_ptr()) {
        const std::size_t nt = g_.n_t();
        for (std::size_t i = 0; i < g_.n_s(); ++i) {
            pchip_slopes(g_.tau_hat_nodes(), u.column(i), slopes_.column(i));
            eta2_(i, 0) = 0.0;
            for (std::size_t j = 0; j + 1 < nt; ++j)
                eta2_(i, j + 1) = eta2_(i, j) + 0.5 * g_.h(i) * g_.dtau_hat() * (rho_(i, j) + rho_(i, j + 1));
        }
        roof_u_.resize(g_.n_s());
        roof_d_.resize(g_.n_s());
        for (std::size_t i = 0; i < g_.n_s(); ++i) roof_u_[i] = u(i, nt - 1);
        pchip_slopes(g_.s_nodes(), roof_u_, roof_d_);
    }

    const Field2D& rho() const { return rho_; }
    const Field2D& eta2_nodes() const { return eta2_; }
    // density on the roof at abscissa s
    double rho_roof(double s) const {
        return closures_.density_constant_pressure(g_.length() * pchip_eval(g_.s_nodes(), roof_u_, roof_d_, s));
    }

    double rho_at(std::size_t k, double tau) const {
        double th = tau / g_.h(k);
        if (th > 1.0) {
            if (th > 1.0 + 1e-12) return nan;
            th = 1.0;
        }
        if (th < 0.0) return nan;
        const double uu = pchip_eval(g_.tau_hat_nodes(), u_.column(k), slopes_.column(k), th);
        const double r = closures_.density_constant_pressure(g_.length() * uu);
        if (!(r > 0.0)) throw Error(ErrorKind::DegenerateDensity, "non-positive density in the eta map");
        return r;
    }

    double eta2_at(std::size_t k, double tau) const {
        const double r = rho_at(k, tau);
        if (std::isnan(r)) return nan;
        const double th = std::min(tau / g_.h(k), 1.0);
        const std::size_t m = std::min(static_cast<std::size_t>(th / g_.dtau_hat()), g_.n_t() - 2);
        const double tau_m = g_.tau(k, m);
        return eta2_(k, m) + 0.5 * (tau - tau_m) * (rho_(k, m) + r);
    }

    // anchor of the row at level tau, snapped onto a station when within round-off
    double anchor(double tau) const {
        if (tau <= g_.delta_hat()) return 0.0;
        double a = ascending_preimage(g_, tau);
        const double ds = g_.ds();
        const double nearest = std::round(a / ds) * ds;
        if (std::abs(a - nearest) <= 1e-12) a = nearest;
        return a;
    }

    // eta1 at stations 0..k_max for level tau; NaN where the station is outside the row
    void row(double tau, std::size_t k_max, std::vector<double>& out, double& a) const {
        out.assign(k_max + 1, nan);
        a = anchor(tau);
        const double ds = g_.ds();
        std::size_t l0 = static_cast<std::size_t>(std::ceil(a / ds - 1e-9));
        if (l0 > k_max) return;
        double f_prev, s_prev;
        if (a == 0.0) {
            const double r0 = rho_at(0, tau);
            if (std::isnan(r0)) return;
            f_prev = 1.0 / r0;
            s_prev = 0.0;
        } else {
            f_prev = 1.0 / rho_roof(a);
            s_prev = a;
        }
        double acc = 0.0;
        for (std::size_t l = l0; l <= k_max; ++l) {
            const double r = rho_at(l, tau);
            if (std::isnan(r)) return;
            const double f = 1.0 / r;
            acc += 0.5 * (g_.s(l) - s_prev) * (f_prev + f);
            out[l] = acc;
            f_prev = f;
            s_prev = g_.s(l);
        }
    }

    const Grid2D& grid() const { return g_; }

private:
    const Grid2D& g_;
    const Field2D& u_;
    ClosureSet closures_;
    Field2D slopes_;
    Field2D rho_;
    Field2D eta2_;
    std::vector<double> roof_u_, roof_d_;
};

// derivative from values at offsets -2..2 (index 2 is the centre); NaN marks missing values
double stencil_derivative(const double (&f)[5], double h) {
    auto ok = [&](int k) { return !std::isnan(f[k]); };
    if (ok(1) && ok(3)) return (f[3] - f[1]) / (2.0 * h);
    if (ok(3) && ok(4)) return (-3.0 * f[2] + 4.0 * f[3] - f[4]) / (2.0 * h);
    if (ok(1) && ok(0)) return (3.0 * f[2] - 4.0 * f[1] + f[0]) / (2.0 * h);
    if (ok(3)) return (f[3] - f[2]) / h;
    if (ok(1)) return (f[2] - f[1]) / h;
    return nan;
}

double column_derivative(const Field2D& f, std::size_t i, std::size_t j, double dtau) {
    const std::size_t nt = f.grid().n_t();
    if (j == 0) return (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) / (2.0 * dtau);
    if (j + 1 == nt) return (3.0 * f(i, j) - 4.0 * f(i, j - 1) + f(i, j - 2)) / (2.0 * dtau);
    return (f(i, j + 1) - f(i, j - 1)) / (2.0 * dtau);
}

}  // namespace

double ascending_preimage(const Grid2D& grid, double tau) {
    if (!grid.curve() || tau <= grid.delta_hat()) return 0.0;
    const double crest = grid.crest_s();
    if (tau >= grid.roof(crest) - 1e-12) return crest;
    double lo = 0.0, hi = crest;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (grid.roof(mid) < tau) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

DorodnitzynMap build_dorodnitzyn_map(const Field2D& u, const DerivedConstants& constants, const HeightCurve& curve) {
    const Grid2D& g = u.grid();
    for (std::size_t i = 0; i < g.n_s(); ++i)
        if (std::abs(curve(g.s(i) * g.length()) / g.height() - g.h(i)) > 1e-12 * g.h(i))
            throw Error(ErrorKind::GridMismatch, "curve does not match the grid's roof");
    return build_dorodnitzyn_map(u, constants);
}

DorodnitzynMap build_dorodnitzyn_map(const Field2D& u, const DerivedConstants& constants) {
    if (!u.all_finite()) throw Error(ErrorKind::ValidationError, "u field has non-finite values");
    const MapEvaluator ev(u, constants);
    const Grid2D& g = u.grid();
    const auto grid_ptr = u.grid_ptr();
    const std::size_t ns = g.n_s(), nt = g.n_t(), N = ns - 1;
    const double ds = g.ds();

    DorodnitzynMap map{Field2D(grid_ptr), ev.eta2_nodes(), Field2D(grid_ptr, nan), Field2D(grid_ptr, nan), 0.0, 0.0, {}};
    Field2D eta1_s(grid_ptr), eta2_s(grid_ptr);
    std::vector<double> row;
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            const double tau = g.tau(i, j);
            double a = 0.0;
            ev.row(tau, std::min(i + 2, N), row, a);
            if (std::isnan(row[i])) throw Error(ErrorKind::DegenerateMesh, "eta1 row integral missed its own node");
            map.eta1(i, j) = row[i];
            if (tau > g.delta_hat()) map.branch_points(i, j) = a;
            double f1[5], f2[5];
            for (int o = -2; o <= 2; ++o) {
                const long l = static_cast<long>(i) + o;
                if (l < 0 || l > static_cast<long>(N)) {
                    f1[o + 2] = f2[o + 2] = nan;
                    continue;
                }
                f1[o + 2] = l <= static_cast<long>(i) + 2 && static_cast<std::size_t>(l) < row.size() ? row[l] : nan;
                f2[o + 2] = o == 0 ? map.eta2(i, j) : ev.eta2_at(static_cast<std::size_t>(l), tau);
            }
            // stations left of the anchor were never integrated
            for (int o = -2; o < 0; ++o)
                if (static_cast<long>(i) + o >= 0 && std::isnan(f2[o + 2])) f1[o + 2] = nan;
            eta1_s(i, j) = stencil_derivative(f1, ds);
            eta2_s(i, j) = stencil_derivative(f2, ds);
        }

    double max_dev = 0.0;
    for (std::size_t i = 0; i < ns; ++i) {
        const double dtau = g.h(i) * g.dtau_hat();
        for (std::size_t j = 0; j < nt; ++j) {
            const double e1t = column_derivative(map.eta1, i, j, dtau);
            const double e2t = column_derivative(map.eta2, i, j, dtau);
            const double det = eta1_s(i, j) * e2t - e1t * eta2_s(i, j);
            map.jacobian(i, j) = det;
            if (std::isfinite(det)) max_dev = std::max(max_dev, std::abs(det - 1.0));
        }
    }
    map.jacobian_max_dev = max_dev;

    // du/ds at fixed tau = du/dxi - tau_hat h'/h du/dtau_hat
    const double Ueps = std::abs(u(0, nt - 1));
    double du = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 1; j + 1 < nt; ++j) {
            // the roof has a corner at the periodic seam, so no stencil crosses it
            const double dxi = i == 0 ? (-3.0 * u(0, j) + 4.0 * u(1, j) - u(2, j)) / (2.0 * ds)
                                      : (u(i + 1, j) - u(i - 1, j)) / (2.0 * ds);
            const double dth = (u(i, j + 1) - u(i, j - 1)) / (2.0 * g.dtau_hat());
            du = std::max(du, std::abs(dxi - g.tau_hat(j) * g.h_slope(i) / g.h(i) * dth));
        }
    }
    map.max_du_ds = Ueps > 0.0 ? du / Ueps : du;
    if (map.max_du_ds > 1e-2)
        map.warnings.push_back("u varies along s (max |du/ds| / U_eps = " + std::to_string(map.max_du_ds) +
                               "); the unit Jacobian of the eta map assumes du/dx = 0");
    return map;
}

double eta1_at(const Field2D& u, const DerivedConstants& constants, double s, double tau) {
    const MapEvaluator ev(u, constants);
    const Grid2D& g = u.grid();
    const std::size_t N = g.n_s() - 1;
    if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorKind::ValidationError, "eta1_at: s outside [0, 1]");
    if (tau > g.roof(s) * (1.0 + 1e-12) || tau < 0.0)
        throw Error(ErrorKind::ValidationError, "eta1_at: point outside the domain");
    const std::size_t k = std::min(static_cast<std::size_t>(s / g.ds()), N - 1);
    std::vector<double> row;
    double a = 0.0;
    ev.row(tau, k + 1, row, a);
    if (s <= a) return 0.0;
    // last knot at or before s
    double s_prev = a, f_prev = a == 0.0 ? 1.0 / ev.rho_at(0, tau) : 1.0 / ev.rho_roof(a), acc = 0.0;
    for (std::size_t l = 0; l <= k; ++l)
        if (!std::isnan(row[l]) && g.s(l) <= s) {
            s_prev = g.s(l);
            f_prev = 1.0 / ev.rho_at(l, tau);
            acc = row[l];
        }
    if (s == s_prev) return acc;
    double f_s = f_prev;
    const double r_next = ev.rho_at(k + 1, tau);
    if (!std::isnan(r_next)) {
        const double w = (s - s_prev) / (g.s(k + 1) - s_prev);
        f_s = (1.0 - w) * f_prev + w / r_next;
    }
    return acc + 0.5 * (s - s_prev) * (f_prev + f_s);
}

namespace {

struct Fluxes {
    Field2D M;
    Field2D Q;
};

Fluxes mapped_fluxes(const Field2D& rho_u, const Field2D& rho_v) {
    const Grid2D& g = rho_u.grid();
    Fluxes f{Field2D(rho_u.grid_ptr()), Field2D(rho_u.grid_ptr())};
    for (std::size_t i = 0; i < g.n_s(); ++i)
        for (std::size_t j = 0; j < g.n_t(); ++j) {
            f.M(i, j) = g.h(i) * rho_u(i, j);
            f.Q(i, j) = rho_v(i, j) - g.tau_hat(j) * g.h_slope(i) * rho_u(i, j);
        }
    return f;
}

}  // namespace

double max_loop_integral(const Field2D& rho_u, const Field2D& rho_v, std::size_t loops, std::uint64_t seed) {
    require_same_grid(rho_u, rho_v, "max_loop_integral");
    const Grid2D& g = rho_u.grid();
    const Fluxes f = mapped_fluxes(rho_u, rho_v);
    const std::size_t N = g.n_s() - 1, top = g.n_t() - 1;
    const double dxi = g.ds(), dt = g.dtau_hat();
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t hi) {  // ordered pair a < b in [0, hi]
        std::uniform_int_distribution<std::size_t> d(0, hi);
        std::size_t a = d(rng), b = d(rng);
        while (a == b) b = d(rng);
        return std::pair{std::min(a, b), std::max(a, b)};
    };
    double worst = 0.0;
    for (std::size_t n = 0; n < loops; ++n) {
        const auto [i0, i1] = pick(N);
        const auto [j0, j1] = pick(top);
        double loop = 0.0;
        for (std::size_t i = i0; i < i1; ++i) loop += -f.Q(i, j0) * dxi + f.Q(i, j1) * dxi;
        for (std::size_t j = j0; j < j1; ++j)
            loop += 0.5 * dt * ((f.M(i1, j) + f.M(i1, j + 1)) - (f.M(i0, j) + f.M(i0, j + 1)));
        worst = std::max(worst, std::abs(loop));
    }
    return worst;
}

Field2D streamfunction_from_fluxes(const Field2D& rho_u, const Field2D& rho_v, const StreamfunctionOptions& opts) {
    require_same_grid(rho_u, rho_v, "build_streamfunction");
    const Grid2D& g = rho_u.grid();
    const Fluxes f = mapped_fluxes(rho_u, rho_v);
    const double dxi = g.ds(), dt = g.dtau_hat();
    Field2D psi(rho_u.grid_ptr());
    psi(0, 0) = 0.0;
    for (std::size_t i = 0; i + 1 < g.n_s(); ++i) psi(i + 1, 0) = psi(i, 0) - dxi * f.Q(i, 0);
    for (std::size_t i = 0; i < g.n_s(); ++i)
        for (std::size_t j = 0; j + 1 < g.n_t(); ++j)
            psi(i, j + 1) = psi(i, j) + 0.5 * dt * (f.M(i, j) + f.M(i, j + 1));
    if (opts.verify) {
        const double loop = max_loop_integral(rho_u, rho_v, opts.loops, opts.seed);
        if (loop > opts.tolerance)
            throw Error(ErrorKind::PathDependence, "streamfunction loop integral " + std::to_string(loop) +
                                                       " exceeds tolerance; input is not discretely solenoidal");
    }
    return psi;
}

Field2D build_streamfunction(const Field2D& u, const Field2D& v, const DerivedConstants& constants,
                             const StreamfunctionOptions& opts) {
    require_same_grid(u, v, "build_streamfunction");
    const ClosureSet closures(constants);
    const Field2D rho = density_field(u, closures);
    Field2D ru(u.grid_ptr()), rv(u.grid_ptr());
    for (std::size_t k = 0; k < ru.values().size(); ++k) {
        ru.values()[k] = rho.values()[k] * u.values()[k];
        rv.values()[k] = rho.values()[k] * v.values()[k];
    }
    return streamfunction_from_fluxes(ru, rv, opts);
}

IncompressibleField build_incompressible_field(const DorodnitzynMap& map, const Field2D& psi, const Field2D& u,
                                               const Field2D& v, const DerivedConstants& constants) {
    require_same_grid(u, v, "build_incompressible_field");
    require_same_grid(u, psi, "build_incompressible_field");
    require_same_grid(u, map.eta1, "build_incompressible_field");
    require_same_grid(u, map.eta2, "build_incompressible_field");
    const Grid2D& g = u.grid();
    const std::size_t ns = g.n_s(), nt = g.n_t();
    const ClosureSet closures(constants);
    const Field2D rho = density_field(u, closures);
    IncompressibleField out{u, Field2D(u.grid_ptr()), psi, map.eta1, map.eta2, 0.0, 0.0, 0.0};
    double roof_min = std::numeric_limits<double>::infinity(), roof_max = -roof_min;
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            const double f2 = -rho(i, j) * rho(i, j) * v(i, j);
            const bool boundary = i == 0 || i + 1 == ns || j == 0 || j + 1 == nt;
            if (boundary) {
                out.f2_boundary_defect = std::max(out.f2_boundary_defect, std::abs(f2));
                out.F2(i, j) = 0.0;
            } else {
                out.F2(i, j) = f2;
            }
            if (j + 1 == nt) {
                roof_min = std::min(roof_min, u(i, j));
                roof_max = std::max(roof_max, u(i, j));
            }
        }
    for (std::size_t i = 0; i < ns; ++i) {
        out.f2_boundary_max = std::max({out.f2_boundary_max, std::abs(out.F2(i, 0)), std::abs(out.F2(i, nt - 1))});
    }
    for (std::size_t j = 0; j < nt; ++j)
        out.f2_boundary_max = std::max({out.f2_boundary_max, std::abs(out.F2(0, j)), std::abs(out.F2(ns - 1, j))});
    out.f1_roof_spread = roof_max - roof_min;
    return out;
}

namespace {

struct Triangle {
    std::size_t v[3][2];
};

// visits each P1 triangle with its vertex (i, j) pairs, counter-clockwise in (s, tau_hat)
template <class F>
void for_each_triangle(const Grid2D& g, F&& visit) {
    for (std::size_t i = 0; i + 1 < g.n_s(); ++i)
        for (std::size_t j = 0; j + 1 < g.n_t(); ++j) {
            visit(Triangle{{{i, j}, {i + 1, j}, {i, j + 1}}});
            visit(Triangle{{{i + 1, j}, {i + 1, j + 1}, {i, j + 1}}});
        }
}

struct P1Element {
    double area;
    double gx[3], gy[3];  // basis gradients
};

P1Element element(const IncompressibleField& f, const Triangle& t) {
    double x[3], y[3];
    for (int k = 0; k < 3; ++k) {
        x[k] = f.eta1(t.v[k][0], t.v[k][1]);
        y[k] = f.eta2(t.v[k][0], t.v[k][1]);
    }
    const double area2 = (x[1] - x[0]) * (y[2] - y[0]) - (x[2] - x[0]) * (y[1] - y[0]);
    if (!(area2 > 0.0))
        throw Error(ErrorKind::DegenerateMesh, "eta-image mesh has a folded or degenerate triangle at cell (" +
                                                   std::to_string(t.v[0][0]) + ", " + std::to_string(t.v[0][1]) + ")");
    P1Element e{0.5 * area2, {}, {}};
    for (int k = 0; k < 3; ++k) {
        const int a = (k + 1) % 3, b = (k + 2) % 3;
        e.gx[k] = (y[a] - y[b]) / area2;
        e.gy[k] = (x[b] - x[a]) / area2;
    }
    return e;
}

void gradient(const P1Element& e, const Field2D& f, const Triangle& t, double& gx, double& gy) {
    gx = gy = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double val = f(t.v[k][0], t.v[k][1]);
        gx += val * e.gx[k];
        gy += val * e.gy[k];
    }
}

}  // namespace

double gradient_norm_sq(const IncompressibleField& field) {
    double total = 0.0;
    for_each_triangle(field.F1.grid(), [&](const Triangle& t) {
        const P1Element e = element(field, t);
        double ax, ay, bx, by;
        gradient(e, field.F1, t, ax, ay);
        gradient(e, field.F2, t, bx, by);
        total += (ax * ax + ay * ay + bx * bx + by * by) * e.area;
    });
    return total;
}

double divergence_l2(const IncompressibleField& field) {
    double total = 0.0;
    for_each_triangle(field.F1.grid(), [&](const Triangle& t) {
        const P1Element e = element(field, t);
        double ax, ay, bx, by;
        gradient(e, field.F1, t, ax, ay);
        gradient(e, field.F2, t, bx, by);
        const double div = ax + by;
        total += div * div * e.area;
    });
    return std::sqrt(total);
}

double f2_laplacian_l2(const IncompressibleField& field) {
    const Grid2D& g = field.F2.grid();
    Field2D weak(field.F2.grid_ptr()), mass(field.F2.grid_ptr());
    for_each_triangle(g, [&](const Triangle& t) {
        const P1Element e = element(field, t);
        double fx, fy;
        gradient(e, field.F2, t, fx, fy);
        for (int k = 0; k < 3; ++k) {
            weak(t.v[k][0], t.v[k][1]) -= e.area * (fx * e.gx[k] + fy * e.gy[k]);
            mass(t.v[k][0], t.v[k][1]) += e.area / 3.0;
        }
    });
    double total = 0.0;
    for (std::size_t i = 1; i + 1 < g.n_s(); ++i)
        for (std::size_t j = 1; j + 1 < g.n_t(); ++j) {
            const double lap = weak(i, j) / mass(i, j);
            total += lap * lap * mass(i, j);
        }
    return std::sqrt(total);
}

EnergyReport energy_bound_check(const IncompressibleField& field, const DerivedConstants& constants) {
    EnergyReport r;
    r.lhs = gradient_norm_sq(field);
    const double U = constants.gas.U;
    r.rhs = constants.c2 * U * U * U / (2.0 * constants.C_big);
    r.satisfied = r.lhs <= r.rhs;
    r.margin = r.rhs - r.lhs;
    r.lhs_sqrt = std::sqrt(r.lhs);
    r.satisfied_sqrt = r.lhs_sqrt <= r.rhs;
    r.margin_sqrt = r.rhs - r.lhs_sqrt;
    return r;
}

Field2D s_independent_field(const std::shared_ptr<const Grid2D>& grid, const std::function<double(double)>& g) {
    Field2D u(grid);
    for (std::size_t i = 0; i < grid->n_s(); ++i)
        for (std::size_t j = 0; j < grid->n_t(); ++j) u(i, j) = g(grid->tau(i, j));
    return u;
}

}  // namespace bll
