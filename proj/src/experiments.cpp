#include "bllimit/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <optional>
#include <thread>

#include "bllimit/error.hpp"
#include "bllimit/interpolation.hpp"

namespace bll {

std::vector<VelocityProfile> limit_profiles_for(const Grid2D& grid, const DerivedConstants& constants,
                                                const LimitOptions& opts) {
    std::vector<VelocityProfile> out;
    out.reserve(grid.n_s() - 1);
    for (std::size_t i = 0; i + 1 < grid.n_s(); ++i)
        out.push_back(solve_limit_profile(grid.h(i) * grid.height(), constants.gas.U, constants, grid.n_t(), opts,
                                          grid.s(i) * grid.length()));
    return out;
}

double compare_l2(const Field2D& u, std::span<const VelocityProfile> limits) {
    const Grid2D& g = u.grid();
    const std::size_t N = g.n_s() - 1, nt = g.n_t();
    if (limits.size() != N && limits.size() != g.n_s())
        throw Error(ErrorKind::StationMismatch, "compare_l2: expected " + std::to_string(N) + " column profiles, got " +
                                                    std::to_string(limits.size()));
    const double L = g.length();
    double num = 0.0, den = 0.0;
    std::vector<double> d;
    for (std::size_t i = 0; i < N; ++i) {
        const VelocityProfile& p = limits[i];
        if (std::abs(p.column_x - g.s(i) * L) > 1e-9 * L)
            throw Error(ErrorKind::StationMismatch, "compare_l2: profile " + std::to_string(i) + " sits at x = " +
                                                        std::to_string(p.column_x) + ", station is at " +
                                                        std::to_string(g.s(i) * L));
        const double h = g.h(i) * g.height();
        if (p.y.size() < 2 || std::abs(p.y.back() - h) > 1e-9 * h)
            throw Error(ErrorKind::StationMismatch, "compare_l2: profile height does not match the column");
        d.assign(p.y.size(), 0.0);
        pchip_slopes(p.y, p.u, d);
        double cn = 0.0, cd = 0.0;
        for (std::size_t j = 0; j < nt; ++j) {
            const double w = (j == 0 || j + 1 == nt) ? 0.5 : 1.0;
            const double ref = pchip_eval(p.y, p.u, d, g.tau_hat(j) * h);
            const double e = L * u(i, j) - ref;
            cn += w * e * e;
            cd += w * ref * ref;
        }
        num += g.h(i) * cn;
        den += g.h(i) * cd;
    }
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

SweepRow evaluate_epsilon(double eps, const HeightCurve& base_curve, const DerivedConstants& constants,
                          const GridSize& size, const AdimOptions& solver, const LimitOptions& limit) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepRow row;
    row.eps = eps;
    row.n_s = size.n_s;
    row.n_t = size.n_t;
    try {
        const HeightCurve curve = base_curve.with_epsilon(eps);
        const auto grid = Grid2D::from_curve(curve, size.n_s, size.n_t);
        const AdimSolution sol = solve_adimensional(grid, constants, eps, solver);
        row.iterations = sol.report.iterations;
        row.final_update_norm = sol.report.final_update_norm;
        row.continuity_residual = sol.report.continuity_residual_l2;
        row.momentum_residual = sol.report.momentum_residual;

        const DorodnitzynMap map = build_dorodnitzyn_map(sol.u, constants, curve);
        const Field2D psi = build_streamfunction(sol.u, sol.v, constants);
        const IncompressibleField F = build_incompressible_field(map, psi, sol.u, sol.v, constants);
        row.energy = energy_bound_check(F, constants);
        row.jacobian_max_dev = map.jacobian_max_dev;
        row.div_l2 = divergence_l2(F);
        row.f2_boundary_max = F.f2_boundary_max;
        row.f2_boundary_defect = F.f2_boundary_defect;
        row.f2_laplacian_l2 = f2_laplacian_l2(F);
        row.warnings = map.warnings;
        {
            const ClosureSet closures(constants);
            const Field2D rho = density_field(sol.u, closures);
            Field2D ru(grid), rv(grid);
            for (std::size_t k = 0; k < ru.values().size(); ++k) {
                ru.values()[k] = rho.values()[k] * sol.u.values()[k];
                rv.values()[k] = rho.values()[k] * sol.v.values()[k];
            }
            StreamfunctionOptions so;
            row.max_loop_integral = max_loop_integral(ru, rv, so.loops, so.seed);
        }

        const auto limits = limit_profiles_for(*grid, constants, limit);
        row.l2_error_rel = compare_l2(sol.u, limits);
    } catch (const Error& e) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", eps);
        throw Error(ErrorKind::SolveFailure,
                    std::string("eps = ") + buf + ": " + std::string(to_string(e.kind())) + ": " + e.what());
    }
    row.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string timestamp_utc(const char* pattern) {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[64];
    std::strftime(buf, sizeof buf, pattern, &tm);
    return buf;
}

std::filesystem::path make_run_dir(const std::filesystem::path& root) {
    std::error_code ec;
    std::filesystem::create_directories(root, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create output directory " + root.string() + ": " + ec.message());
    const std::string stem = "sweep-" + timestamp_utc("%Y%m%dT%H%M%SZ");
    for (int k = 0; k < 1000; ++k) {
        const std::filesystem::path dir = root / (k == 0 ? stem : stem + "-" + std::to_string(k));
        if (std::filesystem::create_directory(dir, ec)) return dir;
        if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
    }
    throw Error(ErrorKind::IoError, "cannot allocate a run directory under " + root.string());
}

}  // namespace

void write_report_csv(const ConvergenceReport& report, const std::filesystem::path& path, bool record_timing) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    out << "eps,l2_error_rel,momentum_residual,continuity_residual,energy_lhs,energy_rhs,iterations,wall_time_ms\n";
    for (const SweepRow& r : report.rows) {
        out << fmt(r.eps) << ',' << fmt(r.l2_error_rel) << ',' << fmt(r.momentum_residual) << ','
            << fmt(r.continuity_residual) << ',' << fmt(r.energy.lhs) << ',' << fmt(r.energy.rhs) << ','
            << r.iterations << ',';
        if (record_timing) out << fmt(r.wall_time_ms);
        out << '\n';
    }
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

ConvergenceReport run_epsilon_sweep(const SweepConfig& config) {
    if (config.eps_values.empty()) throw Error(ErrorKind::ValidationError, "eps_values: must not be empty");
    for (std::size_t k = 0; k < config.eps_values.size(); ++k) {
        if (!(config.eps_values[k] > 0.0))
            throw Error(ErrorKind::ValidationError, "eps_values: all values must be > 0");
        if (k > 0 && !(config.eps_values[k] < config.eps_values[k - 1]))
            throw Error(ErrorKind::ValidationError, "eps_values: must be strictly decreasing");
    }
    if (!config.per_eps_grid.empty() && config.per_eps_grid.size() != config.eps_values.size())
        throw Error(ErrorKind::ValidationError, "per-eps grid list must match eps_values in length");

    const HeightCurve base = build_height_curve(config.domain);
    const DerivedConstants constants = derive_constants(config.gas);
    const std::size_t n = config.eps_values.size();
    std::size_t workers = config.workers;
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n);

    std::vector<std::optional<SweepRow>> rows(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < n; k = next++) {
            try {
                const GridSize size = config.per_eps_grid.empty() ? config.grid : config.per_eps_grid[k];
                rows[k] = evaluate_epsilon(config.eps_values[k], base, constants, size, config.solver, config.limit);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    ConvergenceReport report;
    for (std::size_t k = 0; k < n; ++k) {
        if (errors[k]) std::rethrow_exception(errors[k]);
        report.rows.push_back(std::move(*rows[k]));
    }

    if (!config.output_dir.empty()) {
        report.run_dir = make_run_dir(config.output_dir);
        report.csv_path = report.run_dir / "convergence.csv";
        report.json_path = report.run_dir / "report.json";
        write_report_csv(report, report.csv_path, config.record_timing);
        nlohmann::json j;
        j["tool"] = "bllimit";
        j["version"] = BLLIMIT_VERSION;
        j["config"] = to_json(config);
        j["environment"] = environment_stamp();
        j["environment"]["workers"] = workers;
        j["rows"] = nlohmann::json::array();
        for (const SweepRow& r : report.rows) j["rows"].push_back(to_json(r));
        std::ofstream out(report.json_path);
        if (!out) throw Error(ErrorKind::IoError, "cannot write " + report.json_path.string());
        out << j.dump(2) << '\n';
        if (!out) throw Error(ErrorKind::IoError, "write failed for " + report.json_path.string());
    }
    return report;
}

nlohmann::json to_json(const GasParameters& g) {
    return {{"U", g.U},   {"T_h", g.T_h}, {"mu_h", g.mu_h}, {"c_p", g.c_p},
            {"R", g.R},   {"b", g.b},     {"p0", g.p0},     {"power_law_exp", g.power_law_exp}};
}

nlohmann::json to_json(const CurveDescriptor& d) {
    nlohmann::json j{{"curve", std::string(to_string(d.family))}, {"L", d.length}, {"delta", d.delta}, {"H", d.height}};
    if (d.family == CurveFamily::Table) {
        j["table_x"] = d.table_x;
        j["table_h"] = d.table_h;
    }
    return j;
}

nlohmann::json to_json(const AdimOptions& o) {
    nlohmann::json j{{"relaxation", o.relaxation},
                     {"max_iterations", o.max_iterations},
                     {"tolerance", o.tolerance},
                     {"convection", o.convection}};
    if (std::isnan(o.viscosity_exponent)) j["viscosity_exponent"] = nullptr;
    else j["viscosity_exponent"] = o.viscosity_exponent;
    return j;
}

nlohmann::json to_json(const LimitOptions& o) {
    return {{"exponent", o.exponent}, {"quadrature_tol", o.quadrature_tol}, {"bisection_tol", o.bisection_tol}};
}

nlohmann::json to_json(const SweepConfig& c) {
    nlohmann::json grids = nlohmann::json::array();
    for (const GridSize& g : c.per_eps_grid) grids.push_back({g.n_s, g.n_t});
    return {{"eps_values", c.eps_values},
            {"n_s", c.grid.n_s},
            {"n_t", c.grid.n_t},
            {"per_eps_grid", grids},
            {"gas", to_json(c.gas)},
            {"domain", to_json(c.domain)},
            {"solver", to_json(c.solver)},
            {"limit", to_json(c.limit)},
            {"workers", c.workers},
            {"record_timing", c.record_timing}};
}

nlohmann::json to_json(const SweepRow& r) {
    return {{"eps", r.eps},
            {"n_s", r.n_s},
            {"n_t", r.n_t},
            {"l2_error_rel", r.l2_error_rel},
            {"momentum_residual", r.momentum_residual},
            {"continuity_residual", r.continuity_residual},
            {"energy_lhs", r.energy.lhs},
            {"energy_rhs", r.energy.rhs},
            {"energy_satisfied", r.energy.satisfied},
            {"energy_margin", r.energy.margin},
            {"energy_lhs_sqrt", r.energy.lhs_sqrt},
            {"energy_satisfied_sqrt", r.energy.satisfied_sqrt},
            {"energy_margin_sqrt", r.energy.margin_sqrt},
            {"iterations", r.iterations},
            {"final_update_norm", r.final_update_norm},
            {"jacobian_max_dev", r.jacobian_max_dev},
            {"div_l2", r.div_l2},
            {"f2_boundary_max", r.f2_boundary_max},
            {"f2_boundary_defect", r.f2_boundary_defect},
            {"f2_laplacian_l2", r.f2_laplacian_l2},
            {"max_loop_integral", r.max_loop_integral},
            {"wall_time_ms", r.wall_time_ms},
            {"warnings", r.warnings}};
}

nlohmann::json environment_stamp() {
    nlohmann::json j;
#if defined(__clang__)
    j["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
    j["compiler"] = std::string("gcc ") + __VERSION__;
#else
    j["compiler"] = "unknown";
#endif
    j["cxx_standard"] = __cplusplus;
    j["hardware_concurrency"] = std::thread::hardware_concurrency();
    j["timestamp_utc"] = timestamp_utc("%Y-%m-%dT%H:%M:%SZ");
    return j;
}

}  // namespace bll
