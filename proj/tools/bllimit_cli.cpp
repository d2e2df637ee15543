// bllimit command-line driver: closures, solve-limit, solve-adim, transform-check, sweep

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bllimit/adim_solver.hpp"
#include "bllimit/closures.hpp"
#include "bllimit/config.hpp"
#include "bllimit/experiments.hpp"
#include "bllimit/limit_solver.hpp"
#include "bllimit/plotting.hpp"
#include "bllimit/transforms.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Common {
    std::string config_path;
    std::string out;
};

bll::RunConfig load(const Common& c) {
    if (c.config_path.empty()) {
        bll::RunConfig cfg;
        bll::validate(cfg);
        return cfg;
    }
    return bll::parse_config(c.config_path);
}

json stamp(const bll::RunConfig& cfg) {
    return {{"tool", "bllimit"}, {"version", BLLIMIT_VERSION}, {"config", bll::to_json(cfg)}};
}

std::ofstream open_out(const fs::path& p) {
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(p);
    if (!out) throw bll::Error(bll::ErrorKind::IoError, "cannot write " + p.string());
    return out;
}

void check_written(std::ostream& out, const fs::path& p) {
    out.flush();
    if (!out) throw bll::Error(bll::ErrorKind::IoError, "write failed for " + p.string());
}

fs::path meta_path(const fs::path& out) {
    fs::path p = out;
    p.replace_extension(".meta.json");
    return p;
}

void write_json(const json& j, const fs::path& p) {
    std::ofstream out = open_out(p);
    out << j.dump(2) << '\n';
    check_written(out, p);
}

bool g_json_stderr = false;

void warn(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) {
        if (g_json_stderr)
            std::cerr << json{{"warning", w}}.dump() << '\n';
        else
            std::cerr << "warning: " << w << '\n';
    }
}

// --- closures -------------------------------------------------------------

json run_closures(const Common& c, std::size_t table) {
    const bll::RunConfig cfg = load(c);
    if (table < 2) throw bll::Error(bll::ErrorKind::ValidationError, "table: must satisfy n >= 2 (got " +
                                                                     std::to_string(table) + ")");
    const bll::DerivedConstants k = bll::derive_constants(cfg.gas);
    const bll::ClosureSet cl(k);
    std::ostringstream csv;
    csv << "u,sigma,T,p,rho,rho_constp,mu,E\n";
    for (std::size_t r = 0; r < table; ++r) {
        const double u = 0.0 - cfg.gas.U * static_cast<double>(r) / static_cast<double>(table - 1);
        csv << fmt(u) << ',' << fmt(cl.sigma(u)) << ',' << fmt(cl.temperature(u)) << ',' << fmt(cl.pressure(u))
            << ',' << fmt(cl.density(u)) << ',' << fmt(cl.density_constant_pressure(u)) << ','
            << fmt(cl.viscosity(u)) << ',' << fmt(cl.total_energy(u)) << '\n';
    }
    json summary = {{"command", "closures"}, {"rows", table}, {"i0", k.i0}, {"T0", k.T0}};
    if (c.out.empty()) {
        std::cout << csv.str();
    } else {
        const fs::path p = c.out;
        std::ofstream out = open_out(p);
        out << csv.str();
        check_written(out, p);
        write_json(stamp(cfg), meta_path(p));
        summary["out"] = p.string();
    }
    return summary;
}

// --- solve-limit ----------------------------------------------------------

json run_solve_limit(const Common& c, std::optional<std::size_t> n, std::optional<double> x) {
    bll::RunConfig cfg = load(c);
    if (n) cfg.limit_n = *n;
    if (x) cfg.limit_station = *x;
    bll::validate(cfg);
    const bll::DerivedConstants k = bll::derive_constants(cfg.gas);
    const bll::HeightCurve curve = bll::build_height_curve(cfg.domain);
    const double station = cfg.limit_station.value_or(curve.crest());
    const double h = curve(station);
    const bll::VelocityProfile prof = bll::solve_limit_profile(h, cfg.gas.U, k, cfg.limit_n, cfg.limit, station);
    const bll::ClosureSet cl(k);

    const fs::path p = c.out.empty() ? fs::path("profile.csv") : fs::path(c.out);
    {
        std::ofstream out = open_out(p);
        out << "y,u,T,p,rho,mu\n";
        for (std::size_t j = 0; j < prof.y.size(); ++j) {
            const double u = prof.u[j];
            out << fmt(prof.y[j]) << ',' << fmt(u) << ',' << fmt(cl.temperature(u)) << ',' << fmt(cl.pressure(u))
                << ',' << fmt(cl.density(u)) << ',' << fmt(cl.viscosity(u)) << '\n';
        }
        check_written(out, p);
    }
    fs::path svg = p;
    svg.replace_extension(".svg");
    bll::emit_profile_svg(prof, svg);

    json summary = {{"command", "solve-limit"}, {"x", station}, {"h", h}, {"n", prof.y.size()},
                    {"out", p.string()}, {"svg", svg.string()},
                    {"points", bll::profile_points_path(svg).string()}};
    if (prof.y.size() >= 16 && cfg.gas.U > 0.0) {
        const bll::ResidualReport r = bll::residual_check(prof, k, cfg.limit.exponent);
        summary["residual_max"] = r.max_abs;
        summary["residual_l2"] = r.l2;
    }
    json meta = stamp(cfg);
    meta["result"] = summary;
    write_json(meta, meta_path(p));
    return summary;
}

// --- solve-adim -----------------------------------------------------------

struct AdimRun {
    std::shared_ptr<const bll::Grid2D> grid;
    bll::HeightCurve curve;
    bll::AdimSolution sol;
    double eps;
};

AdimRun adim(bll::RunConfig& cfg, std::optional<double> eps_flag, std::optional<std::size_t> ns,
             std::optional<std::size_t> nt) {
    if (eps_flag) cfg.adim_eps = *eps_flag;
    if (ns) cfg.adim_grid.n_s = *ns;
    if (nt) cfg.adim_grid.n_t = *nt;
    bll::validate(cfg);
    const bll::DerivedConstants k = bll::derive_constants(cfg.gas);
    const bll::HeightCurve base = bll::build_height_curve(cfg.domain);
    const double eps = cfg.adim_eps.value_or(base.epsilon());
    bll::HeightCurve curve = base.with_epsilon(eps);
    auto grid = bll::Grid2D::from_curve(curve, cfg.adim_grid.n_s, cfg.adim_grid.n_t);
    bll::AdimSolution sol = bll::solve_adimensional(grid, k, eps, cfg.solver);
    return {grid, std::move(curve), std::move(sol), eps};
}

json report_json(const bll::SolveReport& r) {
    return {{"iterations", r.iterations}, {"final_update_norm", r.final_update_norm},
            {"continuity_residual", r.continuity_residual_l2}, {"momentum_residual", r.momentum_residual},
            {"converged", r.converged}};
}

json run_solve_adim(const Common& c, std::optional<double> eps, std::optional<std::size_t> ns,
                    std::optional<std::size_t> nt) {
    bll::RunConfig cfg = load(c);
    const AdimRun run = adim(cfg, eps, ns, nt);
    const bll::DerivedConstants k = bll::derive_constants(cfg.gas);
    const bll::ClosureSet cl(k);
    const bll::Field2D rho = bll::density_field(run.sol.u, cl);
    const bll::Grid2D& g = *run.grid;

    const fs::path p = c.out.empty() ? fs::path("fields.csv") : fs::path(c.out);
    {
        std::ofstream out = open_out(p);
        out << "s,tau,u_eps,v_eps,rho_eps,sigma\n";
        for (std::size_t i = 0; i < g.n_s(); ++i)
            for (std::size_t j = 0; j < g.n_t(); ++j) {
                const double u = run.sol.u(i, j);
                out << fmt(g.s(i)) << ',' << fmt(g.tau(i, j)) << ',' << fmt(u) << ',' << fmt(run.sol.v(i, j)) << ','
                    << fmt(rho(i, j)) << ',' << fmt(cl.sigma(g.length() * u)) << '\n';
            }
        check_written(out, p);
    }
    json summary = {{"command", "solve-adim"}, {"eps", run.eps}, {"n_s", g.n_s()}, {"n_t", g.n_t()},
                    {"out", p.string()}, {"report", report_json(run.sol.report)}};
    json meta = stamp(cfg);
    meta["result"] = summary;
    write_json(meta, meta_path(p));
    return summary;
}

// --- transform-check ------------------------------------------------------

json run_transform_check(const Common& c, std::optional<double> eps, std::optional<std::size_t> ns,
                         std::optional<std::size_t> nt) {
    bll::RunConfig cfg = load(c);
    const AdimRun run = adim(cfg, eps, ns, nt);
    const bll::DerivedConstants k = bll::derive_constants(cfg.gas);
    const bll::DorodnitzynMap map = bll::build_dorodnitzyn_map(run.sol.u, k, run.curve);
    warn(map.warnings);
    const bll::Field2D psi = bll::build_streamfunction(run.sol.u, run.sol.v, k);
    const bll::IncompressibleField F = bll::build_incompressible_field(map, psi, run.sol.u, run.sol.v, k);
    const bll::EnergyReport e = bll::energy_bound_check(F, k);

    json r = {
        {"command", "transform-check"},
        {"eps", run.eps},
        {"n_s", run.grid->n_s()},
        {"n_t", run.grid->n_t()},
        {"jacobian_max_dev", map.jacobian_max_dev},
        {"div_l2", bll::divergence_l2(F)},
        {"f2_boundary_max", F.f2_boundary_max},
        {"energy_lhs", e.lhs},
        {"energy_rhs", e.rhs},
        {"satisfied", e.satisfied},
        {"energy_margin", e.margin},
        {"energy_lhs_sqrt", e.lhs_sqrt},
        {"satisfied_sqrt", e.satisfied_sqrt},
        {"f2_boundary_defect", F.f2_boundary_defect},
        {"f2_laplacian_l2", bll::f2_laplacian_l2(F)},
        {"f1_roof_spread", F.f1_roof_spread},
        {"max_du_ds", map.max_du_ds},
        {"solver", report_json(run.sol.report)},
        {"warnings", map.warnings},
    };
    json doc = stamp(cfg);
    doc.update(r);
    const fs::path p = c.out.empty() ? fs::path("report.json") : fs::path(c.out);
    write_json(doc, p);
    r["out"] = p.string();
    return r;
}

// --- sweep ----------------------------------------------------------------

json run_sweep(const Common& c, bool timing, std::optional<std::size_t> workers) {
    bll::RunConfig cfg = load(c);
    if (!c.out.empty()) cfg.output_dir = c.out;
    if (timing) cfg.sweep_timing = true;
    if (workers) cfg.sweep_workers = *workers;
    bll::validate(cfg);
    const bll::ConvergenceReport rep = bll::run_epsilon_sweep(bll::make_sweep_config(cfg));
    json rows = json::array();
    for (const auto& row : rep.rows) {
        warn(row.warnings);
        rows.push_back({{"eps", row.eps}, {"l2_error_rel", row.l2_error_rel}, {"iterations", row.iterations}});
    }
    return {{"command", "sweep"}, {"run_dir", rep.run_dir.string()}, {"csv", rep.csv_path.string()},
            {"json", rep.json_path.string()}, {"rows", rows}};
}

void print_human(const json& s) {
    const std::string cmd = s.value("command", "");
    if (cmd == "closures" && !s.contains("out")) return;  // table went to stdout
    if (cmd == "sweep") {
        std::printf("%-8s %-14s %s\n", "eps", "l2_error_rel", "iterations");
        for (const auto& r : s["rows"])
            std::printf("%-8g %-14.6e %zu\n", r["eps"].get<double>(), r["l2_error_rel"].get<double>(),
                        r["iterations"].get<std::size_t>());
        std::printf("wrote %s\n", s["csv"].get<std::string>().c_str());
        return;
    }
    for (const auto& [key, val] : s.items()) {
        if (key == "command") continue;
        std::cout << key << ": " << (val.is_string() ? val.get<std::string>() : val.dump()) << '\n';
    }
}

int fail(bool json_mode, int code, const std::string& kind, const std::string& message,
         std::optional<std::pair<std::size_t, std::size_t>> where = std::nullopt) {
    if (json_mode) {
        json e = {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
        if (where) {
            e["error"]["line"] = where->first;
            e["error"]["column"] = where->second;
        }
        std::cerr << e.dump() << '\n';
    } else {
        std::cerr << "error (" << kind << "): " << message << '\n';
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compressible thin-film boundary layer limit toolkit"};
    app.set_version_flag("--version", std::string("bllimit ") + BLLIMIT_VERSION);
    bool json_mode = false;
    app.add_flag("--json", json_mode, "machine-readable stdout and stderr");
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "INI config file");
        sub->add_option("--out", common.out, "output path");
    };

    std::size_t table = 0;
    auto* closures = app.add_subcommand("closures", "tabulate the gas closures from u = 0 to -U");
    closures->add_option("--table", table, "number of rows")->required();
    add_common(closures);

    std::optional<std::size_t> lim_n;
    std::optional<double> lim_x;
    auto* limit = app.add_subcommand("solve-limit", "limit velocity profile at one station");
    limit->add_option("--n", lim_n, "grid points");
    limit->add_option("--x", lim_x, "station x (m), default crest");
    add_common(limit);

    std::optional<double> eps;
    std::optional<std::size_t> ns, nt;
    auto* sadim = app.add_subcommand("solve-adim", "adimensional problem at one eps");
    auto* tcheck = app.add_subcommand("transform-check", "Dorodnitzyn map, streamfunction and energy bound");
    for (auto* sub : {sadim, tcheck}) {
        sub->add_option("--eps", eps, "aspect ratio H / L");
        sub->add_option("--ns", ns, "stations along s");
        sub->add_option("--nt", nt, "nodes across the film");
        add_common(sub);
    }

    bool timing = false;
    std::optional<std::size_t> workers;
    auto* sweep = app.add_subcommand("sweep", "eps-convergence study");
    sweep->add_flag("--timing", timing, "record wall_time_ms");
    sweep->add_option("--workers", workers, "worker threads, 0 = all cores");
    add_common(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        if (!json_mode) return app.exit(e) == 0 ? 0 : 2;
        return fail(true, 2, "UsageError", e.what());
    }

    g_json_stderr = json_mode;
    try {
        json summary;
        if (*closures) summary = run_closures(common, table);
        else if (*limit) summary = run_solve_limit(common, lim_n, lim_x);
        else if (*sadim) summary = run_solve_adim(common, eps, ns, nt);
        else if (*tcheck) summary = run_transform_check(common, eps, ns, nt);
        else if (*sweep) summary = run_sweep(common, timing, workers);
        if (json_mode) std::cout << summary.dump(2) << '\n';
        else print_human(summary);
        return 0;
    } catch (const bll::ParseError& e) {
        return fail(json_mode, bll::exit_code_for(e.kind()), "ParseError", e.what(),
                    std::make_pair(e.line(), e.column()));
    } catch (const bll::Error& e) {
        return fail(json_mode, bll::exit_code_for(e.kind()), std::string(bll::to_string(e.kind())), e.what());
    } catch (const std::exception& e) {
        return fail(json_mode, 1, "InternalError", e.what());
    }
}
