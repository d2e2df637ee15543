#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "bllimit/adim_solver.hpp"
#include "bllimit/limit_solver.hpp"
#include "bllimit/transforms.hpp"

namespace bll {

struct GridSize {
    std::size_t n_s = 64;
    std::size_t n_t = 128;
};

struct SweepConfig {
    std::vector<double> eps_values{0.2, 0.1, 0.05, 0.025};
    GridSize grid;                   // used for every eps unless per_eps_grid is given
    std::vector<GridSize> per_eps_grid;
    GasParameters gas;
    CurveDescriptor domain;
    AdimOptions solver;
    LimitOptions limit;
    std::size_t workers = 0;         // 0: available cores
    std::filesystem::path output_dir;  // empty: no artifacts
    bool record_timing = false;      // wall_time_ms column in the CSV
};

struct SweepRow {
    double eps = 0.0;
    std::size_t n_s = 0, n_t = 0;
    double l2_error_rel = 0.0;
    double momentum_residual = 0.0;
    double continuity_residual = 0.0;
    EnergyReport energy;
    std::size_t iterations = 0;
    double final_update_norm = 0.0;
    double jacobian_max_dev = 0.0;
    double div_l2 = 0.0;
    double f2_boundary_max = 0.0;
    double f2_boundary_defect = 0.0;
    double f2_laplacian_l2 = 0.0;
    double max_loop_integral = 0.0;
    double wall_time_ms = 0.0;
    std::vector<std::string> warnings;
};

struct ConvergenceReport {
    std::vector<SweepRow> rows;
    std::filesystem::path run_dir;
    std::filesystem::path csv_path;
    std::filesystem::path json_path;
};

// per-station limit profiles (stations 0 .. n_s - 2) on the grid's tau_hat nodes
std::vector<VelocityProfile> limit_profiles_for(const Grid2D& grid, const DerivedConstants& constants,
                                                const LimitOptions& opts = {});

double compare_l2(const Field2D& u, std::span<const VelocityProfile> limits);

// one eps: solve, transform, compare
SweepRow evaluate_epsilon(double eps, const HeightCurve& base_curve, const DerivedConstants& constants,
                          const GridSize& grid, const AdimOptions& solver, const LimitOptions& limit);

ConvergenceReport run_epsilon_sweep(const SweepConfig& config);

void write_report_csv(const ConvergenceReport& report, const std::filesystem::path& path, bool record_timing);

nlohmann::json to_json(const GasParameters& gas);
nlohmann::json to_json(const CurveDescriptor& domain);
nlohmann::json to_json(const AdimOptions& opts);
nlohmann::json to_json(const LimitOptions& opts);
nlohmann::json to_json(const SweepConfig& config);
nlohmann::json to_json(const SweepRow& row);
nlohmann::json environment_stamp();

}  // namespace bll
