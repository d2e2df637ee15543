#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bllimit/adim_solver.hpp"
#include "bllimit/core_types.hpp"
#include "bllimit/error.hpp"
#include "bllimit/experiments.hpp"
#include "bllimit/limit_solver.hpp"

namespace bll {

struct RunConfig {
    GasParameters gas;
    CurveDescriptor domain;
    std::filesystem::path table_path;

    AdimOptions solver;
    GridSize adim_grid;
    std::optional<double> adim_eps;  // default: the domain's own H / L

    LimitOptions limit;
    std::size_t limit_n = 1024;
    std::optional<double> limit_station;  // x in m; default: crest

    std::vector<double> sweep_eps{0.2, 0.1, 0.05, 0.025};
    GridSize sweep_grid;
    std::size_t sweep_workers = 0;
    bool sweep_timing = false;

    std::filesystem::path output_dir = "out";
    std::filesystem::path source;  // config file, empty for built-in defaults
};

// INI-style: [section] headers, key = value, '#' or ';' comments. Unknown keys are errors.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {});

// range checks on every field; throws ValidationError naming the field
void validate(const RunConfig& config);

// (x, h) samples, comma or whitespace separated, optional header line
CurveDescriptor read_curve_table(const std::filesystem::path& path);

SweepConfig make_sweep_config(const RunConfig& config);
nlohmann::json to_json(const RunConfig& config);

// process exit status for an error kind: 2 config, 3 solver, 4 I/O, 1 otherwise
int exit_code_for(ErrorKind kind) noexcept;

}  // namespace bll
