#pragma once

#include <filesystem>

#include "bllimit/limit_solver.hpp"

namespace bll {

// sibling CSV of the SVG: <stem>.points.csv next to it
std::filesystem::path profile_points_path(const std::filesystem::path& svg_path);

// u vs y as a self-contained SVG with axes, plus the sibling CSV of the same points
void emit_profile_svg(const VelocityProfile& profile, const std::filesystem::path& path);

}  // namespace bll
