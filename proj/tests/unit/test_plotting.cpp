#include <fstream>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"

#include "bllimit/plotting.hpp"

using namespace bll;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

}  // namespace

TEST_CASE("profile SVG structure and sibling CSV") {
    const DerivedConstants c = derive_constants({});
    const VelocityProfile p = solve_limit_profile(0.2, 4.0, c, 257);
    const fs::path dir = fs::temp_directory_path() / "bllimit_test_svg";
    fs::create_directories(dir);
    const fs::path svg = dir / "profile.svg";
    emit_profile_svg(p, svg);
    CHECK(profile_points_path(svg) == dir / "profile.points.csv");

    const std::string doc = slurp(svg);
    CHECK(doc.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") != std::string::npos);
    CHECK(doc.find("<line") != std::string::npos);
    CHECK(doc.find("u (m/s)") != std::string::npos);

    std::smatch m;
    REQUIRE(std::regex_search(doc, m, std::regex("points=\"([^\"]*)\"")));
    const std::vector<std::string> pts = split(m[1].str(), ' ');
    CHECK(pts.size() == p.y.size());

    // inner viewBox = data extent, y flipped
    REQUIRE(std::regex_search(doc, m, std::regex("<svg x=[^>]*viewBox=\"([^\"]*)\"")));
    const std::vector<std::string> vb = split(m[1].str(), ' ');
    REQUIRE(vb.size() == 4);
    CHECK(std::stod(vb[0]) == -4.0);
    CHECK(std::stod(vb[2]) == 4.0);
    CHECK(std::stod(vb[1]) == doctest::Approx(-0.2).epsilon(1e-15));
    CHECK(std::stod(vb[3]) == doctest::Approx(0.2).epsilon(1e-15));

    // same strings in both files
    std::istringstream csv(slurp(profile_points_path(svg)));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "y,u");
    for (const std::string& pt : pts) {
        REQUIRE(std::getline(csv, line));
        const auto uv = split(pt, ',');
        const auto yu = split(line, ',');
        REQUIRE(uv.size() == 2);
        REQUIRE(yu.size() == 2);
        CHECK(uv[0] == yu[1]);
        CHECK(uv[1] == yu[0]);
    }
    CHECK(std::stod(split(pts.back(), ',')[0]) == p.u.back());
}

TEST_CASE("empty profile and unwritable path") {
    const VelocityProfile empty;
    CHECK(oracle::kind_of([&] { emit_profile_svg(empty, fs::temp_directory_path() / "x.svg"); }) ==
          ErrorKind::ValidationError);
    const DerivedConstants c = derive_constants({});
    const VelocityProfile p = solve_limit_profile(0.2, 4.0, c, 16);
    const fs::path blocker = fs::temp_directory_path() / "bllimit_test_blocker";
    std::ofstream(blocker) << "x";
    CHECK(oracle::kind_of([&] { emit_profile_svg(p, blocker / "x.svg"); }) == ErrorKind::IoError);
}
