#include <fstream>

#include "doctest.h"
#include "oracles.hpp"

#include "bllimit/config.hpp"

using namespace bll;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
    const fs::path p = fs::temp_directory_path() / "bllimit_test_config";
    fs::create_directories(p);
    return p;
}

template <class F>
std::optional<std::pair<std::size_t, std::size_t>> where(F&& f) {
    try {
        f();
    } catch (const ParseError& e) {
        return std::make_pair(e.line(), e.column());
    }
    return std::nullopt;
}

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("minimal config gets every default") {
    const RunConfig c = parse_config_text("[gas]\nU = 4\n[domain]\ncurve = parabolic\nL = 1\n");
    const RunConfig d;
    CHECK(c.solver.relaxation == d.solver.relaxation);
    CHECK(c.solver.max_iterations == 10000);
    CHECK(c.solver.tolerance == 1e-10);
    CHECK(c.solver.convection);
    CHECK(c.limit.exponent == doctest::Approx(0.24));
    CHECK(c.limit_n == 1024);
    CHECK(c.sweep_eps == std::vector<double>{0.2, 0.1, 0.05, 0.025});
    CHECK(c.sweep_grid.n_s == 64);
    CHECK(c.sweep_grid.n_t == 128);
    CHECK(c.gas.b == 1.405);
}

TEST_CASE("values are read") {
    const RunConfig c = parse_config_text(R"(# comment
[gas]
U = 12.5   ; trailing comment
b = 1.4
[domain]
curve = sine
L = 2
delta = 0.05
H = 0.15
[solver]
relaxation = 0.5
convection = false
n_s = 40
eps = 0.075
[limit]
n = 300
station = 0.4
[sweep]
eps_values = 0.1, 0.05
workers = 2
record_timing = yes
[output]
dir = results
)");
    CHECK(c.gas.U == 12.5);
    CHECK(c.gas.b == 1.4);
    CHECK(c.domain.family == CurveFamily::Sine);
    CHECK(c.domain.length == 2.0);
    CHECK(c.solver.relaxation == 0.5);
    CHECK_FALSE(c.solver.convection);
    CHECK(c.adim_grid.n_s == 40);
    CHECK(*c.adim_eps == 0.075);
    CHECK(c.limit_n == 300);
    CHECK(*c.limit_station == 0.4);
    CHECK(c.sweep_eps == std::vector<double>{0.1, 0.05});
    CHECK(c.sweep_workers == 2);
    CHECK(c.sweep_timing);
    CHECK(c.output_dir == "results");
}

TEST_CASE("b = 0.9 names the field and the requirement") {
    const std::string m = message_of([] { parse_config_text("[gas]\nb = 0.9\n"); });
    CHECK(m.find("b") != std::string::npos);
    CHECK(m.find("b > 1") != std::string::npos);
    CHECK(oracle::kind_of([] { parse_config_text("[gas]\nb = 0.9\n"); }) == ErrorKind::ValidationError);
}

TEST_CASE("missing file is an I/O error that names the path") {
    const fs::path p = scratch() / "does_not_exist.ini";
    CHECK(oracle::kind_of([&] { parse_config(p); }) == ErrorKind::IoError);
    CHECK(message_of([&] { parse_config(p); }).find(p.string()) != std::string::npos);
}

TEST_CASE("strict parsing with positions") {
    CHECK(where([] { parse_config_text("[gas]\nU = 4\n  colour = red\n"); }) == std::make_pair(std::size_t{3}, std::size_t{3}));
    CHECK(where([] { parse_config_text("[gas]\nU = 4\nU = 5\n"); }) == std::make_pair(std::size_t{3}, std::size_t{1}));
    CHECK(where([] { parse_config_text("[weather]\n"); }) == std::make_pair(std::size_t{1}, std::size_t{2}));
    CHECK(where([] { parse_config_text("U = 4\n"); }) == std::make_pair(std::size_t{1}, std::size_t{1}));
    CHECK(where([] { parse_config_text("[gas]\nU 4\n"); }) == std::make_pair(std::size_t{2}, std::size_t{1}));
    CHECK(where([] { parse_config_text("[gas]\nU = fast\n"); }) == std::make_pair(std::size_t{2}, std::size_t{5}));
    CHECK(where([] { parse_config_text("[gas\n"); }).has_value());
    CHECK(where([] { parse_config_text("[sweep]\neps_values = 0.2, x\n"); }) ==
          std::make_pair(std::size_t{2}, std::size_t{19}));
    CHECK(where([] { parse_config_text("[solver]\nconvection = maybe\n"); }).has_value());
    CHECK(where([] { parse_config_text("[solver]\nn_s = -3\n"); }).has_value());
    CHECK(oracle::kind_of([] { parse_config_text("[gas]\nfoo = 1\n"); }) == ErrorKind::ParseError);
}

TEST_CASE("range checks") {
    for (const char* text : {"[gas]\nU = -1\n", "[gas]\nT_h = 0\n", "[domain]\nL = 0\n", "[domain]\nH = 0.05\n",
                             "[solver]\nrelaxation = 1.5\n", "[solver]\ntolerance = 0\n", "[solver]\nn_t = 4\n",
                             "[limit]\nn = 1\n", "[limit]\nstation = 3\n", "[sweep]\neps_values = 0.1, 0.2\n",
                             "[sweep]\neps_values = 0.1, -0.1\n"}) {
        CAPTURE(text);
        CHECK(oracle::kind_of([&] { parse_config_text(text); }) == ErrorKind::ValidationError);
    }
}

TEST_CASE("curve tables are resolved against the config directory") {
    const fs::path dir = scratch();
    {
        std::ofstream t(dir / "roof.csv");
        t << "x,h\n0,0.1\n0.25,0.15\n0.5,0.2\n0.75,0.15\n1,0.1\n";
    }
    {
        std::ofstream c(dir / "run.ini");
        c << "[domain]\ncurve = table\ntable_path = roof.csv\n";
    }
    const RunConfig c = parse_config(dir / "run.ini");
    CHECK(c.domain.table_x.size() == 5);
    CHECK(c.domain.length == 1.0);
    CHECK(c.source == dir / "run.ini");
    {
        std::ofstream c2(dir / "lost.ini");
        c2 << "[domain]\ncurve = table\ntable_path = nowhere.csv\n";
    }
    CHECK(oracle::kind_of([&] { parse_config(dir / "lost.ini"); }) == ErrorKind::IoError);
    CHECK(oracle::kind_of([] { parse_config_text("[domain]\ncurve = table\n"); }) == ErrorKind::ValidationError);
}

TEST_CASE("structural curve errors surface from validation") {
    CHECK(oracle::kind_of([] { parse_config_text("[domain]\ncurve = wedge\n"); }) == ErrorKind::ParseError);
    CHECK(where([] { parse_config_text("[domain]\ncurve = wedge\n"); }) == std::make_pair(std::size_t{2}, std::size_t{9}));
}

TEST_CASE("exit codes") {
    CHECK(exit_code_for(ErrorKind::ParseError) == 2);
    CHECK(exit_code_for(ErrorKind::ValidationError) == 2);
    CHECK(exit_code_for(ErrorKind::InvalidPolytropicExponent) == 2);
    CHECK(exit_code_for(ErrorKind::NonConvergence) == 3);
    CHECK(exit_code_for(ErrorKind::SolveFailure) == 3);
    CHECK(exit_code_for(ErrorKind::IoError) == 4);
}

TEST_CASE("config echo") {
    const RunConfig c = parse_config_text("[gas]\nU = 3\n");
    const auto j = to_json(c);
    CHECK(j["gas"]["U"] == 3.0);
    CHECK(j["sweep"]["eps_values"].size() == 4);
    CHECK(j["solver"]["eps"].is_null());
}
