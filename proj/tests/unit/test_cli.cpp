#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path work = fs::temp_directory_path() / "bllimit_test_cli";

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Run run(const std::string& args) {
    fs::create_directories(work);
    const fs::path o = work / "stdout.txt", e = work / "stderr.txt";
    const std::string cmd = std::string("\"") + BLLIMIT_CLI_PATH + "\" " + args + " >\"" + o.string() + "\" 2>\"" +
                            e.string() + "\"";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(o), slurp(e)};
}

fs::path write(const std::string& name, const std::string& text) {
    fs::create_directories(work);
    const fs::path p = work / name;
    std::ofstream(p) << text;
    return p;
}

const std::string config = std::string(BLLIMIT_SOURCE_DIR) + "/configs/default.ini";

}  // namespace

TEST_CASE("version") {
    const Run r = run("--version");
    CHECK(r.code == 0);
    CHECK(r.out.find(BLLIMIT_VERSION) != std::string::npos);
}

TEST_CASE("closures table") {
    const Run r = run("closures --table 5");
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "u,sigma,T,p,rho,rho_constp,mu,E");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 5);
    CHECK(r.out.find("\n0,1,") != std::string::npos);
}

TEST_CASE("solve-limit writes CSV, SVG, points and meta") {
    const fs::path out = work / "limit" / "profile.csv";
    const Run r = run("--json solve-limit --config \"" + config + "\" --n 128 --out \"" + out.string() + "\"");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["n"] == 128);
    CHECK(j["residual_max"].get<double>() <= 1e-6);
    CHECK(fs::exists(out));
    CHECK(fs::exists(work / "limit" / "profile.svg"));
    CHECK(fs::exists(work / "limit" / "profile.points.csv"));
    const auto meta = nlohmann::json::parse(slurp(work / "limit" / "profile.meta.json"));
    CHECK(meta["version"] == BLLIMIT_VERSION);
    CHECK(meta["config"]["limit"]["n"] == 128);  // flag beat the file
    std::istringstream csv(slurp(out));
    std::string header;
    std::getline(csv, header);
    CHECK(header == "y,u,T,p,rho,mu");
}

TEST_CASE("solve-adim and transform-check") {
    const fs::path fields = work / "fields.csv";
    Run r = run("solve-adim --config \"" + config + "\" --eps 0.1 --ns 17 --nt 24 --out \"" + fields.string() + "\"");
    REQUIRE(r.code == 0);
    std::istringstream csv(slurp(fields));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "s,tau,u_eps,v_eps,rho_eps,sigma");
    int rows = 0;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 17 * 24);

    const fs::path rep = work / "report.json";
    r = run("transform-check --config \"" + config + "\" --eps 0.1 --ns 17 --nt 24 --out \"" + rep.string() + "\"");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(slurp(rep));
    for (const char* key : {"jacobian_max_dev", "div_l2", "f2_boundary_max", "energy_lhs", "energy_rhs", "satisfied"})
        CHECK(j.contains(key));
    CHECK(j["satisfied"] == true);
    CHECK(j["version"] == BLLIMIT_VERSION);
}

TEST_CASE("sweep run directory") {
    const fs::path dir = work / "sweeps";
    fs::remove_all(dir);
    const fs::path cfg = write("small.ini", "[sweep]\neps_values = 0.2, 0.1\nn_s = 17\nn_t = 24\n");
    const Run r = run("--json sweep --config \"" + cfg.string() + "\" --out \"" + dir.string() + "\"");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(fs::exists(j["csv"].get<std::string>()));
    CHECK(fs::exists(j["json"].get<std::string>()));
    CHECK(j["rows"].size() == 2);
}

TEST_CASE("config errors: exit 2 with JSON on stderr") {
    const fs::path bad = write("bad.ini", "[gas]\nb = 0.9\n");
    Run r = run("--json solve-limit --config \"" + bad.string() + "\"");
    CHECK(r.code == 2);
    auto j = nlohmann::json::parse(r.err);
    CHECK(j["error"]["kind"] == "ValidationError");
    CHECK(j["error"]["message"].get<std::string>().find("b > 1") != std::string::npos);

    const fs::path typo = write("typo.ini", "[solver]\nrelaxtion = 0.5\n");
    r = run("--json solve-adim --config \"" + typo.string() + "\"");
    CHECK(r.code == 2);
    j = nlohmann::json::parse(r.err);
    CHECK(j["error"]["kind"] == "ParseError");
    CHECK(j["error"]["line"] == 2);
    CHECK(j["error"]["column"] == 1);

    r = run("--json solve-limit --bogus");
    CHECK(r.code == 2);
    CHECK(nlohmann::json::accept(r.err));
}

TEST_CASE("missing config: exit 4") {
    const Run r = run("--json closures --table 3 --config \"" + (work / "absent.ini").string() + "\"");
    CHECK(r.code == 4);
    const auto j = nlohmann::json::parse(r.err);
    CHECK(j["error"]["kind"] == "IoError");
    CHECK(j["error"]["message"].get<std::string>().find("absent.ini") != std::string::npos);
}

TEST_CASE("non-convergence: exit 3") {
    const fs::path cfg = write("short.ini", "[solver]\nmax_iterations = 2\n");
    const Run r = run("--json solve-adim --config \"" + cfg.string() + "\" --ns 17 --nt 24 --out \"" +
                      (work / "f.csv").string() + "\"");
    CHECK(r.code == 3);
    CHECK(nlohmann::json::parse(r.err)["error"]["kind"] == "NonConvergence");
}

TEST_CASE("unwritable output: exit 4") {
    // a regular file where a directory is needed
    const fs::path blocker = write("blocker", "x");
    const Run r = run("closures --table 3 --out \"" + (blocker / "x.csv").string() + "\"");
    CHECK(r.code == 4);
}
