#include "bllimit/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace bll {

namespace {

std::string trim(const std::string& s, std::size_t& offset) {
    std::size_t a = 0;
    while (a < s.size() && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    std::size_t b = s.size();
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    offset = a;
    return s.substr(a, b - a);
}

struct Token {
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;  // 1-based
};

double parse_number(const Token& t) {
    double v = 0.0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || t.text.empty())
        throw ParseError("expected a number, got '" + t.text + "'", t.line, t.column);
    return v;
}

std::size_t parse_count(const Token& t) {
    std::size_t v = 0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || t.text.empty())
        throw ParseError("expected a non-negative integer, got '" + t.text + "'", t.line, t.column);
    return v;
}

bool parse_bool(const Token& t) {
    if (t.text == "true" || t.text == "yes" || t.text == "on" || t.text == "1") return true;
    if (t.text == "false" || t.text == "no" || t.text == "off" || t.text == "0") return false;
    throw ParseError("expected true or false, got '" + t.text + "'", t.line, t.column);
}

std::vector<double> parse_list(const Token& t) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= t.text.size()) {
        const std::size_t comma = t.text.find(',', start);
        const std::string piece = t.text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        std::size_t off = 0;
        Token item{trim(piece, off), t.line, t.column + start + off};
        out.push_back(parse_number(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

using Setter = std::function<void(RunConfig&, const Token&)>;

const std::map<std::string, std::map<std::string, Setter>>& schema() {
    static const std::map<std::string, std::map<std::string, Setter>> table = {
        {"gas",
         {
             {"U", [](RunConfig& c, const Token& t) { c.gas.U = parse_number(t); }},
             {"T_h", [](RunConfig& c, const Token& t) { c.gas.T_h = parse_number(t); }},
             {"mu_h", [](RunConfig& c, const Token& t) { c.gas.mu_h = parse_number(t); }},
             {"c_p", [](RunConfig& c, const Token& t) { c.gas.c_p = parse_number(t); }},
             {"R", [](RunConfig& c, const Token& t) { c.gas.R = parse_number(t); }},
             {"b", [](RunConfig& c, const Token& t) { c.gas.b = parse_number(t); }},
             {"p0", [](RunConfig& c, const Token& t) { c.gas.p0 = parse_number(t); }},
             {"power_law_exp", [](RunConfig& c, const Token& t) { c.gas.power_law_exp = parse_number(t); }},
         }},
        {"domain",
         {
             {"curve",
              [](RunConfig& c, const Token& t) {
                  try {
                      c.domain.family = curve_family_from_string(t.text);
                  } catch (const Error& e) {
                      throw ParseError(e.what(), t.line, t.column);
                  }
              }},
             {"L", [](RunConfig& c, const Token& t) { c.domain.length = parse_number(t); }},
             {"delta", [](RunConfig& c, const Token& t) { c.domain.delta = parse_number(t); }},
             {"H", [](RunConfig& c, const Token& t) { c.domain.height = parse_number(t); }},
             {"table_path", [](RunConfig& c, const Token& t) { c.table_path = t.text; }},
         }},
        {"solver",
         {
             {"relaxation", [](RunConfig& c, const Token& t) { c.solver.relaxation = parse_number(t); }},
             {"max_iterations", [](RunConfig& c, const Token& t) { c.solver.max_iterations = parse_count(t); }},
             {"tolerance", [](RunConfig& c, const Token& t) { c.solver.tolerance = parse_number(t); }},
             {"convection", [](RunConfig& c, const Token& t) { c.solver.convection = parse_bool(t); }},
             {"viscosity_exponent",
              [](RunConfig& c, const Token& t) { c.solver.viscosity_exponent = parse_number(t); }},
             {"n_s", [](RunConfig& c, const Token& t) { c.adim_grid.n_s = parse_count(t); }},
             {"n_t", [](RunConfig& c, const Token& t) { c.adim_grid.n_t = parse_count(t); }},
             {"eps", [](RunConfig& c, const Token& t) { c.adim_eps = parse_number(t); }},
         }},
        {"limit",
         {
             {"exponent", [](RunConfig& c, const Token& t) { c.limit.exponent = parse_number(t); }},
             {"n", [](RunConfig& c, const Token& t) { c.limit_n = parse_count(t); }},
             {"station", [](RunConfig& c, const Token& t) { c.limit_station = parse_number(t); }},
             {"quadrature_tol", [](RunConfig& c, const Token& t) { c.limit.quadrature_tol = parse_number(t); }},
         }},
        {"sweep",
         {
             {"eps_values", [](RunConfig& c, const Token& t) { c.sweep_eps = parse_list(t); }},
             {"n_s", [](RunConfig& c, const Token& t) { c.sweep_grid.n_s = parse_count(t); }},
             {"n_t", [](RunConfig& c, const Token& t) { c.sweep_grid.n_t = parse_count(t); }},
             {"workers", [](RunConfig& c, const Token& t) { c.sweep_workers = parse_count(t); }},
             {"record_timing", [](RunConfig& c, const Token& t) { c.sweep_timing = parse_bool(t); }},
         }},
        {"output",
         {
             {"dir", [](RunConfig& c, const Token& t) { c.output_dir = t.text; }},
         }},
    };
    return table;
}

[[noreturn]] void invalid(const std::string& field, const std::string& requirement, double got) {
    std::ostringstream os;
    os << field << ": must satisfy " << requirement << " (got " << got << ")";
    throw Error(ErrorKind::ValidationError, os.str());
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
    RunConfig config;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    std::string section;
    std::set<std::string> seen;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const std::size_t hash = raw.find_first_of("#;");
        const std::string body = hash == std::string::npos ? raw : raw.substr(0, hash);
        std::size_t off = 0;
        const std::string line = trim(body, off);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("section header must end with ']'", line_no, off + line.size());
            std::size_t inner_off = 0;
            section = trim(line.substr(1, line.size() - 2), inner_off);
            if (!schema().count(section))
                throw ParseError("unknown section [" + section + "]", line_no, off + 2 + inner_off);
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no, off + 1);
        std::size_t key_off = 0, val_off = 0;
        const std::string key = trim(line.substr(0, eq), key_off);
        const std::string value = trim(line.substr(eq + 1), val_off);
        const std::size_t key_col = off + key_off + 1;
        const std::size_t val_col = off + eq + 1 + val_off + 1;
        if (key.empty()) throw ParseError("missing key before '='", line_no, off + 1);
        if (section.empty()) throw ParseError("key '" + key + "' outside of any section", line_no, key_col);
        const auto& keys = schema().at(section);
        const auto it = keys.find(key);
        if (it == keys.end()) throw ParseError("unknown key '" + key + "' in [" + section + "]", line_no, key_col);
        if (!seen.insert(section + "." + key).second)
            throw ParseError("duplicate key '" + key + "' in [" + section + "]", line_no, key_col);
        if (value.empty()) throw ParseError("missing value for '" + key + "'", line_no, val_col);
        it->second(config, Token{value, line_no, val_col});
    }

    if (config.domain.family == CurveFamily::Table) {
        if (config.table_path.empty())
            throw Error(ErrorKind::ValidationError, "domain.table_path: required when curve = table");
        if (config.table_path.is_relative() && !base_dir.empty()) config.table_path = base_dir / config.table_path;
        const CurveDescriptor table = read_curve_table(config.table_path);
        config.domain.table_x = table.table_x;
        config.domain.table_h = table.table_h;
        config.domain.length = table.table_x.back();
        config.domain.delta = table.table_h.front();
    } else if (!config.table_path.empty()) {
        throw Error(ErrorKind::ValidationError, "domain.table_path: only valid with curve = table");
    }
    validate(config);
    return config;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    RunConfig c = parse_config_text(buf.str(), path.parent_path());
    c.source = path;
    return c;
}

CurveDescriptor read_curve_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot read curve table " + path.string());
    CurveDescriptor d;
    d.family = CurveFamily::Table;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
        for (char& ch : line)
            if (ch == ',' || ch == '\t' || ch == '\r') ch = ' ';
        std::istringstream fields(line);
        std::string a, b, extra;
        if (!(fields >> a)) continue;
        if (!(fields >> b) || (fields >> extra))
            throw ParseError("curve table: expected two columns (x, h)", line_no, 1);
        double x = 0.0, h = 0.0;
        auto ra = std::from_chars(a.data(), a.data() + a.size(), x);
        auto rb = std::from_chars(b.data(), b.data() + b.size(), h);
        const bool ok = ra.ec == std::errc() && ra.ptr == a.data() + a.size() && rb.ec == std::errc() &&
                        rb.ptr == b.data() + b.size();
        if (!ok) {
            if (d.table_x.empty() && line_no == 1) continue;  // header
            throw ParseError("curve table: non-numeric entry", line_no, 1);
        }
        d.table_x.push_back(x);
        d.table_h.push_back(h);
    }
    if (d.table_x.size() < 4) throw Error(ErrorKind::ValidationError, "curve table: need at least 4 samples");
    d.length = d.table_x.back();
    d.delta = d.table_h.front();
    return d;
}

void validate(const RunConfig& c) {
    const GasParameters& g = c.gas;
    if (!(g.U >= 0.0) || !std::isfinite(g.U)) invalid("gas.U", "U >= 0", g.U);
    if (!(g.T_h > 0.0)) invalid("gas.T_h", "T_h > 0", g.T_h);
    if (!(g.mu_h > 0.0)) invalid("gas.mu_h", "mu_h > 0", g.mu_h);
    if (!(g.c_p > 0.0)) invalid("gas.c_p", "c_p > 0", g.c_p);
    if (!(g.R > 0.0)) invalid("gas.R", "R > 0", g.R);
    if (!(g.b > 1.0)) invalid("gas.b", "b > 1", g.b);
    if (!(g.p0 > 0.0)) invalid("gas.p0", "p0 > 0", g.p0);
    if (!(g.power_law_exp >= 0.0)) invalid("gas.power_law_exp", "power_law_exp >= 0", g.power_law_exp);

    const CurveDescriptor& d = c.domain;
    if (!(d.length > 0.0)) invalid("domain.L", "L > 0", d.length);
    if (d.family != CurveFamily::Table) {
        if (!(d.delta > 0.0)) invalid("domain.delta", "delta > 0", d.delta);
        if (!(d.height > d.delta)) invalid("domain.H", "H > delta", d.height);
    }

    const AdimOptions& s = c.solver;
    if (!(s.relaxation > 0.0 && s.relaxation <= 1.0)) invalid("solver.relaxation", "0 < relaxation <= 1", s.relaxation);
    if (s.max_iterations < 1) invalid("solver.max_iterations", "max_iterations >= 1", 0.0);
    if (!(s.tolerance > 0.0)) invalid("solver.tolerance", "tolerance > 0", s.tolerance);
    if (!std::isnan(s.viscosity_exponent) && !(s.viscosity_exponent >= 0.0))
        invalid("solver.viscosity_exponent", "viscosity_exponent >= 0", s.viscosity_exponent);
    if (c.adim_grid.n_s < 3) invalid("solver.n_s", "n_s >= 3", static_cast<double>(c.adim_grid.n_s));
    if (c.adim_grid.n_t < 8) invalid("solver.n_t", "n_t >= 8", static_cast<double>(c.adim_grid.n_t));
    if (c.adim_eps && !(*c.adim_eps > 0.0)) invalid("solver.eps", "eps > 0", *c.adim_eps);

    if (!(c.limit.exponent >= 0.0)) invalid("limit.exponent", "exponent >= 0", c.limit.exponent);
    if (!(c.limit.quadrature_tol > 0.0)) invalid("limit.quadrature_tol", "quadrature_tol > 0", c.limit.quadrature_tol);
    if (c.limit_n < 2) invalid("limit.n", "n >= 2", static_cast<double>(c.limit_n));
    if (c.limit_station && !(*c.limit_station >= 0.0 && *c.limit_station <= d.length))
        invalid("limit.station", "0 <= station <= L", *c.limit_station);

    if (c.sweep_eps.empty()) throw Error(ErrorKind::ValidationError, "sweep.eps_values: must not be empty");
    for (std::size_t k = 0; k < c.sweep_eps.size(); ++k) {
        if (!(c.sweep_eps[k] > 0.0)) invalid("sweep.eps_values", "every eps > 0", c.sweep_eps[k]);
        if (k > 0 && !(c.sweep_eps[k] < c.sweep_eps[k - 1]))
            invalid("sweep.eps_values", "strictly decreasing order", c.sweep_eps[k]);
    }
    if (c.sweep_grid.n_s < 3) invalid("sweep.n_s", "n_s >= 3", static_cast<double>(c.sweep_grid.n_s));
    if (c.sweep_grid.n_t < 8) invalid("sweep.n_t", "n_t >= 8", static_cast<double>(c.sweep_grid.n_t));

    // structural checks owned by the model types
    (void)derive_constants(c.gas);
    (void)build_height_curve(c.domain);
}

SweepConfig make_sweep_config(const RunConfig& c) {
    SweepConfig s;
    s.eps_values = c.sweep_eps;
    s.grid = c.sweep_grid;
    s.gas = c.gas;
    s.domain = c.domain;
    s.solver = c.solver;
    s.limit = c.limit;
    s.workers = c.sweep_workers;
    s.output_dir = c.output_dir;
    s.record_timing = c.sweep_timing;
    return s;
}

nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json j;
    j["source"] = c.source.string();
    j["gas"] = to_json(c.gas);
    j["domain"] = to_json(c.domain);
    if (!c.table_path.empty()) j["domain"]["table_path"] = c.table_path.string();
    j["solver"] = to_json(c.solver);
    j["solver"]["n_s"] = c.adim_grid.n_s;
    j["solver"]["n_t"] = c.adim_grid.n_t;
    j["solver"]["eps"] = c.adim_eps ? nlohmann::json(*c.adim_eps) : nlohmann::json(nullptr);
    j["limit"] = to_json(c.limit);
    j["limit"]["n"] = c.limit_n;
    j["limit"]["station"] = c.limit_station ? nlohmann::json(*c.limit_station) : nlohmann::json(nullptr);
    j["sweep"] = {{"eps_values", c.sweep_eps},
                  {"n_s", c.sweep_grid.n_s},
                  {"n_t", c.sweep_grid.n_t},
                  {"workers", c.sweep_workers},
                  {"record_timing", c.sweep_timing}};
    j["output"] = {{"dir", c.output_dir.string()}};
    return j;
}

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::ParseError:
        case ErrorKind::ValidationError:
        case ErrorKind::NonPositiveLength:
        case ErrorKind::EndpointMismatch:
        case ErrorKind::MultipleCriticalPoints:
        case ErrorKind::InvalidPolytropicExponent:
        case ErrorKind::NonPhysicalParameter:
        case ErrorKind::GridTooCoarse:
            return 2;
        case ErrorKind::NonConvergence:
        case ErrorKind::SolveFailure:
        case ErrorKind::ValidityViolation:
        case ErrorKind::OutOfValidityRange:
        case ErrorKind::BracketFailure:
        case ErrorKind::QuadratureNonConvergence:
        case ErrorKind::DegenerateDensity:
        case ErrorKind::DegenerateMesh:
        case ErrorKind::PathDependence:
            return 3;
        case ErrorKind::IoError:
            return 4;
        case ErrorKind::GridMismatch:
        case ErrorKind::StationMismatch:
            return 1;
    }
    return 1;
}

}  // namespace bll
