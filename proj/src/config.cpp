#include "mate/config.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "mate/errors.hpp"
#include "mate/expression.hpp"

namespace mate {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                               diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

[[noreturn]] void unknown_name(const std::string& field, const std::string& got,
                               const std::vector<std::string>& valid) {
    std::string best = valid.front();
    std::size_t bd = std::numeric_limits<std::size_t>::max();
    for (const std::string& v : valid) {
        std::size_t d = edit_distance(got, v);
        if (d < bd) { bd = d; best = v; }
    }
    throw ConfigError("unknown " + field + " '" + got + "'; nearest match is '" + best + "'");
}

double parse_double(const std::string& field, const std::string& v) {
    try {
        std::size_t used;
        double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("field " + field + ": expected a number, got '" + v + "'");
    }
}

int parse_int(const std::string& field, const std::string& v) {
    double d = parse_double(field, v);
    int i = static_cast<int>(d);
    if (i != d) throw ConfigError("field " + field + ": expected an integer, got '" + v + "'");
    return i;
}

Vec2 parse_vec(const std::string& field, const std::string& v) {
    std::istringstream ss(v);
    std::string a, b, rest;
    if (!(ss >> a >> b) || (ss >> rest))
        throw ConfigError("field " + field + ": expected two numbers, got '" + v + "'");
    return {parse_double(field, a), parse_double(field, b)};
}

void check_expression(const std::string& field, const std::string& text) {
    try {
        Expression::parse(text);
    } catch (const Error& e) {
        throw ConfigError("field " + field + ": " + e.what());
    }
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file: " + path);

    RunConfig cfg;
    std::string section, line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            const std::vector<std::string> sections = {"domain",  "lambda", "grid",
                                                       "problem", "solve",  "checks",
                                                       "mms",     "balance", "output"};
            if (std::find(sections.begin(), sections.end(), section) == sections.end())
                unknown_name("section (line " + std::to_string(lineno) + ")", section,
                             sections);
            if (section == "lambda") cfg.has_lambda = true;
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        std::string field = section + "." + key;

        auto domain_key = [&](DomainKind& kind, Vec2& center, double& radius, Vec2& extents,
                              CornerConvention* corners) {
            if (key == "kind") {
                if (val == "disk") kind = DomainKind::disk;
                else if (val == "rectangle") kind = DomainKind::rectangle;
                else unknown_name(field, val, {"disk", "rectangle"});
            } else if (key == "center") center = parse_vec(field, val);
            else if (key == "radius") radius = parse_double(field, val);
            else if (key == "extents") extents = parse_vec(field, val);
            else if (key == "corners" && corners) {
                if (val == "average") *corners = CornerConvention::average;
                else if (val == "reject") *corners = CornerConvention::reject;
                else unknown_name(field, val, {"average", "reject"});
            } else
                unknown_name(field, key, {"kind", "center", "radius", "extents", "corners"});
        };

        if (section == "domain") {
            domain_key(cfg.domain_kind, cfg.center, cfg.radius, cfg.extents, &cfg.corners);
        } else if (section == "lambda") {
            domain_key(cfg.lambda_kind, cfg.lambda_center, cfg.lambda_radius,
                       cfg.lambda_extents, nullptr);
        } else if (section == "grid") {
            if (key == "n_r" || key == "n_x") cfg.grid_a = parse_int(field, val);
            else if (key == "n_theta" || key == "n_y") cfg.grid_b = parse_int(field, val);
            else unknown_name(field, key, {"n_r", "n_theta", "n_x", "n_y"});
        } else if (section == "problem") {
            if (key == "A") {
                const std::vector<std::string> names = {"zero", "conformal", "ot:dot",
                                                        "ot:quad"};
                if (std::find(names.begin(), names.end(), val) == names.end())
                    unknown_name(field, val, names);
                cfg.A_name = val;
            } else if (key == "B") {
                check_expression(field, val);
                cfg.B_expr = val;
            } else if (key == "boundary") {
                if (val != "neumann" && val != "oblique")
                    unknown_name(field, val, {"neumann", "oblique"});
                cfg.boundary = val;
            } else if (key == "phi") {
                check_expression(field, val);
                cfg.phi_expr = val;
            } else if (key == "G") {
                if (val != "capped-gradient") unknown_name(field, val, {"capped-gradient"});
                cfg.G_name = val;
            } else if (key == "z_lo") cfg.z_lo = parse_double(field, val);
            else if (key == "z_hi") cfg.z_hi = parse_double(field, val);
            else if (key == "pin") {
                std::istringstream ss(val);
                std::string a, b, c;
                if (!(ss >> a >> b >> c))
                    throw ConfigError("field " + field + ": expected 'x1 x2 value'");
                cfg.has_pin = true;
                cfg.pin_point = {parse_double(field, a), parse_double(field, b)};
                cfg.pin_value = parse_double(field, c);
            } else
                unknown_name(field, key,
                             {"A", "B", "boundary", "phi", "G", "z_lo", "z_hi", "pin"});
        } else if (section == "solve") {
            if (key == "tol") cfg.tol = parse_double(field, val);
            else if (key == "max_iter") cfg.max_iter = parse_int(field, val);
            else if (key == "margin_floor") cfg.margin_floor = parse_double(field, val);
            else unknown_name(field, key, {"tol", "max_iter", "margin_floor"});
        } else if (section == "checks") {
            if (key == "p_max") cfg.p_max = parse_double(field, val);
            else if (key == "K") cfg.K = parse_double(field, val);
            else unknown_name(field, key, {"p_max", "K"});
        } else if (section == "mms") {
            if (key == "case") cfg.mms_case = val;
            else if (key == "resolutions") {
                cfg.resolutions.clear();
                std::istringstream ss(val);
                std::string tok;
                while (ss >> tok) cfg.resolutions.push_back(parse_int(field, tok));
                if (cfg.resolutions.empty())
                    throw ConfigError("field " + field + ": needs at least one value");
            } else
                unknown_name(field, key, {"case", "resolutions"});
        } else if (section == "balance") {
            if (key == "f") { check_expression(field, val); cfg.f_expr = val; }
            else if (key == "fstar") { check_expression(field, val); cfg.fstar_expr = val; }
            else if (key == "resolution") cfg.balance_resolution = parse_int(field, val);
            else unknown_name(field, key, {"f", "fstar", "resolution"});
        } else if (section == "output") {
            if (key == "dir") cfg.out_dir = val;
            else unknown_name(field, key, {"dir"});
        } else {
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        }
    }

    if (cfg.boundary == "oblique" && cfg.G_name.empty())
        throw ConfigError("problem.boundary = oblique requires problem.G");
    if (!(cfg.z_lo < cfg.z_hi)) throw ConfigError("problem.z_lo must be below problem.z_hi");
    return cfg;
}

Domain make_domain(const RunConfig& cfg) {
    if (cfg.domain_kind == DomainKind::disk) return Domain::disk(cfg.center, cfg.radius);
    return Domain::rectangle(cfg.center, cfg.extents, cfg.corners);
}

Domain make_lambda_domain(const RunConfig& cfg) {
    if (!cfg.has_lambda) return make_domain(cfg);
    if (cfg.lambda_kind == DomainKind::disk)
        return Domain::disk(cfg.lambda_center, cfg.lambda_radius);
    return Domain::rectangle(cfg.lambda_center, cfg.lambda_extents);
}

ProblemSpec make_problem(const RunConfig& cfg) {
    ProblemSpec p;
    p.domain = make_domain(cfg);
    if (cfg.A_name == "zero") p.A = make_zero_A();
    else if (cfg.A_name == "conformal") p.A = make_conformal_A();
    else if (cfg.A_name == "ot:dot") p.A = make_ot_A(CostFunction::dot_product());
    else p.A = make_ot_A(CostFunction::neg_half_sqdist());

    p.B = ScalarField::from_expression(Expression::parse(cfg.B_expr), true);

    if (cfg.boundary == "neumann") {
        Expression phi = Expression::parse(cfg.phi_expr);
        p.G = make_neumann_G(p.domain, [phi](const Vec2& x, double z) {
            return phi(EvalEnv{x, z, {0, 0}});
        });
    } else {
        // capped-gradient: obliquely perturbed Neumann with concave p-part
        p.G = BoundaryOperator::oblique(
            [](const BoundaryPoint& bp, double z, const Vec2& p_) {
                return dot(bp.normal, p_) - norm2(p_) / 10.0 - z;
            });
    }
    p.z_lo = cfg.z_lo;
    p.z_hi = cfg.z_hi;
    if (cfg.has_pin) p.pin = ProblemSpec::Pin{cfg.pin_point, cfg.pin_value};
    return p;
}

Grid make_grid(const RunConfig& cfg) { return Grid::build(make_domain(cfg), cfg.grid_a, cfg.grid_b); }

}  // namespace mate
