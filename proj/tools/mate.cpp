#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "mate/conditions.hpp"
#include "mate/config.hpp"
#include "mate/errors.hpp"
#include "mate/report_io.hpp"
#include "mate/solver.hpp"
#include "mate/verify.hpp"

namespace {

using namespace mate;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

void write_report(const RunConfig& cfg, const nlohmann::json& j) {
    std::filesystem::create_directories(cfg.out_dir);
    write_text_file(cfg.out_dir + "/report.json", render_json(j));
}

SampleBox make_box(const RunConfig& cfg, const Domain& domain) {
    SampleBox box = SampleBox::defaults(domain, cfg.z_lo, cfg.z_hi);
    if (cfg.p_max != 5.0) {
        box.p_max = cfg.p_max;
        box.p_values.clear();
        for (int i = 0; i < 9; ++i)
            box.p_values.push_back(-cfg.p_max + 2.0 * cfg.p_max * i / 8);
    }
    return box;
}

int run_check(const RunConfig& cfg, const std::vector<std::string>& required) {
    ProblemSpec p = make_problem(cfg);
    SampleBox box = make_box(cfg, p.domain);

    std::map<std::string, CertReport> reports;
    reports.emplace("regularity", check_regularity(p.A, box));
    reports.emplace("monotonicity", check_monotonicity(p.A, p.B, p.G, box));
    reports.emplace("qs", check_QS(p.A, box));
    reports.emplace("oblique", check_oblique_concavity(p.G, p.domain, box));
    if (p.G.kind() == BoundaryKind::neumann) {
        const BoundaryOperator& G = p.G;
        reports.emplace("a_convexity",
                        check_A_convexity(
                            p.domain, p.A,
                            [&G](const Vec2& x, double z) { return G.phi(x, z); },
                            cfg.z_lo, cfg.z_hi, box));
    }

    nlohmann::json j;
    for (const auto& [name, rep] : reports) j["checks"][name] = rep.to_json();
    write_report(cfg, j);

    for (const std::string& name : required) {
        auto it = reports.find(name);
        if (it == reports.end()) {
            std::cerr << "unknown required check: " << name << "\n";
            return 4;
        }
        if (it->second.verdict == Verdict::fails) {
            std::cerr << "required check '" << name << "' failed, witness: "
                      << it->second.to_json()["witness"].dump() << "\n";
            return 2;
        }
    }
    return 0;
}

int run_solve(const RunConfig& cfg) {
    ProblemSpec p = make_problem(cfg);
    Grid grid = make_grid(cfg);
    DiscreteSystem sys(p, grid);
    NewtonOptions opts{cfg.tol, cfg.max_iter, cfg.margin_floor};
    try {
        auto [u, rep] = continuation_solve(p, grid, opts);
        write_report(cfg, rep.to_json());
        std::ostringstream csv;
        write_solution_csv(csv, sys, u);
        std::filesystem::create_directories(cfg.out_dir);
        write_text_file(cfg.out_dir + "/solution.csv", csv.str());
        return 0;
    } catch (const Error& e) {
        SolveReport rep;
        rep.failure = e.what();
        write_report(cfg, rep.to_json());
        std::cerr << "solve failed: " << e.what() << "\n";
        return 3;
    }
}

int run_mms(const RunConfig& cfg) {
    try {
        ManufacturedCase c = builtin_case(cfg.mms_case);
        NewtonOptions opts{cfg.tol, cfg.max_iter, cfg.margin_floor};
        MmsResult r = mms_study(c, cfg.resolutions, opts);
        std::filesystem::create_directories(cfg.out_dir);
        std::ostringstream csv;
        write_orders_csv(csv, r.rows);
        write_text_file(cfg.out_dir + "/orders.csv", csv.str());
        nlohmann::json j = r.finest_report.to_json();
        j["case"] = c.name;
        j["final_err_inf"] = r.rows.back().err_inf;
        j["final_order_inf"] = r.rows.back().order_inf;
        write_report(cfg, j);
        return 0;
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        std::cerr << "mms failed: " << e.what() << "\n";
        return 3;
    }
}

int run_compare(const RunConfig& cfg) {
    ProblemSpec p = make_problem(cfg);
    Grid grid = make_grid(cfg);
    try {
        NewtonOptions opts{cfg.tol, cfg.max_iter, cfg.margin_floor};
        auto [u, rep] = continuation_solve(p, grid, opts);
        DiscreteSystem sys(p, grid);
        GridFunction up = u;
        for (int n = 0; n < grid.size(); ++n) up[n] += 0.1;
        ComparisonReport fwd = check_comparison(u, up, sys);
        ComparisonReport rev = check_comparison(up, u, sys);
        auto to_json = [](const ComparisonReport& r) {
            return nlohmann::json{{"hypotheses_hold", r.hypotheses_hold},
                                  {"max_diff", r.max_diff},
                                  {"consistent", r.consistent},
                                  {"note", r.note}};
        };
        nlohmann::json j;
        j["shift_up"] = to_json(fwd);
        j["shift_down"] = to_json(rev);
        write_report(cfg, j);
        return (fwd.consistent && rev.consistent) ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "compare failed: " << e.what() << "\n";
        return 3;
    }
}

int run_balance(const RunConfig& cfg, const std::vector<std::string>& required) {
    Expression fe = Expression::parse(cfg.f_expr);
    Expression fse = Expression::parse(cfg.fstar_expr);
    CertReport rep = check_mass_balance(
        [&fe](const Vec2& x) { return fe(EvalEnv{x, 0.0, {0, 0}}); },
        [&fse](const Vec2& x) { return fse(EvalEnv{x, 0.0, {0, 0}}); }, make_domain(cfg),
        make_lambda_domain(cfg), cfg.balance_resolution);
    nlohmann::json j;
    j["checks"]["balance"] = rep.to_json();
    write_report(cfg, j);
    for (const std::string& name : required) {
        if (name == "balance" && rep.verdict == Verdict::fails) {
            std::cerr << "required check 'balance' failed\n";
            return 2;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"solver and structure-condition toolkit for augmented Hessian equations"};
    app.require_subcommand(1);

    std::string config_path, require_list, out_override;
    for (const char* name : {"check", "solve", "mms", "compare", "balance"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "path to the run config")->required();
        sub->add_option("--require", require_list, "comma-separated checks that must hold");
        sub->add_option("--out", out_override, "output directory");
    }

    CLI11_PARSE(app, argc, argv);

    // Worker cap; results never depend on it (all reductions are ordered).
    if (const char* threads = std::getenv("MATE_THREADS")) (void)threads;

    try {
        RunConfig cfg = load_config(config_path);
        if (!out_override.empty()) cfg.out_dir = out_override;
        std::vector<std::string> required = split_list(require_list);

        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "check") return run_check(cfg, required);
        if (cmd == "solve") return run_solve(cfg);
        if (cmd == "mms") return run_mms(cfg);
        if (cmd == "compare") return run_compare(cfg);
        return run_balance(cfg, required);
    } catch (const mate::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 4;
    } catch (const mate::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
