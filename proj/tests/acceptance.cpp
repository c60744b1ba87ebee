// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "mate/conditions.hpp"
#include "mate/errors.hpp"
#include "mate/solver.hpp"
#include "mate/verify.hpp"

using namespace mate;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, const std::string& desc, bool pass, const std::string& detail) {
    std::printf("%s - criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", id, desc.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

template <typename F>
void criterion(int id, const std::string& desc, F body) {
    try {
        auto [pass, detail] = body();
        report(id, desc, pass, detail);
    } catch (const std::exception& e) {
        report(id, desc, false, std::string("exception: ") + e.what());
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SampleBox default_box() {
    return SampleBox::defaults(Domain::disk({0, 0}, 1.0), -1.0, 1.0);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

int main() {
    criterion(1, "regularity certifier margins and runtime", []() {
        std::ostringstream d;
        bool ok = true;

        auto t0 = std::chrono::steady_clock::now();
        CertReport conf = check_regularity(make_conformal_A(), default_box());
        double t_conf = seconds_since(t0);
        ok = ok && std::abs(conf.margin - 1.0) <= 1e-6 && t_conf <= 5.0;

        MatrixField conf_fd([](const Vec2&, double, const Vec2& p) {
            return 0.5 * norm2(p) * Sym2::identity() - Sym2::outer(p);
        });
        t0 = std::chrono::steady_clock::now();
        CertReport fd = check_regularity(conf_fd, default_box());
        double t_fd = seconds_since(t0);
        ok = ok && std::abs(fd.margin - 1.0) <= 5e-3 && t_fd <= 5.0;

        t0 = std::chrono::steady_clock::now();
        CertReport zero = check_regularity(make_zero_A(), default_box());
        ok = ok && std::abs(zero.margin) <= 1e-9 && zero.verdict == Verdict::holds_weakly &&
             seconds_since(t0) <= 5.0;

        MatrixField neg([](const Vec2&, double, const Vec2& p) {
            return -norm2(p) * Sym2::identity();
        });
        t0 = std::chrono::steady_clock::now();
        CertReport bad = check_regularity(neg, default_box());
        ok = ok && std::abs(bad.margin + 2.0) <= 1e-6 && bad.verdict == Verdict::fails &&
             seconds_since(t0) <= 5.0;

        d << "margins " << fmt(conf.margin) << "/" << fmt(fd.margin) << "/"
          << fmt(zero.margin) << "/" << fmt(bad.margin) << ", slowest "
          << fmt(std::max(t_conf, t_fd)) << "s";
        return std::pair{ok, d.str()};
    });

    criterion(2, "A-convexity margin equals 1/R + phi in all 12 combinations", []() {
        bool ok = true;
        double worst = 0.0;
        for (double R : {0.5, 1.0, 2.0}) {
            Domain dom = Domain::disk({0, 0}, R);
            SampleBox box = SampleBox::defaults(dom, -2.0, 2.0);
            for (double phi : {-1.5, -0.5, 0.0, 0.4}) {
                CertReport r = check_A_convexity(
                    dom, make_conformal_A(),
                    [phi](const Vec2&, double) { return phi; }, -2.0, 2.0, box);
                double want = 1.0 / R + phi;
                worst = std::max(worst, std::abs(r.margin - want));
                ok = ok && std::abs(r.margin - want) <= 1e-6 &&
                     r.verdict == verdict_from_margin(want);
            }
        }
        return std::pair{ok, "max deviation " + fmt(worst)};
    });

    criterion(3, "QS constants for conformal A and A = -I", []() {
        SampleBox wide = default_box();
        wide.p_max = 10.0;
        wide.p_values.clear();
        for (int i = 0; i < 9; ++i) wide.p_values.push_back(-10.0 + 20.0 * i / 8);
        double mu_conf = check_QS(make_conformal_A(), wide).constants.at("mu0");
        MatrixField negI([](const Vec2&, double, const Vec2&) { return -Sym2::identity(); });
        double mu_negI = check_QS(negI, default_box()).constants.at("mu0");
        bool ok = std::abs(mu_conf - 100.0 / 202.0) / (100.0 / 202.0) <= 0.02 &&
                  std::abs(mu_negI - 1.0) <= 1e-9;
        return std::pair{ok, "mu0 " + fmt(mu_conf) + " / " + fmt(mu_negI)};
    });

    criterion(4, "OT generator through the Newton inversion path", []() {
        MatrixField a_dot = make_ot_A(CostFunction::dot_product());
        MatrixField a_quad = make_ot_A(CostFunction::neg_half_sqdist());
        std::mt19937 rng(9);
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        double e_dot = 0.0, e_quad = 0.0;
        for (int k = 0; k < 50; ++k) {
            Vec2 x{d(rng), d(rng)};
            Vec2 p{4.0 * d(rng), 4.0 * d(rng)};
            e_dot = std::max(e_dot, frobenius(a_dot(x, 0.0, p)));
            e_quad = std::max(e_quad, frobenius(a_quad(x, 0.0, p) + Sym2::identity()));
        }
        bool ok = e_dot <= 1e-14 && e_quad <= 1e-10;
        return std::pair{ok, "|A| " + fmt(e_dot) + ", |A+I| " + fmt(e_quad)};
    });

    criterion(5, "MMS convergence order >= 1.8 with 128-ring error <= 1e-3", []() {
        // The built-in cases have radial quadratic solutions, which the polar
        // stencils reproduce exactly; their error sits at machine zero and the
        // order ratio is 0/0. Accept exactness (error <= 1e-12 at every
        // resolution, stronger than any finite order) and require the genuine
        // O(h^2) rate on the quartic case, which lies outside that class.
        bool ok = true;
        std::ostringstream d;
        for (const ManufacturedCase& c :
             {make_ma_disk(), make_conf_disk(), make_ot_quad(), make_quartic_disk()}) {
            auto t0 = std::chrono::steady_clock::now();
            MmsResult r = mms_study(c, {32, 64, 128});
            double secs = seconds_since(t0);
            bool exact = r.rows[0].err_inf <= 1e-12 && r.rows[1].err_inf <= 1e-12 &&
                         r.rows[2].err_inf <= 1e-12;
            bool ordered = r.rows[1].order_inf >= 1.8 && r.rows[2].order_inf >= 1.8;
            bool case_ok = (exact || ordered) && r.rows[2].err_inf <= 1e-3 && secs <= 300.0;
            ok = ok && case_ok;
            if (exact)
                d << c.name << " exact (err " << fmt(r.rows[2].err_inf) << "); ";
            else
                d << c.name << " orders " << fmt(r.rows[1].order_inf) << "/"
                  << fmt(r.rows[2].order_inf) << " err " << fmt(r.rows[2].err_inf) << "; ";
        }
        return std::pair{ok, d.str()};
    });

    criterion(6, "ellipticity tracking on CONF-DISK at 64 rings", []() {
        ManufacturedCase c = make_conf_disk();
        Grid g = Grid::build(c.problem.domain, 64, 128);
        auto [u, rep] = continuation_solve(c.problem, g);
        DiscreteSystem sys(c.problem, g);
        double margin = sys.ellipticity(u);
        bool positive = true;
        for (double m : rep.margin_history) positive = positive && m > 0.0;
        bool ok = rep.converged && margin >= 0.33 && margin <= 0.40 && positive;
        return std::pair{ok, "final margin " + fmt(margin)};
    });

    criterion(7, "continuation budget and exact t = 0 seed", []() {
        bool ok = true;
        std::ostringstream d;
        for (const ManufacturedCase& c : {make_ma_disk(), make_conf_disk(), make_ot_quad()}) {
            Grid g = Grid::build(c.problem.domain, 64, 128);
            auto [u, rep] = continuation_solve(c.problem, g);
            int total = 0;
            for (int it : rep.iters) total += it;
            bool case_ok = rep.converged && rep.t_path.back() == 1.0 && total <= 40 &&
                           rep.seed_res_inf <= 1e-10;
            ok = ok && case_ok;
            d << c.name << " iters " << total << " seed " << fmt(rep.seed_res_inf) << "; ";
        }
        return std::pair{ok, d.str()};
    });

    criterion(8, "Jacobian consistency on all MMS systems", []() {
        bool ok = true;
        double worst = 0.0;
        for (const ManufacturedCase& c : {make_ma_disk(), make_conf_disk(), make_ot_quad()}) {
            Grid g = Grid::build(c.problem.domain, 16, 32);
            DiscreteSystem sys(c.problem, g);
            GridFunction u = GridFunction::sample(g, c.u_star);
            Eigen::SparseMatrix<double> J = sys.assemble_jacobian(u);
            std::mt19937 rng(42);
            std::uniform_real_distribution<double> dist(-1.0, 1.0);
            const double eps = 1e-7;
            for (int trial = 0; trial < 20; ++trial) {
                Eigen::VectorXd v(g.size());
                for (int n = 0; n < g.size(); ++n) v[n] = dist(rng);
                Eigen::VectorXd jv = J * v;
                GridFunction up = u, um = u;
                for (int n = 0; n < g.size(); ++n) {
                    up[n] += eps * v[n];
                    um[n] -= eps * v[n];
                }
                std::vector<double> res2 = sys.residual(up);
                std::vector<double> res3 = sys.residual(um);
                double num = 0.0, den = 1.0;
                for (int n = 0; n < g.size(); ++n) {
                    double fd = (res2[static_cast<std::size_t>(n)] -
                                 res3[static_cast<std::size_t>(n)]) / (2.0 * eps);
                    num = std::max(num, std::abs(fd - jv[n]));
                    den = std::max(den, std::abs(jv[n]));
                }
                worst = std::max(worst, num / den);
                ok = ok && num / den <= 1e-4;
            }
        }
        return std::pair{ok, "worst relative error " + fmt(worst)};
    });

    criterion(9, "comparison and super/subsolution suite on MA-DISK", []() {
        ManufacturedCase c = make_ma_disk();
        Grid g = Grid::build(c.problem.domain, 32, 64);
        DiscreteSystem sys(c.problem, g);
        GridFunction u = GridFunction::sample(g, c.u_star);

        GridFunction usup = u, usub = u, uc = u;
        for (int n = 0; n < g.size(); ++n) {
            usup[n] += 0.5;
            usub[n] -= 0.5;
            uc[n] += 0.1;
        }
        bool ok = check_super_sub(usup, sys, SuperSubRole::super).valid &&
                  check_super_sub(usub, sys, SuperSubRole::sub).valid;
        ComparisonReport cmp = check_comparison(u, uc, sys);
        ok = ok && cmp.hypotheses_hold && cmp.consistent;
        return std::pair{ok, std::string("max_diff ") + fmt(cmp.max_diff)};
    });

    criterion(10, "mass balance integrals and strictness", []() {
        Domain disk = Domain::disk({0, 0}, 1.0);
        const double pi = 3.14159265358979323846;
        CertReport r = check_mass_balance([](const Vec2&) { return 1.0; },
                                          [](const Vec2&) { return 2.0; }, disk, disk);
        double fi = r.constants.at("integral_f"), fsi = r.constants.at("integral_fstar");
        bool ok = std::abs(fi - pi) / pi <= 1e-4 && std::abs(fsi - 2 * pi) / (2 * pi) <= 1e-4 &&
                  r.verdict == Verdict::holds_strictly;
        CertReport tie = check_mass_balance([](const Vec2&) { return 1.0; },
                                            [](const Vec2&) { return 1.0; }, disk, disk);
        ok = ok && tie.verdict == Verdict::fails;
        return std::pair{ok, "integrals " + fmt(fi) + " / " + fmt(fsi)};
    });

    criterion(11, "lower-bound arithmetic reproduces the worked examples", []() {
        bool ok = bakelman_lower_bound(0, 1, 1, 1, 2, 1) == -4.0 &&
                  bakelman_lower_bound(2, 1, 4, 1, 2, 0) == -0.25 &&
                  bakelman_lower_bound(1, 0, 2, 1, 1, 2) == -3.0;
        return std::pair{ok, std::string()};
    });

    criterion(12, "byte-identical reports across runs and MATE_THREADS", []() {
        fs::path dir = fs::temp_directory_path() / "mate_acceptance";
        fs::create_directories(dir);
        fs::path cfg = dir / "det.cfg";
        {
            std::ofstream f(cfg);
            f << "[domain]\nkind = disk\nradius = 1\n"
                 "[grid]\nn_r = 8\nn_theta = 16\n"
                 "[problem]\nA = conformal\nB = 1\n"
                 "boundary = neumann\nphi = z - 1/2\n";
        }
        auto run = [&](const std::string& env, const std::string& out) {
            std::string cmd = env + " " + MATE_BIN + " check --config " + cfg.string() +
                              " --out " + (dir / out).string() + " > /dev/null 2>&1";
            int status = std::system(cmd.c_str());
            return status != -1 && WEXITSTATUS(status) == 0;
        };
        auto slurp = [&](const std::string& out) {
            std::ifstream f(dir / out / "report.json", std::ios::binary);
            std::ostringstream ss;
            ss << f.rdbuf();
            return ss.str();
        };
        bool ok = run("MATE_THREADS=1", "r1") && run("MATE_THREADS=1", "r2") &&
                  run("MATE_THREADS=4", "r4");
        std::string a = slurp("r1"), b = slurp("r2"), c = slurp("r4");
        ok = ok && !a.empty() && a == b && a == c;
        return std::pair{ok, std::string()};
    });

    std::printf("%d of 12 criteria passed\n", 12 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
