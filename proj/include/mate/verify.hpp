#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mate/solver.hpp"

namespace mate {

// Exact solution with closed-form derivatives, plus the problem it solves.
struct ManufacturedCase {
    std::string name;
    std::function<double(const Vec2&)> u_star;
    std::function<Vec2(const Vec2&)> grad_u_star;
    std::function<Sym2(const Vec2&)> hess_u_star;
    ProblemSpec problem;
    double expected_margin = 0.0;
};

ManufacturedCase make_ma_disk();    // A = 0, B = 1, phi = z - 3/2, u* = |x|^2/2
ManufacturedCase make_conf_disk();  // conformal A, B = 1/4 - |x|^4/64, phi = z - 3/4
ManufacturedCase make_ot_quad();
// Radial quartic outside the stencils' exactness class; shows the true
// O(h^2) truncation error where the classic cases solve exactly.
ManufacturedCase make_quartic_disk();    // A = -I via the quadratic cost, B = 4

// Lookup by name: MA-DISK, CONF-DISK, OT-QUAD. Throws ConfigError with the
// nearest match for unknown names.
ManufacturedCase builtin_case(const std::string& name);

// Continuum residual of u* at a point (no grid involved).
double pointwise_residual(const ManufacturedCase& c, const Vec2& x);

struct OrderRow {
    int resolution = 0;  // radial rings (disk) / per-axis nodes (rectangle)
    double err_inf = 0.0;
    double err_l2 = 0.0;
    double order_inf = 0.0;  // 0 in the first row
    double order_l2 = 0.0;
};

struct MmsResult {
    std::vector<OrderRow> rows;
    GridFunction finest_solution;
    SolveReport finest_report;
};

// Solve at each resolution (n_theta = 2 n_r on disks) and tabulate errors
// against u*. Requires >= 3 resolutions, each a 2x refinement.
MmsResult mms_study(const ManufacturedCase& c, const std::vector<int>& resolutions,
                    const NewtonOptions& opts = {});

struct ComparisonReport {
    bool hypotheses_hold = false;
    double max_diff = 0.0;  // max(u - v)
    bool consistent = false;
    std::string note;
};

// Lemma-style comparison: if res(u) >= res(v) where both are defined and
// G[u] >= G[v], then u <= v must hold for the verdict to be consistent.
ComparisonReport check_comparison(const GridFunction& u, const GridFunction& v,
                                  const DiscreteSystem& sys);

enum class SuperSubRole { super, sub };

struct SuperSubReport {
    bool valid = false;
    bool vacuous = false;        // super role with no elliptic nodes
    int elliptic_nodes = 0;
    double eq_margin = 0.0;      // worst signed violation of det(w) vs B
    double bc_margin = 0.0;      // worst signed violation of G
};

SuperSubReport check_super_sub(const GridFunction& w, const DiscreteSystem& sys,
                               SuperSubRole role);

// Max relative error of analytic vs finite-difference jets over 100 samples
// (seed 42). Requires analytic jets.
double derivative_check(const MatrixField& field);
double derivative_check(const ScalarField& field);

// min over nodes of lambda_min(D^2 u + mu0 (1 + |Du|^2) I).
double weak_convexity_check(const GridFunction& u, double mu0);

}  // namespace mate
