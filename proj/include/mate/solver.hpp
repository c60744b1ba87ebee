#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mate/fields.hpp"
#include "mate/grid.hpp"

#include "json.hpp"

#include <Eigen/Sparse>

namespace mate {

struct NewtonOptions {
    double tol = 1e-10;
    int max_iter = 50;
    double margin_floor = 1e-6;
};

struct SolveReport {
    bool converged = false;
    std::vector<double> t_path;       // homotopy parameter values reached
    std::vector<int> iters;           // Newton iterations per homotopy step
    std::vector<double> margin_history;  // ellipticity margin of every accepted iterate
    double res_inf = 0.0;
    double margin = 0.0;              // margin of the final iterate
    double margin_min = 0.0;          // min over margin_history
    double M2 = 0.0;                  // max nodal Hessian norm
    double seed_res_inf = 0.0;        // continuation only: t = 0 residual
    std::string failure;              // empty when converged

    nlohmann::json to_json() const;
};

// Square discrete system: interior and pole rows carry the log-det equation,
// boundary rows carry G, a pin (if present) replaces its node's row by
// u(x0) - c.
class DiscreteSystem {
public:
    DiscreteSystem(ProblemSpec problem, const Grid& grid);

    const ProblemSpec& problem() const { return problem_; }
    const Grid& grid() const { return *grid_; }
    int pin_node() const { return pin_node_; }

    // Throws EllipticityLoss if any equation node has lambda_min(w) <= 0,
    // NonpositiveB if B evaluates nonpositive.
    std::vector<double> residual(const GridFunction& u) const;

    // Single row; returns false instead of throwing when the augmented
    // Hessian is not positive definite there.
    bool row_residual(const GridFunction& u, int node, double* out) const;

    // Exact Jacobian of residual(): the stencils are linear, so the
    // linearized-operator rows coincide with the derivative of the residual.
    Eigen::SparseMatrix<double> assemble_jacobian(const GridFunction& u) const;

    double ellipticity(const GridFunction& u) const;
    double hessian_norm_max(const GridFunction& u) const;

private:
    ProblemSpec problem_;
    const Grid* grid_;
    int pin_node_ = -1;
};

std::pair<GridFunction, SolveReport> newton_solve(const DiscreteSystem& sys,
                                                  const GridFunction& u_init,
                                                  const NewtonOptions& opts = {});

// Method of continuity from a quadratic seed; see continuation_solve in the
// implementation for the homotopy construction.
std::pair<GridFunction, SolveReport> continuation_solve(const ProblemSpec& problem,
                                                        const Grid& grid,
                                                        const NewtonOptions& opts = {});

}  // namespace mate
