#include "mate/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseLU>

#include "mate/errors.hpp"

namespace mate {

namespace {

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double trace_product(const Sym2& a, const Sym2& b) {
    return a.xx * b.xx + 2.0 * a.xy * b.xy + a.yy * b.yy;
}

}  // namespace

nlohmann::json SolveReport::to_json() const {
    nlohmann::json j;
    j["converged"] = converged;
    j["t_path"] = t_path;
    j["iters"] = iters;
    j["res_inf"] = res_inf;
    j["margin_min"] = margin_min;
    j["M2"] = M2;
    j["failure"] = failure;
    return j;
}

DiscreteSystem::DiscreteSystem(ProblemSpec problem, const Grid& grid)
    : problem_(std::move(problem)), grid_(&grid) {
    if (problem_.pin) pin_node_ = grid_->nearest_node(problem_.pin->point);
}

bool DiscreteSystem::row_residual(const GridFunction& u, int node, double* out) const {
    if (node == pin_node_) {
        *out = u[node] - problem_.pin->value;
        return true;
    }
    if (grid_->kind(node) == NodeKind::boundary) {
        NodalJet j = fd_jet(u, node);
        *out = problem_.G(grid_->boundary_frame(node), j.value, j.gradient);
        return true;
    }
    NodalJet j = fd_jet(u, node);
    Sym2 w = j.hessian - problem_.A(grid_->position(node), j.value, j.gradient);
    if (!(lambda_min(w) > 0.0)) return false;
    double b = problem_.B(grid_->position(node), j.value, j.gradient);
    if (!(b > 0.0)) throw NonpositiveB("B is nonpositive at an equation node");
    *out = std::log(w.det()) - std::log(b);
    return true;
}

std::vector<double> DiscreteSystem::residual(const GridFunction& u) const {
    std::vector<double> res(static_cast<std::size_t>(grid_->size()), 0.0);
    for (int n = 0; n < grid_->size(); ++n) {
        if (!row_residual(u, n, &res[static_cast<std::size_t>(n)]))
            throw EllipticityLoss("augmented Hessian not positive definite");
    }
    return res;
}

Eigen::SparseMatrix<double> DiscreteSystem::assemble_jacobian(const GridFunction& u) const {
    const int N = grid_->size();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(N) * 16);

    for (int n = 0; n < N; ++n) {
        if (n == pin_node_) {
            trips.emplace_back(n, n, 1.0);
            continue;
        }
        const NodeStencils& st = grid_->stencils(n);
        NodalJet j = fd_jet(u, n);
        if (grid_->kind(n) == NodeKind::boundary) {
            BoundaryJet gj = problem_.G.jet(grid_->boundary_frame(n), j.value, j.gradient);
            for (const StencilTerm& t : st.gx) trips.emplace_back(n, t.node, gj.dp.x * t.weight);
            for (const StencilTerm& t : st.gy) trips.emplace_back(n, t.node, gj.dp.y * t.weight);
            trips.emplace_back(n, n, gj.dz);
            continue;
        }
        Vec2 x = grid_->position(n);
        MatrixJet aj = problem_.A.jet(x, j.value, j.gradient, 1);
        Sym2 w = j.hessian - aj.value;
        double dw = w.det();
        if (!(lambda_min(w) > 0.0))
            throw EllipticityLoss("augmented Hessian not positive definite");
        if (!(std::abs(dw) > 1e-300)) throw SingularW("augmented Hessian numerically singular");
        Sym2 winv = inverse(w);
        ScalarJet bj = problem_.B.jet(x, j.value, j.gradient);
        if (!(bj.value > 0.0)) throw NonpositiveB("B is nonpositive at an equation node");

        // w^{ij} D_ij v
        for (const StencilTerm& t : st.hxx) trips.emplace_back(n, t.node, winv.xx * t.weight);
        for (const StencilTerm& t : st.hxy) trips.emplace_back(n, t.node, 2.0 * winv.xy * t.weight);
        for (const StencilTerm& t : st.hyy) trips.emplace_back(n, t.node, winv.yy * t.weight);
        // - (w^{ij} D_{p_l} A_ij + D_{p_l} log B) D_l v
        double cgx = -(trace_product(winv, aj.dp[0]) + bj.dp.x / bj.value);
        double cgy = -(trace_product(winv, aj.dp[1]) + bj.dp.y / bj.value);
        for (const StencilTerm& t : st.gx) trips.emplace_back(n, t.node, cgx * t.weight);
        for (const StencilTerm& t : st.gy) trips.emplace_back(n, t.node, cgy * t.weight);
        // - (w^{ij} D_z A_ij + D_z log B) v
        trips.emplace_back(n, n, -(trace_product(winv, aj.dz) + bj.dz / bj.value));
    }

    Eigen::SparseMatrix<double> J(N, N);
    J.setFromTriplets(trips.begin(), trips.end());
    return J;
}

double DiscreteSystem::ellipticity(const GridFunction& u) const {
    return ellipticity_margin(u, problem_.A);
}

double DiscreteSystem::hessian_norm_max(const GridFunction& u) const {
    double m = 0.0;
    for (int n = 0; n < grid_->size(); ++n) m = std::max(m, frobenius(fd_jet(u, n).hessian));
    return m;
}

namespace {

// Rank surrogate for the no-pin case: a non-monotone problem has the constant
// function in the Jacobian kernel, which J * 1 detects exactly.
void require_nonsingular(const Eigen::SparseMatrix<double>& J, bool has_pin) {
    if (has_pin) return;
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(J.cols());
    // Threshold tracks the rounding noise of the row sums themselves
    // (eps times the largest absolute row sum), well below the O(1)
    // z-coefficients a monotone problem leaves in J * 1.
    Eigen::VectorXd abs_row = Eigen::VectorXd::Zero(J.rows());
    for (int k = 0; k < J.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(J, k); it; ++it)
            abs_row[it.row()] += std::abs(it.value());
    double scale = abs_row.maxCoeff();
    if ((J * ones).lpNorm<Eigen::Infinity>() <= 1e-13 * scale)
        throw SingularSystem(
            "system is singular: no pin and no strict monotonicity in z detected");
}

}  // namespace

std::pair<GridFunction, SolveReport> newton_solve(const DiscreteSystem& sys,
                                                  const GridFunction& u_init,
                                                  const NewtonOptions& opts) {
    if (u_init.grid != &sys.grid()) throw GridMismatch("initial guess lives on another grid");
    double margin = sys.ellipticity(u_init);
    if (!(margin > 0.0)) throw EllipticityLoss("initial guess is not elliptic");

    GridFunction u = u_init;
    std::vector<double> res = sys.residual(u);
    double rn = inf_norm(res);

    SolveReport rep;
    rep.margin_history.push_back(margin);
    int iters = 0;

    while (true) {
        if (rn <= opts.tol) {
            rep.converged = true;
            break;
        }
        if (iters >= opts.max_iter)
            throw MaxIterations("Newton did not converge in " +
                                std::to_string(opts.max_iter) + " iterations");

        Eigen::SparseMatrix<double> J = sys.assemble_jacobian(u);
        require_nonsingular(J, sys.pin_node() >= 0);

        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success)
            throw LinearSolveFailure("sparse LU factorization failed");
        Eigen::VectorXd rhs(sys.grid().size());
        for (int n = 0; n < sys.grid().size(); ++n) rhs[n] = -res[static_cast<std::size_t>(n)];
        Eigen::VectorXd delta = lu.solve(rhs);
        if (lu.info() != Eigen::Success || !delta.allFinite())
            throw LinearSolveFailure("sparse LU solve failed");

        bool accepted = false;
        for (int k = 0; k <= 20; ++k) {
            double s = std::ldexp(1.0, -k);
            GridFunction trial = u;
            for (int n = 0; n < sys.grid().size(); ++n) trial[n] += s * delta[n];
            double m_trial = sys.ellipticity(trial);
            if (m_trial < std::min(opts.margin_floor, 0.1 * margin)) continue;
            std::vector<double> res_trial;
            try {
                res_trial = sys.residual(trial);
            } catch (const EllipticityLoss&) {
                continue;
            }
            double rn_trial = inf_norm(res_trial);
            if (rn_trial <= rn * (1.0 - 1e-4 * s)) {
                u = std::move(trial);
                res = std::move(res_trial);
                rn = rn_trial;
                margin = m_trial;
                accepted = true;
                break;
            }
        }
        if (!accepted) throw EllipticityLoss("Newton line search exhausted");
        rep.margin_history.push_back(margin);
        ++iters;
    }

    rep.iters = {iters};
    rep.res_inf = rn;
    rep.margin = margin;
    rep.margin_min = *std::min_element(rep.margin_history.begin(), rep.margin_history.end());
    rep.M2 = sys.hessian_norm_max(u);
    return {std::move(u), std::move(rep)};
}

std::pair<GridFunction, SolveReport> continuation_solve(const ProblemSpec& problem,
                                                        const Grid& grid,
                                                        const NewtonOptions& opts) {
    const Vec2 xc = problem.domain.center();
    const double c0 = 0.5 * (problem.z_lo + problem.z_hi);

    // Quadratic seed u0 = lambda |x - xc|^2 / 2 + c0. Candidates are ordered
    // by distance from unit scale; the first one whose ellipticity margin for
    // w0 = lambda I - A(x, u0, Du0) clears 1e-3 wins. Chasing the largest
    // margin instead favours steep seeds whose amplitude raises the
    // floating-point floor of the near-pole residual rows past the Newton
    // tolerance on fine grids.
    double best_lambda = 0.0;
    double best_margin = -std::numeric_limits<double>::infinity();
    for (double lam : {1.0, 0.5, 2.0, 0.25, 4.0, 0.125, 8.0}) {
        double m = std::numeric_limits<double>::infinity();
        for (int n = 0; n < grid.size(); ++n) {
            if (grid.kind(n) == NodeKind::boundary) continue;
            Vec2 x = grid.position(n);
            Vec2 du = lam * (x - xc);
            Sym2 w0 = lam * Sym2::identity() - problem.A(x, 0.5 * lam * norm2(x - xc) + c0, du);
            m = std::min(m, lambda_min(w0));
        }
        if (m > best_margin) { best_margin = m; best_lambda = lam; }
        if (m >= 1e-3) { best_lambda = lam; break; }
    }
    if (!(best_margin >= 1e-3))
        throw NoEllipticSeed("no quadratic seed with ellipticity margin >= 1e-3");

    const double lam = best_lambda;
    auto u0 = [lam, xc, c0](const Vec2& x) { return 0.5 * lam * norm2(x - xc) + c0; };
    auto du0 = [lam, xc](const Vec2& x) { return lam * (x - xc); };
    const MatrixField& A = problem.A;
    auto log_B0 = [lam, u0, du0, &A](const Vec2& x) {
        Sym2 w0 = lam * Sym2::identity() - A(x, u0(x), du0(x));
        return std::log(w0.det());
    };
    const ScalarField& B = problem.B;
    const BoundaryOperator& G = problem.G;

    auto problem_at = [&](double t) {
        ProblemSpec pt = problem;
        pt.B = ScalarField(
            [t, log_B0, &B](const Vec2& x, double z, const Vec2& p) {
                return std::exp((1.0 - t) * log_B0(x) + t * std::log(B(x, z, p)));
            },
            true);
        pt.G = BoundaryOperator::oblique(
            [t, u0, du0, &G](const BoundaryPoint& bp, double z, const Vec2& p) {
                double g0 = dot(bp.normal, p) - dot(bp.normal, du0(bp.position)) -
                            (z - u0(bp.position));
                return (1.0 - t) * g0 + t * G(bp, z, p);
            },
            [t, &G](const BoundaryPoint& bp, double z, const Vec2& p) {
                BoundaryJet gj = G.jet(bp, z, p);
                BoundaryJet j;
                j.dz = -(1.0 - t) + t * gj.dz;
                j.dp = (1.0 - t) * bp.normal + t * gj.dp;
                j.dpp = t * gj.dpp;
                return j;
            });
        return pt;
    };

    GridFunction u = GridFunction::sample(grid, u0);

    SolveReport rep;
    {
        // u0 solves the t = 0 problem exactly (up to FD roundoff: the grid
        // stencils are exact on quadratics).
        DiscreteSystem sys0(problem_at(0.0), grid);
        rep.seed_res_inf = inf_norm(sys0.residual(u));
        rep.t_path.push_back(0.0);
        rep.iters.push_back(0);
        rep.margin_history.push_back(sys0.ellipticity(u));
    }

    double t = 0.0;
    double step = 0.25;
    int successes = 0;
    SolveReport last;
    while (t < 1.0) {
        double tn = std::min(1.0, t + step);
        DiscreteSystem sys(problem_at(tn), grid);
        try {
            auto [u_new, r] = newton_solve(sys, u, opts);
            u = std::move(u_new);
            last = std::move(r);
        } catch (const NonpositiveB&) {
            throw;
        } catch (const SingularSystem&) {
            throw;
        } catch (const Error&) {
            step *= 0.5;
            successes = 0;
            if (step < 1.0 / 1024.0)
                throw ContinuationStalled("homotopy step underflow at t = " +
                                          std::to_string(tn));
            continue;
        }
        t = tn;
        rep.t_path.push_back(t);
        rep.iters.push_back(last.iters.empty() ? 0 : last.iters[0]);
        rep.margin_history.insert(rep.margin_history.end(), last.margin_history.begin(),
                                  last.margin_history.end());
        if (++successes >= 2) {
            step = std::min(0.25, 2.0 * step);
            successes = 0;
        }
    }

    rep.converged = true;
    rep.res_inf = last.res_inf;
    rep.margin = last.margin;
    rep.margin_min = *std::min_element(rep.margin_history.begin(), rep.margin_history.end());
    rep.M2 = last.M2;
    return {std::move(u), std::move(rep)};
}

}  // namespace mate
