#include "mate/fields.hpp"

#include <cmath>

#include "mate/errors.hpp"

namespace mate {

namespace {

bool finite(const Sym2& m) {
    return std::isfinite(m.xx) && std::isfinite(m.xy) && std::isfinite(m.yy);
}

Sym2 matrix_fd(const std::function<Sym2(double)>& f, double at, double h) {
    Sym2 d = (f(at + h) - f(at - h)) * (1.0 / (2.0 * h));
    if (!finite(d)) throw NonFiniteValue("non-finite matrix derivative");
    return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// MatrixField

Sym2 MatrixField::operator()(const Vec2& x, double z, const Vec2& p) const {
    Sym2 v = eval_(x, z, p);
    if (!finite(v)) throw NonFiniteValue("matrix field evaluated non-finite");
    return v;
}

MatrixJet MatrixField::jet(const Vec2& x, double z, const Vec2& p, int order) const {
    if (mode_ == JetMode::analytic) {
        MatrixJet j = jets_(x, z, p, order);
        j.value = eval_(x, z, p);
        return j;
    }
    MatrixJet j;
    j.value = (*this)(x, z, p);
    if (order >= 1) {
        for (int k = 0; k < 2; ++k) {
            j.dx[k] = matrix_fd([&](double t) {
                Vec2 xt = x; xt[k] = t; return eval_(xt, z, p); }, x[k], fd_step1(x[k]));
            j.dp[k] = matrix_fd([&](double t) {
                Vec2 pt = p; pt[k] = t; return eval_(x, z, pt); }, p[k], fd_step1(p[k]));
        }
        j.dz = matrix_fd([&](double t) { return eval_(x, t, p); }, z, fd_step1(z));
    }
    if (order >= 2) {
        for (int k = 0; k < 2; ++k) {
            double hk = fd_step2(p[k]);
            for (int l = k; l < 2; ++l) {
                double hl = fd_step2(p[l]);
                Sym2 d;
                if (k == l) {
                    Vec2 pp = p, pm = p;
                    pp[k] += hk;
                    pm[k] -= hk;
                    d = (eval_(x, z, pp) - eval_(x, z, p) * 2.0 + eval_(x, z, pm)) *
                        (1.0 / (hk * hk));
                } else {
                    Vec2 a = p, b = p, c = p, e = p;
                    a[k] += hk; a[l] += hl;
                    b[k] += hk; b[l] -= hl;
                    c[k] -= hk; c[l] += hl;
                    e[k] -= hk; e[l] -= hl;
                    d = (eval_(x, z, a) - eval_(x, z, b) - eval_(x, z, c) + eval_(x, z, e)) *
                        (1.0 / (4.0 * hk * hl));
                }
                if (!finite(d)) throw NonFiniteValue("non-finite second p-derivative");
                j.dpp[k][l] = d;
                j.dpp[l][k] = d;
            }
        }
    }
    return j;
}

double MatrixField::regularity_contraction(const Vec2& x, double z, const Vec2& p,
                                           const Vec2& xi, const Vec2& eta) const {
    MatrixJet j = jet(x, z, p, 2);
    double s = 0.0;
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
            s += eta[k] * eta[l] * j.dpp[k][l].quad(xi, xi);
    return s;
}

MatrixField make_zero_A() {
    return MatrixField([](const Vec2&, double, const Vec2&) { return Sym2{}; },
                       [](const Vec2&, double, const Vec2&, int) { return MatrixJet{}; });
}

MatrixField make_conformal_A() {
    auto eval = [](const Vec2&, double, const Vec2& p) {
        return 0.5 * norm2(p) * Sym2::identity() - Sym2::outer(p);
    };
    auto jets = [](const Vec2&, double, const Vec2& p, int order) {
        MatrixJet j;  // independent of x and z
        if (order >= 1) {
            j.dp[0] = Sym2{-p.x, -p.y, p.x};
            j.dp[1] = Sym2{p.y, -p.x, -p.y};
        }
        if (order >= 2) {
            // A_{ij,kl} = d_kl d_ij - d_ik d_jl - d_il d_jk
            j.dpp[0][0] = Sym2{-1.0, 0.0, 1.0};
            j.dpp[1][1] = Sym2{1.0, 0.0, -1.0};
            j.dpp[0][1] = Sym2{0.0, -1.0, 0.0};
            j.dpp[1][0] = j.dpp[0][1];
        }
        return j;
    };
    return MatrixField(eval, jets);
}

// ---------------------------------------------------------------------------
// ScalarField

double ScalarField::operator()(const Vec2& x, double z, const Vec2& p) const {
    double v = eval_(x, z, p);
    if (!std::isfinite(v)) throw NonFiniteValue("scalar field evaluated non-finite");
    if (positive_ && !(v > 0.0)) throw NonpositiveB("positive-flagged field is not positive");
    return v;
}

ScalarJet ScalarField::jet(const Vec2& x, double z, const Vec2& p) const {
    ScalarJet j;
    j.value = (*this)(x, z, p);
    if (mode_ == JetMode::analytic) {
        ScalarJet a = jets_(x, z, p);
        a.value = j.value;
        return a;
    }
    for (int k = 0; k < 2; ++k) {
        double hx = fd_step1(x[k]);
        Vec2 xp = x, xm = x;
        xp[k] += hx; xm[k] -= hx;
        j.dx[k] = (eval_(xp, z, p) - eval_(xm, z, p)) / (2.0 * hx);
        double hp = fd_step1(p[k]);
        Vec2 pp = p, pm = p;
        pp[k] += hp; pm[k] -= hp;
        j.dp[k] = (eval_(x, z, pp) - eval_(x, z, pm)) / (2.0 * hp);
    }
    double hz = fd_step1(z);
    j.dz = (eval_(x, z + hz, p) - eval_(x, z - hz, p)) / (2.0 * hz);
    if (!std::isfinite(j.dz) || !std::isfinite(j.dx.x) || !std::isfinite(j.dp.x))
        throw NonFiniteValue("non-finite scalar derivative");
    return j;
}

ScalarField ScalarField::constant(double c, bool positive) {
    return ScalarField([c](const Vec2&, double, const Vec2&) { return c; },
                       [](const Vec2&, double, const Vec2&) { return ScalarJet{}; }, positive);
}

ScalarField ScalarField::from_expression(const Expression& e, bool positive) {
    return ScalarField(
        [e](const Vec2& x, double z, const Vec2& p) { return e(EvalEnv{x, z, p}); }, positive);
}

// ---------------------------------------------------------------------------
// BoundaryOperator

BoundaryOperator BoundaryOperator::oblique(Eval eval) {
    BoundaryOperator g;
    g.eval_ = std::move(eval);
    return g;
}

BoundaryOperator BoundaryOperator::oblique(Eval eval, JetFn jets) {
    BoundaryOperator g;
    g.eval_ = std::move(eval);
    g.jets_ = std::move(jets);
    g.mode_ = JetMode::analytic;
    return g;
}

double BoundaryOperator::operator()(const BoundaryPoint& x, double z, const Vec2& p) const {
    double v = eval_(x, z, p);
    if (!std::isfinite(v)) throw NonFiniteValue("boundary operator evaluated non-finite");
    return v;
}

BoundaryJet BoundaryOperator::jet(const BoundaryPoint& x, double z, const Vec2& p) const {
    if (mode_ == JetMode::analytic) {
        BoundaryJet j = jets_(x, z, p);
        j.value = eval_(x, z, p);
        return j;
    }
    BoundaryJet j;
    j.value = (*this)(x, z, p);
    double hz = fd_step1(z);
    j.dz = (eval_(x, z + hz, p) - eval_(x, z - hz, p)) / (2.0 * hz);
    for (int k = 0; k < 2; ++k) {
        double h = fd_step1(p[k]);
        Vec2 pp = p, pm = p;
        pp[k] += h; pm[k] -= h;
        j.dp[k] = (eval_(x, z, pp) - eval_(x, z, pm)) / (2.0 * h);
    }
    // G_pp by centered second differences, symmetrized.
    double h0 = fd_step2(p.x), h1 = fd_step2(p.y);
    auto at = [&](double a, double b) { return eval_(x, z, {p.x + a, p.y + b}); };
    j.dpp.xx = (at(h0, 0) - 2.0 * j.value + at(-h0, 0)) / (h0 * h0);
    j.dpp.yy = (at(0, h1) - 2.0 * j.value + at(0, -h1)) / (h1 * h1);
    j.dpp.xy = (at(h0, h1) - at(h0, -h1) - at(-h0, h1) + at(-h0, -h1)) / (4.0 * h0 * h1);
    return j;
}

double BoundaryOperator::phi_z(const Vec2& x, double z) const {
    if (phi_z_) return phi_z_(x, z);
    double h = fd_step1(z);
    return (phi_(x, z + h) - phi_(x, z - h)) / (2.0 * h);
}

BoundaryOperator make_neumann_G(const Domain& /*domain*/,
                                std::function<double(const Vec2&, double)> phi,
                                std::function<double(const Vec2&, double)> phi_z) {
    BoundaryOperator g;
    g.phi_ = std::move(phi);
    g.phi_z_ = std::move(phi_z);
    g.kind_ = BoundaryKind::neumann;
    g.mode_ = JetMode::analytic;
    auto phi_copy = g.phi_;
    g.eval_ = [phi_copy](const BoundaryPoint& x, double z, const Vec2& p) {
        return dot(x.normal, p) - phi_copy(x.position, z);
    };
    std::function<double(const Vec2&, double)> phiz = g.phi_z_;
    if (!phiz) {
        phiz = [phi_copy](const Vec2& x, double z) {
            double h = fd_step1(z);
            return (phi_copy(x, z + h) - phi_copy(x, z - h)) / (2.0 * h);
        };
    }
    g.jets_ = [phiz](const BoundaryPoint& x, double z, const Vec2&) {
        BoundaryJet j;
        j.dz = -phiz(x.position, z);
        j.dp = x.normal;
        return j;
    };
    return g;
}

// ---------------------------------------------------------------------------
// Optimal transportation

CostFunction CostFunction::dot_product() {
    CostFunction c;
    c.c = [](const Vec2& x, const Vec2& y) { return dot(x, y); };
    c.c_x = [](const Vec2&, const Vec2& y) { return y; };
    c.c_y = [](const Vec2& x, const Vec2&) { return x; };
    c.c_xx = [](const Vec2&, const Vec2&) { return Sym2{}; };
    c.c_xy = [](const Vec2&, const Vec2&) { return Mat2::identity(); };
    return c;
}

CostFunction CostFunction::neg_half_sqdist() {
    CostFunction c;
    c.c = [](const Vec2& x, const Vec2& y) { return -0.5 * norm2(x - y); };
    c.c_x = [](const Vec2& x, const Vec2& y) { return y - x; };
    c.c_y = [](const Vec2& x, const Vec2& y) { return x - y; };
    c.c_xx = [](const Vec2&, const Vec2&) { return -Sym2::identity(); };
    c.c_xy = [](const Vec2&, const Vec2&) { return Mat2::identity(); };
    return c;
}

Vec2 ot_map_Y(const CostFunction& cost, const Vec2& x, const Vec2& p) {
    Vec2 y = x + p;  // exact for the quadratic cost
    for (int it = 0; it < 50; ++it) {
        Vec2 r = cost.c_x(x, y) - p;
        if (norm(r) <= 1e-12) return y;
        Mat2 m = cost.c_xy(x, y);
        if (std::abs(m.det()) < 1e-14)
            throw SingularMixedHessian("det c_{x,y} vanished during Y inversion");
        y += m.solve(-r);
        if (!std::isfinite(y.x) || !std::isfinite(y.y))
            throw InversionDiverged("Y inversion produced non-finite iterate");
    }
    throw InversionDiverged("Y inversion did not converge in 50 iterations");
}

double ot_bfactor(const CostFunction& cost, const Vec2& x, const Vec2& p) {
    Vec2 y = ot_map_Y(cost, x, p);
    return std::abs(cost.c_xy(x, y).det());
}

MatrixField make_ot_A(const CostFunction& cost) {
    return MatrixField([cost](const Vec2& x, double, const Vec2& p) {
        return cost.c_xx(x, ot_map_Y(cost, x, p));
    });
}

}  // namespace mate
