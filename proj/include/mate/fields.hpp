#pragma once

#include <array>
#include <functional>
#include <optional>

#include "mate/expression.hpp"
#include "mate/geometry.hpp"
#include "mate/vec.hpp"

namespace mate {

enum class JetMode { analytic, finite_difference };

// Centered finite-difference steps, scaled by argument magnitude.
inline double fd_step1(double arg) { return 1e-6 * (1.0 + std::abs(arg)); }
inline double fd_step2(double arg) { return 1e-4 * (1.0 + std::abs(arg)); }

// ---------------------------------------------------------------------------
// Matrix field A(x, z, p)

struct MatrixJet {
    Sym2 value;
    std::array<Sym2, 2> dx{};                  // d/dx_k A
    Sym2 dz;                                   // d/dz A
    std::array<Sym2, 2> dp{};                  // d/dp_k A
    std::array<std::array<Sym2, 2>, 2> dpp{};  // d2/dp_k dp_l A  (A_{ij,kl})
};

class MatrixField {
public:
    using Eval = std::function<Sym2(const Vec2& x, double z, const Vec2& p)>;
    using JetFn = std::function<MatrixJet(const Vec2& x, double z, const Vec2& p, int order)>;

    MatrixField() = default;
    // Finite-difference jets.
    explicit MatrixField(Eval eval) : eval_(std::move(eval)) {}
    // Analytic jets; `jets` must fill everything up to the requested order.
    MatrixField(Eval eval, JetFn jets)
        : eval_(std::move(eval)), jets_(std::move(jets)), mode_(JetMode::analytic) {}

    Sym2 operator()(const Vec2& x, double z, const Vec2& p) const;
    MatrixJet jet(const Vec2& x, double z, const Vec2& p, int order) const;
    JetMode jet_mode() const { return mode_; }

    // Regularity contraction A_{ij,kl} xi_i xi_j eta_k eta_l at a sample.
    double regularity_contraction(const Vec2& x, double z, const Vec2& p,
                                  const Vec2& xi, const Vec2& eta) const;

private:
    Eval eval_;
    JetFn jets_;
    JetMode mode_ = JetMode::finite_difference;
};

// The zero matrix field (standard Monge-Ampere case).
MatrixField make_zero_A();

// The conformal-geometry matrix A = |p|^2/2 I - p (x) p, with analytic jets.
MatrixField make_conformal_A();

// ---------------------------------------------------------------------------
// Scalar field B(x, z, p)

struct ScalarJet {
    double value = 0.0;
    Vec2 dx;
    double dz = 0.0;
    Vec2 dp;
};

class ScalarField {
public:
    using Eval = std::function<double(const Vec2& x, double z, const Vec2& p)>;
    using JetFn = std::function<ScalarJet(const Vec2& x, double z, const Vec2& p)>;

    ScalarField() = default;
    explicit ScalarField(Eval eval, bool positive = false)
        : eval_(std::move(eval)), positive_(positive) {}
    ScalarField(Eval eval, JetFn jets, bool positive = false)
        : eval_(std::move(eval)), jets_(std::move(jets)), positive_(positive),
          mode_(JetMode::analytic) {}

    static ScalarField constant(double c, bool positive = false);
    static ScalarField from_expression(const Expression& e, bool positive = false);

    double operator()(const Vec2& x, double z, const Vec2& p) const;
    ScalarJet jet(const Vec2& x, double z, const Vec2& p) const;
    JetMode jet_mode() const { return mode_; }
    bool positive_flag() const { return positive_; }

private:
    Eval eval_;
    JetFn jets_;
    bool positive_ = false;
    JetMode mode_ = JetMode::finite_difference;
};

// ---------------------------------------------------------------------------
// Boundary operator G(x, z, p); x enters through the boundary frame.

enum class BoundaryKind { neumann, oblique_general };

struct BoundaryJet {
    double value = 0.0;
    double dz = 0.0;
    Vec2 dp;
    Sym2 dpp;
};

class BoundaryOperator {
public:
    using Eval = std::function<double(const BoundaryPoint& x, double z, const Vec2& p)>;
    using JetFn = std::function<BoundaryJet(const BoundaryPoint& x, double z, const Vec2& p)>;

    BoundaryOperator() = default;

    // General oblique operator with finite-difference jets.
    static BoundaryOperator oblique(Eval eval);
    static BoundaryOperator oblique(Eval eval, JetFn jets);

    double operator()(const BoundaryPoint& x, double z, const Vec2& p) const;
    BoundaryJet jet(const BoundaryPoint& x, double z, const Vec2& p) const;
    BoundaryKind kind() const { return kind_; }
    JetMode jet_mode() const { return mode_; }

    // Neumann data, valid when kind() == neumann.
    double phi(const Vec2& x, double z) const { return phi_(x, z); }
    double phi_z(const Vec2& x, double z) const;

private:
    Eval eval_;
    JetFn jets_;
    std::function<double(const Vec2&, double)> phi_;
    std::function<double(const Vec2&, double)> phi_z_;
    BoundaryKind kind_ = BoundaryKind::oblique_general;
    JetMode mode_ = JetMode::finite_difference;

    friend BoundaryOperator make_neumann_G(const Domain&,
                                           std::function<double(const Vec2&, double)>,
                                           std::function<double(const Vec2&, double)>);
};

// G(x,z,p) = nu(x).p - phi(x,z); G_p = nu, G_pp = 0, G_z = -phi_z.
BoundaryOperator make_neumann_G(const Domain& domain,
                                std::function<double(const Vec2&, double)> phi,
                                std::function<double(const Vec2&, double)> phi_z = nullptr);

// ---------------------------------------------------------------------------
// Optimal transportation cost functions

struct CostFunction {
    std::function<double(const Vec2& x, const Vec2& y)> c;
    std::function<Vec2(const Vec2&, const Vec2&)> c_x;
    std::function<Vec2(const Vec2&, const Vec2&)> c_y;
    std::function<Sym2(const Vec2&, const Vec2&)> c_xx;
    std::function<Mat2(const Vec2&, const Vec2&)> c_xy;  // d2c/dx_i dy_j

    static CostFunction dot_product();      // c(x,y) = x.y
    static CostFunction neg_half_sqdist();  // c(x,y) = -|x-y|^2/2
};

// Solve c_x(x, y) = p for y by damped-free Newton iteration.
// Seed y = x + p; tolerance 1e-12 on |c_x - p|; max 50 iterations.
Vec2 ot_map_Y(const CostFunction& cost, const Vec2& x, const Vec2& p);

// |det c_{x,y}(x, Y(x,p))|, the density factor in B = |det c_{x,y}| psi.
double ot_bfactor(const CostFunction& cost, const Vec2& x, const Vec2& p);

// A(x, p) = c_xx(x, Y(x, p)); finite-difference jets.
MatrixField make_ot_A(const CostFunction& cost);

// ---------------------------------------------------------------------------
// Full boundary value problem

struct ProblemSpec {
    Domain domain = Domain::disk({0, 0}, 1.0);
    MatrixField A;
    ScalarField B;
    BoundaryOperator G;
    double z_lo = -1.0;
    double z_hi = 1.0;
    struct Pin {
        Vec2 point;
        double value;
    };
    std::optional<Pin> pin;
};

}  // namespace mate
