#pragma once

#include <vector>

#include "mate/fields.hpp"
#include "mate/geometry.hpp"
#include "mate/vec.hpp"

namespace mate {

enum class NodeKind { interior, boundary, pole };

struct StencilTerm {
    int node;
    double weight;
};
using Stencil = std::vector<StencilTerm>;

// Per-node derivative stencils. Every jet component is a fixed linear
// functional of the nodal values, so the Jacobian of any residual built on
// them is the exact derivative of the discrete residual.
struct NodeStencils {
    Stencil gx, gy, hxx, hxy, hyy;
};

// Structured grid on a disk (polar, single pole unknown) or rectangle
// (Cartesian, boundary nodes included).
class Grid {
public:
    // Disk: n_r >= 4 radial rings at r_i = i R/n_r plus one pole node,
    // n_theta >= 8 and even. Rectangle: n_x, n_y >= 5.
    static Grid build(const Domain& domain, int a, int b);

    const Domain& domain() const { return domain_; }
    int size() const { return static_cast<int>(kind_.size()); }
    NodeKind kind(int n) const { return kind_[static_cast<std::size_t>(n)]; }
    Vec2 position(int n) const { return pos_[static_cast<std::size_t>(n)]; }
    const NodeStencils& stencils(int n) const { return sten_[static_cast<std::size_t>(n)]; }
    // Valid for boundary nodes only.
    const BoundaryPoint& boundary_frame(int n) const;

    int boundary_count() const { return boundary_count_; }
    // Mesh parameter (radial / axis spacing).
    double spacing() const { return h_; }
    int nearest_node(const Vec2& x) const;

    // Disk grid extras.
    int rings() const { return n_r_; }
    int angles() const { return n_theta_; }

private:
    Domain domain_ = Domain::disk({0, 0}, 1.0);
    std::vector<NodeKind> kind_;
    std::vector<Vec2> pos_;
    std::vector<NodeStencils> sten_;
    std::vector<int> frame_index_;        // node -> index into frames_, or -1
    std::vector<BoundaryPoint> frames_;
    int boundary_count_ = 0;
    double h_ = 0.0;
    int n_r_ = 0, n_theta_ = 0;

    static Grid build_disk(const Domain& d, int n_r, int n_theta);
    static Grid build_rect(const Domain& d, int n_x, int n_y);
};

// Nodal values of a grid function.
struct GridFunction {
    const Grid* grid = nullptr;
    std::vector<double> values;

    GridFunction() = default;
    explicit GridFunction(const Grid& g) : grid(&g), values(static_cast<std::size_t>(g.size()), 0.0) {}

    double& operator[](int n) { return values[static_cast<std::size_t>(n)]; }
    double operator[](int n) const { return values[static_cast<std::size_t>(n)]; }

    // Fill from a closed form.
    static GridFunction sample(const Grid& g, const std::function<double(const Vec2&)>& f);
};

struct NodalJet {
    double value = 0.0;
    Vec2 gradient;
    Sym2 hessian;
};

double apply_stencil(const Stencil& s, const GridFunction& u);

// Finite-difference jet at a node (O(h^2) on C^4 functions).
NodalJet fd_jet(const GridFunction& u, int node);

// w = D^2 u - A(x, u, Du) at a node.
Sym2 augmented_hessian(const GridFunction& u, const MatrixField& A, int node);

// min over interior and pole nodes of lambda_min(w); positive iff the
// discrete function is elliptic (admissible).
double ellipticity_margin(const GridFunction& u, const MatrixField& A);

}  // namespace mate
