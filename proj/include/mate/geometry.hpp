#pragma once

#include <vector>

#include "mate/vec.hpp"

namespace mate {

enum class DomainKind { disk, rectangle };

// How rectangle corners behave in boundary queries.
enum class CornerConvention { average, reject };

// A point on the boundary with its local frame. The normal is the unit
// *inner* normal; the tangent is a unit vector with tangent . normal = 0.
// Curvature is signed with respect to the inner normal (disk of radius R:
// kappa = 1/R; rectangle edge: kappa = 0).
struct BoundaryPoint {
    Vec2 position;
    Vec2 normal;
    Vec2 tangent;
    double curvature = 0.0;
};

// Bounded 2-D domain: a disk or an axis-aligned rectangle. Immutable after
// construction; all queries are pure.
class Domain {
public:
    static Domain disk(Vec2 center, double radius);
    // extents are full side lengths.
    static Domain rectangle(Vec2 center, Vec2 extents,
                            CornerConvention corners = CornerConvention::average);

    DomainKind kind() const { return kind_; }
    Vec2 center() const { return center_; }
    double radius() const { return radius_; }
    Vec2 extents() const { return extents_; }
    CornerConvention corner_convention() const { return corners_; }

    double diameter() const;
    double area() const;
    double perimeter() const;

    // Defining function s: s < 0 inside, 0 on the boundary, > 0 outside.
    // The gradient points in the outward direction of increase with unit
    // length where s is differentiable; at non-differentiable points
    // (disk center, rectangle diagonals through corners) the gradient is the
    // zero vector and `gradient_defined` is false.
    struct DefiningValue {
        double value;
        Vec2 gradient;
        bool gradient_defined;
    };
    DefiningValue defining_function(const Vec2& x) const;

    bool contains(const Vec2& x) const { return defining_function(x).value <= 0.0; }

    // Inner normal, tangent and curvature at a boundary point.
    // Throws PointNotOnBoundary if |s(x)| > 1e-10 * diam, CornerPoint for
    // rectangle corners under the reject convention.
    BoundaryPoint normal_and_curvature(const Vec2& x) const;

    // Quasi-uniform arc-length sampling of the boundary, count >= 4.
    // Rectangle corners included or excluded per the corner convention.
    std::vector<BoundaryPoint> boundary_samples(int count) const;

private:
    DomainKind kind_ = DomainKind::disk;
    Vec2 center_;
    double radius_ = 1.0;
    Vec2 extents_{1.0, 1.0};
    CornerConvention corners_ = CornerConvention::average;
};

// Tangential projection v - (v.nu)nu; realizes the tangential gradient
// delta_i = (delta_ij - nu_i nu_j) D_j. Requires |nu| = 1.
inline Vec2 tangential_project(const Vec2& v, const Vec2& nu) {
    return v - dot(v, nu) * nu;
}

}  // namespace mate
