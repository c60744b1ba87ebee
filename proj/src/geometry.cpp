#include "mate/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mate/errors.hpp"

namespace mate {

namespace {
constexpr double kBoundaryTolFactor = 1e-10;

Vec2 rotate90(const Vec2& v) { return {-v.y, v.x}; }

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }
}  // namespace

Domain Domain::disk(Vec2 center, double radius) {
    if (!(radius > 0.0)) throw Error("disk radius must be positive");
    Domain d;
    d.kind_ = DomainKind::disk;
    d.center_ = center;
    d.radius_ = radius;
    return d;
}

Domain Domain::rectangle(Vec2 center, Vec2 extents, CornerConvention corners) {
    if (!(extents.x > 0.0 && extents.y > 0.0))
        throw Error("rectangle extents must be positive");
    Domain d;
    d.kind_ = DomainKind::rectangle;
    d.center_ = center;
    d.extents_ = extents;
    d.corners_ = corners;
    return d;
}

double Domain::diameter() const {
    if (kind_ == DomainKind::disk) return 2.0 * radius_;
    return norm(extents_);
}

double Domain::area() const {
    if (kind_ == DomainKind::disk) return std::numbers::pi * radius_ * radius_;
    return extents_.x * extents_.y;
}

double Domain::perimeter() const {
    if (kind_ == DomainKind::disk) return 2.0 * std::numbers::pi * radius_;
    return 2.0 * (extents_.x + extents_.y);
}

Domain::DefiningValue Domain::defining_function(const Vec2& x) const {
    if (kind_ == DomainKind::disk) {
        Vec2 d = x - center_;
        double r = norm(d);
        if (r == 0.0) return {-radius_, {0.0, 0.0}, false};
        return {r - radius_, d / r, true};
    }
    // Rectangle: max of per-axis signed distances to the slab faces.
    double sx = std::abs(x.x - center_.x) - 0.5 * extents_.x;
    double sy = std::abs(x.y - center_.y) - 0.5 * extents_.y;
    if (sx > sy) {
        double s = static_cast<double>(sign_of(x.x - center_.x));
        return {sx, {s, 0.0}, s != 0.0};
    }
    if (sy > sx) {
        double s = static_cast<double>(sign_of(x.y - center_.y));
        return {sy, {0.0, s}, s != 0.0};
    }
    return {sx, {0.0, 0.0}, false};  // on a diagonal of the distance field
}

BoundaryPoint Domain::normal_and_curvature(const Vec2& x) const {
    const double tol = kBoundaryTolFactor * diameter();
    DefiningValue s = defining_function(x);
    if (std::abs(s.value) > tol)
        throw PointNotOnBoundary("point is not on the domain boundary");

    BoundaryPoint bp;
    bp.position = x;
    if (kind_ == DomainKind::disk) {
        Vec2 d = x - center_;
        bp.normal = -(d / norm(d));
        bp.tangent = rotate90(bp.normal);
        bp.curvature = 1.0 / radius_;
        return bp;
    }

    double sx = std::abs(x.x - center_.x) - 0.5 * extents_.x;
    double sy = std::abs(x.y - center_.y) - 0.5 * extents_.y;
    bool on_x = std::abs(sx) <= tol;
    bool on_y = std::abs(sy) <= tol;
    if (on_x && on_y) {
        if (corners_ == CornerConvention::reject)
            throw CornerPoint("rectangle corner");
        Vec2 nx{-static_cast<double>(sign_of(x.x - center_.x)), 0.0};
        Vec2 ny{0.0, -static_cast<double>(sign_of(x.y - center_.y))};
        Vec2 n = nx + ny;
        bp.normal = n / norm(n);
    } else if (on_x) {
        bp.normal = {-static_cast<double>(sign_of(x.x - center_.x)), 0.0};
    } else {
        bp.normal = {0.0, -static_cast<double>(sign_of(x.y - center_.y))};
    }
    bp.tangent = rotate90(bp.normal);
    bp.curvature = 0.0;
    return bp;
}

std::vector<BoundaryPoint> Domain::boundary_samples(int count) const {
    if (count < 4) throw Error("boundary_samples requires count >= 4");
    std::vector<BoundaryPoint> out;
    out.reserve(static_cast<std::size_t>(count));

    if (kind_ == DomainKind::disk) {
        for (int k = 0; k < count; ++k) {
            double th = 2.0 * std::numbers::pi * k / count;
            Vec2 x = center_ + radius_ * Vec2{std::cos(th), std::sin(th)};
            out.push_back(normal_and_curvature(x));
        }
        return out;
    }

    // Rectangle edges in order: bottom, right, top, left.
    const double hx = 0.5 * extents_.x, hy = 0.5 * extents_.y;
    const Vec2 corners[4] = {
        {center_.x - hx, center_.y - hy},
        {center_.x + hx, center_.y - hy},
        {center_.x + hx, center_.y + hy},
        {center_.x - hx, center_.y + hy},
    };
    const double edge_len[4] = {extents_.x, extents_.y, extents_.x, extents_.y};
    const Vec2 edge_dir[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const Vec2 edge_normal[4] = {{0, 1}, {-1, 0}, {0, -1}, {1, 0}};

    bool include_corners = corners_ == CornerConvention::average;
    int interior = include_corners ? count - 4 : count;
    if (interior < 0) throw Error("boundary_samples: count too small for corners");

    // Proportional per-edge allocation with deterministic remainder order.
    const double per = perimeter();
    int alloc[4];
    double frac[4];
    int assigned = 0;
    for (int e = 0; e < 4; ++e) {
        double ideal = interior * edge_len[e] / per;
        alloc[e] = static_cast<int>(std::floor(ideal));
        frac[e] = ideal - alloc[e];
        assigned += alloc[e];
    }
    while (assigned < interior) {
        int best = 0;
        for (int e = 1; e < 4; ++e)
            if (frac[e] > frac[best]) best = e;
        ++alloc[best];
        frac[best] = -1.0;
        ++assigned;
    }

    for (int e = 0; e < 4; ++e) {
        if (include_corners) {
            BoundaryPoint bp;
            bp.position = corners[e];
            bp.normal = (edge_normal[e] + edge_normal[(e + 3) % 4]) /
                        norm(edge_normal[e] + edge_normal[(e + 3) % 4]);
            bp.tangent = rotate90(bp.normal);
            bp.curvature = 0.0;
            out.push_back(bp);
        }
        for (int j = 1; j <= alloc[e]; ++j) {
            double t = edge_len[e] * j / (alloc[e] + 1);
            BoundaryPoint bp;
            bp.position = corners[e] + t * edge_dir[e];
            bp.normal = edge_normal[e];
            bp.tangent = rotate90(bp.normal);
            bp.curvature = 0.0;
            out.push_back(bp);
        }
    }
    return out;
}

}  // namespace mate
