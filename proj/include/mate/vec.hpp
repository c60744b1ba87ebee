#pragma once

#include <array>
#include <cmath>

namespace mate {

// 2-D point / vector.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr double& operator[](int i) { return i == 0 ? x : y; }
    constexpr double operator[](int i) const { return i == 0 ? x : y; }

    constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(const Vec2& r) { x += r.x; y += r.y; return *this; }
    Vec2& operator-=(const Vec2& r) { x -= r.x; y -= r.y; return *this; }
};

constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }
constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }
constexpr double norm2(const Vec2& v) { return v.x * v.x + v.y * v.y; }

// Symmetric 2x2 matrix stored as (xx, xy, yy).
struct Sym2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    constexpr Sym2() = default;
    constexpr Sym2(double a, double b, double c) : xx(a), xy(b), yy(c) {}

    static constexpr Sym2 identity() { return {1.0, 0.0, 1.0}; }
    static constexpr Sym2 outer(const Vec2& p) { return {p.x * p.x, p.x * p.y, p.y * p.y}; }

    constexpr double operator()(int i, int j) const {
        return (i == 0) ? (j == 0 ? xx : xy) : (j == 0 ? xy : yy);
    }

    constexpr Sym2 operator+(const Sym2& r) const { return {xx + r.xx, xy + r.xy, yy + r.yy}; }
    constexpr Sym2 operator-(const Sym2& r) const { return {xx - r.xx, xy - r.xy, yy - r.yy}; }
    constexpr Sym2 operator*(double s) const { return {xx * s, xy * s, yy * s}; }
    constexpr Sym2 operator-() const { return {-xx, -xy, -yy}; }

    constexpr double trace() const { return xx + yy; }
    constexpr double det() const { return xx * yy - xy * xy; }

    constexpr Vec2 apply(const Vec2& v) const {
        return {xx * v.x + xy * v.y, xy * v.x + yy * v.y};
    }
    constexpr double quad(const Vec2& a, const Vec2& b) const {
        return xx * a.x * b.x + xy * (a.x * b.y + a.y * b.x) + yy * a.y * b.y;
    }
};

constexpr Sym2 operator*(double s, const Sym2& m) { return m * s; }

// Closed-form eigenvalues of a symmetric 2x2 matrix.
inline double lambda_min(const Sym2& m) {
    double h = 0.5 * (m.xx + m.yy);
    double d = std::sqrt(0.25 * (m.xx - m.yy) * (m.xx - m.yy) + m.xy * m.xy);
    return h - d;
}
inline double lambda_max(const Sym2& m) {
    double h = 0.5 * (m.xx + m.yy);
    double d = std::sqrt(0.25 * (m.xx - m.yy) * (m.xx - m.yy) + m.xy * m.xy);
    return h + d;
}

// Closed-form inverse; caller guarantees det != 0.
inline Sym2 inverse(const Sym2& m) {
    double d = m.det();
    return {m.yy / d, -m.xy / d, m.xx / d};
}

inline double frobenius(const Sym2& m) {
    return std::sqrt(m.xx * m.xx + 2.0 * m.xy * m.xy + m.yy * m.yy);
}

// General 2x2 matrix (mixed cost Hessians c_{x,y} need not be symmetric).
struct Mat2 {
    // row-major a(i,j)
    std::array<double, 4> a{0.0, 0.0, 0.0, 0.0};

    constexpr Mat2() = default;
    constexpr Mat2(double a00, double a01, double a10, double a11) : a{a00, a01, a10, a11} {}

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    constexpr double operator()(int i, int j) const { return a[2 * i + j]; }
    constexpr double& operator()(int i, int j) { return a[2 * i + j]; }

    constexpr double det() const { return a[0] * a[3] - a[1] * a[2]; }
    constexpr Vec2 apply(const Vec2& v) const {
        return {a[0] * v.x + a[1] * v.y, a[2] * v.x + a[3] * v.y};
    }
    // Solve M s = r; caller guarantees det != 0.
    constexpr Vec2 solve(const Vec2& r) const {
        double d = det();
        return {(a[3] * r.x - a[1] * r.y) / d, (a[0] * r.y - a[2] * r.x) / d};
    }
};

}  // namespace mate
