#include "mate/grid.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <Eigen/Dense>

#include "mate/errors.hpp"

namespace mate {

namespace {

// Weight accumulator that merges duplicate nodes deterministically.
class StencilBuilder {
public:
    void add(int node, double w) {
        if (w != 0.0) acc_[node] += w;
    }
    void add_scaled(const StencilBuilder& other, double s) {
        for (const auto& [n, w] : other.acc_) add(n, s * w);
    }
    Stencil done() const {
        Stencil s;
        s.reserve(acc_.size());
        for (const auto& [n, w] : acc_)
            if (w != 0.0) s.push_back({n, w});
        return s;
    }

private:
    std::map<int, double> acc_;
};

// One-dimensional second-order stencils on a uniform line of n points.
void line_d1(StencilBuilder& b, const std::function<int(int)>& id, int i, int n, double h) {
    if (i == 0) {
        b.add(id(0), -1.5 / h);
        b.add(id(1), 2.0 / h);
        b.add(id(2), -0.5 / h);
    } else if (i == n - 1) {
        b.add(id(n - 1), 1.5 / h);
        b.add(id(n - 2), -2.0 / h);
        b.add(id(n - 3), 0.5 / h);
    } else {
        b.add(id(i - 1), -0.5 / h);
        b.add(id(i + 1), 0.5 / h);
    }
}

void line_d2(StencilBuilder& b, const std::function<int(int)>& id, int i, int n, double h) {
    double h2 = h * h;
    if (i == 0) {
        b.add(id(0), 2.0 / h2);
        b.add(id(1), -5.0 / h2);
        b.add(id(2), 4.0 / h2);
        b.add(id(3), -1.0 / h2);
    } else if (i == n - 1) {
        b.add(id(n - 1), 2.0 / h2);
        b.add(id(n - 2), -5.0 / h2);
        b.add(id(n - 3), 4.0 / h2);
        b.add(id(n - 4), -1.0 / h2);
    } else {
        b.add(id(i - 1), 1.0 / h2);
        b.add(id(i), -2.0 / h2);
        b.add(id(i + 1), 1.0 / h2);
    }
}

// Coefficients of the 1-D first-derivative stencil as (offset, weight) pairs,
// used to compose the cross derivative.
std::vector<std::pair<int, double>> d1_offsets(int i, int n, double h) {
    if (i == 0) return {{0, -1.5 / h}, {1, 2.0 / h}, {2, -0.5 / h}};
    if (i == n - 1) return {{0, 1.5 / h}, {-1, -2.0 / h}, {-2, 0.5 / h}};
    return {{-1, -0.5 / h}, {1, 0.5 / h}};
}

}  // namespace

const BoundaryPoint& Grid::boundary_frame(int n) const {
    int f = frame_index_[static_cast<std::size_t>(n)];
    if (f < 0) throw Error("node has no boundary frame");
    return frames_[static_cast<std::size_t>(f)];
}

int Grid::nearest_node(const Vec2& x) const {
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (int n = 0; n < size(); ++n) {
        double d = norm2(pos_[static_cast<std::size_t>(n)] - x);
        if (d < bd) { bd = d; best = n; }
    }
    return best;
}

Grid Grid::build(const Domain& domain, int a, int b) {
    if (domain.kind() == DomainKind::disk) return build_disk(domain, a, b);
    return build_rect(domain, a, b);
}

Grid Grid::build_disk(const Domain& d, int n_r, int n_theta) {
    if (n_r < 4 || n_theta < 8)
        throw ResolutionTooCoarse("disk grid requires n_r >= 4, n_theta >= 8");
    if (n_theta % 2 != 0)
        throw ResolutionTooCoarse("disk grid requires even n_theta (across-pole pairing)");

    Grid g;
    g.domain_ = d;
    g.n_r_ = n_r;
    g.n_theta_ = n_theta;
    const double R = d.radius();
    const double hr = R / n_r;
    const double ht = 2.0 * std::numbers::pi / n_theta;
    g.h_ = hr;

    const int total = n_r * n_theta + 1;
    g.kind_.resize(static_cast<std::size_t>(total));
    g.pos_.resize(static_cast<std::size_t>(total));
    g.sten_.resize(static_cast<std::size_t>(total));
    g.frame_index_.assign(static_cast<std::size_t>(total), -1);

    auto id = [n_theta](int i, int j) {
        if (i == 0) return 0;  // pole, any j
        int jj = ((j % n_theta) + n_theta) % n_theta;
        return 1 + (i - 1) * n_theta + jj;
    };

    g.kind_[0] = NodeKind::pole;
    g.pos_[0] = d.center();
    for (int i = 1; i <= n_r; ++i) {
        double r = i * hr;
        for (int j = 0; j < n_theta; ++j) {
            double th = j * ht;
            int n = id(i, j);
            g.pos_[static_cast<std::size_t>(n)] =
                d.center() + r * Vec2{std::cos(th), std::sin(th)};
            g.kind_[static_cast<std::size_t>(n)] =
                (i == n_r) ? NodeKind::boundary : NodeKind::interior;
            if (i == n_r) {
                g.frame_index_[static_cast<std::size_t>(n)] =
                    static_cast<int>(g.frames_.size());
                g.frames_.push_back(d.normal_and_curvature(g.pos_[static_cast<std::size_t>(n)]));
                ++g.boundary_count_;
            }
        }
    }

    // Ring stencils: polar derivatives, then the chain rule to Cartesian.
    for (int i = 1; i <= n_r; ++i) {
        double r = i * hr;
        for (int j = 0; j < n_theta; ++j) {
            StencilBuilder ur, urr, ut, utt, urt;
            if (i < n_r) {
                // centered in r; the inward neighbour of ring 1 is the pole
                ur.add(id(i + 1, j), 0.5 / hr);
                ur.add(id(i - 1, j), -0.5 / hr);
                urr.add(id(i + 1, j), 1.0 / (hr * hr));
                urr.add(id(i, j), -2.0 / (hr * hr));
                urr.add(id(i - 1, j), 1.0 / (hr * hr));
                double c = 1.0 / (4.0 * hr * ht);
                urt.add(id(i + 1, j + 1), c);
                urt.add(id(i + 1, j - 1), -c);
                urt.add(id(i - 1, j + 1), -c);  // cancels at the pole for i = 1
                urt.add(id(i - 1, j - 1), c);
            } else {
                // boundary ring: second-order one-sided in r
                ur.add(id(i, j), 1.5 / hr);
                ur.add(id(i - 1, j), -2.0 / hr);
                ur.add(id(i - 2, j), 0.5 / hr);
                urr.add(id(i, j), 2.0 / (hr * hr));
                urr.add(id(i - 1, j), -5.0 / (hr * hr));
                urr.add(id(i - 2, j), 4.0 / (hr * hr));
                urr.add(id(i - 3, j), -1.0 / (hr * hr));
                // d/dtheta of the one-sided u_r
                for (int dj : {-1, 1}) {
                    double s = dj * 0.5 / ht;
                    urt.add(id(i, j + dj), 1.5 / hr * s);
                    urt.add(id(i - 1, j + dj), -2.0 / hr * s);
                    urt.add(id(i - 2, j + dj), 0.5 / hr * s);
                }
            }
            ut.add(id(i, j + 1), 0.5 / ht);
            ut.add(id(i, j - 1), -0.5 / ht);
            utt.add(id(i, j + 1), 1.0 / (ht * ht));
            utt.add(id(i, j), -2.0 / (ht * ht));
            utt.add(id(i, j - 1), 1.0 / (ht * ht));

            double th = j * ht;
            double c = std::cos(th), s = std::sin(th);

            NodeStencils ns;
            {
                StencilBuilder b;
                b.add_scaled(ur, c);
                b.add_scaled(ut, -s / r);
                ns.gx = b.done();
            }
            {
                StencilBuilder b;
                b.add_scaled(ur, s);
                b.add_scaled(ut, c / r);
                ns.gy = b.done();
            }
            {
                StencilBuilder b;
                b.add_scaled(urr, c * c);
                b.add_scaled(urt, -2.0 * c * s / r);
                b.add_scaled(ut, 2.0 * c * s / (r * r));
                b.add_scaled(ur, s * s / r);
                b.add_scaled(utt, s * s / (r * r));
                ns.hxx = b.done();
            }
            {
                StencilBuilder b;
                b.add_scaled(urr, s * s);
                b.add_scaled(urt, 2.0 * c * s / r);
                b.add_scaled(ut, -2.0 * c * s / (r * r));
                b.add_scaled(ur, c * c / r);
                b.add_scaled(utt, c * c / (r * r));
                ns.hyy = b.done();
            }
            {
                StencilBuilder b;
                b.add_scaled(urr, c * s);
                b.add_scaled(ur, -c * s / r);
                b.add_scaled(utt, -c * s / (r * r));
                b.add_scaled(urt, (c * c - s * s) / r);
                b.add_scaled(ut, -(c * c - s * s) / (r * r));
                ns.hxy = b.done();
            }
            g.sten_[static_cast<std::size_t>(id(i, j))] = std::move(ns);
        }
    }

    // Pole jet: least-squares quadratic over the pole and the first ring.
    {
        const int m = n_theta + 1;
        Eigen::MatrixXd phi(m, 6);
        std::vector<int> nodes(static_cast<std::size_t>(m));
        nodes[0] = 0;
        phi.row(0) << 1, 0, 0, 0, 0, 0;
        for (int j = 0; j < n_theta; ++j) {
            double th = j * ht;
            double px = hr * std::cos(th), py = hr * std::sin(th);
            nodes[static_cast<std::size_t>(j + 1)] = id(1, j);
            phi.row(j + 1) << 1, px, py, 0.5 * px * px, px * py, 0.5 * py * py;
        }
        Eigen::MatrixXd w =
            (phi.transpose() * phi).ldlt().solve(phi.transpose());  // 6 x m
        NodeStencils ns;
        auto row_to_stencil = [&](int r) {
            StencilBuilder b;
            for (int k = 0; k < m; ++k) b.add(nodes[static_cast<std::size_t>(k)], w(r, k));
            return b.done();
        };
        ns.gx = row_to_stencil(1);
        ns.gy = row_to_stencil(2);
        ns.hxx = row_to_stencil(3);
        ns.hxy = row_to_stencil(4);
        ns.hyy = row_to_stencil(5);
        g.sten_[0] = std::move(ns);
    }
    return g;
}

Grid Grid::build_rect(const Domain& d, int n_x, int n_y) {
    if (n_x < 5 || n_y < 5)
        throw ResolutionTooCoarse("rectangle grid requires n_x, n_y >= 5");

    Grid g;
    g.domain_ = d;
    const Vec2 c = d.center(), e = d.extents();
    const double hx = e.x / (n_x - 1);
    const double hy = e.y / (n_y - 1);
    g.h_ = std::max(hx, hy);

    const int total = n_x * n_y;
    g.kind_.resize(static_cast<std::size_t>(total));
    g.pos_.resize(static_cast<std::size_t>(total));
    g.sten_.resize(static_cast<std::size_t>(total));
    g.frame_index_.assign(static_cast<std::size_t>(total), -1);

    auto id = [n_x](int i, int j) { return j * n_x + i; };

    for (int j = 0; j < n_y; ++j) {
        for (int i = 0; i < n_x; ++i) {
            int n = id(i, j);
            g.pos_[static_cast<std::size_t>(n)] = {c.x - 0.5 * e.x + i * hx,
                                                   c.y - 0.5 * e.y + j * hy};
            bool edge = i == 0 || i == n_x - 1 || j == 0 || j == n_y - 1;
            g.kind_[static_cast<std::size_t>(n)] =
                edge ? NodeKind::boundary : NodeKind::interior;
            if (edge) {
                ++g.boundary_count_;
                g.frame_index_[static_cast<std::size_t>(n)] =
                    static_cast<int>(g.frames_.size());
                // Corner frames use averaged normals regardless of the
                // domain's query convention; the grid needs a usable frame
                // for every boundary row.
                Domain frame_domain =
                    d.corner_convention() == CornerConvention::reject
                        ? Domain::rectangle(c, e, CornerConvention::average)
                        : d;
                g.frames_.push_back(
                    frame_domain.normal_and_curvature(g.pos_[static_cast<std::size_t>(n)]));
            }
        }
    }

    for (int j = 0; j < n_y; ++j) {
        for (int i = 0; i < n_x; ++i) {
            auto idx = [&](int ii) { return id(ii, j); };
            auto idy = [&](int jj) { return id(i, jj); };
            NodeStencils ns;
            {
                StencilBuilder b;
                line_d1(b, idx, i, n_x, hx);
                ns.gx = b.done();
            }
            {
                StencilBuilder b;
                line_d1(b, idy, j, n_y, hy);
                ns.gy = b.done();
            }
            {
                StencilBuilder b;
                line_d2(b, idx, i, n_x, hx);
                ns.hxx = b.done();
            }
            {
                StencilBuilder b;
                line_d2(b, idy, j, n_y, hy);
                ns.hyy = b.done();
            }
            {
                // cross derivative: tensor product of the two 1-D stencils
                StencilBuilder b;
                for (const auto& [oi, wi] : d1_offsets(i, n_x, hx))
                    for (const auto& [oj, wj] : d1_offsets(j, n_y, hy))
                        b.add(id(i + oi, j + oj), wi * wj);
                ns.hxy = b.done();
            }
            g.sten_[static_cast<std::size_t>(id(i, j))] = std::move(ns);
        }
    }
    return g;
}

GridFunction GridFunction::sample(const Grid& g, const std::function<double(const Vec2&)>& f) {
    GridFunction u(g);
    for (int n = 0; n < g.size(); ++n) u[n] = f(g.position(n));
    return u;
}

double apply_stencil(const Stencil& s, const GridFunction& u) {
    double acc = 0.0;
    for (const StencilTerm& t : s) acc += t.weight * u[t.node];
    return acc;
}

namespace {

// Deviation form: every derivative stencil annihilates constants, so summing
// weight * (u - u_center) removes the cancellation noise a large offset would
// otherwise leave through the O(1/(r h)^2) near-pole weights.
double apply_stencil_dev(const Stencil& s, const GridFunction& u, double base) {
    double acc = 0.0;
    for (const StencilTerm& t : s) acc += t.weight * (u[t.node] - base);
    return acc;
}

}  // namespace

NodalJet fd_jet(const GridFunction& u, int node) {
    const NodeStencils& s = u.grid->stencils(node);
    const double base = u[node];
    NodalJet j;
    j.value = base;
    j.gradient = {apply_stencil_dev(s.gx, u, base), apply_stencil_dev(s.gy, u, base)};
    j.hessian = {apply_stencil_dev(s.hxx, u, base), apply_stencil_dev(s.hxy, u, base),
                 apply_stencil_dev(s.hyy, u, base)};
    return j;
}

Sym2 augmented_hessian(const GridFunction& u, const MatrixField& A, int node) {
    NodalJet j = fd_jet(u, node);
    return j.hessian - A(u.grid->position(node), j.value, j.gradient);
}

double ellipticity_margin(const GridFunction& u, const MatrixField& A) {
    double m = std::numeric_limits<double>::infinity();
    for (int n = 0; n < u.grid->size(); ++n) {
        if (u.grid->kind(n) == NodeKind::boundary) continue;
        m = std::min(m, lambda_min(augmented_hessian(u, A, n)));
    }
    return m;
}

}  // namespace mate
