#include "mate/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "mate/errors.hpp"

namespace mate {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::interior: return "interior";
        case NodeKind::boundary: return "boundary";
        default: return "pole";
    }
}

}  // namespace

std::string render_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_solution_csv(std::ostream& os, const DiscreteSystem& sys, const GridFunction& u) {
    const Grid& g = sys.grid();
    os << "node_id,kind,x1,x2,u,res,lambda_min_w\n";
    for (int n = 0; n < g.size(); ++n) {
        double res = 0.0;
        bool defined = sys.row_residual(u, n, &res);
        Vec2 x = g.position(n);
        double lm = lambda_min(augmented_hessian(u, sys.problem().A, n));
        os << n << ',' << kind_name(g.kind(n)) << ',' << num(x.x) << ',' << num(x.y) << ','
           << num(u[n]) << ',' << (defined ? num(res) : std::string("nan")) << ','
           << num(lm) << '\n';
    }
}

void write_orders_csv(std::ostream& os, const std::vector<OrderRow>& rows) {
    os << "resolution,err_inf,err_l2,order_inf,order_l2\n";
    for (const OrderRow& r : rows)
        os << r.resolution << ',' << num(r.err_inf) << ',' << num(r.err_l2) << ','
           << num(r.order_inf) << ',' << num(r.order_l2) << '\n';
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open for writing: " + path);
    f << content;
    if (!f) throw Error("write failed: " + path);
}

}  // namespace mate
