#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mate/solver.hpp"
#include "mate/verify.hpp"

namespace mate {

// Canonical JSON rendering: alphabetical keys, two-space indent, trailing
// newline. Byte-identical across runs for identical content.
std::string render_json(const nlohmann::json& j);

// Columns: node_id, kind, x1, x2, u, res, lambda_min_w.
void write_solution_csv(std::ostream& os, const DiscreteSystem& sys, const GridFunction& u);

// Columns: resolution, err_inf, err_l2, order_inf, order_l2.
void write_orders_csv(std::ostream& os, const std::vector<OrderRow>& rows);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace mate
