#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mate/fields.hpp"
#include "mate/grid.hpp"

namespace mate {

// Flat key = value sections; see load_config for the accepted keys.
struct RunConfig {
    // [domain]
    DomainKind domain_kind = DomainKind::disk;
    Vec2 center{0, 0};
    double radius = 1.0;
    Vec2 extents{1, 1};
    CornerConvention corners = CornerConvention::average;

    // [lambda] target domain for the balance command; defaults to [domain]
    bool has_lambda = false;
    DomainKind lambda_kind = DomainKind::disk;
    Vec2 lambda_center{0, 0};
    double lambda_radius = 1.0;
    Vec2 lambda_extents{1, 1};

    // [grid]
    int grid_a = 32;  // n_r | n_x
    int grid_b = 64;  // n_theta | n_y

    // [problem]
    std::string A_name = "zero";  // zero | conformal | ot:dot | ot:quad
    std::string B_expr = "1";
    std::string boundary = "neumann";  // neumann | oblique
    std::string phi_expr = "z";        // neumann data
    std::string G_name;                // oblique builtin
    double z_lo = -1.0;
    double z_hi = 1.0;
    bool has_pin = false;
    Vec2 pin_point{0, 0};
    double pin_value = 0.0;

    // [solve]
    double tol = 1e-10;
    int max_iter = 50;
    double margin_floor = 1e-6;

    // [checks]
    double p_max = 5.0;
    double K = 1.0;

    // [mms]
    std::string mms_case = "MA-DISK";
    std::vector<int> resolutions{32, 64, 128};

    // [balance]
    std::string f_expr = "1";
    std::string fstar_expr = "1";
    int balance_resolution = 256;

    // [output]
    std::string out_dir = ".";
};

// Throws ConfigError with line/field diagnostics; unknown builtin names are
// reported with their nearest valid match.
RunConfig load_config(const std::string& path);

Domain make_domain(const RunConfig& cfg);
Domain make_lambda_domain(const RunConfig& cfg);
ProblemSpec make_problem(const RunConfig& cfg);
Grid make_grid(const RunConfig& cfg);

}  // namespace mate
