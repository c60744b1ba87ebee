#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mate/fields.hpp"
#include "mate/geometry.hpp"

#include "json.hpp"

namespace mate {

// Discretizes the quantifier "for all (x, z, p)" by dense sampling.
struct SampleBox {
    std::vector<Vec2> x_samples;
    std::vector<BoundaryPoint> boundary_samples;
    std::vector<double> z_values;
    std::vector<double> p_values;  // per-axis grid, symmetric about 0
    double p_max = 5.0;
    int direction_count = 64;

    // 64 boundary points, 9 z values, p_max 5 with 9 points per axis,
    // 64 directions, interior lattice clipped to the domain.
    static SampleBox defaults(const Domain& domain, double z_lo, double z_hi);

    void validate() const;
};

enum class Verdict { holds_strictly, holds_weakly, fails };

std::string to_string(Verdict v);

struct CertWitness {
    Vec2 x;
    double z = 0.0;
    Vec2 p;
    std::vector<double> dirs;  // check-specific (angles, tangential sweep values)
};

struct CertReport {
    std::string condition;
    double margin = 0.0;
    Verdict verdict = Verdict::fails;
    CertWitness witness;
    long samples_used = 0;
    std::map<std::string, double> constants;
    // Re-evaluates the margin quantity at the stored witness.
    std::function<double()> recheck;

    nlohmann::json to_json() const;
};

// Margin > 1e-9: strict; margin >= -1e-9: weak (FD jet noise floor).
Verdict verdict_from_margin(double margin);

// Regularity: min over samples and orthonormal pairs of
// A_{ij,kl} xi_i xi_j eta_k eta_l, direction sweep golden-section refined.
CertReport check_regularity(const MatrixField& A, const SampleBox& box, bool strict = false);

// Monotonicity in z of A, B and G: constants gamma1 (min eig D_z A),
// min B_z, gamma0 (min of -G_z); margin is the least of the three.
CertReport check_monotonicity(const MatrixField& A, const ScalarField& B,
                              const BoundaryOperator& G, const SampleBox& box);

// Uniform A-convexity of the domain with respect to phi:
// margin = -max over boundary x, tangents, z, and p with p.nu = phi(x,z) of
// (D_i nu_j - D_{p_k} A_ij nu_k) tau_i tau_j. Requires A regular (the
// equality reduction p.nu = phi is only valid then).
CertReport check_A_convexity(const Domain& domain, const MatrixField& A,
                             const std::function<double(const Vec2&, double)>& phi,
                             double z_lo, double z_hi, const SampleBox& box);

// Condition (QS): reports mu0* = max of max(0, -lambda_min(A))/(1+|p|^2).
CertReport check_QS(const MatrixField& A, const SampleBox& box);

// Obliqueness and p-concavity of G: beta0 = min G_p.nu, sigma0 = max |G_p|,
// margin = -max eigenvalue of G_pp.
CertReport check_oblique_concavity(const BoundaryOperator& G, const Domain& domain,
                                   const SampleBox& box);

// Structure conditions for solution bounds: samples z in [-2K,-K) and (K,2K].
CertReport check_solution_bounds(const MatrixField& A, const ScalarField& B,
                                 const std::function<double(const Vec2&, double)>& phi,
                                 double K, const SampleBox& box);

// Mass balance: integral of f over Omega vs f* over Lambda, midpoint
// quadrature on each domain's native grid at the given per-axis resolution.
CertReport check_mass_balance(const std::function<double(const Vec2&)>& f,
                              const std::function<double(const Vec2&)>& fstar,
                              const Domain& omega, const Domain& lambda,
                              int resolution = 256);

// min{m0, -phi0/gamma0} - (beta_sup/gamma0 + diam) * sup_Dc.
double bakelman_lower_bound(double m0, double phi0, double gamma0, double beta_sup,
                            double diam_omega, double sup_Dc);

// Golden-section minimization of f on [a, b].
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double* arg_min = nullptr);

}  // namespace mate
