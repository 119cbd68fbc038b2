#pragma once

// Executable checks of the half-space Green's function: finite-difference
// residuals of the PDE, the boundary condition and the z_d identities,
// agreement between representations, and the limiting-absorption limit.

#include "impgreen/greens.hpp"

#include <json.hpp>

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace impgreen {

struct ResidualReport {
    std::string check_name;
    nlohmann::json params = nlohmann::json::object();
    std::vector<double> h_values;   // strictly decreasing
    std::vector<double> residuals;  // one per h, or per compared pair
    double observed_order = std::numeric_limits<double>::quiet_NaN();
    bool pass = false;
    double tolerance_used = 0.0;

    nlohmann::json to_json() const;
};

/// Slope of log(residual) against log(h), least squares over all levels.
double observed_order(const std::vector<double>& h, const std::vector<double>& residuals);

/// Evaluation options shared by the checks. FD steps are h * (1 + |x|).
struct CheckOptions {
    GreenOptions green{};
    /// Fault injection: G is evaluated with beta * beta_scale while the checks
    /// test against beta. 1 in normal operation.
    double beta_scale = 1.0;
    CheckOptions() { green.quadrature.rel_tol = 1e-13; }
};

/// (-Delta_h + s^2) G(., y) at x with the second-order central stencil, relative
/// to |s|^2 |G|. Passes when the observed order is 2 +- 0.3.
ResidualReport helmholtz_residual(const HalfSpacePoint& x, const HalfSpacePoint& y,
                                  const ProblemParams& params, const Frequency& s,
                                  const std::vector<double>& h_list, const CheckOptions& opts = {});

/// Deliberate defects for negative controls of the boundary check.
struct BoundaryVariant {
    std::optional<double> beta_override;  // test the condition with this beta
    bool flip_normal = false;             // use +dG/dx_d instead of -dG/dx_d
};

/// -dG/dx_d + s beta G at a boundary point, one-sided fourth-order stencil into
/// the domain, relative to |s beta G|. Passes when the observed order is >= 3.
ResidualReport impedance_bc_residual(const HalfSpacePoint& x_on_boundary, const HalfSpacePoint& y,
                                     const ProblemParams& params, const Frequency& s,
                                     const std::vector<double>& h_list,
                                     const CheckOptions& opts = {},
                                     const BoundaryVariant& variant = {});

/// Central FD of G_imp in z_d against source + s beta G_imp. Order 2 +- 0.2.
ResidualReport derivative_identity_check(const DiffVector& z, const ProblemParams& params,
                                         const Frequency& s, const std::vector<double>& h_list,
                                         const CheckOptions& opts = {});

/// beta = 1 form of the same identity, (d/dz_d - s) G_imp = source, evaluated
/// through the closed forms when d is odd. Order 2 +- 0.2.
ResidualReport ode_beta1_check(const DiffVector& z, const ProblemParams& params,
                               const Frequency& s, const std::vector<double>& h_list,
                               const CheckOptions& opts = {});

/// y-form, t-form and regularized G_imp pairwise within err_i + err_j + 1e-10 |G_imp|.
ResidualReport cross_representation_check(const DiffVector& z, const ProblemParams& params,
                                          const Frequency& s, const QuadratureConfig& cfg = {});

/// Closed form against the y-form quadrature, relative difference <= tol.
ResidualReport closed_form_check(const DiffVector& z, const ProblemParams& params,
                                 const Frequency& s, double tol, const CheckOptions& opts = {});

/// Richardson extrapolation of G at eps + i k against the regularized route at i k.
ResidualReport limit_absorption_probe(const HalfSpacePoint& x, const HalfSpacePoint& y,
                                      const ProblemParams& params, double k,
                                      const std::vector<double>& eps_list, double tol = 1e-6,
                                      const GreenOptions& options = {});

enum class Suite { quick, full };

/// Runs the suite; beta_scale != 1 injects a wrong impedance into every
/// evaluation (the suite must then fail).
std::vector<ResidualReport> run_selfcheck(Suite suite, double beta_scale = 1.0);

} // namespace impgreen
