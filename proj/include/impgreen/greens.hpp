#pragma once

// Green's function of -Laplace + s^2 on the upper half-space with the
// impedance condition dG/dn + s beta G = 0, for Re s >= 0, s != 0.
//
//   G(x, y) = g(|x - y|) + g(|x - Ry|) + G_imp(x - Ry)
//
// g is the full-space kernel. G_imp is evaluated by one of several routes:
// the y-substituted integral (production route for Re s > 0), the original
// t-integral (cross-check), the integrated-by-parts form (production route on
// the imaginary axis) and closed forms for odd d with beta = 1.

#include "impgreen/geometry.hpp"
#include "impgreen/quadrature.hpp"

#include <complex>
#include <optional>
#include <string_view>
#include <vector>

namespace impgreen {

using cplx = std::complex<double>;

class Frequency {
public:
    enum class Regime { strictly_dissipative, limiting_absorption };

    /// Throws DomainError unless Re s >= 0 and s != 0. Re s = -0.0 counts as 0.
    explicit Frequency(cplx s);

    cplx value() const noexcept { return s_; }
    Regime regime() const noexcept { return regime_; }
    bool dissipative() const noexcept { return regime_ == Regime::strictly_dissipative; }

private:
    cplx s_;
    Regime regime_;
};

enum class Path {
    closed_form_d1,
    closed_form_d3_beta1,
    closed_form_odd_beta1,
    quadrature_y_form,
    quadrature_t_form,
    regularized,
    limit_absorption_extrapolated,
};

std::string_view to_string(Path path);
std::optional<Path> path_from_string(std::string_view name);

struct Evaluation {
    cplx value{};
    Path path = Path::quadrature_y_form;
    double error_estimate = 0.0;
    bool converged = true;
};

/// Principal branch of s^(twice_exponent / 2); exact integer powers when even.
cplx principal_pow(cplx s, int twice_exponent);

/// Full-space kernel (2 pi)^-(nu+3/2) (s/r)^(nu+1/2) K_{nu+1/2}(s r), d >= 2.
cplx g_nu(const ProblemParams& params, const Frequency& s, double r);

/// 2 beta (s/2 pi)^(nu+3/2) K_{nu+1/2}(s r) / r^(nu+1/2): the inhomogeneity of
/// the first-order z_d identity dG_imp/dz_d - s beta G_imp = (this).
cplx impedance_source_term(const DiffVector& z, const ProblemParams& params, const Frequency& s);

/// Core integral over y in [0, inf) of
///   e^{-s y} / (t + beta mu~) * e^{s mu~} K_{nu+1/2}(s mu~) / (s mu~)^(nu-1/2).
/// Requires Re s > 0, or d >= 4 on the imaginary axis.
QuadratureResult psi(const DiffVector& z, const ProblemParams& params, const Frequency& s,
                     const QuadratureConfig& cfg = {});

/// d/dy of e^{s mu~} K_{nu+1/2}(s mu~) / ((t + beta mu~) (s mu~)^(nu-1/2)).
cplx q_nu(const DiffVector& z, const ProblemParams& params, const Frequency& s, double y);

/// psi after one integration by parts: boundary term plus (1/s) * integral of
/// e^{-s y} q_nu. Defined on the whole closed half-plane minus 0.
QuadratureResult psi_regularized(const DiffVector& z, const ProblemParams& params,
                                 const Frequency& s, const QuadratureConfig& cfg = {});

/// G_imp = -(beta/pi) (s^2/2pi)^(nu+1/2) e^{-s|z|} psi. Uses psi on Re s > 0 and
/// psi_regularized on the imaginary axis unless a route is forced (y-form or
/// regularized only).
Evaluation g_imp(const DiffVector& z, const ProblemParams& params, const Frequency& s,
                 const QuadratureConfig& cfg = {}, std::optional<Path> route = std::nullopt);

/// G_imp from the t-integral; Re s > 0 only.
Evaluation g_imp_t_form(const DiffVector& z, const ProblemParams& params, const Frequency& s,
                        const QuadratureConfig& cfg = {});

/// d = 3, beta = 1: -(s/2 pi) e^{-s|z|} U(1, 1, s(|z| + z_3)).
Evaluation g_imp_closed_d3_beta1(const DiffVector& z, const ProblemParams& params,
                                 const Frequency& s);

/// Odd d >= 5, beta = 1: (s - d/dz_d)^(nu-1) Psi_nu with
/// Psi_nu = -s/(2 pi)^(nu+1) e^{-s|z|} / ((|z| + z_d)^nu |z|).
Evaluation g_imp_closed_odd_beta1(const DiffVector& z, const ProblemParams& params,
                                  const Frequency& s);

/// d = 1 closed form.
cplx green_1d(double x, double y, double beta, const Frequency& s);

struct GreenOptions {
    QuadratureConfig quadrature{};
    /// Force a route for G_imp (testing); nullopt selects automatically.
    std::optional<Path> path{};
    /// Permit targets on the boundary x_d = 0 (used by the boundary residual check).
    bool allow_boundary_target = false;
    /// Damping sequence for the limit_absorption_extrapolated route.
    std::vector<double> absorption_eps{1e-2, 1e-3, 1e-4};
};

/// G(x, y). Refuses |x - y| < 1e-12 (|x| + |y| + 1).
Evaluation green(const HalfSpacePoint& x, const HalfSpacePoint& y, const ProblemParams& params,
                 const Frequency& s, const GreenOptions& options = {});

/// Polynomial (Neville) extrapolation of samples f(eps_i) to eps = 0, with the
/// difference to the next-lower-order extrapolant as error estimate.
struct Extrapolated {
    cplx value;
    double error;
};
Extrapolated extrapolate_to_zero(const std::vector<double>& eps, const std::vector<cplx>& values);

} // namespace impgreen
