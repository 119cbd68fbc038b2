#pragma once

// Adaptive Gauss-Kronrod (7/15) integration of complex integrands on [0, inf).
//
// Three strategies, chosen from the config:
//   * exponential decay (decay_rate > 0): truncate at Y = truncation_point()
//     and integrate [0, Y] adaptively;
//   * oscillatory algebraic decay (decay too weak, oscillation_frequency > 0):
//     integrate a head interval, then sum half-period cells and accelerate the
//     partial sums with Wynn's epsilon algorithm;
//   * plain algebraic decay: map y = u/(1-u) onto (0, 1).

#include <complex>
#include <functional>
#include <vector>

namespace impgreen {

using cplx = std::complex<double>;
using Integrand = std::function<cplx(double)>;

struct QuadratureConfig {
    double rel_tol = 1e-11;
    double abs_tol = 1e-300;
    int max_subdivisions = 2000;
    // Known exponential decay rate of |f|; 0 when the decay is only algebraic.
    double decay_rate = 0.0;
    // e-foldings kept before the tail is dropped.
    double truncation_safety = 40.0;
    // Angular frequency of the e^{-i w y} factor, if any (|Im s| for the kernels here).
    double oscillation_frequency = 0.0;
    // Length scale over which the non-oscillatory factor varies; sets the head
    // interval of the oscillatory-tail strategy.
    double length_scale = 1.0;
    // Truncation is abandoned for the oscillatory-tail strategy when [0, Y]
    // would hold more periods than this.
    double max_truncated_periods = 400.0;

    void validate() const;
};

struct QuadratureResult {
    cplx value{};
    double error_estimate = 0.0;
    long evaluations = 0;
    // Upper end of the integrated range; +inf when the tail was extrapolated or mapped.
    double truncation_point = 0.0;
    bool converged = false;
};

/// Integral of f over [0, inf).
QuadratureResult integrate_semi_infinite(const Integrand& f, const QuadratureConfig& cfg);

/// Adaptive integral of f over [a, b] (finite).
QuadratureResult integrate_interval(const Integrand& f, double a, double b,
                                    const QuadratureConfig& cfg);

/// Initial Y such that integrand_scale * exp(-decay_rate * Y) is below the tolerance
/// floor: truncation_safety / decay_rate for integrand_scale <= 1.
/// Throws DomainError when decay_rate == 0.
double truncation_point(const QuadratureConfig& cfg, double integrand_scale = 1.0);

namespace detail {
/// Wynn epsilon extrapolation of a sequence of partial sums; returns the
/// estimate and an error estimate built from the last diagonal entries.
struct Extrapolation {
    cplx value;
    double error;
};
Extrapolation wynn_epsilon(const std::vector<cplx>& partial_sums);
} // namespace detail

} // namespace impgreen
