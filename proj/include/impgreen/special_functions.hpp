#pragma once

// Modified Bessel functions of the second kind for complex argument in the
// closed right half-plane, restricted to integer and half-integer orders,
// plus the exponential integral E1 and Tricomi's U(1,1,z).

#include <complex>

namespace impgreen {

using cplx = std::complex<double>;

/// Order lambda stored as 2*lambda so integer and half-integer orders are exact.
class BesselOrder {
public:
    explicit BesselOrder(int twice_order);

    static BesselOrder integer(int n) { return BesselOrder(2 * n); }
    static BesselOrder half_odd(int n) { return BesselOrder(2 * n + 1); }  // n + 1/2

    int twice_order() const noexcept { return twice_; }
    double value() const noexcept { return 0.5 * twice_; }
    bool is_half_integer() const noexcept { return (twice_ & 1) != 0; }

    BesselOrder next() const { return BesselOrder(twice_ + 2); }

    friend bool operator==(BesselOrder, BesselOrder) = default;

private:
    int twice_;
};

/// Throws DomainError unless z != 0 and |arg z| <= pi/2.
void require_right_half_plane(cplx z, const char* who);

/// e^z K_lambda(z). Never overflows for |arg z| <= pi/2.
cplx bessel_k_scaled(BesselOrder order, cplx z);

/// K_lambda(z); underflows to zero for large Re z.
cplx bessel_k(BesselOrder order, cplx z);

/// e^z K_lambda(z) for lambda = first, first+1, ..., first+count-1, one pass of
/// the upward recurrence. out must hold count values.
void bessel_k_scaled_sequence(BesselOrder first, cplx z, int count, cplx* out);

/// Principal-branch E1(z) for z != 0, |arg z| <= pi/2.
cplx exp_integral_e1(cplx z);

/// e^z E1(z); the same as U(1,1,z).
cplx exp_integral_e1_scaled(cplx z);

/// Tricomi's confluent hypergeometric U(1,1,z) = e^z E1(z).
cplx tricomi_u11(cplx z);

namespace detail {
// Crossover radii between the small-|z| series and the continued fractions.
inline constexpr double kBesselSeriesRadius = 2.0;
inline constexpr double kE1SeriesRadius = 2.0;
} // namespace detail

} // namespace impgreen
