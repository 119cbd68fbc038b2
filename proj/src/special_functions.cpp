#include "impgreen/special_functions.hpp"

#include "impgreen/errors.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace impgreen {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 100000;

// e^z K0(z), e^z K1(z) for small |z| from the ascending series.
void k01_series_scaled(cplx z, cplx& k0, cplx& k1) {
    const double gamma = std::numbers::egamma;
    const cplx q = 0.25 * z * z;
    const cplx log_half = std::log(0.5 * z);

    // I0, I1 and the digamma-weighted sums, accumulated term by term.
    cplx term0 = 1.0;        // (z^2/4)^k / (k!)^2
    cplx term1 = 1.0;        // (z^2/4)^k / (k!(k+1)!)
    cplx i0 = 1.0;
    cplx i1 = 1.0;           // times z/2
    cplx s0 = 0.0;           // sum term0 * H_k
    cplx s1 = 2.0 * (-gamma) + 1.0;  // sum term1 * (psi(k+1) + psi(k+2)), k = 0
    double harmonic = 0.0;
    for (int k = 1; k < 500; ++k) {
        const double kk = k;
        term0 *= q / (kk * kk);
        term1 *= q / (kk * (kk + 1.0));
        harmonic += 1.0 / kk;
        i0 += term0;
        i1 += term1;
        s0 += term0 * harmonic;
        const double psi_sum = 2.0 * (-gamma + harmonic) + 1.0 / (kk + 1.0);
        s1 += term1 * psi_sum;
        if (std::abs(term0) * (1.0 + harmonic) < kEps * 0.1 * std::abs(i0) &&
            std::abs(term1) * (1.0 + harmonic) < kEps * 0.1 * std::abs(i1)) {
            break;
        }
    }
    const cplx scale = std::exp(z);
    k0 = scale * (-(log_half + gamma) * i0 + s0);
    k1 = scale * (1.0 / z + log_half * (0.5 * z) * i1 - 0.25 * z * s1);
}

// Steed's evaluation of Temme's continued fraction for K_0 and K_1, returned
// scaled by e^z. Converges for every z off the negative real axis; used for
// |z| beyond the series radius.
void k01_continued_fraction_scaled(cplx z, cplx& k0, cplx& k1) {
    cplx b = 2.0 * (1.0 + z);
    cplx d = 1.0 / b;
    cplx h = d;
    cplx delh = d;
    cplx q1 = 0.0;
    cplx q2 = 1.0;
    const double a1 = 0.25;
    cplx q = a1;
    double c = a1;
    double a = -a1;
    cplx s = 1.0 + q * delh;
    int i = 1;
    for (; i < kMaxIter; ++i) {
        a -= 2.0 * i;
        c = -a * c / (i + 1.0);
        const cplx qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const cplx dels = q * delh;
        s += dels;
        if (std::abs(dels) < 0.25 * kEps * std::abs(s)) break;
    }
    if (i == kMaxIter) {
        throw DomainError("bessel_k: continued fraction failed to converge");
    }
    h *= a1;
    k0 = std::sqrt(std::numbers::pi / (2.0 * z)) / s;
    k1 = k0 * (z + 0.5 - h) / z;
}

void k01_scaled(cplx z, cplx& k0, cplx& k1) {
    if (std::abs(z) <= detail::kBesselSeriesRadius) {
        k01_series_scaled(z, k0, k1);
    } else {
        k01_continued_fraction_scaled(z, k0, k1);
    }
}

cplx e1_series(cplx z) {
    // E1(z) = -gamma - log z - sum_{k>=1} (-z)^k / (k k!)
    cplx term = 1.0;
    cplx sum = 0.0;
    for (int k = 1; k < 1000; ++k) {
        term *= -z / static_cast<double>(k);
        const cplx add = term / static_cast<double>(k);
        sum += add;
        if (std::abs(add) < 0.1 * kEps * std::abs(sum)) break;
    }
    return -std::numbers::egamma - std::log(z) - sum;
}

// e^z E1(z) by the modified Lentz evaluation of the continued fraction
// 1/(z+1- 1/(z+3- 4/(z+5- ...))).
cplx e1_continued_fraction_scaled(cplx z) {
    constexpr double tiny = 1e-300;
    cplx b = z + 1.0;
    cplx c = 1.0 / tiny;
    cplx d = 1.0 / b;
    cplx h = d;
    int i = 1;
    for (; i < kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const cplx del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 0.5 * kEps) break;
    }
    if (i == kMaxIter) {
        throw DomainError("exp_integral_e1: continued fraction failed to converge");
    }
    return h;
}

} // namespace

BesselOrder::BesselOrder(int twice_order) : twice_(twice_order) {
    if (twice_order < 0) {
        throw DomainError("BesselOrder: order must be nonnegative, got 2*lambda = " +
                          std::to_string(twice_order));
    }
}

void require_right_half_plane(cplx z, const char* who) {
    if (!(std::isfinite(z.real()) && std::isfinite(z.imag()))) {
        throw DomainError(std::string(who) + ": non-finite argument");
    }
    if (z == cplx(0.0, 0.0)) {
        throw DomainError(std::string(who) + ": argument must be nonzero");
    }
    // Re z = -0.0 is accepted as the imaginary axis.
    if (z.real() < 0.0) {
        throw DomainError(std::string(who) + ": argument must satisfy |arg z| <= pi/2");
    }
}

void bessel_k_scaled_sequence(BesselOrder first, cplx z, int count, cplx* out) {
    require_right_half_plane(z, "bessel_k");
    if (count <= 0) return;
    const cplx inv_z = 1.0 / z;
    cplx prev;  // order lambda - 1
    cplx cur;   // order lambda
    double lambda;
    if (first.is_half_integer()) {
        cur = std::sqrt(std::numbers::pi / (2.0 * z));  // lambda = 1/2
        prev = cur;                                     // K_{-1/2} = K_{1/2}
        lambda = 0.5;
    } else {
        cplx k1;
        k01_scaled(z, cur, k1);
        prev = k1;  // K_{-1} = K_1
        lambda = 0.0;
    }
    int filled = 0;
    while (filled < count) {
        if (lambda >= first.value()) out[filled++] = cur;
        if (filled == count) break;
        const cplx next = 2.0 * lambda * inv_z * cur + prev;
        prev = cur;
        cur = next;
        lambda += 1.0;
    }
}

cplx bessel_k_scaled(BesselOrder order, cplx z) {
    cplx value;
    bessel_k_scaled_sequence(order, z, 1, &value);
    return value;
}

cplx bessel_k(BesselOrder order, cplx z) {
    return std::exp(-z) * bessel_k_scaled(order, z);
}

cplx exp_integral_e1(cplx z) {
    require_right_half_plane(z, "exp_integral_e1");
    if (std::abs(z) <= detail::kE1SeriesRadius) return e1_series(z);
    return std::exp(-z) * e1_continued_fraction_scaled(z);
}

cplx exp_integral_e1_scaled(cplx z) {
    require_right_half_plane(z, "exp_integral_e1");
    if (std::abs(z) <= detail::kE1SeriesRadius) return std::exp(z) * e1_series(z);
    return e1_continued_fraction_scaled(z);
}

cplx tricomi_u11(cplx z) {
    require_right_half_plane(z, "tricomi_u11");
    return exp_integral_e1_scaled(z);
}

} // namespace impgreen
