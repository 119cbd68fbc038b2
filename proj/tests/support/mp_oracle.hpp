#pragma once

// Slow reference values in 100-digit arithmetic. Ascending series only, so
// none of the library's continued fractions or recurrences are reused.

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <complex>
#include <stdexcept>

namespace oracle {

using real = boost::multiprecision::cpp_bin_float_100;
using cplx = boost::multiprecision::cpp_complex_100;

inline cplx to_mp(std::complex<double> z) { return cplx(real(z.real()), real(z.imag())); }

inline std::complex<double> to_double(const cplx& z) {
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

inline const real& eps() {
    static const real e = std::numeric_limits<real>::epsilon();
    return e;
}

// I_n(z) = (z/2)^n sum (z^2/4)^k / (k! (n+k)!)
inline cplx bessel_i_int(int n, const cplx& z) {
    const cplx q = z * z / 4;
    cplx term = 1;
    for (int j = 1; j <= n; ++j) term /= j;
    cplx sum = term;
    for (int k = 1; k < 100000; ++k) {
        term *= q / (real(k) * real(n + k));
        sum += term;
        if (abs(term) < eps() * abs(sum)) break;
    }
    return pow(z / 2, n) * sum;
}

// K_n for n = 0, 1 from the ascending series
//   K_n = 1/2 (z/2)^-n sum_{k<n} (n-k-1)!/k! (-z^2/4)^k + (-1)^(n+1) ln(z/2) I_n
//         + (-1)^n 1/2 (z/2)^n sum (psi(k+1) + psi(n+k+1)) (z^2/4)^k / (k! (n+k)!)
inline cplx bessel_k_int(int n, const cplx& z) {
    if (n < 0 || n > 1) throw std::invalid_argument("oracle: integer order 0 or 1 only");
    const real gamma = boost::math::constants::euler<real>();
    const cplx half = z / 2;
    const cplx q = half * half;
    cplx finite = 0;
    if (n == 1) finite = cplx(real(0.5)) / half;
    // psi(k+1) = -gamma + H_k
    real hk = 0, hnk = 0;
    for (int j = 1; j <= n; ++j) hnk += real(1) / j;
    cplx term = 1;
    for (int j = 1; j <= n; ++j) term /= j;
    cplx sum = term * (2 * -gamma + hk + hnk);
    for (int k = 1; k < 100000; ++k) {
        term *= q / (real(k) * real(n + k));
        hk += real(1) / k;
        hnk += real(1) / (n + k);
        const cplx add = term * (2 * -gamma + hk + hnk);
        sum += add;
        if (abs(add) < eps() * abs(sum) && abs(term) < eps()) break;
    }
    const real sign = n % 2 == 0 ? real(1) : real(-1);
    return finite - sign * log(half) * bessel_i_int(n, z) + sign * pow(half, n) * sum / 2;
}

// K_{n+1/2}(z) = sqrt(pi/2z) e^-z sum_{k<=n} (n+k)! / (k! (n-k)!) (2z)^-k
inline cplx bessel_k_half(int n, const cplx& z) {
    const real pi = boost::math::constants::pi<real>();
    cplx sum = 0;
    for (int k = 0; k <= n; ++k) {
        real c = 1;
        for (int j = n - k + 1; j <= n + k; ++j) c *= j;
        for (int j = 1; j <= k; ++j) c /= j;
        sum += c / pow(2 * z, k);
    }
    return sqrt(cplx(pi) / (2 * z)) * exp(-z) * sum;
}

inline cplx bessel_k(int two_lambda, const cplx& z) {
    if (two_lambda % 2 == 0) return bessel_k_int(two_lambda / 2, z);
    return bessel_k_half((two_lambda - 1) / 2, z);
}

// E1(z) = -gamma - ln z - sum (-z)^k / (k k!)
inline cplx exp_integral_e1(const cplx& z) {
    const real gamma = boost::math::constants::euler<real>();
    cplx term = 1;
    cplx sum = 0;
    for (int k = 1; k < 100000; ++k) {
        term *= -z / real(k);
        const cplx add = term / real(k);
        sum += add;
        if (abs(add) < eps() * (1 + abs(sum)) && k > abs(z)) break;
    }
    return -gamma - log(z) - sum;
}

} // namespace oracle
