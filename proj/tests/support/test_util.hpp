#pragma once

#include <complex>
#include <random>
#include <string>

namespace testutil {

inline double rel_err(std::complex<double> got, std::complex<double> want) {
    const double scale = std::abs(want);
    return scale == 0.0 ? std::abs(got) : std::abs(got - want) / scale;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::string data_file(const std::string& name) { return std::string(IMPGREEN_TEST_DATA) + "/" + name; }

} // namespace testutil
