// Writes the special-function golden vectors from the 100-digit oracle.
//   make_golden <out.jsonl>

#include "impgreen/io.hpp"
#include "mp_oracle.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_golden <out.jsonl>\n";
        return 1;
    }
    // 20 moduli, log-spaced on [0.1, 50], times 10 arguments on [-pi/2, pi/2];
    // the two end arguments sit exactly on the imaginary axis.
    const int n_mod = 20, n_arg = 10;
    std::vector<impgreen::io::GoldenRecord> out;
    for (int i = 0; i < n_mod; ++i) {
        const double rho = 0.1 * std::pow(500.0, static_cast<double>(i) / (n_mod - 1));
        for (int j = 0; j < n_arg; ++j) {
            std::complex<double> z;
            if (j == 0) z = {0.0, -rho};
            else if (j == n_arg - 1) z = {0.0, rho};
            else z = std::polar(rho, -std::numbers::pi / 2 + std::numbers::pi * j / (n_arg - 1));
            const bool axis = z.real() == 0.0;
            const double tol = axis ? 1e-10 : 1e-12;
            const auto zm = oracle::to_mp(z);
            for (int tl : {0, 2, 1, 3, 5}) {
                out.push_back({"bessel_k", tl, z, oracle::to_double(oracle::bessel_k(tl, zm)), tol});
            }
            out.push_back({"exp_integral_e1", 0, z, oracle::to_double(oracle::exp_integral_e1(zm)), tol});
        }
    }
    std::ofstream f(argv[1], std::ios::binary);
    if (!f) {
        std::cerr << "cannot open " << argv[1] << '\n';
        return 1;
    }
    impgreen::io::write_golden(f, out);
    std::cout << out.size() << " records\n";
    return 0;
}
