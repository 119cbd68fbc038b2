#include "impgreen/errors.hpp"
#include "impgreen/quadrature.hpp"
#include "impgreen/special_functions.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace impgreen;
using testutil::rel_err;

namespace {
QuadratureConfig decaying(double rate) {
    QuadratureConfig c;
    c.decay_rate = rate;
    return c;
}
} // namespace

TEST_CASE("elementary semi-infinite integrals") {
    auto r = integrate_semi_infinite([](double y) { return cplx(std::exp(-y)); }, decaying(1));
    CHECK(r.converged);
    CHECK(std::abs(r.value - 1.0) <= 1e-11);
    CHECK(r.error_estimate <= 1e-11);
    CHECK(r.truncation_point == 40.0);

    r = integrate_semi_infinite([](double y) { return cplx(y * std::exp(-y)); }, decaying(1));
    CHECK(std::abs(r.value - 1.0) <= 1e-11);

    r = integrate_semi_infinite([](double y) { return cplx(std::exp(-2 * y) / (1 + y)); }, decaying(2));
    CHECK(std::abs(r.value - 0.3613286169) < 1e-10);
    CHECK(rel_err(r.value, tricomi_u11(2.0)) < 1e-12);
}

TEST_CASE("moments y^k e^{-a y}") {
    for (int k = 0; k <= 8; ++k) {
        for (double a : {0.05, 0.7, 3.0, 40.0}) {
            const auto r = integrate_semi_infinite(
                [=](double y) { return cplx(std::pow(y, k) * std::exp(-a * y)); }, decaying(a));
            const double exact = std::tgamma(k + 1.0) / std::pow(a, k + 1);
            CHECK(rel_err(r.value, exact) < 1e-10);
        }
    }
}

TEST_CASE("complex exponential with oscillation") {
    const cplx s(0.5, 8.0);
    QuadratureConfig c = decaying(s.real());
    c.oscillation_frequency = s.imag();
    const auto r = integrate_semi_infinite([=](double y) { return std::exp(-s * y); }, c);
    CHECK(rel_err(r.value, 1.0 / s) < 1e-11);
}

TEST_CASE("oscillatory algebraic tail") {
    // int_0^inf e^{-i y} / (1 + y) dy = e^{i} E1(i)
    QuadratureConfig c;
    c.oscillation_frequency = 1.0;
    const auto r = integrate_semi_infinite([](double y) { return std::exp(cplx(0, -y)) / (1 + y); }, c);
    CHECK(r.converged);
    CHECK(std::isinf(r.truncation_point));
    CHECK(rel_err(r.value, tricomi_u11(cplx(0, 1))) < 1e-10);

    // Weak damping, too many periods to truncate.
    const cplx s(1e-4, 3.0);
    QuadratureConfig w = decaying(s.real());
    w.oscillation_frequency = s.imag();
    const auto q = integrate_semi_infinite([=](double y) { return std::exp(-s * y) / (1 + y); }, w);
    CHECK(rel_err(q.value, tricomi_u11(s)) < 1e-9);
}

TEST_CASE("algebraic decay through the mapped strategy") {
    const auto r = integrate_semi_infinite([](double y) { return cplx(1.0 / ((1 + y) * (1 + y))); }, QuadratureConfig{});
    CHECK(std::isinf(r.truncation_point));
    CHECK(std::abs(r.value - 1.0) < 1e-11);
}

TEST_CASE("finite intervals") {
    const auto r = integrate_interval([](double x) { return cplx(std::cos(x), std::sin(x)); }, 0.0,
                                      std::numbers::pi, QuadratureConfig{});
    CHECK(std::abs(r.value - cplx(0, 2)) < 1e-12);
    const auto sq = integrate_interval([](double x) { return cplx(std::sqrt(x)); }, 0.0, 1.0, QuadratureConfig{});
    CHECK(std::abs(sq.value - 2.0 / 3.0) < 1e-11);
}

TEST_CASE("linearity") {
    auto f = [](double y) { return cplx(std::exp(-y) * std::cos(3 * y), std::exp(-y) / (1 + y * y)); };
    auto g = [](double y) { return cplx(y * std::exp(-2 * y), 0.0); };
    const cplx a(2.0, -1.0), b(-0.5, 3.0);
    const auto cfg = decaying(1);
    const cplx lhs = integrate_semi_infinite([&](double y) { return a * f(y) + b * g(y); }, cfg).value;
    const cplx rhs = a * integrate_semi_infinite(f, cfg).value + b * integrate_semi_infinite(g, cfg).value;
    CHECK(rel_err(lhs, rhs) < 1e-12);
}

TEST_CASE("error estimates are honest") {
    for (double tol : {1e-4, 1e-7, 1e-10}) {
        QuadratureConfig c = decaying(1);
        c.rel_tol = tol;
        const auto r = integrate_semi_infinite([](double y) { return cplx(std::exp(-y) * std::sqrt(y)); }, c);
        const double exact = std::sqrt(std::numbers::pi) / 2;
        CHECK(std::abs(r.value - exact) <= std::max(r.error_estimate, 1e-15));
        CHECK(std::abs(r.value - exact) <= 10 * tol * exact);
    }
}

TEST_CASE("error estimates bound the true error on the closed-form suite") {
    // y^k e^{-a y} and e^{-a y} / (1 + y) against exact values.
    int total = 0, honest = 0;
    for (int k = 0; k <= 8; ++k) {
        for (double a : {0.1, 0.5, 1.0, 2.0, 7.0, 30.0}) {
            for (double tol : {1e-6, 1e-9, 1e-12}) {
                QuadratureConfig c = decaying(a);
                c.rel_tol = tol;
                const auto r = integrate_semi_infinite(
                    [=](double y) { return cplx(std::pow(y, k) * std::exp(-a * y)); }, c);
                const double exact = std::tgamma(k + 1.0) / std::pow(a, k + 1);
                ++total;
                honest += std::abs(r.value - exact) <= 10 * r.error_estimate ? 1 : 0;
                if (k == 0) {
                    const auto u = integrate_semi_infinite(
                        [=](double y) { return cplx(std::exp(-a * y) / (1 + y)); }, c);
                    ++total;
                    honest += std::abs(u.value - tricomi_u11(a)) <= 10 * u.error_estimate ? 1 : 0;
                }
            }
        }
    }
    CHECK(honest >= 0.99 * total);
}

TEST_CASE("truncation point") {
    CHECK(truncation_point(decaying(1)) == 40.0);
    CHECK(truncation_point(decaying(0.01)) == doctest::Approx(4000.0));
    CHECK(truncation_point(decaying(1), 1e10) > 40.0);
    CHECK_THROWS_AS(truncation_point(decaying(0)), DomainError);
}

TEST_CASE("configuration and integrand errors") {
    QuadratureConfig c;
    c.rel_tol = 0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = decaying(-1);
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = QuadratureConfig{};
    c.max_subdivisions = 0;
    CHECK_THROWS_AS(c.validate(), DomainError);

    try {
        integrate_semi_infinite([](double y) { return y > 2 ? cplx(std::nan("")) : cplx(1.0); }, decaying(1));
        FAIL("expected IntegrandFailure");
    } catch (const IntegrandFailure& e) {
        CHECK(e.abscissa() > 2.0);
    }
}

TEST_CASE("non-convergence is reported") {
    QuadratureConfig c;
    c.max_subdivisions = 1;
    c.rel_tol = 1e-14;
    const auto r = integrate_interval([](double x) { return cplx(std::sin(1 / x)); }, 1e-3, 1.0, c);
    CHECK_FALSE(r.converged);
}

TEST_CASE("Wynn epsilon accelerates alternating series") {
    std::vector<cplx> partial;
    cplx sum = 0;
    for (int k = 1; k <= 15; ++k) {
        sum += (k % 2 ? 1.0 : -1.0) / k;
        partial.push_back(sum);
    }
    const auto ex = detail::wynn_epsilon(partial);
    CHECK(std::abs(ex.value - std::log(2.0)) < 1e-10);
    CHECK(std::abs(partial.back() - std::log(2.0)) > 1e-2);
}
