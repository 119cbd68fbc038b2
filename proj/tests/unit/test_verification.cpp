#include "impgreen/errors.hpp"
#include "impgreen/verification.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace impgreen;

namespace {

const std::vector<double> h_fd{1e-2, 5e-3, 2.5e-3};
const std::vector<double> h_bc{4e-2, 2e-2, 1e-2};

HalfSpacePoint pt(std::vector<double> c) { return HalfSpacePoint(std::move(c)); }
HalfSpacePoint boundary(std::vector<double> c) {
    return HalfSpacePoint(std::move(c), HalfSpacePoint::Closure::allow_boundary);
}

} // namespace

TEST_CASE("observed order of a power law") {
    const std::vector<double> h{0.1, 0.05, 0.025, 0.0125};
    std::vector<double> r;
    for (double x : h) r.push_back(3.0 * x * x * x);
    CHECK(observed_order(h, r) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK_THROWS_AS(observed_order({0.1}, {1.0}), DomainError);
}

TEST_CASE("Helmholtz residual, d = 3 closed-form route") {
    const auto rep = helmholtz_residual(pt({0.3, 0.2, 1}), pt({0, 0, 1}), ProblemParams(3, 1), Frequency(1.0), h_fd);
    CHECK(rep.pass);
    CHECK(rep.observed_order == doctest::Approx(2.0).epsilon(0.15));
    CHECK(rep.residuals.size() == 3);
    CHECK(rep.residuals[2] < rep.residuals[0]);
}

TEST_CASE("Helmholtz residual for a range of parameters") {
    CHECK(helmholtz_residual(pt({0.4, 0.9}), pt({0, 0.5}), ProblemParams(2, 0.5), Frequency(cplx(1, 1)), h_fd).pass);
    CHECK(helmholtz_residual(pt({0.1, 0.2, 0.3, 0.2, 0.8}), pt({0, 0, 0, 0, 0.3}), ProblemParams(5, 2.0),
                             Frequency(cplx(0.7, -1)), h_fd).pass);
}

TEST_CASE("Helmholtz stencil must stay in the half-space") {
    CHECK_THROWS_AS(helmholtz_residual(pt({0.3, 0.2, 0.015}), pt({0, 0, 1}), ProblemParams(3, 1), Frequency(1.0), h_fd),
                    DomainError);
}

TEST_CASE("impedance boundary condition converges") {
    const auto a = impedance_bc_residual(boundary({0.3, 0.2, 0}), pt({0, 0, 1}), ProblemParams(3, 1), Frequency(1.0), h_bc);
    CHECK(a.pass);
    CHECK(a.observed_order >= 3.0);
    const auto b = impedance_bc_residual(boundary({0.2, 0}), pt({0, 0.6}), ProblemParams(2, 0.5), Frequency(cplx(2, 1)), h_bc);
    CHECK(b.pass);
    CHECK(b.residuals.back() < 1e-4);
}

TEST_CASE("impedance boundary condition negative controls fail") {
    const auto x = boundary({0.2, 0});
    const auto y = pt({0, 0.6});
    const ProblemParams p(2, 0.5);
    const Frequency s(cplx(2, 1));
    BoundaryVariant wrong_beta;
    wrong_beta.beta_override = 0.8;
    CHECK_FALSE(impedance_bc_residual(x, y, p, s, h_bc, {}, wrong_beta).pass);
    BoundaryVariant flipped;
    flipped.flip_normal = true;
    CHECK_FALSE(impedance_bc_residual(x, y, p, s, h_bc, {}, flipped).pass);
    CheckOptions faulty;
    faulty.beta_scale = 1.3;
    CHECK_FALSE(impedance_bc_residual(x, y, p, s, h_bc, faulty).pass);
    CHECK_THROWS_AS(impedance_bc_residual(pt({0.2, 0.5}), y, p, s, h_bc), DomainError);
}

TEST_CASE("derivative identity on seeded draws") {
    for (unsigned seed : {1u, 2u, 3u}) {
        std::mt19937_64 rng(seed);
        const ProblemParams p(2 + static_cast<int>(seed), testutil::uniform(rng, 0.3, 3));
        const DiffVector z = DiffVector::from_components(p.d(), testutil::uniform(rng, 0, 2), testutil::uniform(rng, 0.3, 2));
        const Frequency s(cplx(testutil::uniform(rng, 0.2, 2), testutil::uniform(rng, -2, 2)));
        const auto rep = derivative_identity_check(z, p, s, h_fd);
        CHECK_MESSAGE(rep.pass, "seed ", seed, " order ", rep.observed_order);
    }
}

TEST_CASE("derivative identity detects a wrong impedance") {
    CheckOptions faulty;
    faulty.beta_scale = 1.1;
    const DiffVector z = DiffVector::from_components(3, 0.4, 0.8);
    CHECK_FALSE(derivative_identity_check(z, ProblemParams(3, 1.5), Frequency(cplx(1, 0.5)), h_fd, faulty).pass);
}

TEST_CASE("beta = 1 ODE") {
    for (int d : {3, 4, 5, 7}) {
        const DiffVector z = DiffVector::from_components(d, 0.5, 0.6);
        CHECK(ode_beta1_check(z, ProblemParams(d, 1.0), Frequency(cplx(1, 1)), h_fd).pass);
    }
    CHECK_THROWS_AS(ode_beta1_check(DiffVector({0, 0, 1}), ProblemParams(3, 2.0), Frequency(1.0), h_fd), DomainError);
}

TEST_CASE("cross-representation grid") {
    for (int d : {2, 4})
        for (double beta : {0.5, 2.0})
            for (cplx s : {cplx(1, 0), cplx(1, 2)}) {
                const auto rep = cross_representation_check(DiffVector::from_components(d, 0.5, 0.7),
                                                            ProblemParams(d, beta), Frequency(s));
                CHECK(rep.pass);
                CHECK(rep.residuals.size() == 3);
            }
    CHECK_THROWS_AS(cross_representation_check(DiffVector({0, 1}), ProblemParams(2, 1), Frequency(cplx(0, 1))),
                    DomainError);
}

TEST_CASE("closed form check") {
    CHECK(closed_form_check(DiffVector({0.2, 0.1, 0.5}), ProblemParams(3, 1), Frequency(cplx(1, 1)), 1e-9).pass);
    CHECK(closed_form_check(DiffVector({0, 0, 0, 0.3, 0.5}), ProblemParams(5, 1), Frequency(cplx(2, -1)), 1e-8).pass);
}

TEST_CASE("limiting absorption probe") {
    const std::vector<double> eps{1e-2, 1e-3, 1e-4};
    const auto a = limit_absorption_probe(pt({0.3, 0.2, 1}), pt({0, 0, 0.5}), ProblemParams(3, 1), 1.0, eps, 1e-6);
    CHECK(a.pass);
    CHECK(a.residuals[0] <= 1e-6);
    const auto b = limit_absorption_probe(pt({0.3, 1}), pt({0, 0.5}), ProblemParams(2, 1), 1.0, eps, 1e-5);
    CHECK(b.pass);
    for (double k : {1.0, 2.0}) {
        CHECK(limit_absorption_probe(pt({0.3, 0.9}), pt({0, 0.4}), ProblemParams(2, 0.5), k, eps, 1e-6).pass);
        CHECK(limit_absorption_probe(pt({0.3, 0.1, 0.9}), pt({0, 0, 0.4}), ProblemParams(3, 2.0), k, eps, 1e-6).pass);
    }
    CHECK_THROWS_AS(limit_absorption_probe(pt({0.3, 1}), pt({0, 0.5}), ProblemParams(2, 1), 1.0, {1e-3, 1e-2, 1e-4}),
                    DomainError);
    CHECK_THROWS_AS(limit_absorption_probe(pt({0.3, 1}), pt({0, 0.5}), ProblemParams(2, 1), 0.0, eps), DomainError);
}

TEST_CASE("report serialization") {
    const auto rep = helmholtz_residual(pt({0.3, 0.2, 1}), pt({0, 0, 1}), ProblemParams(3, 1), Frequency(1.0), h_fd);
    const auto j = rep.to_json();
    CHECK(j.at("check") == "helmholtz_residual");
    CHECK(j.at("h").size() == 3);
    CHECK(j.at("residual").size() == 3);
    CHECK(j.at("pass") == true);
    CHECK(j.at("order").is_number());
    ResidualReport empty;
    CHECK(empty.to_json().at("order").is_null());
}

TEST_CASE("quick self-check passes, and fails under fault injection") {
    const auto ok = run_selfcheck(Suite::quick);
    CHECK(ok.size() >= 8);
    for (const auto& r : ok) CHECK_MESSAGE(r.pass, r.check_name);
    const auto bad = run_selfcheck(Suite::quick, 1.2);
    int failed = 0;
    for (const auto& r : bad) failed += r.pass ? 0 : 1;
    CHECK(failed >= 2);
}
