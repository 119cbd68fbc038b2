#include "impgreen/io.hpp"

#include <doctest.h>

#include <bit>
#include <clocale>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>

using namespace impgreen;
using io::cplx;

TEST_CASE("shortest round-trip doubles") {
    CHECK(io::format_double(0.1) == "0.1");
    CHECK(io::format_double(1.0) == "1");
    CHECK(io::format_double(-2.5e-300) == "-2.5e-300");
    CHECK(io::format_double(std::nan("")) == "nan");
    CHECK(io::format_double(-INFINITY) == "-inf");
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20000; ++i) {
        const double v = std::bit_cast<double>(rng());
        if (!std::isfinite(v)) continue;
        const std::string s = io::format_double(v);
        CHECK(std::bit_cast<std::uint64_t>(io::parse_double(s, "v")) == std::bit_cast<std::uint64_t>(v));
        CHECK(io::format_double(io::parse_double(s, "v")) == s);
    }
}

TEST_CASE("formatting ignores the C locale") {
    const char* old = std::setlocale(LC_NUMERIC, nullptr);
    const std::string saved = old ? old : "C";
    if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") || std::setlocale(LC_NUMERIC, "fr_FR.UTF-8")) {
        CHECK(io::format_double(1.5) == "1.5");
        CHECK(io::parse_double("1.5", "v") == 1.5);
    }
    std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST_CASE("parsing names the offending field") {
    CHECK(io::parse_complex("1,-2", "s") == cplx(1, -2));
    CHECK(io::parse_complex("3", "s") == cplx(3, 0));
    CHECK(io::parse_list(" 1, 2.5 ,3e0", "x") == std::vector<double>{1, 2.5, 3});
    for (const char* bad : {"", "1,", "1,,2", "abc", "1;2", "1,2,3", "0x1p3"}) {
        try {
            io::parse_complex(bad, "s");
            FAIL("accepted '", bad, "'");
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).rfind("s:", 0) == 0);
        }
    }
}

TEST_CASE("golden records round-trip") {
    std::vector<io::GoldenRecord> recs{{"bessel_k", 3, cplx(0.1, -2), cplx(1.0 / 3, 7e-300), 1e-12},
                                       {"exp_integral_e1", 0, cplx(0, 50), cplx(-0.0, 0.25), 1e-10}};
    std::ostringstream a;
    io::write_golden(a, recs);
    std::istringstream in(a.str());
    const auto back = io::read_golden(in);
    REQUIRE(back.size() == 2);
    CHECK(back[0].value == recs[0].value);
    CHECK(back[1].two_lambda == 0);
    std::ostringstream b;
    io::write_golden(b, back);
    CHECK(a.str() == b.str());
    CHECK_THROWS(io::golden_from_json(nlohmann::json::parse(R"({"fn":"bessel_k","z":[1,2]})")));
}

namespace {
std::vector<io::GridRow> sample_rows() {
    std::vector<io::GridRow> rows;
    rows.push_back({{0.1, 0.5}, cplx(1.0 / 3, -2e-17), "quadrature_y_form", 3.3e-16, "ok"});
    rows.push_back({{0.2, 0.5}, std::nullopt, "", std::nullopt, "excluded"});
    rows.push_back({{0.3, -1}, std::nullopt, "", std::nullopt, "domain_error"});
    return rows;
}
} // namespace

TEST_CASE("grid CSV round-trip is byte-identical") {
    std::ostringstream a;
    io::write_grid_csv(a, 2, sample_rows());
    CHECK(a.str().rfind("x1,x2,re,im,path,error_estimate,status\n", 0) == 0);
    std::istringstream in(a.str());
    int d = 0;
    const auto rows = io::read_grid_csv(in, d);
    CHECK(d == 2);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].value == cplx(1.0 / 3, -2e-17));
    CHECK_FALSE(rows[1].value.has_value());
    std::ostringstream b;
    io::write_grid_csv(b, d, rows);
    CHECK(a.str() == b.str());
    CHECK_THROWS(io::parse_grid_csv_row("1,2,3", 2));
}

TEST_CASE("grid JSON round-trip is byte-identical") {
    const std::string a = io::grid_to_json(2, sample_rows()).dump();
    int d = 0;
    const auto rows = io::grid_from_json(nlohmann::json::parse(a), d);
    CHECK(io::grid_to_json(d, rows).dump() == a);
    CHECK(rows[0].error_estimate == 3.3e-16);
}
