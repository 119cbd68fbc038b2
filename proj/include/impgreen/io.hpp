#pragma once

// Text formats: shortest round-trip doubles, "re,im" and coordinate lists on
// the command line, golden-vector JSON lines, grid CSV/JSON.

#include <json.hpp>

#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace impgreen::io {

using cplx = std::complex<double>;

/// Shortest decimal string that parses back to the same double; locale-free.
/// nan / inf / -inf for non-finite values.
std::string format_double(double v);

/// Whole-string parse; throws std::invalid_argument naming `field`.
double parse_double(std::string_view text, std::string_view field);

/// "a,b,c" -> {a, b, c}. Throws std::invalid_argument naming `field`.
std::vector<double> parse_list(std::string_view text, std::string_view field);

/// "re,im" (or a single real number).
cplx parse_complex(std::string_view text, std::string_view field);

nlohmann::json complex_to_json(cplx v);
cplx complex_from_json(const nlohmann::json& j);

struct GoldenRecord {
    std::string fn;     // "bessel_k" or "exp_integral_e1"
    int two_lambda = 0; // twice the Bessel order; 0 for E1
    cplx z{};
    cplx value{};
    double tol = 0.0;
};

nlohmann::json to_json(const GoldenRecord& rec);
GoldenRecord golden_from_json(const nlohmann::json& j);

std::vector<GoldenRecord> read_golden(std::istream& in);
void write_golden(std::ostream& out, const std::vector<GoldenRecord>& records);

struct GridRow {
    std::vector<double> x;
    std::optional<cplx> value;  // empty when the point was not evaluated
    std::string path;
    std::optional<double> error_estimate;
    std::string status;         // ok, excluded, domain_error, not_converged
};

std::string grid_csv_header(int d);
std::string grid_csv_row(const GridRow& row);
GridRow parse_grid_csv_row(std::string_view line, int d);

void write_grid_csv(std::ostream& out, int d, const std::vector<GridRow>& rows);
std::vector<GridRow> read_grid_csv(std::istream& in, int& d);

nlohmann::json grid_to_json(int d, const std::vector<GridRow>& rows);
std::vector<GridRow> grid_from_json(const nlohmann::json& j, int& d);

} // namespace impgreen::io
