#include "impgreen/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace impgreen::io {

namespace {

std::invalid_argument bad(std::string_view field, std::string_view detail) {
    return std::invalid_argument(std::string(field) + ": " + std::string(detail));
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

} // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::string_view field) {
    text = trim(text);
    if (text.empty()) throw bad(field, "empty number");
    if (text.front() == '+') text.remove_prefix(1);
    if (text == "nan") return std::nan("");
    if (text == "inf") return HUGE_VAL;
    if (text == "-inf") return -HUGE_VAL;
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw bad(field, "not a number: '" + std::string(text) + "'");
    }
    return v;
}

std::vector<double> parse_list(std::string_view text, std::string_view field) {
    std::vector<double> out;
    for (std::string_view part : split(text, ',')) out.push_back(parse_double(part, field));
    return out;
}

cplx parse_complex(std::string_view text, std::string_view field) {
    const auto parts = parse_list(text, field);
    if (parts.size() == 1) return {parts[0], 0.0};
    if (parts.size() != 2) throw bad(field, "expected re,im");
    return {parts[0], parts[1]};
}

nlohmann::json complex_to_json(cplx v) { return nlohmann::json::array({v.real(), v.imag()}); }

cplx complex_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw std::invalid_argument("complex value must be [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json to_json(const GoldenRecord& rec) {
    nlohmann::json j;
    j["fn"] = rec.fn;
    j["two_lambda"] = rec.two_lambda;
    j["z"] = complex_to_json(rec.z);
    j["value"] = complex_to_json(rec.value);
    j["tol"] = rec.tol;
    return j;
}

GoldenRecord golden_from_json(const nlohmann::json& j) {
    GoldenRecord rec;
    rec.fn = j.at("fn").get<std::string>();
    rec.two_lambda = j.at("two_lambda").get<int>();
    rec.z = complex_from_json(j.at("z"));
    rec.value = complex_from_json(j.at("value"));
    rec.tol = j.at("tol").get<double>();
    return rec;
}

std::vector<GoldenRecord> read_golden(std::istream& in) {
    std::vector<GoldenRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        out.push_back(golden_from_json(nlohmann::json::parse(line)));
    }
    return out;
}

void write_golden(std::ostream& out, const std::vector<GoldenRecord>& records) {
    for (const auto& rec : records) out << to_json(rec).dump() << '\n';
}

std::string grid_csv_header(int d) {
    std::string h;
    for (int i = 1; i <= d; ++i) h += "x" + std::to_string(i) + ",";
    return h + "re,im,path,error_estimate,status";
}

std::string grid_csv_row(const GridRow& row) {
    std::string s;
    for (double c : row.x) s += format_double(c) + ",";
    if (row.value) {
        s += format_double(row.value->real()) + "," + format_double(row.value->imag()) + ",";
    } else {
        s += ",,";
    }
    s += row.path + ",";
    if (row.error_estimate) s += format_double(*row.error_estimate);
    return s + "," + row.status;
}

GridRow parse_grid_csv_row(std::string_view line, int d) {
    const auto f = split(trim(line), ',');
    if (static_cast<int>(f.size()) != d + 5) throw std::invalid_argument("grid row: wrong field count");
    GridRow row;
    for (int i = 0; i < d; ++i) row.x.push_back(parse_double(f[i], "x"));
    if (!f[d].empty() || !f[d + 1].empty()) {
        row.value = cplx(parse_double(f[d], "re"), parse_double(f[d + 1], "im"));
    }
    row.path = std::string(f[d + 2]);
    if (!f[d + 3].empty()) row.error_estimate = parse_double(f[d + 3], "error_estimate");
    row.status = std::string(f[d + 4]);
    return row;
}

void write_grid_csv(std::ostream& out, int d, const std::vector<GridRow>& rows) {
    out << grid_csv_header(d) << '\n';
    for (const auto& row : rows) out << grid_csv_row(row) << '\n';
}

std::vector<GridRow> read_grid_csv(std::istream& in, int& d) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("grid csv: missing header");
    const auto cols = split(trim(line), ',');
    d = static_cast<int>(cols.size()) - 5;
    if (d < 1 || grid_csv_header(d) != trim(line)) throw std::invalid_argument("grid csv: bad header");
    std::vector<GridRow> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        rows.push_back(parse_grid_csv_row(line, d));
    }
    return rows;
}

nlohmann::json grid_to_json(int d, const std::vector<GridRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json j;
        j["x"] = row.x;
        j["value"] = row.value ? complex_to_json(*row.value) : nlohmann::json(nullptr);
        j["path"] = row.path;
        j["error_estimate"] = row.error_estimate ? nlohmann::json(*row.error_estimate) : nlohmann::json(nullptr);
        j["status"] = row.status;
        arr.push_back(std::move(j));
    }
    return nlohmann::json{{"d", d}, {"rows", std::move(arr)}};
}

std::vector<GridRow> grid_from_json(const nlohmann::json& j, int& d) {
    d = j.at("d").get<int>();
    std::vector<GridRow> rows;
    for (const auto& r : j.at("rows")) {
        GridRow row;
        row.x = r.at("x").get<std::vector<double>>();
        if (!r.at("value").is_null()) row.value = complex_from_json(r.at("value"));
        row.path = r.at("path").get<std::string>();
        if (!r.at("error_estimate").is_null()) row.error_estimate = r.at("error_estimate").get<double>();
        row.status = r.at("status").get<std::string>();
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace impgreen::io
