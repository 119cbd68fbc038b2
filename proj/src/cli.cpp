#include "impgreen/cli.hpp"

#include "impgreen/errors.hpp"
#include "impgreen/greens.hpp"
#include "impgreen/io.hpp"
#include "impgreen/verification.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace impgreen {

namespace {

struct Malformed : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Common {
    int d = 0;
    double beta = 1.0;
    std::string s;
    std::string y;
    std::string path;
    double rel_tol = 1e-11;
    std::string format = "csv";
};

void add_common(CLI::App& cmd, Common& c) {
    cmd.add_option("--d", c.d, "dimension")->required();
    cmd.add_option("--beta", c.beta, "impedance");
    cmd.add_option("--s", c.s, "frequency re,im")->required();
    cmd.add_option("--y", c.y, "source coordinates")->required();
    cmd.add_option("--path", c.path, "force a route");
    cmd.add_option("--rel-tol", c.rel_tol, "quadrature tolerance");
    cmd.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

struct Setup {
    ProblemParams params;
    Frequency s;
    std::vector<double> y;
    GreenOptions opts;
};

std::vector<double> coords(const std::string& text, int d, const char* field) {
    std::vector<double> v;
    try {
        v = io::parse_list(text, field);
    } catch (const std::invalid_argument& e) {
        throw Malformed(e.what());
    }
    if (static_cast<int>(v.size()) != d) {
        throw Malformed(std::string(field) + ": expected " + std::to_string(d) + " coordinates");
    }
    for (double c : v) {
        if (!std::isfinite(c)) throw Malformed(std::string(field) + ": coordinates must be finite");
    }
    return v;
}

// Malformed text -> Malformed; well-formed but outside the domain -> DomainError.
Setup make_setup(const Common& c) {
    if (c.d < 1) throw Malformed("d: must be a positive integer");
    cplx s;
    try {
        s = io::parse_complex(c.s, "s");
    } catch (const std::invalid_argument& e) {
        throw Malformed(e.what());
    }
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw Malformed("s: must be finite");
    if (!std::isfinite(c.beta)) throw Malformed("beta: must be finite");
    if (!(c.rel_tol > 0.0) || !(c.rel_tol < 1.0)) throw Malformed("rel-tol: must lie in (0, 1)");
    GreenOptions opts;
    opts.quadrature.rel_tol = c.rel_tol;
    if (!c.path.empty()) {
        auto p = path_from_string(c.path);
        if (!p) throw Malformed("path: unknown route '" + c.path + "'");
        opts.path = *p;
    }
    auto y = coords(c.y, c.d, "y");
    return Setup{ProblemParams(c.d, c.beta), Frequency(s), std::move(y), opts};
}

nlohmann::json eval_json(const Evaluation& ev) {
    nlohmann::json j;
    j["value"] = io::complex_to_json(ev.value);
    j["path"] = std::string(to_string(ev.path));
    j["error_estimate"] = ev.error_estimate;
    return j;
}

int cmd_eval(const Common& c, const std::string& xs, std::ostream& out) {
    const Setup st = make_setup(c);
    const auto x = coords(xs, c.d, "x");
    const Evaluation ev = green(HalfSpacePoint(x), HalfSpacePoint(st.y), st.params, st.s, st.opts);
    if (c.format == "json") {
        out << eval_json(ev).dump() << '\n';
    } else {
        out << "re,im,path,error_estimate\n"
            << io::format_double(ev.value.real()) << ',' << io::format_double(ev.value.imag()) << ','
            << to_string(ev.path) << ',' << io::format_double(ev.error_estimate) << '\n';
    }
    return ev.converged ? exit_ok : exit_not_converged;
}

struct Axis {
    double lo, hi;
    int n;
};

Axis parse_axis(const std::string& text) {
    const auto first = text.find(':');
    const auto second = text.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos) {
        throw Malformed("axis: expected lo:hi:n, got '" + text + "'");
    }
    Axis a{};
    try {
        a.lo = io::parse_double(std::string_view(text).substr(0, first), "axis");
        a.hi = io::parse_double(std::string_view(text).substr(first + 1, second - first - 1), "axis");
        const double n = io::parse_double(std::string_view(text).substr(second + 1), "axis");
        if (!(n >= 1) || n != std::floor(n) || n > 1e6) throw Malformed("axis: count must be a positive integer");
        a.n = static_cast<int>(n);
    } catch (const std::invalid_argument& e) {
        throw Malformed(e.what());
    }
    if (!std::isfinite(a.lo) || !std::isfinite(a.hi)) throw Malformed("axis: bounds must be finite");
    return a;
}

double axis_point(const Axis& a, int i) {
    if (a.n == 1) return a.lo;
    return a.lo + (a.hi - a.lo) * static_cast<double>(i) / static_cast<double>(a.n - 1);
}

io::GridRow eval_point(const std::vector<double>& x, const Setup& st, double exclude_radius) {
    io::GridRow row;
    row.x = x;
    double dist = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) dist = std::hypot(dist, x[i] - st.y[i]);
    if (dist <= exclude_radius) {
        row.status = "excluded";
        return row;
    }
    try {
        const Evaluation ev = green(HalfSpacePoint(x), HalfSpacePoint(st.y), st.params, st.s, st.opts);
        row.value = ev.value;
        row.path = std::string(to_string(ev.path));
        row.error_estimate = ev.error_estimate;
        row.status = ev.converged ? "ok" : "not_converged";
    } catch (const IntegrandFailure&) {
        row.status = "not_converged";
    } catch (const DomainError&) {
        row.status = "domain_error";
    }
    return row;
}

int cmd_grid(const Common& c, const std::vector<std::string>& axes, double exclude_radius,
             const std::string& out_path, std::ostream& out) {
    const Setup st = make_setup(c);
    if (static_cast<int>(axes.size()) != c.d) {
        throw Malformed("axis: expected " + std::to_string(c.d) + " --axis options");
    }
    if (!(exclude_radius >= 0.0)) throw Malformed("exclude-radius: must be >= 0");
    std::vector<Axis> ax;
    std::size_t total = 1;
    for (const auto& a : axes) {
        ax.push_back(parse_axis(a));
        total *= static_cast<std::size_t>(ax.back().n);
        if (total > 10'000'000) throw Malformed("axis: grid too large");
    }

    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw Malformed("out: cannot open '" + out_path + "'");
    }

    std::vector<io::GridRow> rows(total);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < total; k = next++) {
            // Last axis varies fastest.
            std::vector<double> x(c.d);
            std::size_t rem = k;
            for (int i = c.d - 1; i >= 0; --i) {
                const auto n = static_cast<std::size_t>(ax[i].n);
                x[i] = axis_point(ax[i], static_cast<int>(rem % n));
                rem /= n;
            }
            rows[k] = eval_point(x, st, exclude_radius);
        }
    };
    const unsigned nthreads = std::max(1u, std::min<unsigned>(grid_threads(), static_cast<unsigned>(total)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::ostream& sink = out_path.empty() ? out : static_cast<std::ostream&>(file);
    if (c.format == "json") {
        sink << io::grid_to_json(c.d, rows).dump() << '\n';
    } else {
        io::write_grid_csv(sink, c.d, rows);
    }

    bool domain = false, conv = false;
    for (const auto& r : rows) {
        domain = domain || r.status == "domain_error";
        conv = conv || r.status == "not_converged";
    }
    return domain ? exit_domain : conv ? exit_not_converged : exit_ok;
}

int cmd_selfcheck(const std::string& suite, const std::string& report, double fault,
                  std::ostream& out, std::ostream& err) {
    std::ofstream file;
    if (!report.empty()) {
        file.open(report, std::ios::binary);
        if (!file) {
            err << "report: cannot open '" << report << "'\n";
            return exit_malformed;
        }
    }
    const auto reports = run_selfcheck(suite == "full" ? Suite::full : Suite::quick, fault);
    nlohmann::json j;
    j["suite"] = suite;
    j["checks"] = nlohmann::json::array();
    std::vector<std::string> failed;
    for (const auto& r : reports) {
        j["checks"].push_back(r.to_json());
        out << (r.pass ? "PASS " : "FAIL ") << r.check_name << ' ' << r.params.dump() << '\n';
        if (!r.pass) failed.push_back(r.check_name);
    }
    j["pass"] = failed.empty();
    if (file) file << j.dump(2) << '\n';
    if (failed.empty()) {
        out << reports.size() << " checks passed\n";
        return exit_ok;
    }
    err << "failed checks:";
    for (const auto& f : failed) err << ' ' << f;
    err << '\n';
    return exit_selfcheck_failed;
}

} // namespace

unsigned grid_threads() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("IMPEDANCE_GREEN_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Impedance half-space Green's function"};
    app.require_subcommand(1);

    Common ec;
    std::string ex;
    auto* eval = app.add_subcommand("eval", "evaluate G(x, y) at one point");
    add_common(*eval, ec);
    eval->add_option("--x", ex, "target coordinates")->required();

    Common gc;
    std::vector<std::string> axes;
    double exclude_radius = 0.0;
    std::string grid_out;
    auto* grid = app.add_subcommand("grid", "evaluate G(., y) on a tensor grid");
    add_common(*grid, gc);
    grid->add_option("--axis", axes, "lo:hi:n, once per coordinate")->required();
    grid->add_option("--exclude-radius", exclude_radius, "skip points this close to y");
    grid->add_option("--out", grid_out, "output file (stdout if omitted)");

    std::string suite = "quick";
    std::string report;
    double fault = 1.0;
    auto* self = app.add_subcommand("selfcheck", "run the verification suite");
    self->add_option("--suite", suite)->check(CLI::IsMember({"quick", "full"}));
    self->add_option("--report", report, "JSON report path");
    self->add_option("--inject-fault", fault)->group("");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_malformed;
    }

    try {
        if (eval->parsed()) return cmd_eval(ec, ex, out);
        if (grid->parsed()) return cmd_grid(gc, axes, exclude_radius, grid_out, out);
        return cmd_selfcheck(suite, report, fault, out, err);
    } catch (const Malformed& e) {
        err << "error: " << e.what() << '\n';
        return exit_malformed;
    } catch (const IntegrandFailure& e) {
        err << "error: " << e.what() << '\n';
        return exit_not_converged;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return exit_domain;
    }
}

} // namespace impgreen
