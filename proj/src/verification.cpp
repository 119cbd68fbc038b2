#include "impgreen/verification.hpp"

#include "impgreen/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace impgreen {

namespace {

using nlohmann::json;

json complex_json(cplx v) { return json::array({v.real(), v.imag()}); }

json params_json(const ProblemParams& p, const Frequency& s) {
    return json{{"d", p.d()}, {"beta", p.beta()}, {"s", complex_json(s.value())}};
}

json point_json(std::span<const double> x) { return json(std::vector<double>(x.begin(), x.end())); }

void require_decreasing(const std::vector<double>& h) {
    if (h.size() < 2) throw DomainError("need at least two step sizes");
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!(h[i] > 0.0)) throw DomainError("step sizes must be positive");
        if (i > 0 && !(h[i] < h[i - 1])) throw DomainError("step sizes must be strictly decreasing");
    }
}

ProblemParams evaluated(const ProblemParams& p, const CheckOptions& opts) {
    return opts.beta_scale == 1.0 ? p : ProblemParams(p.d(), p.beta() * opts.beta_scale);
}

// G_imp by the same route green() would use.
Evaluation imp_auto(const DiffVector& z, const ProblemParams& params, const Frequency& s,
                    const GreenOptions& opts) {
    const int d = params.d();
    if (!opts.path && d % 2 == 1 && params.beta() == 1.0) {
        return d == 3 ? g_imp_closed_d3_beta1(z, params, s) : g_imp_closed_odd_beta1(z, params, s);
    }
    if (opts.path == Path::quadrature_t_form) return g_imp_t_form(z, params, s, opts.quadrature);
    return g_imp(z, params, s, opts.quadrature, opts.path);
}

ResidualReport z_d_identity(const std::string& name, const DiffVector& z, const ProblemParams& params,
                            const Frequency& s, const std::vector<double>& h_list,
                            const CheckOptions& opts) {
    require_decreasing(h_list);
    ResidualReport rep;
    rep.check_name = name;
    rep.params = params_json(params, s);
    rep.params["z"] = point_json(z.coords());
    rep.tolerance_used = 0.2;
    const double scale = 1.0 + z.r();
    const cplx sv = s.value();
    const ProblemParams used = evaluated(params, opts);
    const Evaluation centre = imp_auto(z, used, s, opts.green);
    const cplx rhs = impedance_source_term(z, params, s) + sv * params.beta() * centre.value;
    const double norm_rhs = std::abs(rhs) + std::abs(sv * params.beta() * centre.value);
    for (double h : h_list) {
        const double step = h * scale;
        if (!(z.z_d() - step > 0.0)) throw DomainError(name + ": stencil leaves the half-space");
        const cplx plus = imp_auto(z.with_z_d(z.z_d() + step), used, s, opts.green).value;
        const cplx minus = imp_auto(z.with_z_d(z.z_d() - step), used, s, opts.green).value;
        const cplx fd = (plus - minus) / (2.0 * step);
        rep.h_values.push_back(step);
        rep.residuals.push_back(std::abs(fd - rhs) / norm_rhs);
    }
    rep.observed_order = observed_order(rep.h_values, rep.residuals);
    rep.pass = std::abs(rep.observed_order - 2.0) <= rep.tolerance_used;
    return rep;
}

} // namespace

json ResidualReport::to_json() const {
    json j;
    j["check"] = check_name;
    j["params"] = params;
    j["h"] = h_values;
    j["residual"] = residuals;
    if (std::isfinite(observed_order)) j["order"] = observed_order; else j["order"] = nullptr;
    j["pass"] = pass;
    j["tolerance"] = tolerance_used;
    return j;
}

double observed_order(const std::vector<double>& h, const std::vector<double>& residuals) {
    if (h.size() != residuals.size() || h.size() < 2) {
        throw DomainError("observed_order: need matching samples, at least two");
    }
    const double n = static_cast<double>(h.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double lx = std::log(h[i]);
        // A residual of exactly zero carries no slope information; clamp to the floor.
        const double ly = std::log(std::max(residuals[i], 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ResidualReport helmholtz_residual(const HalfSpacePoint& x, const HalfSpacePoint& y,
                                  const ProblemParams& params, const Frequency& s,
                                  const std::vector<double>& h_list, const CheckOptions& opts) {
    require_decreasing(h_list);
    const int d = params.d();
    ResidualReport rep;
    rep.check_name = "helmholtz_residual";
    rep.params = params_json(params, s);
    rep.params["x"] = point_json(x.coords());
    rep.params["y"] = point_json(y.coords());
    rep.tolerance_used = 0.3;

    const double scale = 1.0 + x.norm();
    double dist = 0.0;
    for (int i = 0; i < d; ++i) dist = std::hypot(dist, x.coords()[i] - y.coords()[i]);
    for (double h : h_list) {
        const double step = h * scale;
        if (!(x.last() > 2.0 * step) || !(dist > 2.0 * step)) {
            throw DomainError("helmholtz_residual: stencil out of domain (too close to the "
                              "boundary or the source)");
        }
    }

    const cplx sv = s.value();
    const ProblemParams used = evaluated(params, opts);
    const cplx centre = green(x, y, used, s, opts.green).value;
    for (double h : h_list) {
        const double step = h * scale;
        cplx laplacian = 0.0;
        for (int i = 0; i < d; ++i) {
            std::vector<double> xp(x.coords().begin(), x.coords().end());
            std::vector<double> xm = xp;
            xp[i] += step;
            xm[i] -= step;
            const cplx gp = green(HalfSpacePoint(xp), y, used, s, opts.green).value;
            const cplx gm = green(HalfSpacePoint(xm), y, used, s, opts.green).value;
            laplacian += (gp - 2.0 * centre + gm) / (step * step);
        }
        const cplx residual = -laplacian + sv * sv * centre;
        rep.h_values.push_back(step);
        rep.residuals.push_back(std::abs(residual) /
                                (std::norm(sv) * std::abs(centre) + 1e-300));
    }
    rep.observed_order = observed_order(rep.h_values, rep.residuals);
    rep.pass = std::abs(rep.observed_order - 2.0) <= rep.tolerance_used;
    return rep;
}

ResidualReport impedance_bc_residual(const HalfSpacePoint& x_on_boundary, const HalfSpacePoint& y,
                                     const ProblemParams& params, const Frequency& s,
                                     const std::vector<double>& h_list, const CheckOptions& opts,
                                     const BoundaryVariant& variant) {
    require_decreasing(h_list);
    if (x_on_boundary.last() != 0.0) {
        throw DomainError("impedance_bc_residual: target must lie on x_d = 0");
    }
    const int d = params.d();
    const double test_beta = variant.beta_override.value_or(params.beta());
    ResidualReport rep;
    rep.check_name = "impedance_bc_residual";
    rep.params = params_json(params, s);
    rep.params["x"] = point_json(x_on_boundary.coords());
    rep.params["y"] = point_json(y.coords());
    if (variant.beta_override) rep.params["test_beta"] = test_beta;
    if (variant.flip_normal) rep.params["flip_normal"] = true;
    rep.tolerance_used = 3.0;

    GreenOptions gopts = opts.green;
    gopts.allow_boundary_target = true;
    const double scale = 1.0 + x_on_boundary.norm();
    const ProblemParams used = evaluated(params, opts);
    auto at_height = [&](double height) {
        std::vector<double> p(x_on_boundary.coords().begin(), x_on_boundary.coords().end());
        p.back() = height;
        return green(HalfSpacePoint(p, HalfSpacePoint::Closure::allow_boundary), y, used, s,
                     gopts)
            .value;
    };
    double dist = 0.0;
    for (int i = 0; i < d; ++i) dist = std::hypot(dist, x_on_boundary.coords()[i] - y.coords()[i]);

    const cplx g0 = at_height(0.0);
    const cplx sv = s.value();
    for (double h : h_list) {
        const double step = h * scale;
        if (!(dist > 6.0 * step)) {
            throw DomainError("impedance_bc_residual: stencil reaches the source");
        }
        const cplx g1 = at_height(step), g2 = at_height(2 * step), g3 = at_height(3 * step),
                   g4 = at_height(4 * step);
        const cplx dgd = (-25.0 * g0 + 48.0 * g1 - 36.0 * g2 + 16.0 * g3 - 3.0 * g4) / (12.0 * step);
        const cplx normal = variant.flip_normal ? dgd : -dgd;
        const cplx residual = normal + sv * test_beta * g0;
        rep.h_values.push_back(step);
        rep.residuals.push_back(std::abs(residual) / std::abs(sv * test_beta * g0));
    }
    rep.observed_order = observed_order(rep.h_values, rep.residuals);
    rep.pass = rep.observed_order >= rep.tolerance_used;
    return rep;
}

ResidualReport derivative_identity_check(const DiffVector& z, const ProblemParams& params,
                                         const Frequency& s, const std::vector<double>& h_list,
                                         const CheckOptions& opts) {
    return z_d_identity("derivative_identity", z, params, s, h_list, opts);
}

ResidualReport ode_beta1_check(const DiffVector& z, const ProblemParams& params,
                               const Frequency& s, const std::vector<double>& h_list,
                               const CheckOptions& opts) {
    if (params.beta() != 1.0) throw DomainError("ode_beta1_check: requires beta = 1");
    return z_d_identity("ode_beta1", z, params, s, h_list, opts);
}

ResidualReport cross_representation_check(const DiffVector& z, const ProblemParams& params,
                                          const Frequency& s, const QuadratureConfig& cfg) {
    if (!s.dissipative()) throw DomainError("cross_representation_check: requires Re s > 0");
    ResidualReport rep;
    rep.check_name = "cross_representation";
    rep.params = params_json(params, s);
    rep.params["z"] = point_json(z.coords());
    rep.tolerance_used = 1e-10;
    const Evaluation ys = g_imp(z, params, s, cfg, Path::quadrature_y_form);
    const Evaluation ts = g_imp_t_form(z, params, s, cfg);
    const Evaluation rs = g_imp(z, params, s, cfg, Path::regularized);
    const Evaluation* all[3] = {&ys, &ts, &rs};
    const double mag = std::abs(ys.value);
    rep.pass = ys.converged && ts.converged && rs.converged;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            const double diff = std::abs(all[i]->value - all[j]->value);
            const double allowed =
                all[i]->error_estimate + all[j]->error_estimate + rep.tolerance_used * mag;
            rep.residuals.push_back(diff / mag);
            rep.pass = rep.pass && diff <= allowed;
        }
    }
    return rep;
}

ResidualReport closed_form_check(const DiffVector& z, const ProblemParams& params,
                                 const Frequency& s, double tol, const CheckOptions& opts) {
    ResidualReport rep;
    rep.check_name = "closed_form_vs_quadrature";
    rep.params = params_json(params, s);
    rep.params["z"] = point_json(z.coords());
    rep.tolerance_used = tol;
    const Evaluation closed = params.d() == 3 ? g_imp_closed_d3_beta1(z, params, s)
                                              : g_imp_closed_odd_beta1(z, params, s);
    const Evaluation quad = g_imp(z, evaluated(params, opts), s, opts.green.quadrature);
    const double rel = std::abs(closed.value - quad.value) / std::abs(closed.value);
    rep.residuals.push_back(rel);
    rep.pass = quad.converged && rel <= tol;
    return rep;
}

ResidualReport limit_absorption_probe(const HalfSpacePoint& x, const HalfSpacePoint& y,
                                      const ProblemParams& params, double k,
                                      const std::vector<double>& eps_list, double tol,
                                      const GreenOptions& options) {
    if (!(k != 0.0) || !std::isfinite(k)) throw DomainError("limit_absorption_probe: k must be nonzero");
    require_decreasing(eps_list);
    const Frequency s(cplx(0.0, k));
    ResidualReport rep;
    rep.check_name = "limit_absorption";
    rep.params = params_json(params, s);
    rep.params["x"] = point_json(x.coords());
    rep.params["y"] = point_json(y.coords());
    rep.params["eps"] = eps_list;
    rep.tolerance_used = tol;

    GreenOptions extrap = options;
    extrap.path = Path::limit_absorption_extrapolated;
    extrap.absorption_eps = eps_list;
    const Evaluation limit = green(x, y, params, s, extrap);
    GreenOptions direct_opts = options;
    direct_opts.path = Path::regularized;
    if (params.d() == 1) direct_opts.path.reset();
    const Evaluation direct = green(x, y, params, s, direct_opts);
    const double rel = std::abs(limit.value - direct.value) / std::abs(direct.value);
    rep.residuals.push_back(rel);
    rep.pass = rel <= tol;
    return rep;
}

std::vector<ResidualReport> run_selfcheck(Suite suite, double beta_scale) {
    std::vector<ResidualReport> out;
    const bool full = suite == Suite::full;
    const std::vector<double> h_pde{1e-2, 5e-3, 2.5e-3};
    const std::vector<double> h_bc{4e-2, 2e-2, 1e-2};
    const std::vector<double> h_id{1e-2, 5e-3, 2.5e-3};
    CheckOptions opts;
    opts.beta_scale = beta_scale;

    struct Draw {
        int d;
        double beta;
        cplx s;
        std::vector<double> x;
        std::vector<double> y;
    };
    std::vector<Draw> draws = {
        {3, 1.0, {1.0, 0.0}, {0.3, 0.2, 1.0}, {0.0, 0.0, 1.0}},
        {2, 0.5, {2.0, 1.0}, {0.4, 0.9}, {0.0, 0.6}},
    };
    if (full) {
        draws.push_back({2, 1.0, {1.0, 0.5}, {0.5, 0.8}, {-0.2, 0.5}});
        draws.push_back({3, 2.0, {1.0, 1.0}, {0.2, -0.3, 0.7}, {-0.1, 0.2, 0.4}});
        draws.push_back({5, 1.0, {1.5, 0.0}, {0.2, 0.1, -0.1, 0.3, 0.8}, {0.0, 0.0, 0.0, 0.0, 0.5}});
        draws.push_back({5, 0.5, {1.0, 0.5}, {0.3, 0.0, 0.1, 0.0, 0.9}, {0.0, 0.2, 0.0, 0.1, 0.6}});
    }
    for (const Draw& dr : draws) {
        const ProblemParams p(dr.d, dr.beta);
        const Frequency s(dr.s);
        const HalfSpacePoint y(dr.y);
        out.push_back(helmholtz_residual(HalfSpacePoint(dr.x), y, p, s, h_pde, opts));
        std::vector<double> xb = dr.x;
        xb.back() = 0.0;
        out.push_back(impedance_bc_residual(
            HalfSpacePoint(xb, HalfSpacePoint::Closure::allow_boundary), y, p, s, h_bc, opts));
    }

    // Negative control: the boundary check must reject a mismatched beta.
    {
        BoundaryVariant wrong;
        wrong.beta_override = 0.8;
        ResidualReport rep = impedance_bc_residual(
            HalfSpacePoint({0.4, 0.0}, HalfSpacePoint::Closure::allow_boundary),
            HalfSpacePoint({0.0, 0.6}), ProblemParams(2, 0.5), Frequency({2.0, 1.0}), h_bc, opts,
            wrong);
        rep.check_name = "impedance_bc_negative_control";
        rep.pass = !rep.pass;
        out.push_back(rep);
    }

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto draw_s = [&] { return Frequency(cplx(0.5 + 1.5 * u01(rng), 2.0 * u01(rng) - 1.0)); };
    auto draw_z = [&](int d) {
        return DiffVector::from_components(d, 1.5 * u01(rng), 0.4 + u01(rng));
    };

    const int identity_draws = full ? 6 : 1;
    const int dims[] = {2, 3, 4, 5, 3, 2};
    const double betas[] = {0.5, 2.0, 1.5, 0.7, 0.5, 2.0};
    for (int i = 0; i < identity_draws; ++i) {
        const Frequency s = draw_s();
        const DiffVector z = draw_z(dims[i]);
        out.push_back(derivative_identity_check(z, ProblemParams(dims[i], betas[i]), s, h_id, opts));
    }
    const int ode_draws = full ? 6 : 1;
    const int ode_dims[] = {5, 3, 7, 2, 4, 9};
    for (int i = 0; i < ode_draws; ++i) {
        const Frequency s = draw_s();
        const DiffVector z = draw_z(ode_dims[i]);
        out.push_back(ode_beta1_check(z, ProblemParams(ode_dims[i], 1.0), s, h_id, opts));
    }

    const int cross_draws = full ? 8 : 1;
    const int cross_dims[] = {2, 4, 3, 5, 2, 4, 3, 5};
    const double cross_betas[] = {0.5, 2.0, 1.0, 0.5, 2.0, 0.5, 2.0, 1.0};
    const cplx cross_s[] = {{1.0, 0.0}, {1.0, 2.0}, {2.0, 1.0}, {0.1, 3.0},
                            {1.0, 2.0}, {1.0, 0.0}, {0.1, 3.0}, {2.0, 1.0}};
    for (int i = 0; i < cross_draws; ++i) {
        const ProblemParams p(cross_dims[i], cross_betas[i]);
        const DiffVector z = DiffVector::from_components(p.d(), 2.0 * u01(rng), 0.2 + 2.0 * u01(rng));
        out.push_back(cross_representation_check(z, p, Frequency(cross_s[i])));
    }

    const int closed_draws = full ? 3 : 1;
    for (int d : {3, 5, 7}) {
        if (d > 3 && !full) break;
        for (int i = 0; i < closed_draws; ++i) {
            const Frequency s(cplx(0.3 + 2.0 * u01(rng), 4.0 * u01(rng) - 2.0));
            const DiffVector z = DiffVector::from_components(d, 2.0 * u01(rng), 0.1 + 2.0 * u01(rng));
            out.push_back(closed_form_check(z, ProblemParams(d, 1.0), s, d == 3 ? 1e-9 : 1e-8, opts));
        }
    }

    out.push_back(limit_absorption_probe(HalfSpacePoint({0.3, 0.2, 1.0}),
                                         HalfSpacePoint({0.0, 0.0, 0.5}), ProblemParams(3, 1.0),
                                         1.0, {1e-2, 1e-3, 1e-4}, 1e-6));
    if (full) {
        out.push_back(limit_absorption_probe(HalfSpacePoint({0.4, 0.8}), HalfSpacePoint({0.0, 0.5}),
                                             ProblemParams(2, 1.0), 2.0, {1e-2, 1e-3, 1e-4}, 1e-5));
    }
    return out;
}

} // namespace impgreen
