#include "impgreen/greens.hpp"

#include "impgreen/errors.hpp"
#include "impgreen/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace impgreen {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kClosedFormRelError = 1e-13;

void require_dim(const DiffVector& z, const ProblemParams& params) {
    if (z.dim() != params.d()) {
        throw DomainError("difference vector has dimension " + std::to_string(z.dim()) +
                          ", expected d = " + std::to_string(params.d()));
    }
    if (params.d() < 2) throw DomainError("G_imp is defined for d >= 2; use green_1d for d = 1");
}

// x^(twice/2) for real x > 0.
double real_pow(double x, int twice) {
    if (twice % 2 == 0) return std::pow(x, twice / 2);
    return std::pow(x, 0.5 * twice);
}

QuadratureConfig kernel_config(const QuadratureConfig& base, const Frequency& s, double length) {
    QuadratureConfig cfg = base;
    cfg.decay_rate = std::max(s.value().real(), 0.0);
    cfg.oscillation_frequency = std::abs(s.value().imag());
    cfg.length_scale = std::max(length, 1e-12);
    return cfg;
}

// The bracket of q_nu, A(mu~) / (t + beta mu~) with A(m) = e^{sm} K_lambda(sm) (sm)^(1-lambda),
// together with its y-derivative.
struct Bracket {
    cplx value;
    cplx derivative;
};

Bracket bracket_at(const DiffVector& z, const ProblemParams& params, cplx s, double y) {
    const int d = params.d();
    const BesselOrder order(d - 2);  // lambda = nu + 1/2
    const Substitution sub = substitution_at(z, params, y);
    const double m = sub.mu_tilde;
    const cplx w = s * m;
    std::array<cplx, 2> k{};
    bessel_k_scaled_sequence(order, w, 2, k.data());
    // w^(1-lambda), w^(-lambda) on the principal branch; twice exponents 4-d and 2-d.
    const cplx w_pow_1ml = principal_pow(s, 4 - d) * real_pow(m, 4 - d);
    const cplx w_pow_ml = principal_pow(s, 2 - d) * real_pow(m, 2 - d);
    const cplx a = k[0] * w_pow_1ml;
    // dA/dm = s w^(-lambda) [(w + 1) K~_lambda - w K~_{lambda+1}]
    const cplx da_dm = s * w_pow_ml * ((w + 1.0) * k[0] - w * k[1]);
    const double beta = params.beta();
    const double denom = sub.t + beta * m;
    const double b = 1.0 / denom;
    const double db_dy = -(m + beta * sub.t) / (denom * denom * denom);
    return {a * b, da_dm * sub.dmu_dy * b + a * db_dy};
}

// Truncated Taylor series in one real variable with complex coefficients.
class Series {
public:
    explicit Series(std::size_t n) : c_(n, cplx(0.0)) {}

    std::size_t size() const { return c_.size(); }
    cplx& operator[](std::size_t k) { return c_[k]; }
    cplx operator[](std::size_t k) const { return c_[k]; }

    friend Series operator*(const Series& a, const Series& b) {
        Series out(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            for (std::size_t j = 0; j <= k; ++j) out[k] += a[j] * b[k - j];
        }
        return out;
    }
    friend Series operator+(const Series& a, const Series& b) {
        Series out = a;
        for (std::size_t k = 0; k < a.size(); ++k) out[k] += b[k];
        return out;
    }
    friend Series operator*(cplx f, const Series& a) {
        Series out = a;
        for (auto& v : out.c_) v *= f;
        return out;
    }

    Series reciprocal() const {
        Series out(size());
        out[0] = 1.0 / c_[0];
        for (std::size_t k = 1; k < size(); ++k) {
            cplx acc = 0.0;
            for (std::size_t j = 1; j <= k; ++j) acc += c_[j] * out[k - j];
            out[k] = -acc * out[0];
        }
        return out;
    }

    Series sqrt() const {
        Series out(size());
        out[0] = std::sqrt(c_[0]);
        for (std::size_t k = 1; k < size(); ++k) {
            cplx acc = c_[k];
            for (std::size_t j = 1; j < k; ++j) acc -= out[j] * out[k - j];
            out[k] = acc / (2.0 * out[0]);
        }
        return out;
    }

    Series exp() const {
        Series out(size());
        out[0] = std::exp(c_[0]);
        for (std::size_t k = 1; k < size(); ++k) {
            cplx acc = 0.0;
            for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * c_[j] * out[k - j];
            out[k] = acc / static_cast<double>(k);
        }
        return out;
    }

    Series pow(int n) const {
        Series out(size());
        out[0] = 1.0;
        for (int i = 0; i < n; ++i) out = out * *this;
        return out;
    }

    Series derivative() const {
        Series out(size());
        for (std::size_t k = 0; k + 1 < size(); ++k) out[k] = static_cast<double>(k + 1) * c_[k + 1];
        return out;
    }

private:
    std::vector<cplx> c_;
};

} // namespace

Frequency::Frequency(cplx s) : s_(s) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
        throw DomainError("frequency must be finite");
    }
    if (s.real() < 0.0) throw DomainError("frequency must satisfy Re s >= 0");
    if (s == cplx(0.0, 0.0)) throw DomainError("frequency must be nonzero");
    if (s_.real() == 0.0) s_ = cplx(0.0, s_.imag());  // drop a negative zero
    regime_ = s_.real() > 0.0 ? Regime::strictly_dissipative : Regime::limiting_absorption;
}

std::string_view to_string(Path path) {
    switch (path) {
    case Path::closed_form_d1: return "closed_form_d1";
    case Path::closed_form_d3_beta1: return "closed_form_d3_beta1";
    case Path::closed_form_odd_beta1: return "closed_form_odd_beta1";
    case Path::quadrature_y_form: return "quadrature_y_form";
    case Path::quadrature_t_form: return "quadrature_t_form";
    case Path::regularized: return "regularized";
    case Path::limit_absorption_extrapolated: return "limit_absorption_extrapolated";
    }
    return "unknown";
}

std::optional<Path> path_from_string(std::string_view name) {
    for (Path p : {Path::closed_form_d1, Path::closed_form_d3_beta1, Path::closed_form_odd_beta1,
                   Path::quadrature_y_form, Path::quadrature_t_form, Path::regularized,
                   Path::limit_absorption_extrapolated}) {
        if (to_string(p) == name) return p;
    }
    return std::nullopt;
}

cplx principal_pow(cplx s, int twice_exponent) {
    const int whole = twice_exponent >= 0 ? twice_exponent / 2 : -((-twice_exponent + 1) / 2);
    const bool half = (twice_exponent - 2 * whole) != 0;
    cplx out = 1.0;
    const cplx base = whole >= 0 ? s : 1.0 / s;
    for (int i = 0; i < std::abs(whole); ++i) out *= base;
    if (half) out *= std::sqrt(s);
    return out;
}

cplx g_nu(const ProblemParams& params, const Frequency& s, double r) {
    if (!(r > 0.0)) throw DomainError("g_nu: r must be > 0");
    if (params.d() < 2) throw DomainError("g_nu: d must be >= 2");
    const int d = params.d();
    const cplx sr = s.value() * r;
    // (2pi)^-(d/2) (s/r)^((d-2)/2) e^{-sr} [e^{sr} K_{(d-2)/2}(sr)]
    const cplx k = bessel_k_scaled(BesselOrder(d - 2), sr);
    return real_pow(kTwoPi, -d) * principal_pow(s.value(), d - 2) * real_pow(r, 2 - d) *
           std::exp(-sr) * k;
}

cplx impedance_source_term(const DiffVector& z, const ProblemParams& params, const Frequency& s) {
    require_dim(z, params);
    const int d = params.d();
    const double r = z.r();
    const cplx sr = s.value() * r;
    const cplx k = bessel_k_scaled(BesselOrder(d - 2), sr);
    return 2.0 * params.beta() * principal_pow(s.value() / kTwoPi, d) * std::exp(-sr) * k *
           real_pow(r, 2 - d);
}

QuadratureResult psi(const DiffVector& z, const ProblemParams& params, const Frequency& s,
                     const QuadratureConfig& cfg) {
    require_dim(z, params);
    const int d = params.d();
    if (!s.dissipative() && d <= 3) {
        throw DomainError("psi: the y-integral does not converge for d = 2, 3 on the imaginary "
                          "axis; use psi_regularized");
    }
    const cplx sv = s.value();
    const double beta = params.beta();
    const BesselOrder order(d - 2);
    const cplx s_pow = principal_pow(sv, 4 - d);  // (s mu~)^(1/2 - nu) = s^. mu~^.
    Integrand f = [&](double y) -> cplx {
        const Substitution sub = substitution_at(z, params, y);
        const cplx k = bessel_k_scaled(order, sv * sub.mu_tilde);
        return std::exp(-sv * y) / (sub.t + beta * sub.mu_tilde) * k * s_pow *
               real_pow(sub.mu_tilde, 4 - d);
    };
    return integrate_semi_infinite(f, kernel_config(cfg, s, z.r()));
}

cplx q_nu(const DiffVector& z, const ProblemParams& params, const Frequency& s, double y) {
    require_dim(z, params);
    if (!(y >= 0.0)) throw DomainError("q_nu: y must be >= 0");
    return bracket_at(z, params, s.value(), y).derivative;
}

QuadratureResult psi_regularized(const DiffVector& z, const ProblemParams& params,
                                 const Frequency& s, const QuadratureConfig& cfg) {
    require_dim(z, params);
    const cplx sv = s.value();
    const cplx boundary = bracket_at(z, params, sv, 0.0).value / sv;
    Integrand f = [&](double y) -> cplx {
        return std::exp(-sv * y) * bracket_at(z, params, sv, y).derivative;
    };
    QuadratureConfig inner = kernel_config(cfg, s, z.r());
    // The boundary term usually dominates; the integral only needs the tolerance
    // relative to the total, so give it an absolute floor from the boundary term.
    inner.abs_tol = std::max(cfg.abs_tol, 0.1 * cfg.rel_tol * std::abs(boundary * sv));
    QuadratureResult out = integrate_semi_infinite(f, inner);
    out.value = boundary + out.value / sv;
    out.error_estimate /= std::abs(sv);
    out.converged = out.error_estimate <= std::max(cfg.rel_tol * std::abs(out.value), cfg.abs_tol);
    return out;
}

Evaluation g_imp(const DiffVector& z, const ProblemParams& params, const Frequency& s,
                 const QuadratureConfig& cfg, std::optional<Path> route) {
    require_dim(z, params);
    const Path path = route.value_or(s.dissipative() ? Path::quadrature_y_form : Path::regularized);
    if (path != Path::quadrature_y_form && path != Path::regularized) {
        throw DomainError("g_imp: route must be quadrature_y_form or regularized");
    }
    const QuadratureResult res =
        path == Path::quadrature_y_form ? psi(z, params, s, cfg) : psi_regularized(z, params, s, cfg);
    const int d = params.d();
    // -(beta/pi)(s^2/2pi)^(nu+1/2) = -2 beta s^(d-2) / (2pi)^(d/2)
    const cplx prefactor = -2.0 * params.beta() * principal_pow(s.value(), 2 * (d - 2)) *
                           real_pow(kTwoPi, -d) * std::exp(-s.value() * z.r());
    return Evaluation{prefactor * res.value, path, std::abs(prefactor) * res.error_estimate,
                      res.converged};
}

Evaluation g_imp_t_form(const DiffVector& z, const ProblemParams& params, const Frequency& s,
                        const QuadratureConfig& cfg) {
    require_dim(z, params);
    if (!s.dissipative()) throw DomainError("g_imp_t_form: requires Re s > 0");
    const int d = params.d();
    const cplx sv = s.value();
    const double beta = params.beta();
    const double omega = z.omega();
    const double zd = z.z_d();
    const BesselOrder order(d - 2);
    // t = z_d + u; e^{-s beta u} K(s mu) = e^{-s(beta u + mu)} K~(s mu) in one exponential.
    Integrand f = [&](double u) -> cplx {
        const double m = mu(omega, zd + u);
        const cplx k = bessel_k_scaled(order, sv * m);
        return std::exp(-sv * (beta * u + m)) * k * real_pow(m, 2 - d);
    };
    QuadratureConfig inner = kernel_config(cfg, s, z.r());
    inner.decay_rate = sv.real() * (beta + zd / z.r());
    inner.oscillation_frequency = std::abs(sv.imag()) * (beta + 1.0);
    const QuadratureResult res = integrate_semi_infinite(f, inner);
    const cplx prefactor = -2.0 * beta * principal_pow(sv / kTwoPi, d);
    return Evaluation{prefactor * res.value, Path::quadrature_t_form,
                      std::abs(prefactor) * res.error_estimate, res.converged};
}

Evaluation g_imp_closed_d3_beta1(const DiffVector& z, const ProblemParams& params,
                                 const Frequency& s) {
    if (params.d() != 3 || params.beta() != 1.0) {
        throw DomainError("g_imp_closed_d3_beta1: requires d = 3 and beta = 1");
    }
    require_dim(z, params);
    const cplx sv = s.value();
    const cplx value = -(sv / kTwoPi) * std::exp(-sv * z.r()) * tricomi_u11(sv * (z.r() + z.z_d()));
    return Evaluation{value, Path::closed_form_d3_beta1, kClosedFormRelError * std::abs(value)};
}

Evaluation g_imp_closed_odd_beta1(const DiffVector& z, const ProblemParams& params,
                                  const Frequency& s) {
    const int d = params.d();
    if (d < 5 || d % 2 == 0 || params.beta() != 1.0) {
        throw DomainError("g_imp_closed_odd_beta1: requires odd d >= 5 and beta = 1");
    }
    require_dim(z, params);
    const int nu = (d - 3) / 2;
    const cplx sv = s.value();
    const std::size_t n = static_cast<std::size_t>(nu);  // derivatives up to order nu - 1

    // Series in delta with z_d = z_d0 + delta, omega fixed.
    Series zd_series(n);
    zd_series[0] = z.z_d();
    if (n > 1) zd_series[1] = 1.0;
    Series r_sq = zd_series * zd_series;
    r_sq[0] = z.r() * z.r();
    Series r_series = r_sq.sqrt();
    r_series[0] = z.r();
    const Series decay = (-sv * r_series).exp();
    const Series denom = (r_series + zd_series).pow(nu) * r_series;
    Series value = (-sv * real_pow(kTwoPi, -2 * (nu + 1))) * (decay * denom.reciprocal());
    for (int i = 0; i < nu - 1; ++i) {
        Series next = sv * value;
        const Series dv = value.derivative();
        for (std::size_t k = 0; k < n; ++k) next[k] -= dv[k];
        value = next;
    }
    const cplx result = value[0];
    return Evaluation{result, Path::closed_form_odd_beta1,
                      kClosedFormRelError * (nu + 1) * std::abs(result)};
}

cplx green_1d(double x, double y, double beta, const Frequency& s) {
    if (!(x > 0.0) || !(y > 0.0)) throw DomainError("green_1d: points must be > 0");
    if (!(beta > 0.0)) throw DomainError("green_1d: beta must be > 0");
    const cplx sv = s.value();
    const double reflection = (1.0 - beta) / (1.0 + beta);
    return (std::exp(-sv * std::abs(x - y)) + reflection * std::exp(-sv * (x + y))) / (2.0 * sv);
}

Extrapolated extrapolate_to_zero(const std::vector<double>& eps, const std::vector<cplx>& values) {
    if (eps.size() != values.size() || eps.empty()) {
        throw DomainError("extrapolate_to_zero: need matching, non-empty samples");
    }
    // Neville's tableau evaluated at 0; keep the last two diagonal entries.
    std::vector<cplx> p(values);
    const std::size_t n = eps.size();
    cplx previous = p[n - 1];
    for (std::size_t m = 1; m < n; ++m) {
        for (std::size_t i = 0; i + m < n; ++i) {
            p[i] = (eps[i + m] * p[i] - eps[i] * p[i + 1]) / (eps[i + m] - eps[i]);
        }
        if (m + 1 == n) break;
        previous = p[n - m - 1];
    }
    const cplx best = p[0];
    return {best, n > 1 ? std::abs(best - previous) : 0.0};
}

Evaluation green(const HalfSpacePoint& x, const HalfSpacePoint& y, const ProblemParams& params,
                 const Frequency& s, const GreenOptions& options) {
    const int d = params.d();
    if (x.dim() != d || y.dim() != d) {
        throw DomainError("points must have d = " + std::to_string(d) + " coordinates");
    }
    if (!(x.last() > 0.0) && !(options.allow_boundary_target && x.last() == 0.0)) {
        throw DomainError("target must lie in the open upper half-space");
    }
    double dist = 0.0;
    for (int i = 0; i < d; ++i) dist = std::hypot(dist, x.coords()[i] - y.coords()[i]);
    if (dist < 1e-12 * (x.norm() + y.norm() + 1.0)) {
        throw SingularInputError("coincident source and target");
    }

    if (options.path == Path::limit_absorption_extrapolated) {
        if (s.dissipative()) {
            throw DomainError("limit_absorption_extrapolated applies to imaginary s only");
        }
        const auto& eps = options.absorption_eps;
        if (eps.size() < 2) throw DomainError("absorption_eps needs at least two values");
        GreenOptions inner = options;
        inner.path.reset();
        std::vector<cplx> samples;
        double err = 0.0;
        bool converged = true;
        for (double e : eps) {
            const Evaluation ev = green(x, y, params, Frequency(cplx(e, s.value().imag())), inner);
            samples.push_back(ev.value);
            err = std::max(err, ev.error_estimate);
            converged = converged && ev.converged;
        }
        const Extrapolated ex = extrapolate_to_zero(eps, samples);
        return Evaluation{ex.value, Path::limit_absorption_extrapolated, ex.error + err, converged};
    }

    if (d == 1) {
        if (options.path && *options.path != Path::closed_form_d1) {
            throw DomainError("d = 1 supports only the closed_form_d1 route");
        }
        const double xv = x.last();
        const double yv = y.last();
        if (xv == 0.0) {
            // Boundary target: the closed form extends continuously.
            const cplx sv = s.value();
            const double refl = (1.0 - params.beta()) / (1.0 + params.beta());
            const cplx v = (std::exp(-sv * yv) + refl * std::exp(-sv * yv)) / (2.0 * sv);
            return Evaluation{v, Path::closed_form_d1, 1e-15 * std::abs(v)};
        }
        const cplx v = green_1d(xv, yv, params.beta(), s);
        return Evaluation{v, Path::closed_form_d1, 1e-15 * std::abs(v)};
    }

    const DiffVector z = DiffVector::between(x, y);
    const cplx direct = g_nu(params, s, dist);
    const cplx image = g_nu(params, s, z.r());

    Path path;
    if (options.path) {
        path = *options.path;
    } else if (d % 2 == 1 && params.beta() == 1.0) {
        path = d == 3 ? Path::closed_form_d3_beta1 : Path::closed_form_odd_beta1;
    } else {
        path = s.dissipative() ? Path::quadrature_y_form : Path::regularized;
    }

    Evaluation imp;
    switch (path) {
    case Path::closed_form_d3_beta1: imp = g_imp_closed_d3_beta1(z, params, s); break;
    case Path::closed_form_odd_beta1: imp = g_imp_closed_odd_beta1(z, params, s); break;
    case Path::quadrature_y_form:
    case Path::regularized: imp = g_imp(z, params, s, options.quadrature, path); break;
    case Path::quadrature_t_form: imp = g_imp_t_form(z, params, s, options.quadrature); break;
    default: throw DomainError("route " + std::string(to_string(path)) + " does not apply here");
    }
    const cplx value = direct + image + imp.value;
    const double kernel_err = 1e-14 * (std::abs(direct) + std::abs(image));
    return Evaluation{value, imp.path, imp.error_estimate + kernel_err, imp.converged};
}

} // namespace impgreen
