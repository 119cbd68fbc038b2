#include "impgreen/geometry.hpp"

#include "impgreen/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace impgreen {

ProblemParams::ProblemParams(int d, double beta) : d_(d), beta_(beta) {
    if (d < 1) throw DomainError("dimension must be >= 1, got " + std::to_string(d));
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw DomainError("impedance beta must be a finite positive number");
    }
}

HalfSpacePoint::HalfSpacePoint(std::vector<double> coords, Closure closure)
    : coords_(std::move(coords)) {
    if (coords_.empty()) throw DomainError("point must have at least one coordinate");
    for (double c : coords_) {
        if (!std::isfinite(c)) throw DomainError("point coordinates must be finite");
    }
    const double last = coords_.back();
    if (closure == Closure::interior ? !(last > 0.0) : !(last >= 0.0)) {
        throw DomainError("point must lie in the upper half-space (last coordinate " +
                          std::string(closure == Closure::interior ? "> 0" : ">= 0") + ")");
    }
}

double HalfSpacePoint::norm() const {
    double acc = 0.0;
    for (double c : coords_) acc = std::hypot(acc, c);
    return acc;
}

std::vector<double> reflect(std::span<const double> y) {
    std::vector<double> out(y.begin(), y.end());
    if (!out.empty()) out.back() = -out.back();
    return out;
}

DiffVector::DiffVector(std::vector<double> z) : z_(std::move(z)) {
    if (z_.empty() || !(z_.back() > 0.0)) {
        throw DomainError("difference vector must have z_d > 0");
    }
    omega_ = 0.0;
    for (std::size_t i = 0; i + 1 < z_.size(); ++i) omega_ = std::hypot(omega_, z_[i]);
    r_ = std::hypot(omega_, z_.back());
}

DiffVector DiffVector::between(const HalfSpacePoint& x, const HalfSpacePoint& y) {
    if (x.dim() != y.dim()) throw DomainError("points have different dimensions");
    std::vector<double> z(x.coords().begin(), x.coords().end());
    for (int i = 0; i + 1 < x.dim(); ++i) z[i] -= y.coords()[i];
    z.back() += y.last();
    return DiffVector(std::move(z));
}

DiffVector DiffVector::from_components(int d, double omega, double z_d) {
    if (d < 1) throw DomainError("dimension must be >= 1");
    if (omega < 0.0) throw DomainError("omega must be >= 0");
    if (d == 1 && omega != 0.0) throw DomainError("omega must vanish for d = 1");
    std::vector<double> z(static_cast<std::size_t>(d), 0.0);
    if (d > 1) z[0] = omega;
    z.back() = z_d;
    return DiffVector(std::move(z));
}

DiffVector DiffVector::with_z_d(double z_d) const {
    std::vector<double> z = z_;
    z.back() = z_d;
    return DiffVector(std::move(z));
}

double mu(double omega, double t) { return std::hypot(omega, t); }

double y_of_t(const DiffVector& z, const ProblemParams& params, double t) {
    const double zd = z.z_d();
    if (t < zd) throw DomainError("y_of_t: t must be >= z_d");
    // mu - r = (t^2 - z_d^2)/(mu + r), free of cancellation near t = z_d.
    const double m = mu(z.omega(), t);
    return params.beta() * (t - zd) + (t - zd) * (t + zd) / (m + z.r());
}

double t_of_y(const DiffVector& z, const ProblemParams& params, double y) {
    if (!(y >= 0.0)) throw DomainError("t_of_y: y must be >= 0");
    const double zd = z.z_d();
    if (y == 0.0) return zd;
    const double beta = params.beta();
    const double omega = z.omega();
    // mu = w - beta t with w = y + r_+ gives (beta^2-1)t^2 - 2 beta w t + (w^2 - omega^2) = 0.
    // The admissible root, rationalised: t = (w^2 - omega^2)/(beta w + D),
    // D = sqrt(w^2 - omega^2 + beta^2 omega^2). It also covers beta = 1.
    const double w = y + z.r_plus(beta);
    // w - omega = y + beta z_d + (r - omega), each term >= 0.
    const double w_minus_omega = y + beta * zd + zd * zd / (z.r() + omega);
    const double diff_sq = w_minus_omega * (w + omega);
    const double disc = std::sqrt(diff_sq + (beta * omega) * (beta * omega));
    double t = diff_sq / (beta * w + disc);
    if (!(t >= zd - 1e-12 * (1.0 + zd)) || !(w - beta * t > 0.0)) {
        return detail::t_of_y_newton(z, params, y);
    }
    t = std::max(t, zd);
    const double residual = std::abs(y_of_t(z, params, t) - y);
    if (residual > 1e-12 * (1.0 + y)) return detail::t_of_y_newton(z, params, y);
    return t;
}

double detail::t_of_y_newton(const DiffVector& z, const ProblemParams& params, double y) {
    const double beta = params.beta();
    const double zd = z.z_d();
    const double w = y + z.r_plus(beta);
    double lo = zd;
    double hi = std::max(w / beta, zd);  // mu > 0 forces t < w / beta
    double t = std::clamp(std::max(zd, w / (1.0 + beta)), lo, hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double f = y_of_t(z, params, t) - y;
        if (f == 0.0) return t;
        if (f > 0.0) hi = t; else lo = t;
        const double slope = beta + t / mu(z.omega(), t);
        double next = t - f / slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - t) <= 4e-16 * std::max(1.0, std::abs(t))) return next;
        t = next;
    }
    return t;
}

Substitution substitution_at(const DiffVector& z, const ProblemParams& params, double y) {
    Substitution s{};
    s.t = t_of_y(z, params, y);
    s.mu_tilde = mu(z.omega(), s.t);
    const double denom = s.t + params.beta() * s.mu_tilde;
    s.dt_dy = s.mu_tilde / denom;
    s.dmu_dy = s.t / denom;
    return s;
}

double mu_tilde(const DiffVector& z, const ProblemParams& params, double y) {
    return mu(z.omega(), t_of_y(z, params, y));
}

double dt_dy(const DiffVector& z, const ProblemParams& params, double y) {
    return substitution_at(z, params, y).dt_dy;
}

} // namespace impgreen
