#pragma once

// Half-space geometry: reflection, the difference vector z = x - Ry, and the
// monotone substitution y(z, t) with its inverse t(z, y).

#include <span>
#include <vector>

namespace impgreen {

/// Dimension d, impedance beta > 0 and the derived order nu = (d-3)/2.
class ProblemParams {
public:
    ProblemParams(int d, double beta);

    int d() const noexcept { return d_; }
    double beta() const noexcept { return beta_; }
    /// 2*nu = d - 3, exact.
    int twice_nu() const noexcept { return d_ - 3; }
    double nu() const noexcept { return 0.5 * (d_ - 3); }

private:
    int d_;
    double beta_;
};

/// A point of the closed upper half-space. Interior points have x_d > 0.
class HalfSpacePoint {
public:
    enum class Closure { interior, allow_boundary };

    explicit HalfSpacePoint(std::vector<double> coords, Closure closure = Closure::interior);

    std::span<const double> coords() const noexcept { return coords_; }
    int dim() const noexcept { return static_cast<int>(coords_.size()); }
    double last() const noexcept { return coords_.back(); }
    double norm() const;

private:
    std::vector<double> coords_;
};

/// (y', -y_d). Not a half-space point any more, hence the raw vector.
std::vector<double> reflect(std::span<const double> y);

/// z = x - Ry split as (z', z_d), with omega = |z'| and r = |z|.
class DiffVector {
public:
    /// Throws DomainError unless z_d > 0.
    explicit DiffVector(std::vector<double> z);

    /// x - Ry.
    static DiffVector between(const HalfSpacePoint& x, const HalfSpacePoint& y);

    /// Only (omega, z_d) matter to every formula; z' is taken as (omega, 0, ..., 0).
    static DiffVector from_components(int d, double omega, double z_d);

    /// Same z' with a different last coordinate.
    DiffVector with_z_d(double z_d) const;

    int dim() const noexcept { return static_cast<int>(z_.size()); }
    std::span<const double> coords() const noexcept { return z_; }
    std::span<const double> z_prime() const noexcept { return {z_.data(), z_.size() - 1}; }
    double z_d() const noexcept { return z_.back(); }
    double omega() const noexcept { return omega_; }
    double r() const noexcept { return r_; }
    double r_plus(double beta) const noexcept { return r_ + beta * z_.back(); }

private:
    std::vector<double> z_;
    double omega_;
    double r_;
};

/// sqrt(omega^2 + t^2), overflow-safe.
double mu(double omega, double t);

/// y(z, t) = -r_+ + beta t + mu(omega, t) for t >= z_d. Exactly 0 at t = z_d.
double y_of_t(const DiffVector& z, const ProblemParams& params, double t);

/// Inverse of y_of_t: the unique t >= z_d with y(z, t) = y.
double t_of_y(const DiffVector& z, const ProblemParams& params, double y);

/// mu(omega, t(z, y)).
double mu_tilde(const DiffVector& z, const ProblemParams& params, double y);

/// dt/dy = mu~ / (t + beta mu~).
double dt_dy(const DiffVector& z, const ProblemParams& params, double y);

/// t, mu~ and their y-derivatives at one y, sharing a single inversion.
struct Substitution {
    double t;
    double mu_tilde;
    double dt_dy;
    double dmu_dy;
};
Substitution substitution_at(const DiffVector& z, const ProblemParams& params, double y);

namespace detail {
/// Safeguarded Newton for y(z, t) = y on [z_d, (y + r_+)/beta]; the fallback of t_of_y.
double t_of_y_newton(const DiffVector& z, const ProblemParams& params, double y);
} // namespace detail

} // namespace impgreen
