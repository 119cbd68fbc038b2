#include "impgreen/quadrature.hpp"

#include "impgreen/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

namespace impgreen {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// 15-point Kronrod abscissae on [-1, 1] (non-negative half) and weights; the
// odd entries are the 7-point Gauss nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    cplx value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

class Evaluator {
public:
    explicit Evaluator(const Integrand& f) : f_(f) {}

    cplx operator()(double x) {
        ++count_;
        const cplx v = f_(x);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "integrand returned a non-finite value at y = " << x;
            throw IntegrandFailure(msg.str(), x);
        }
        return v;
    }

    long count() const { return count_; }

private:
    const Integrand& f_;
    long count_ = 0;
};

// One Gauss-Kronrod 7/15 panel with the QUADPACK error heuristic.
Panel gk15(Evaluator& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const cplx fc = f(center);
    cplx kronrod = fc * kWgk[7];
    cplx gauss = fc * kWg[3];
    double res_abs = std::abs(fc) * kWgk[7];
    cplx fv1[7];
    cplx fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv1[j] = f(center - dx);
        fv2[j] = f(center + dx);
        const cplx sum = fv1[j] + fv2[j];
        kronrod += kWgk[j] * sum;
        res_abs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) gauss += kWg[j / 2] * sum;
    }
    const cplx mean = 0.5 * kronrod;
    double res_asc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) {
        res_asc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    }
    const double scale = std::abs(half);
    res_asc *= scale;
    res_abs *= scale;
    double err = std::abs((kronrod - gauss) * half);
    if (res_asc != 0.0 && err != 0.0) {
        err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    }
    if (res_abs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
        err = std::max(50.0 * kEps * res_abs, err);
    }
    return Panel{a, b, kronrod * half, err};
}

QuadratureResult adaptive(Evaluator& f, double a, double b, const QuadratureConfig& cfg,
                          int initial_panels) {
    std::priority_queue<Panel> heap;
    cplx total = 0.0;
    double total_err = 0.0;
    const int n0 = std::max(1, initial_panels);
    for (int i = 0; i < n0; ++i) {
        const double lo = a + (b - a) * i / n0;
        const double hi = (i + 1 == n0) ? b : a + (b - a) * (i + 1) / n0;
        Panel p = gk15(f, lo, hi);
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }
    // Work allowance grows with the number of oscillations on [a, b].
    const double periods = cfg.oscillation_frequency * (b - a) / (2.0 * std::numbers::pi);
    const long limit = cfg.max_subdivisions + n0 + static_cast<long>(4.0 * periods);
    long subdivisions = n0;
    auto tolerance = [&] { return std::max(cfg.rel_tol * std::abs(total), cfg.abs_tol); };
    while (total_err > tolerance() && subdivisions < limit) {
        Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // interval exhausted
        heap.pop();
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
        // Re-sum occasionally so drift in the running totals cannot mislead the test.
        if (subdivisions % 256 == 0) {
            auto copy = heap;
            total = 0.0;
            total_err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                total_err += copy.top().error;
                copy.pop();
            }
        }
    }
    QuadratureResult out;
    out.value = 0.0;
    out.error_estimate = 0.0;
    while (!heap.empty()) {
        out.value += heap.top().value;
        out.error_estimate += heap.top().error;
        heap.pop();
    }
    out.evaluations = f.count();
    out.truncation_point = b;
    out.converged = out.error_estimate <= tolerance() ||
                    out.error_estimate <= std::max(cfg.rel_tol * std::abs(out.value), cfg.abs_tol);
    return out;
}

int panels_for(const QuadratureConfig& cfg, double length) {
    // About one panel per half period, and a handful per length scale near 0.
    const double osc = cfg.oscillation_frequency * length / std::numbers::pi;
    const double scale = length / std::max(cfg.length_scale, 1e-300);
    const double n = std::max({1.0, std::ceil(osc), std::min(std::ceil(scale), 64.0)});
    return static_cast<int>(std::min(n, 1e6));
}

// Bound on the dropped tail past y, assuming |f| ~ g e^{-decay y} with g slowly
// varying: a few samples, each scaled back to y.
double tail_bound(Evaluator& ev, const QuadratureConfig& cfg, double y) {
    double m = 0.0;
    for (double off : {0.0, 0.37, 0.71, 1.13}) {
        const double t = y + off / cfg.decay_rate;
        m = std::max(m, std::abs(ev(t)) * std::exp(off));
    }
    return 2.0 * m / cfg.decay_rate;
}

QuadratureResult truncated(const Integrand& f, const QuadratureConfig& cfg, double upper) {
    Evaluator ev(f);
    QuadratureResult res = adaptive(ev, 0.0, upper, cfg, panels_for(cfg, upper));
    // Slowly varying prefactors (polynomial growth) can leave a tail above the
    // tolerance; extend the range until it is negligible.
    double tail = tail_bound(ev, cfg, upper);
    for (int ext = 0; ext < 8; ++ext) {
        const double tol = std::max(cfg.rel_tol * std::abs(res.value), cfg.abs_tol);
        if (tail <= 0.1 * tol) break;
        const double next = 2.0 * upper;
        QuadratureConfig ext_cfg = cfg;
        ext_cfg.abs_tol = std::max(cfg.abs_tol, 0.1 * tol);
        const QuadratureResult more = adaptive(ev, upper, next, ext_cfg, panels_for(cfg, next - upper));
        res.value += more.value;
        res.error_estimate += more.error_estimate;
        res.converged = res.converged && more.converged;
        upper = next;
        tail = tail_bound(ev, cfg, upper);
    }
    res.error_estimate += tail;
    res.converged = res.converged && tail <= std::max(cfg.rel_tol * std::abs(res.value), cfg.abs_tol);
    res.truncation_point = upper;
    res.evaluations = ev.count();
    return res;
}

QuadratureResult oscillatory_tail(const Integrand& f, const QuadratureConfig& cfg) {
    const double half_period = std::numbers::pi / cfg.oscillation_frequency;
    // Head: a few length scales and at least eight half periods.
    const double head_cells = std::max(8.0, std::ceil(4.0 * cfg.length_scale / half_period));
    const double head = head_cells * half_period;

    QuadratureConfig inner = cfg;
    inner.rel_tol = 0.1 * cfg.rel_tol;
    Evaluator ev(f);
    QuadratureResult head_result = adaptive(ev, 0.0, head, inner, panels_for(cfg, head));

    std::vector<cplx> sums{head_result.value};
    double cell_error = head_result.error_estimate;
    detail::Extrapolation best{head_result.value, std::numeric_limits<double>::infinity()};
    constexpr int kMaxCells = 400;
    int settled = 0;
    for (int k = 0; k < kMaxCells; ++k) {
        const double a = head + k * half_period;
        QuadratureResult cell = adaptive(ev, a, a + half_period, inner, 1);
        cell_error += cell.error_estimate;
        sums.push_back(sums.back() + cell.value);
        if (sums.size() < 6) continue;
        const detail::Extrapolation e = detail::wynn_epsilon(sums);
        if (e.error < best.error || !std::isfinite(best.error)) best = e;
        const double tol = std::max(cfg.rel_tol * std::abs(best.value), cfg.abs_tol);
        if (best.error + cell_error <= tol) {
            if (++settled >= 2) break;
        } else {
            settled = 0;
        }
    }
    QuadratureResult out;
    out.value = best.value;
    out.error_estimate = best.error + cell_error;
    out.evaluations = ev.count();
    out.truncation_point = std::numeric_limits<double>::infinity();
    out.converged = out.error_estimate <= std::max(cfg.rel_tol * std::abs(out.value), cfg.abs_tol);
    return out;
}

QuadratureResult mapped_algebraic(const Integrand& f, const QuadratureConfig& cfg) {
    Integrand g = [&f](double u) -> cplx {
        const double one_minus = 1.0 - u;
        const double y = u / one_minus;
        return f(y) / (one_minus * one_minus);
    };
    Evaluator ev(g);
    QuadratureResult out = adaptive(ev, 0.0, 1.0, cfg, 8);
    out.truncation_point = std::numeric_limits<double>::infinity();
    return out;
}

} // namespace

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0)) throw DomainError("quadrature: rel_tol must be > 0");
    if (!(abs_tol >= 0.0)) throw DomainError("quadrature: abs_tol must be >= 0");
    if (max_subdivisions < 1) throw DomainError("quadrature: max_subdivisions must be >= 1");
    if (!(decay_rate >= 0.0)) throw DomainError("quadrature: decay_rate must be >= 0");
    if (!(truncation_safety > 0.0)) throw DomainError("quadrature: truncation_safety must be > 0");
    if (!(oscillation_frequency >= 0.0)) {
        throw DomainError("quadrature: oscillation_frequency must be >= 0");
    }
    if (!(length_scale > 0.0)) throw DomainError("quadrature: length_scale must be > 0");
}

double truncation_point(const QuadratureConfig& cfg, double integrand_scale) {
    if (!(cfg.decay_rate > 0.0)) {
        throw DomainError("truncation_point: decay_rate must be > 0; use the algebraic-decay path");
    }
    const double extra = integrand_scale > 1.0 ? std::log(integrand_scale) : 0.0;
    return (cfg.truncation_safety + extra) / cfg.decay_rate;
}

QuadratureResult integrate_interval(const Integrand& f, double a, double b,
                                    const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(std::isfinite(a) && std::isfinite(b))) {
        throw DomainError("integrate_interval: bounds must be finite");
    }
    Evaluator ev(f);
    return adaptive(ev, a, b, cfg, panels_for(cfg, std::abs(b - a)));
}

QuadratureResult integrate_semi_infinite(const Integrand& f, const QuadratureConfig& cfg) {
    cfg.validate();
    if (cfg.decay_rate > 0.0) {
        const double upper = truncation_point(cfg);
        const double periods = cfg.oscillation_frequency * upper / (2.0 * std::numbers::pi);
        if (cfg.oscillation_frequency == 0.0 || periods <= cfg.max_truncated_periods) {
            return truncated(f, cfg, upper);
        }
    }
    if (cfg.oscillation_frequency > 0.0) return oscillatory_tail(f, cfg);
    return mapped_algebraic(f, cfg);
}

detail::Extrapolation detail::wynn_epsilon(const std::vector<cplx>& partial_sums) {
    // Best even-column estimate of the epsilon table built from the first n sums.
    auto estimate = [&](std::size_t n) -> cplx {
        std::vector<cplx> prev(n, cplx(0.0));  // column k-1
        std::vector<cplx> cur(partial_sums.begin(), partial_sums.begin() + n);  // column k
        cplx best = cur.back();
        for (std::size_t k = 1; k < n; ++k) {
            std::vector<cplx> next(n - k);
            bool broken = false;
            for (std::size_t i = 0; i + k < n; ++i) {
                const cplx diff = cur[i + 1] - cur[i];
                if (std::abs(diff) <= 1e-300 ||
                    std::abs(diff) <= 4.0 * kEps * std::max(std::abs(cur[i]), std::abs(cur[i + 1]))) {
                    broken = true;
                    break;
                }
                next[i] = prev[i + 1] + 1.0 / diff;
            }
            if (broken) break;
            prev = std::move(cur);
            cur = std::move(next);
            if (k % 2 == 0) best = cur.back();
        }
        return best;
    };
    const std::size_t n = partial_sums.size();
    if (n < 3) {
        return {partial_sums.back(), std::numeric_limits<double>::infinity()};
    }
    const cplx e0 = estimate(n);
    const cplx e1 = estimate(n - 1);
    const cplx e2 = estimate(n - 2);
    const double err = std::abs(e0 - e1) + std::abs(e0 - e2);
    return {e0, std::max(err, 10.0 * kEps * std::abs(e0))};
}

} // namespace impgreen
