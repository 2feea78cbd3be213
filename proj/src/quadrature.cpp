#include "nld/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "nld/analytic.hpp"
#include "nld/domain.hpp"
#include "nld/error.hpp"
#include "nld/gauss_kronrod.hpp"

namespace nld {

KernelSpec KernelSpec::radial(double inner, double outer, double transition) {
    KernelSpec k;
    k.kind = Kind::Radial;
    k.inner = inner;
    k.outer = outer;
    k.transition = transition;
    k.validate();
    return k;
}

double KernelSpec::operator()(double r) const {
    if (kind == Kind::Constant) return 1.0;
    return outer + (inner - outer) * std::exp(-r / transition);
}

double KernelSpec::kappa0() const {
    if (kind == Kind::Constant) return 1.0;
    const double hi = std::max(inner, outer), lo = std::min(inner, outer);
    return std::max(hi, 1.0 / lo);
}

void KernelSpec::validate() const {
    if (kind == Kind::Constant) return;
    if (!(inner > 0.0) || !(outer > 0.0) || !std::isfinite(inner) || !std::isfinite(outer))
        throw ParameterError("radial kernel: inner and outer values must be positive and finite");
    if (!(transition > 0.0) || !std::isfinite(transition))
        throw ParameterError("radial kernel: transition length must be positive");
    const double k0 = kappa0();
    for (int i = 0; i <= 1000; ++i) {
        const double r = transition * std::pow(10.0, -6.0 + 12.0 * i / 1000.0);
        const double v = (*this)(r);
        if (!(v >= 1.0 / k0 * (1 - 1e-12) && v <= k0 * (1 + 1e-12)))
            throw ParameterError("radial kernel violates its two-sided bound");
    }
}

std::string KernelSpec::describe() const {
    if (kind == Kind::Constant) return "constant";
    std::ostringstream os;
    os << "radial(inner=" << inner << ",outer=" << outer << ",transition=" << transition << ")";
    return os.str();
}

void BarrierSpec::validate(double alpha) const {
    if (!(alpha > 0.0 && alpha < 2.0)) throw ParameterError("alpha must lie in (0,2)");
    if (std::holds_alternative<ConstantBarrier>(geometry)) return;
    if (!(theta > 0.0 && theta < alpha)) throw ParameterError("barrier exponent theta must lie in (0, alpha)");
    if (const auto* b = std::get_if<BallExteriorBarrier>(&geometry); b && !(b->radius > 0.0))
        throw ParameterError("ball barrier radius must be positive");
    if (const auto* i = std::get_if<IntervalBarrier>(&geometry); i && !(i->a < i->b))
        throw ParameterError("interval barrier needs a < b");
}

std::string BarrierSpec::geometry_name() const {
    switch (geometry.index()) {
        case 0: return "half-space";
        case 1: return "ball-exterior";
        case 2: return "interval";
        default: return "constant";
    }
}

void QuadratureConfig::validate() const {
    if (!(split_radius > 0.0 && split_radius < 1.0)) throw ParameterError("split_radius must lie in (0,1)");
    if (!(rel_tol >= 0.0) || !(abs_tol > 0.0)) throw ParameterError("tolerances must be positive");
    if (!(outer_cutoff >= 4.0) || !std::isfinite(outer_cutoff)) throw ParameterError("outer_cutoff must be >= 4");
    if (max_panels < 16) throw ParameterError("max_panels must be at least 16");
}

namespace {

double pos_pow(double s, double theta) { return s > 0.0 ? std::pow(s, theta) : 0.0; }

// (rho0 + delta)_+^theta - rho0^theta without cancellation for small delta.
double pow_diff(double rho0, double delta, double theta) {
    const double s = rho0 + delta;
    if (s <= 0.0) return -std::pow(rho0, theta);
    if (std::abs(delta) < 0.5 * rho0) return std::pow(rho0, theta) * std::expm1(theta * std::log1p(delta / rho0));
    return std::pow(s, theta) - std::pow(rho0, theta);
}

// theta (theta-1) ... (theta-k+1)
double falling(double theta, int k) {
    double p = 1.0;
    for (int i = 0; i < k; ++i) p *= theta - i;
    return p;
}

double beta_fn(double a, double b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

struct Breakpoint {
    double r;
    bool singular;
};

// Far-field model: g(x + r w) - g(x) integrated over directions is
// A r^theta + B r^{theta-1} + C0 + O(r^{theta-2}).
struct TailModel {
    double A = 0.0, B = 0.0, C0 = 0.0;
    double offset = 0.0;  // length scale of the neglected terms
};

struct Accum {
    double value = 0.0, error = 0.0;
    long evals = 0;
    bool converged = true;
    void add(const IntegralEstimate& e) {
        value += e.value;
        error += e.error;
        evals += e.evaluations;
        converged = converged && e.converged;
    }
};

double kink_power(double theta) { return std::clamp(2.0 / theta, 1.0, 16.0); }

// int_lo^hi f, with power-law clustering toward endpoints flagged singular.
template <class F>
IntegralEstimate integrate_segment(F& f, double lo, double hi, bool sing_lo, bool sing_hi, double p, double abs_tol,
                                   double rel_tol, int max_panels) {
    if (!(hi > lo)) return {};
    if (p <= 1.0 || (!sing_lo && !sing_hi)) return integrate_gk(f, lo, hi, abs_tol, rel_tol, max_panels);
    if (sing_lo && sing_hi) {
        const double mid = 0.5 * (lo + hi);
        IntegralEstimate a = integrate_segment(f, lo, mid, true, false, p, 0.5 * abs_tol, rel_tol, max_panels);
        const IntegralEstimate b = integrate_segment(f, mid, hi, false, true, p, 0.5 * abs_tol, rel_tol, max_panels);
        a.value += b.value;
        a.error += b.error;
        a.evaluations += b.evaluations;
        a.converged = a.converged && b.converged;
        return a;
    }
    const double len = hi - lo;
    auto g = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double up = std::pow(u, p);
        const double z = sing_lo ? lo + len * up : hi - len * up;
        return f(z) * len * p * up / u;
    };
    return integrate_gk(g, 0.0, 1.0, abs_tol, rel_tol, max_panels);
}

// int_delta^R w(r) dr split at the breakpoints, log-substituted beyond the
// last breakpoint.
template <class W>
Accum integrate_radial(W& w, double delta, std::vector<Breakpoint> kinks, double near_scale, double R, double p,
                       double abs_tol, double rel_tol, int max_panels) {
    std::sort(kinks.begin(), kinks.end(), [](const auto& a, const auto& b) { return a.r < b.r; });
    double far = 2.0 * near_scale;
    for (const auto& k : kinks) far = std::max(far, 2.0 * k.r);
    far = std::min(far, 0.5 * R);
    std::vector<Breakpoint> pts{{delta, false}};
    for (const auto& k : kinks)
        if (k.r > delta * (1 + 1e-12) && k.r < far * (1 - 1e-12)) pts.push_back(k);
    pts.push_back({far, false});
    const int n_seg = static_cast<int>(pts.size());  // includes the log segment
    const double seg_abs = abs_tol / n_seg;
    Accum acc;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        acc.add(integrate_segment(w, pts[i].r, pts[i + 1].r, pts[i].singular, pts[i + 1].singular, p, seg_abs,
                                  rel_tol, max_panels));
    auto wl = [&](double s) {
        const double r = std::exp(s);
        return w(r) * r;
    };
    acc.add(integrate_gk(wl, std::log(far), std::log(R), seg_abs, rel_tol, max_panels));
    return acc;
}

double tail_value(const TailModel& t, double theta, double alpha, double R) {
    return t.A * std::pow(R, theta - alpha) / (alpha - theta) + t.B * std::pow(R, theta - 1 - alpha) / (1 + alpha - theta) +
           t.C0 * std::pow(R, -alpha) / alpha;
}

// Everything the evaluator needs about g around the point x.
struct Setup {
    int dim = 1;
    double theta = 0.0;
    double rho0 = 1.0;   // distance to the zero set (length scale)
    double delta = 0.0;  // inner radius
    double g0 = 0.0;
    bool constant = false;
    std::vector<Breakpoint> kinks;
    TailModel tail;
    // Inner expansion coefficients: Phi(r) ~ |S|(c2 r^2 + c4 r^4).
    double c2 = 0.0, c4 = 0.0;
    // d = 1: g(x+z) - g(x); d >= 2: g(x + r w) - g(x) with cos(angle) = c.
    std::function<double(double)> dg1;
    std::function<double(double, double)> dgd;
    // d >= 2: cos of the angle past which g vanishes at radius r (or -2 if none).
    std::function<double(double)> cut;
    double m6 = 0.0;  // d = 1: bound on |g^{(6)}| over the inner ball
};

Setup make_setup(const BarrierSpec& barrier, std::span<const double> x, const QuadratureConfig& cfg) {
    Setup s;
    s.dim = static_cast<int>(x.size());
    if (s.dim < 1) throw ParameterError("evaluation point must have at least one coordinate");
    const double th = barrier.theta;
    s.theta = th;
    const double sphere = unit_sphere_area(s.dim);
    std::visit(
        [&](const auto& geo) {
            using G = std::decay_t<decltype(geo)>;
            if constexpr (std::is_same_v<G, ConstantBarrier>) {
                s.constant = true;
                s.rho0 = 1.0;
                s.g0 = geo.value;
                s.dg1 = [](double) { return 0.0; };
                s.dgd = [](double, double) { return 0.0; };
                s.cut = [](double) { return -2.0; };
            } else if constexpr (std::is_same_v<G, HalfSpaceBarrier>) {
                const double r0 = x[0];
                if (!(r0 > 0.0)) throw ParameterError("half-space barrier: x_1 must be positive");
                s.rho0 = r0;
                s.g0 = std::pow(r0, th);
                s.kinks = {{r0, true}};
                s.dg1 = [r0, th](double z) { return pow_diff(r0, z, th); };
                s.dgd = [r0, th](double r, double c) { return pow_diff(r0, r * c, th); };
                s.cut = [r0](double r) { return r > r0 ? -r0 / r : -2.0; };
                s.tail.offset = r0;
                if (s.dim == 1) {
                    s.tail.A = 1.0;
                    s.tail.B = th * r0;
                } else {
                    const double ring = unit_sphere_area(s.dim - 1);
                    s.tail.A = ring * 0.5 * beta_fn((th + 1) / 2, (s.dim - 1) / 2.0);
                    s.tail.B = th * r0 * ring * 0.5 * beta_fn(th / 2, (s.dim - 1) / 2.0);
                }
                s.c2 = falling(th, 2) * std::pow(r0, th - 2) / (2.0 * s.dim);
                s.c4 = falling(th, 4) * std::pow(r0, th - 4) / (8.0 * s.dim * (s.dim + 2));
            } else if constexpr (std::is_same_v<G, BallExteriorBarrier>) {
                double X2 = 0.0;
                for (double v : x) X2 += v * v;
                const double X = std::sqrt(X2), rad = geo.radius;
                if (!(X > rad)) throw ParameterError("ball-exterior barrier: |x| must exceed the radius");
                const double r0 = X - rad;
                s.rho0 = r0;
                s.g0 = std::pow(r0, th);
                s.kinks = {{r0, true}, {X + rad, true}};
                s.dg1 = [X, rad, r0, th](double z) {
                    const double y = X + z;
                    if (y >= 0.0) return pow_diff(r0, z, th);
                    return pos_pow(-y - rad, th) - std::pow(r0, th);
                };
                s.dgd = [X, r0, th](double r, double c) {
                    const double q = std::max(0.0, X * X + 2 * X * r * c + r * r);
                    const double d = (2 * X * r * c + r * r) / (std::sqrt(q) + X);
                    return pow_diff(r0, d, th);
                };
                s.cut = [X, rad](double r) {
                    const double c = (rad * rad - X * X - r * r) / (2 * X * r);
                    return c > -1.0 && c < 1.0 ? c : -2.0;
                };
                s.tail.A = sphere;
                s.tail.B = -th * rad * sphere;
                s.tail.offset = X + rad;
                // Radial h(t) = (t - rad)^theta; Pizzetti terms Delta g and Delta^2 g.
                const int d = s.dim;
                auto h = [&](int k) { return falling(th, k) * std::pow(r0, th - k); };
                const double t = X;
                const double L = h(2) + (d - 1) * h(1) / t;
                const double L1 = h(3) + (d - 1) * (h(2) / t - h(1) / (t * t));
                const double L2 = h(4) + (d - 1) * (h(3) / t - 2 * h(2) / (t * t) + 2 * h(1) / (t * t * t));
                s.c2 = L / (2.0 * d);
                s.c4 = (L2 + (d - 1) * L1 / t) / (8.0 * d * (d + 2));
            } else {
                if (s.dim != 1) throw ParameterError("interval barrier is one-dimensional");
                const double a = geo.a, b = geo.b, mid = 0.5 * (a + b);
                if (!(x[0] > a && x[0] < b)) throw ParameterError("interval barrier: x must lie in (a,b)");
                if (std::abs(x[0] - mid) <= 1e-12 * (b - a))
                    throw ParameterError("interval barrier is not smooth at the midpoint");
                const double xr = x[0] < mid ? x[0] : a + b - x[0];  // reflect toward a
                const double r0 = xr - a;
                s.rho0 = r0;
                s.g0 = std::pow(r0, th);
                s.kinks = {{r0, true}, {b - xr, true}, {mid - xr, false}};
                s.dg1 = [xr, mid, b, r0, th](double z) {
                    const double y = xr + z;
                    if (y <= mid) return pow_diff(r0, z, th);
                    return pos_pow(b - y, th) - std::pow(r0, th);
                };
                s.tail.offset = 0.0;
            }
        },
        barrier.geometry);
    if (!s.constant) s.tail.C0 = -s.g0 * sphere;
    double reach = s.rho0;
    if (s.dim == 1 && std::holds_alternative<IntervalBarrier>(barrier.geometry)) {
        const auto& geo = std::get<IntervalBarrier>(barrier.geometry);
        const double xr = x[0] < 0.5 * (geo.a + geo.b) ? x[0] : geo.a + geo.b - x[0];
        reach = std::min(s.rho0, 0.5 * (geo.a + geo.b) - xr);
    }
    s.delta = cfg.split_radius * reach;
    if (s.dim == 1) {
        if (s.constant) {
            s.c2 = s.c4 = 0.0;
        } else {
            // Symmetric second difference: g2 z^2 + g4 z^4 / 12 + O(z^6).
            s.c2 = falling(th, 2) * std::pow(s.rho0, th - 2) / 2.0;
            s.c4 = falling(th, 4) * std::pow(s.rho0, th - 4) / 24.0;
            s.m6 = std::abs(falling(th, 6)) * std::pow(s.rho0 - s.delta, th - 6);
        }
    }
    return s;
}

// K(m) = int_0^delta kappa(z) z^{m-1-alpha} dz.
double kernel_moment(const KernelSpec& kernel, double alpha, double delta, int m, Accum& acc) {
    const double e = m - alpha;
    const double base = std::pow(delta, e) / e;
    if (kernel.kind == KernelSpec::Kind::Constant) return base;
    auto f = [&](double v) { return kernel(delta * std::pow(v, 1.0 / e)); };
    const IntegralEstimate r = integrate_gk(f, 0.0, 1.0, 1e-15, 1e-14, 200);
    acc.evals += r.evaluations;
    acc.error += base * r.error;
    return base * r.value;
}

Accum evaluate(const Setup& s, const KernelSpec& kernel, double alpha, const QuadratureConfig& cfg, double abs_target,
               double rel_tol) {
    Accum acc;
    const double th = s.theta;
    const double delta = s.delta;
    double near_scale = s.rho0;
    for (const auto& k : s.kinks) near_scale = std::max(near_scale, k.r);
    const double kmax = kernel.kappa0();
    const double sphere = unit_sphere_area(s.dim);
    auto tail_error = [&](double R) {
        double e = 0.0;
        if (s.tail.A != 0.0) {
            const double off = s.tail.offset;
            e += 4.0 * kmax * sphere *
                 (std::abs(falling(th, 2)) / 2 * off * off * std::pow(R, th - 2 - alpha) / (2 + alpha - th));
            if (s.dim >= 2) e += 4.0 * kmax * sphere * std::pow(off, 1 + th) * std::pow(R, -1 - alpha) / (1 + alpha);
        }
        if (kernel.kind == KernelSpec::Kind::Radial) {
            const double dev = std::abs(kernel.inner - kernel.outer) * std::exp(-R / kernel.transition);
            e += dev * (std::abs(s.tail.A) * std::pow(R, th - alpha) / (alpha - th) +
                        std::abs(s.tail.C0) * std::pow(R, -alpha) / alpha);
        }
        return e;
    };
    // The cutoff grows past outer_cutoff when the neglected tail terms demand it.
    double R = cfg.outer_cutoff * near_scale;
    for (int i = 0; i < 40 && tail_error(R) > abs_target / 8; ++i) R *= 10.0;
    const double p1 = s.dim == 1 ? kink_power(th) : 2.0;
    const double part_abs = abs_target / 4.0;
    const bool direct_inner = alpha < 1.0 && !cfg.symmetric_inner;

    // Angular integral Phi(r) = int_{S^{d-1}} (g(x + r w) - g(x)) dw for d >= 2.
    const double ring = s.dim >= 2 ? unit_sphere_area(s.dim - 1) : 0.0;
    const double log_span = 1.0 + std::log(R / delta);
    auto phi = [&](double r, double tol) {
        const int d = s.dim;
        auto w = [&](double ang) {
            const double sn = std::sin(ang);
            const double wt = d == 2 ? 1.0 : std::pow(sn, d - 2);
            return s.dgd(r, std::cos(ang)) * wt;
        };
        const double c = s.cut(r);
        double total = 0.0;
        if (c > -1.0) {
            const double ang = std::acos(c);
            const IntegralEstimate a =
                integrate_segment(w, 0.0, ang, false, true, kink_power(th), 0.5 * tol / ring, 1e-13, cfg.max_panels);
            const IntegralEstimate b = integrate_gk(w, ang, std::numbers::pi, 0.5 * tol / ring, 1e-13, cfg.max_panels);
            acc.evals += a.evaluations + b.evaluations;
            acc.converged = acc.converged && a.converged && b.converged;
            total = a.value + b.value;
        } else {
            const IntegralEstimate a = integrate_gk(w, 0.0, std::numbers::pi, tol / ring, 1e-13, cfg.max_panels);
            acc.evals += a.evaluations;
            acc.converged = acc.converged && a.converged;
            total = a.value;
        }
        return ring * total;
    };
    // Angular tolerance chosen so its accumulated effect stays below part_abs.
    auto phi_tol = [&](double r) { return 1e-2 * part_abs * std::pow(r, alpha) / (kmax * log_span); };

    // Inner ball.
    if (s.constant) {
        // g(x+z) - g(x) vanishes identically.
    } else if (s.dim == 1 && direct_inner) {
        const double q = 1.0 / (1.0 - alpha);
        for (double sgn : {-1.0, 1.0}) {
            auto f = [&](double v) {
                if (v <= 0.0) return 0.0;
                const double vq = std::pow(v, q);
                const double z = delta * vq;
                if (z <= 0.0) return 0.0;
                return s.dg1(sgn * z) * kernel(z) * std::pow(z, -1.0 - alpha) * delta * q * vq / v;
            };
            acc.add(integrate_gk(f, 0.0, 1.0, part_abs / 2, rel_tol, cfg.max_panels));
        }
    } else if (s.dim >= 2 && direct_inner) {
        const double e = 2.0 - alpha;
        auto f = [&](double v) {
            if (v <= 0.0) return 0.0;
            const double r = delta * std::pow(v, 1.0 / e);
            if (r <= 0.0) return 0.0;
            return kernel(r) * phi(r, phi_tol(r) * 1e-2) / (r * r);
        };
        IntegralEstimate in = integrate_gk(f, 0.0, 1.0, part_abs * e / std::pow(delta, e), rel_tol, cfg.max_panels);
        const double scale = std::pow(delta, e) / e;
        in.value *= scale;
        in.error *= scale;
        acc.add(in);
    } else {
        const double k2 = kernel_moment(kernel, alpha, delta, 2, acc);
        const double k4 = kernel_moment(kernel, alpha, delta, 4, acc);
        // d = 1 combines z and -z, which is the same as the |S^0| = 2 factor.
        acc.value += sphere * (s.c2 * k2 + s.c4 * k4);
        double c6;
        if (s.dim == 1) {
            c6 = s.m6 / 720.0;
        } else {
            const double probe = phi(delta, 1e-14 * std::abs(sphere * s.c2) * delta * delta);
            const double pred = sphere * (s.c2 * delta * delta + s.c4 * std::pow(delta, 4));
            c6 = 2.0 * std::abs(probe - pred) / (sphere * std::pow(delta, 6));
        }
        acc.error += sphere * c6 * kmax * std::pow(delta, 6 - alpha) / (6 - alpha);
    }

    // Middle region.
    {
        if (s.dim == 1) {
            auto w = [&](double z) { return (s.dg1(z) + s.dg1(-z)) * kernel(z) * std::pow(z, -1.0 - alpha); };
            Accum mid = integrate_radial(w, delta, s.kinks, s.rho0, R, p1, part_abs, rel_tol, cfg.max_panels);
            acc.value += mid.value;
            acc.error += mid.error;
            acc.evals += mid.evals;
            acc.converged = acc.converged && mid.converged;
        } else {
            auto w = [&](double r) { return phi(r, phi_tol(r)) * kernel(r) * std::pow(r, -1.0 - alpha); };
            Accum mid = integrate_radial(w, delta, s.kinks, s.rho0, R, 2.0, part_abs, rel_tol, cfg.max_panels);
            acc.value += mid.value;
            acc.error += mid.error;
            acc.evals += mid.evals;
            acc.converged = acc.converged && mid.converged;
            acc.error += part_abs * 1e-2;  // accumulated angular tolerance
        }
    }

    // Tail beyond R.
    const double kinf = kernel.at_infinity();
    acc.value += kinf * tail_value(s.tail, th, alpha, R);
    acc.error += tail_error(R);
    return acc;
}

}  // namespace

QuadratureResult frac_laplacian_barrier(const BarrierSpec& barrier, const KernelSpec& kernel, double alpha,
                                        std::span<const double> x, const QuadratureConfig& cfg) {
    barrier.validate(alpha);
    kernel.validate();
    cfg.validate();
    const Setup s = make_setup(barrier, x, cfg);

    Accum acc = evaluate(s, kernel, alpha, cfg, cfg.abs_tol, cfg.rel_tol);
    auto target = [&](const Accum& a) { return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(a.value)); };
    if (!(acc.converged && acc.error <= target(acc))) {
        // Relative targets of the pieces can be too loose when they cancel.
        const double t = target(acc);
        Accum again = evaluate(s, kernel, alpha, cfg, t / 4, 0.0);
        again.evals += acc.evals;
        acc = again;
    }
    if (!std::isfinite(acc.value))
        throw QuadratureFailure("barrier quadrature produced a non-finite value", acc.value, acc.error);
    if (!(acc.converged && acc.error <= target(acc)))
        throw QuadratureFailure("barrier quadrature did not reach tolerance within the panel budget", acc.value,
                                acc.error);
    return {acc.value, acc.error, acc.evals};
}

QuadratureResult frac_laplacian_barrier(const BarrierSpec& barrier, const KernelSpec& kernel, double alpha, double x,
                                        const QuadratureConfig& cfg) {
    const double p[1] = {x};
    return frac_laplacian_barrier(barrier, kernel, alpha, std::span<const double>(p, 1), cfg);
}

std::pair<double, double> barrier_scaling_check(const BarrierSpec& barrier, double alpha, double R,
                                                const KernelSpec& kernel, int dim, const QuadratureConfig& cfg) {
    if (!(R > 0.0)) throw ParameterError("scaling factor R must be positive");
    if (dim < 1) throw ParameterError("dimension must be positive");
    barrier.validate(alpha);
    BarrierSpec scaled = barrier;
    Point unit(dim, 0.0), far(dim, 0.0);
    std::visit(
        [&](const auto& geo) {
            using G = std::decay_t<decltype(geo)>;
            if constexpr (std::is_same_v<G, HalfSpaceBarrier> || std::is_same_v<G, ConstantBarrier>) {
                unit[0] = 1.0;
                far[0] = R;
            } else if constexpr (std::is_same_v<G, BallExteriorBarrier>) {
                scaled.geometry = BallExteriorBarrier{geo.radius * R};
                unit[0] = geo.radius + 1.0;
                far[0] = R * (geo.radius + 1.0);
            } else {
                scaled.geometry = IntervalBarrier{geo.a * R, geo.b * R};
                unit[0] = geo.a + 1.0;
                far[0] = R * (geo.a + 1.0);
            }
        },
        barrier.geometry);
    const double at_unit = frac_laplacian_barrier(barrier, kernel, alpha, unit, cfg).value;
    if (R == 1.0) return {at_unit, at_unit};
    const double at_far = frac_laplacian_barrier(scaled, kernel, alpha, far, cfg).value;
    const double theta = std::holds_alternative<ConstantBarrier>(barrier.geometry) ? 0.0 : barrier.theta;
    return {at_far, std::pow(R, theta - alpha) * at_unit};
}

double find_sign_threshold(double alpha, const KernelSpec& kernel, const QuadratureConfig& cfg, double theta_tol) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw ParameterError("alpha must lie in (0,2)");
    kernel.validate();
    auto value = [&](double theta) {
        BarrierSpec b{HalfSpaceBarrier{}, theta};
        return frac_laplacian_barrier(b, kernel, alpha, 1.0, cfg).value;
    };
    double lo = 0.02 * alpha, hi = 0.98 * alpha;
    const double vlo = value(lo), vhi = value(hi);
    if (!(vlo < 0.0 && vhi > 0.0) && !(vlo > 0.0 && vhi < 0.0))
        throw QuadratureFailure("no sign change of the barrier value bracketed in (0, alpha)", vlo, vhi);
    const bool rising = vlo < 0.0;
    while (hi - lo > theta_tol) {
        const double mid = 0.5 * (lo + hi);
        const double v = value(mid);
        if ((v < 0.0) == rising)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace nld
