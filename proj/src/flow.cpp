#include "adaptmap/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "adaptmap/ode.hpp"

namespace adaptmap {

namespace {

// ---------------------------------------------------------------------------
// adaptive Simpson quadrature (tail integrals over the mapped interval)

template <class F>
double simpson_rec(F&& f, double a, double fa, double b, double fb, double m, double fm,
                   double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    return simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 28);
}

// ---------------------------------------------------------------------------
// certified tail of the rise: integrals over [V, infinity) via u = V/s

struct tail_estimate {
    double dw = 0;      // frozen-W increment of W over [V, inf)
    double dlog = 0;    // frozen-W increment of the log-derivative integral
    double bound = 0;   // certified error bound for dw
    bool valid = false; // false forces enlarging V
};

tail_estimate certify_tail(const model_params& p, double V, double Wb, double tol) {
    const double qtol = std::max(1e-16, 1e-3 * tol);

    auto value_integrand = [&](double s) -> double {
        if (s <= 0) return 0.0;
        const double u = V / s;
        const double F = f_eval(p, u);
        if (!std::isfinite(F)) return 0.0;
        const double den = F - Wb + p.I;
        return p.eps * (p.b * u - Wb) / den * (V / (s * s));
    };
    auto abs_integrand = [&](double s) { return std::abs(value_integrand(s)); };

    const double dw = adaptive_simpson(value_integrand, 0.0, 1.0, qtol);
    const double dw_abs = adaptive_simpson(abs_integrand, 0.0, 1.0, qtol);
    const double kappa = 1.2 * dw_abs + 1e-12;
    const double kappa0 = 2.0 * kappa;

    // Sensitivity of the integrand to freezing W, with the denominator taken
    // at its worst admissible value W = Wb + kappa0.
    bool den_ok = true;
    auto sens_integrand = [&](double s) -> double {
        if (s <= 0) return 0.0;
        const double u = V / s;
        const double F = f_eval(p, u);
        if (!std::isfinite(F)) return 0.0;
        const double den = F - Wb - kappa0 + p.I;
        if (den <= 0) {
            den_ok = false;
            return 0.0;
        }
        return p.eps * std::abs(p.b * u - F - p.I) / (den * den) * (V / (s * s));
    };
    const double S = adaptive_simpson(sens_integrand, 0.0, 1.0, qtol);

    auto dlog_integrand = [&](double s) -> double {
        if (s <= 0) return 0.0;
        const double u = V / s;
        const double F = f_eval(p, u);
        if (!std::isfinite(F)) return 0.0;
        const double den = F - Wb + p.I;
        return p.eps * (p.b * u - F - p.I) / (den * den) * (V / (s * s));
    };
    const double dlog = adaptive_simpson(dlog_integrand, 0.0, 1.0, qtol);

    tail_estimate est;
    est.dw = dw;
    est.dlog = dlog;
    // self-consistency of the frozen-W bound requires small sensitivity mass
    est.valid = den_ok && S < 0.15;
    est.bound = kappa * S / std::max(1e-30, 1.0 - S) + 3.0 * qtol;
    return est;
}

// ---------------------------------------------------------------------------
// v-parameterized rise: state (W, L, T) with
//   dW/dv = eps (b v - W) / z,  dL/dv = eps (b v - F - I) / z^2,  dT/dv = 1/z,
// where z = F(v) - W + I is the vertical distance below the v-nullcline.

struct rise_result {
    double w_at_spike = 0;
    double log_deriv = 0; // accumulated L including its tail
    double tail_bound = 0;
    long n_steps = 0;
};

rise_result run_rise(const model_params& p, double v_start, double w_start, double t_start,
                     double tol, std::vector<trajectory_point>* trace) {
    auto rhs = [&](double v, const std::array<double, 3>& y, std::array<double, 3>& dy) {
        const double F = f_eval(p, v);
        if (!std::isfinite(F)) {
            dy = {0.0, 0.0, 0.0};
            return;
        }
        const double z = F - y[0] + p.I;
        if (z <= 0)
            throw numeric_error(
                "rise: trajectory met the v-nullcline from below (no-equilibrium "
                "assumption violated or wrong branch), v = " +
                std::to_string(v));
        dy[0] = p.eps * (p.b * v - y[0]) / z;
        dy[1] = p.eps * (p.b * v - F - p.I) / (z * z);
        dy[2] = 1.0 / z;
    };

    rk45<3> ode;
    ode.atol = ode.rtol = 0.1 * tol;
    ode.start(rhs, v_start, {w_start, 0.0, t_start});

    double V = std::max(v_start + 5.0, 40.0);
    tail_estimate tail;
    for (;;) {
        if (trace) {
            while (ode.time() < V) {
                auto rec = ode.step(rhs);
                trace->push_back({rec.y1[2], rec.t1, rec.y1[0]});
            }
        } else {
            ode.integrate_to(rhs, V);
        }
        const double Vc = std::max(V, ode.time());
        tail = certify_tail(p, Vc, ode.value()[0], tol);
        if (tail.valid && tail.bound <= 0.5 * tol) break;
        if (V > 1e7)
            throw numeric_error("rise: tail bound " + std::to_string(tail.bound) +
                                " not achievable within the V budget");
        V = 2.0 * Vc;
    }

    rise_result r;
    r.w_at_spike = ode.value()[0] + tail.dw;
    r.log_deriv = ode.value()[1] + tail.dlog;
    r.tail_bound = tail.bound;
    r.n_steps = ode.accepted_steps();
    return r;
}

// ---------------------------------------------------------------------------
// time-domain legs: state (v, w, xi_v, xi_w) carrying the first variation

using tstate = std::array<double, 4>;

struct time_rhs {
    const model_params& p;
    void operator()(double, const tstate& y, tstate& dy) const {
        const double F = f_eval(p, y[0]);
        dy[0] = F - y[1] + p.I;
        dy[1] = p.eps * (p.b * y[0] - y[1]);
        const double Fp = f_prime(p, y[0]);
        dy[2] = Fp * y[2] - y[3];
        dy[3] = p.eps * (p.b * y[2] - y[3]);
    }
};

// Projection of the variation onto a section of constant v, crossed with dv/dt != 0:
// d(w at section)/d(w_start) = xi_w - wdot xi_v / vdot.
double section_projection(const model_params& p, const tstate& y) {
    const double vdot = f_eval(p, y[0]) - y[1] + p.I;
    const double wdot = p.eps * (p.b * y[0] - y[1]);
    return y[3] - wdot * y[2] / vdot;
}

// Nudges starts sitting on (or within a whisker of) the v-nullcline into the
// rising region, where the v-parameterization is regular.
struct prelude_result {
    double v1 = 0, w1 = 0, t1 = 0;
    double proj = 1.0;
    long n_steps = 0;
};

prelude_result run_prelude(const model_params& p, double w0, double tol,
                           std::vector<trajectory_point>* trace) {
    time_rhs rhs{p};
    rk45<4> ode;
    ode.atol = ode.rtol = 0.1 * tol;
    ode.start(rhs, 0.0, {p.v_reset, w0, 0.0, 1.0});
    const double gate = 1.0;
    for (;;) {
        auto rec = ode.step(rhs);
        if (trace) trace->push_back({rec.t1, rec.y1[0], rec.y1[1]});
        const double z = f_eval(p, rec.y1[0]) - rec.y1[1] + p.I;
        if (z >= gate) break;
        if (ode.accepted_steps() > 200000)
            throw numeric_error("prelude: failed to leave the nullcline neighborhood");
    }
    prelude_result pr;
    pr.v1 = ode.value()[0];
    pr.w1 = ode.value()[1];
    pr.t1 = ode.time();
    pr.proj = section_projection(p, ode.value());
    pr.n_steps = ode.accepted_steps();
    return pr;
}

spike_flight fly_direct_impl(const model_params& p, double w0, double tol,
                             std::vector<trajectory_point>* trace) {
    p.validate();
    require_finite(w0, "w0");
    if (tol <= 0) throw domain_error("tol must be > 0");
    const landmarks lm = compute_landmarks(p);
    const double scale = std::max(1.0, std::abs(lm.w_star));
    if (w0 > lm.w_star + 1e-11 * scale)
        throw domain_error("fly_direct requires w0 <= w*");
    const double w_eff = std::min(w0, lm.w_star);

    spike_flight fl;
    fl.w_start = w0;
    fl.mode = flight_mode::direct_rise;

    double v_start = p.v_reset, w_start = w_eff, t_start = 0.0, proj = 1.0;
    long prelude_steps = 0;
    if (lm.w_star - w_eff < 1e-6 * scale) {
        const prelude_result pr = run_prelude(p, w_eff, tol, trace);
        v_start = pr.v1;
        w_start = pr.w1;
        t_start = pr.t1;
        proj = pr.proj;
        prelude_steps = pr.n_steps;
    }

    const rise_result r = run_rise(p, v_start, w_start, t_start, tol, trace);
    fl.w_at_spike = r.w_at_spike;
    fl.derivative = proj * std::exp(r.log_deriv);
    fl.tail_bound = r.tail_bound;
    fl.n_steps = r.n_steps + prelude_steps;
    return fl;
}

spike_flight fly_loop_impl(const model_params& p, double w0, double tol,
                           std::vector<trajectory_point>* trace) {
    p.validate();
    require_finite(w0, "w0");
    if (tol <= 0) throw domain_error("tol must be > 0");
    const landmarks lm = compute_landmarks(p);
    if (!(w0 > lm.w_star)) throw domain_error("fly_loop requires w0 > w*");

    time_rhs rhs{p};
    rk45<4> ode;
    ode.atol = ode.rtol = 0.1 * tol;
    ode.start(rhs, 0.0, {p.v_reset, w0, 0.0, 1.0});

    // A start barely above w* only dips below the reset line for a moment;
    // resolve that dip with several steps so the return is not skipped.
    if (w0 - lm.w_star < 0.5 * std::max(p.d, 1.0)) {
        const double t_dip = 2.0 * (w0 - lm.w_star) / (p.eps * (lm.w_star - lm.w_star2));
        ode.suggest_step(std::max(1e-18, t_dip / 8.0));
    }

    const double t_budget = (200.0 + 40.0 * std::max(0.0, w0 - lm.w_fold)) / p.eps + 100.0;

    tstate y_event{};
    bool found = false;
    while (!found) {
        const auto rec = ode.step(rhs);
        if (trace) trace->push_back({rec.t1, rec.y1[0], rec.y1[1]});
        const double vdot_end = f_eval(p, rec.y1[0]) - rec.y1[1] + p.I;
        if (rec.y1[0] - p.v_reset >= 0 && vdot_end > 0) {
            // Locate the upcrossing of {v = v_reset} inside this step: coarse
            // scan of the dense interpolant for a bracket, then guarded Newton
            // with re-integration from the step start (interpolant error does
            // not limit the final accuracy).
            const double h = rec.t1 - rec.t0;
            double th_lo = 0.0, th_hi = 1.0;
            const int n_scan = 128;
            for (int i = 1; i <= n_scan; ++i) {
                const double th = double(i) / n_scan;
                const double g = rk45<4>::dense(rec, th)[0] - p.v_reset;
                if (g < 0) th_lo = th;
                else if (th_lo > 0) {
                    th_hi = th;
                    break;
                }
            }
            double t_lo = rec.t0 + th_lo * h;
            double t_hi = rec.t0 + th_hi * h;
            double t_star = t_hi;
            tstate y_star = rec.y1;
            auto eval_at = [&](double t) {
                rk45<4> sub;
                sub.atol = sub.rtol = 0.1 * tol;
                sub.start(rhs, rec.t0, rec.y0);
                if (t > rec.t0) sub.integrate_to(rhs, t);
                return sub.value();
            };
            for (int it = 0; it < 60; ++it) {
                y_star = eval_at(t_star);
                const double g = y_star[0] - p.v_reset;
                const double vdot = f_eval(p, y_star[0]) - y_star[1] + p.I;
                if (vdot > 0) {
                    if (g >= 0) t_hi = std::min(t_hi, t_star);
                    else t_lo = std::max(t_lo, t_star);
                    const double dt = g / vdot;
                    if (std::abs(dt) <= 1e-13 * std::max(1.0, std::abs(t_star))) break;
                    const double tn = t_star - dt;
                    t_star = (tn > t_lo && tn < t_hi) ? tn : 0.5 * (t_lo + t_hi);
                } else {
                    // still on the descending side: the crossing is later
                    t_lo = std::max(t_lo, t_star);
                    t_star = 0.5 * (t_star + t_hi);
                }
                if (t_hi - t_lo <= 1e-15 * std::max(1.0, t_hi)) break;
            }
            y_event = y_star;
            found = true;
        }
        if (!found && ode.time() > t_budget)
            throw numeric_error(
                "fly_loop: return crossing of the reset line not found within the time "
                "budget (t = " +
                std::to_string(ode.time()) + ", w = " + std::to_string(ode.value()[1]) + ")");
    }

    const double crossing_w = y_event[1];
    if (!(crossing_w < lm.w_star))
        throw numeric_error("fly_loop: crossing landed at w >= w*");
    const double vdot = f_eval(p, y_event[0]) - y_event[1] + p.I;
    const double wdot = p.eps * (p.b * y_event[0] - y_event[1]);
    const double p_prime = y_event[3] - wdot * y_event[2] / vdot;
    const long loop_steps = ode.accepted_steps();

    // Remainder of the flight is a direct rise from the crossing point.
    spike_flight rest =
        trace ? fly_direct_impl(p, crossing_w, tol, trace) : fly_direct_impl(p, crossing_w, tol, nullptr);

    spike_flight fl;
    fl.w_start = w0;
    fl.w_at_spike = rest.w_at_spike;
    fl.derivative = rest.derivative * p_prime;
    fl.crossing_w = crossing_w;
    fl.n_steps = loop_steps + rest.n_steps;
    fl.tail_bound = rest.tail_bound;
    fl.mode = flight_mode::loop_then_rise;
    return fl;
}

} // namespace

spike_flight fly_direct(const model_params& p, double w0, double tol) {
    return fly_direct_impl(p, w0, tol, nullptr);
}

spike_flight fly_loop(const model_params& p, double w0, double tol) {
    return fly_loop_impl(p, w0, tol, nullptr);
}

spike_flight fly(const model_params& p, double w0, double tol) {
    const landmarks lm = compute_landmarks(p);
    // Starts an ulp-sliver above w* are treated as direct: the loop excursion
    // there is below floating-point resolution.
    const double gate = lm.w_star + 1e-11 * std::max(1.0, std::abs(lm.w_star));
    return w0 <= gate ? fly_direct_impl(p, w0, tol, nullptr)
                      : fly_loop_impl(p, w0, tol, nullptr);
}

spike_flight fly_traced(const model_params& p, double w0, double tol,
                        std::vector<trajectory_point>& trace) {
    const landmarks lm = compute_landmarks(p);
    const double gate = lm.w_star + 1e-11 * std::max(1.0, std::abs(lm.w_star));
    return w0 <= gate ? fly_direct_impl(p, w0, tol, &trace)
                      : fly_loop_impl(p, w0, tol, &trace);
}

} // namespace adaptmap
