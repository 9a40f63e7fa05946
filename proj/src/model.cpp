#include "adaptmap/model.hpp"

#include <cmath>
#include <sstream>

namespace adaptmap {

void model_params::validate() const {
    require_finite(a, "a");
    require_finite(b, "b");
    require_finite(I, "I");
    require_finite(d, "d");
    require_finite(eps, "eps");
    require_finite(v_reset, "v_reset");
    if (eps <= 0) throw domain_error("eps must be > 0");
    if (b <= 0) throw domain_error("b must be > 0");
    if (d < 0) throw domain_error("d must be >= 0");
}

double f_eval(const model_params& p, double v) {
    switch (p.family) {
        case nonlinearity::quartic: {
            const double v2 = v * v;
            return v2 * v2 + 2.0 * p.a * v;
        }
        case nonlinearity::exponential:
            return std::exp(v) - v;
    }
    throw domain_error("unknown nonlinearity family");
}

double f_prime(const model_params& p, double v) {
    switch (p.family) {
        case nonlinearity::quartic:
            return 4.0 * v * v * v + 2.0 * p.a;
        case nonlinearity::exponential:
            return std::exp(v) - 1.0;
    }
    throw domain_error("unknown nonlinearity family");
}

double f_second(const model_params& p, double v) {
    switch (p.family) {
        case nonlinearity::quartic:
            return 12.0 * v * v;
        case nonlinearity::exponential:
            return std::exp(v);
    }
    throw domain_error("unknown nonlinearity family");
}

double f_third(const model_params& p, double v) {
    switch (p.family) {
        case nonlinearity::quartic:
            return 24.0 * v;
        case nonlinearity::exponential:
            return std::exp(v);
    }
    throw domain_error("unknown nonlinearity family");
}

field_derivs eval_field(const model_params& p, double v, double w) {
    p.validate();
    require_finite(v, "v");
    require_finite(w, "w");
    return {f_eval(p, v) - w + p.I, p.eps * (p.b * v - w)};
}

namespace {

// Newton polish of a root of g with derivative gp, from an analytic seed.
double newton_polish(double x0, auto&& g, auto&& gp, double tol) {
    double x = x0;
    for (int it = 0; it < 50; ++it) {
        const double gx = g(x);
        const double gpx = gp(x);
        if (gpx == 0) break;
        const double step = gx / gpx;
        x -= step;
        if (std::abs(step) <= tol * (1.0 + std::abs(x))) break;
    }
    return x;
}

} // namespace

fold_point find_fold(const model_params& p) {
    p.validate();
    double seed;
    switch (p.family) {
        case nonlinearity::quartic:
            if (p.a == 0) { seed = 0.0; break; }
            // 4 v^3 + 2a = 0
            seed = -std::cbrt(p.a / 2.0);
            break;
        case nonlinearity::exponential:
            seed = 0.0; // e^v - 1 = 0
            break;
        default:
            throw domain_error("unknown nonlinearity family");
    }
    const double vf = newton_polish(
        seed, [&](double v) { return f_prime(p, v); },
        [&](double v) { return f_second(p, v); }, 1e-15);
    if (!std::isfinite(vf) || std::abs(f_prime(p, vf)) > 1e-10 * (1.0 + std::abs(f_second(p, vf))))
        throw numeric_error("find_fold: no zero of F' located (malformed family)");
    const double wf = f_eval(p, vf) + p.I;
    return {vf, wf, wf + p.d};
}

landmarks compute_landmarks(const model_params& p) {
    p.validate();
    const fold_point fp = find_fold(p);
    landmarks lm;
    lm.v_fold = fp.v_fold;
    lm.w_fold = fp.w_fold;
    lm.p0 = fp.p0;
    lm.w_star = f_eval(p, p.v_reset) + p.I;
    lm.w_star2 = p.b * p.v_reset;
    return lm;
}

assumption_report check_assumptions(const model_params& p) {
    p.validate();
    assumption_report rep;
    std::ostringstream os;

    const fold_point fp = find_fold(p);
    const double f2_at_fold = f_second(p, fp.v_fold);

    // Convexity. Both families are strictly convex as functions; the fold is
    // non-degenerate unless the quartic's linear term vanishes (a = 0).
    rep.convexity.pass = f2_at_fold > 0;
    os.str("");
    os << "F''(v_fold) = " << f2_at_fold;
    rep.convexity.detail = os.str();

    // Plateau clause: lim_{v -> -inf} F' < -eps (b + sqrt 2). The quartic's
    // derivative diverges to -inf, so it passes for every eps; the exponential
    // limit is -1, which constrains eps.
    const double barrier = p.eps * (p.b + std::sqrt(2.0));
    if (p.family == nonlinearity::quartic) {
        rep.plateau_clause.pass = true;
        rep.plateau_clause.detail = "lim F'(-inf) = -inf";
    } else {
        rep.plateau_clause.pass = barrier < 1.0;
        os.str("");
        os << "requires eps (b + sqrt 2) < 1; have " << barrier;
        rep.plateau_clause.detail = os.str();
    }

    // Blow-up clause, analytic per family: quartic has F(v)/v^3 = v + 2a/v^2,
    // so eta = 1 works with alpha = 1 past v_hat = max(2, 2|a|); the
    // exponential grows superpolynomially.
    rep.blowup_clause.pass = true;
    rep.blowup_clause.detail = p.family == nonlinearity::quartic
                                   ? "eta = 1, alpha = 1 beyond v_hat = max(2, 2|a|)"
                                   : "superpolynomial growth";

    // No equilibrium: min over v of G(v) = F(v) + I - b v must be positive.
    // G is strictly convex; its critical point is the zero of F'(v) - b.
    double vmin;
    switch (p.family) {
        case nonlinearity::quartic:
            vmin = std::cbrt((p.b - 2.0 * p.a) / 4.0);
            break;
        case nonlinearity::exponential:
            vmin = std::log(1.0 + p.b);
            break;
        default:
            throw domain_error("unknown nonlinearity family");
    }
    vmin = newton_polish(
        vmin, [&](double v) { return f_prime(p, v) - p.b; },
        [&](double v) { return f_second(p, v); }, 1e-15);
    const double gap = f_eval(p, vmin) + p.I - p.b * vmin;
    rep.equilibrium_gap = gap;
    rep.equilibrium_argmin = vmin;
    rep.no_equilibrium.pass = gap > 0;
    os.str("");
    os << "min of F + I - b v is " << gap << " at v = " << vmin;
    rep.no_equilibrium.detail = os.str();

    rep.reset_right_of_fold.pass = p.v_reset > fp.v_fold;
    os.str("");
    os << "v_reset = " << p.v_reset << ", v_fold = " << fp.v_fold;
    rep.reset_right_of_fold.detail = os.str();

    return rep;
}

} // namespace adaptmap
