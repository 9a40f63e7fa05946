#include "adaptmap/map.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace adaptmap {

namespace {

// Bisection on [lo, hi] with known endpoint values; f need not be exact near
// the root, the bracket just has to be valid.
template <class F>
double bisect(F&& f, double lo, double hi, double flo, double fhi, double xtol) {
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw numeric_error("bisect: endpoints do not bracket a sign change");
    for (int it = 0; it < 200 && hi - lo > xtol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

map_sample phi(const model_params& p, double w, double tol) {
    map_sample s;
    s.w = w;
    s.flight = fly(p, w, tol);
    s.phi = s.flight.w_at_spike + p.d;
    s.dphi = s.flight.derivative;
    return s;
}

std::vector<double> phi_iter(const model_params& p, double w, int n, double tol) {
    if (n < 1) throw domain_error("phi_iter requires n >= 1");
    std::vector<double> out;
    out.reserve(n);
    double cur = w;
    for (int i = 0; i < n; ++i) {
        cur = phi(p, cur, tol).phi;
        out.push_back(cur);
    }
    return out;
}

double fixed_point(const model_params& p, double tol, double root_tol) {
    const landmarks lm = compute_landmarks(p);
    auto g = [&](double w) { return phi(p, w, tol).phi - w; };

    double lo = lm.w_star2 - 1.0;
    double hi = lm.w_star + 10.0 * p.d + 1.0;
    double glo = g(lo), ghi = g(hi);
    double width = hi - lo;
    int expansions = 0;
    while ((glo > 0) == (ghi > 0)) {
        if (++expansions > 60)
            throw numeric_error("fixed_point: no sign change of Phi(w) - w after 60 bracket "
                                "expansions (assumption violation?)");
        lo -= width;
        hi += width;
        width *= 2;
        glo = g(lo);
        ghi = g(hi);
    }
    return bisect(g, lo, hi, glo, ghi, root_tol);
}

std::optional<slope_band> find_slope_band(const model_params& p, double tol, int grid_n) {
    const landmarks lm = compute_landmarks(p);
    const double top = phi(p, lm.w_star, tol).phi;
    if (!(top > lm.w_star)) return std::nullopt;

    const std::vector<double> grid = linspace(lm.w_star, top, grid_n);
    std::vector<double> slope(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) slope[i] = phi(p, grid[i], tol).dphi;

    auto g = [&](double w) { return phi(p, w, tol).dphi + 1.0; };

    // first and last sign changes of Phi' + 1
    std::optional<double> alpha, xi;
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
        const double a = slope[i] + 1.0, b = slope[i + 1] + 1.0;
        if ((a > 0) != (b > 0)) {
            const double root = bisect(g, grid[i], grid[i + 1], a, b, default_root_tol);
            if (!alpha) alpha = root;
            xi = root;
        }
    }
    if (!alpha) return std::nullopt;
    return slope_band{*alpha, *xi};
}

double plateau(const model_params& p, double tol) {
    const landmarks lm = compute_landmarks(p);
    const double step = p.d > 0 ? p.d : 1.0;
    double prev = phi(p, lm.w_star + 8.0 * step, tol).phi; // k = 3
    for (int k = 4; k <= 40; ++k) {
        const double cur = phi(p, lm.w_star + std::ldexp(step, k), tol).phi;
        if (cur > prev + 100.0 * tol)
            throw numeric_error("plateau: evaluations increased along the tail (the map "
                                "must be decreasing and bounded below right of w*)");
        if (std::abs(cur - prev) < tol) return cur;
        prev = cur;
    }
    return prev;
}

schwarzian_result schwarzian(const model_params& p, double w, double h,
                             double exclusion_radius, double tol) {
    if (h <= 0) throw domain_error("schwarzian requires h > 0");
    const landmarks lm = compute_landmarks(p);
    const double radius = exclusion_radius > 0 ? exclusion_radius : 0.05 * std::max(p.d, 1e-3);
    if (std::abs(w - lm.w_star) <= radius)
        throw domain_error("schwarzian: w within the exclusion radius of w* (Phi' vanishes)");

    const double d0 = phi(p, w, tol).dphi;
    const double dp1 = phi(p, w + h, tol).dphi, dm1 = phi(p, w - h, tol).dphi;
    const double dp2 = phi(p, w + 0.5 * h, tol).dphi, dm2 = phi(p, w - 0.5 * h, tol).dphi;

    const double D1h = (dp1 - dm1) / (2.0 * h);
    const double D1h2 = (dp2 - dm2) / h;
    const double phi2 = (4.0 * D1h2 - D1h) / 3.0;
    const double err2 = std::abs(phi2 - D1h2);

    const double D2h = (dp1 - 2.0 * d0 + dm1) / (h * h);
    const double D2h2 = (dp2 - 2.0 * d0 + dm2) / (0.25 * h * h);
    const double phi3 = (4.0 * D2h2 - D2h) / 3.0;
    const double err3 = std::abs(phi3 - D2h2);

    schwarzian_result r;
    r.value = phi3 / d0 - 1.5 * (phi2 / d0) * (phi2 / d0);
    r.error = std::abs(err3 / d0) + std::abs(3.0 * phi2 / (d0 * d0) * err2);
    r.reliable = r.error <= 0.1 * std::abs(r.value);
    return r;
}

double second_derivative_at_wstar(const model_params& p, double delta, double tol) {
    if (delta <= 0) throw domain_error("second_derivative_at_wstar requires delta > 0");
    if (!(f_prime(p, p.v_reset) > p.eps))
        throw domain_error("second_derivative_at_wstar requires F'(v_reset) > eps");
    const landmarks lm = compute_landmarks(p);
    // Phi'(w*) = 0, so the one-sided quotient of Phi' from the left is
    // A(delta) = -Phi'(w* - delta)/delta = Phi''(w*) + O(delta).
    auto A = [&](double dl) { return -phi(p, lm.w_star - dl, tol).dphi / dl; };
    return 2.0 * A(0.5 * delta) - A(delta);
}

double invert_on_branch(const model_params& p, double y, branch br, double tol,
                        double root_tol) {
    require_finite(y, "y");
    const landmarks lm = compute_landmarks(p);
    const double top = phi(p, lm.w_star, tol).phi;
    const double slack = 10.0 * tol;
    if (y > top + slack)
        throw domain_error("invert_on_branch: y exceeds the maximum Phi(w*)");

    if (br == branch::left) {
        // increasing on (-inf, w*]
        double hi = lm.w_star, fhi = top - y;
        double lo = std::min(y - p.d - 1.0, lm.w_star - 1.0);
        double flo = phi(p, lo, tol).phi - y;
        double width = std::max(hi - lo, 1.0);
        int expansions = 0;
        while (flo > 0) {
            if (++expansions > 60)
                throw domain_error("invert_on_branch: y below the left branch range");
            lo -= width;
            width *= 2;
            flo = phi(p, lo, tol).phi - y;
        }
        auto g = [&](double w) { return phi(p, w, tol).phi - y; };
        return bisect(g, lo, hi, flo, fhi, root_tol);
    }

    // right branch: decreasing on [w*, inf)
    double lo = lm.w_star, flo = top - y;
    if (flo < 0) throw domain_error("invert_on_branch: y exceeds the maximum Phi(w*)");
    double width = std::max(p.d, 1.0);
    double hi = lm.w_star + width;
    double fhi = phi(p, hi, tol).phi - y;
    int expansions = 0;
    while (fhi > 0) {
        const double prev = fhi;
        if (++expansions > 60)
            throw domain_error("invert_on_branch: y not attained on the right branch "
                               "(at or below the plateau)");
        hi += width;
        width *= 2;
        fhi = phi(p, hi, tol).phi - y;
        // the map flattens onto its plateau: once successive doublings stop
        // moving the value, y below the plateau is unreachable
        if (fhi > 0 && prev - fhi < 10.0 * tol)
            throw domain_error("invert_on_branch: y lies at or below the plateau of the "
                               "right branch");
    }
    auto g = [&](double w) { return phi(p, w, tol).phi - y; };
    return bisect(g, lo, hi, flo, fhi, root_tol);
}

} // namespace adaptmap
