#include "adaptmap/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace adaptmap {

chaos_report chaos_conditions(const model_params& p, double map_tol) {
    const landmarks lm = compute_landmarks(p);
    chaos_report rep;
    rep.w_star = lm.w_star;
    rep.phi1 = phi(p, lm.w_star, map_tol).phi;
    rep.phi2 = phi(p, rep.phi1, map_tol).phi;
    rep.phi3 = phi(p, rep.phi2, map_tol).phi;
    rep.w_fixed = fixed_point(p, map_tol);
    rep.slope_at_fixed = phi(p, rep.w_fixed, map_tol).dphi;

    rep.shape_ok = rep.phi2 < lm.w_star && lm.w_star < rep.phi1;
    rep.order_ok = rep.shape_ok && rep.phi2 < rep.phi3 && rep.phi3 < lm.w_star;
    rep.fixed_point_unstable = rep.slope_at_fixed < -1.0;
    rep.implied_all_periods = rep.order_ok;
    rep.implied_positive_entropy = rep.order_ok;
    rep.implied_topological_chaos = rep.order_ok;

    const double margin = 1e-6;
    auto note_marginal = [&](double a, double b, const char* what) {
        if (std::abs(a - b) < margin) {
            std::ostringstream os;
            os << "marginal comparison (" << what << "): |difference| = " << std::abs(a - b);
            rep.notes.push_back(os.str());
        }
    };
    note_marginal(rep.phi1, lm.w_star, "Phi(w*) vs w*");
    note_marginal(rep.phi2, lm.w_star, "Phi^2(w*) vs w*");
    note_marginal(rep.phi3, lm.w_star, "Phi^3(w*) vs w*");
    note_marginal(rep.phi2, rep.phi3, "Phi^2(w*) vs Phi^3(w*)");
    note_marginal(rep.slope_at_fixed, -1.0, "Phi'(w^f) vs -1");

    // Observed inflection structure between alpha and xi (reported only).
    if (const auto band = find_slope_band(p, map_tol)) {
        const int n = 100;
        const std::vector<double> g = linspace(band->alpha, band->xi, n);
        int inflections = 0;
        double prev_curv = 0;
        for (int i = 0; i + 1 < n; ++i) {
            const double curv = phi(p, g[i + 1], map_tol).dphi - phi(p, g[i], map_tol).dphi;
            if (i > 0 && (curv > 0) != (prev_curv > 0)) ++inflections;
            prev_curv = curv;
        }
        std::ostringstream os;
        os << "inflections of Phi' sign pattern on (alpha, xi): " << inflections;
        rep.notes.push_back(os.str());
    }
    return rep;
}

std::optional<std::pair<interval, interval>> turbulence_witness(const model_params& p, int m,
                                                                double map_tol, int grid_n) {
    if (m < 2 || m > 4) throw domain_error("turbulence_witness requires m in {2, 3, 4}");
    const landmarks lm = compute_landmarks(p);
    const double c1 = phi(p, lm.w_star, map_tol).phi;
    const double c2 = phi(p, c1, map_tol).phi;
    if (!(c2 < c1)) return std::nullopt;

    const std::vector<double> grid = linspace(c2, c1, grid_n);
    std::vector<double> fm(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        double w = grid[i];
        for (int j = 0; j < m; ++j) w = phi(p, w, map_tol).phi;
        fm[i] = w;
    }

    // monotone laps of the sampled iterate, shrunk one cell on each side
    struct lap {
        int lo, hi; // inclusive grid indices
        double img_lo, img_hi;
    };
    std::vector<lap> laps;
    int start = 0;
    auto dir_at = [&](int i) { return fm[i + 1] >= fm[i]; };
    for (int i = 1; i + 1 < static_cast<int>(grid.size()); ++i) {
        if (dir_at(i) != dir_at(i - 1)) {
            laps.push_back({start, i, 0, 0});
            start = i;
        }
    }
    laps.push_back({start, static_cast<int>(grid.size()) - 1, 0, 0});

    std::vector<lap> usable;
    for (lap l : laps) {
        l.lo += 1;
        l.hi -= 1;
        if (l.hi - l.lo < 2) continue;
        double mn = fm[l.lo], mx = fm[l.lo];
        for (int i = l.lo; i <= l.hi; ++i) {
            mn = std::min(mn, fm[i]);
            mx = std::max(mx, fm[i]);
        }
        l.img_lo = mn;
        l.img_hi = mx;
        usable.push_back(l);
    }

    const double margin = 1e-6;
    for (size_t i = 0; i < usable.size(); ++i) {
        for (size_t j = i + 1; j < usable.size(); ++j) {
            const lap& a = usable[i];
            const lap& b = usable[j];
            const double hull_lo = grid[a.lo], hull_hi = grid[b.hi];
            const bool a_covers = a.img_lo <= hull_lo - margin && a.img_hi >= hull_hi + margin;
            const bool b_covers = b.img_lo <= hull_lo - margin && b.img_hi >= hull_hi + margin;
            if (a_covers && b_covers)
                return std::make_pair(interval{grid[a.lo], grid[a.hi]},
                                      interval{grid[b.lo], grid[b.hi]});
        }
    }
    return std::nullopt;
}

misiurewicz_result tune_misiurewicz(const model_params& p, int k,
                                    std::pair<double, double> bracket, double map_tol) {
    if (k < 2) throw domain_error("tune_misiurewicz requires k >= 2");
    if (!(bracket.second > bracket.first))
        throw domain_error("tune_misiurewicz requires a nonempty bracket (v_lo, v_hi)");

    auto h = [&](double vr) {
        model_params q = p;
        q.v_reset = vr;
        const landmarks lm = compute_landmarks(q);
        double w = lm.w_star;
        for (int i = 0; i < k + 1; ++i) w = phi(q, w, map_tol).phi;
        return w - fixed_point(q, map_tol);
    };

    double lo = bracket.first, hi = bracket.second;
    double hlo = h(lo), hhi = h(hi);
    int evals = 2;
    if ((hlo > 0) == (hhi > 0)) {
        // fine-grained sign structure near a window edge: scan the interior
        const int n_scan = 64;
        double prev_v = lo, prev_h = hlo;
        bool found = false;
        for (int i = 1; i <= n_scan; ++i) {
            const double v = lo + (hi - lo) * double(i) / n_scan;
            const double hv = (i == n_scan) ? hhi : h(v);
            ++evals;
            if ((hv > 0) != (prev_h > 0)) {
                lo = prev_v;
                hi = v;
                hlo = prev_h;
                hhi = hv;
                found = true;
                break;
            }
            prev_v = v;
            prev_h = hv;
        }
        if (!found)
            throw numeric_error("tune_misiurewicz: no sign change of Phi^(k+1)(w*) - w^f on "
                                "the bracket; a finer sweep is needed to bracket the "
                                "transition");
    }

    while (hi - lo > 1e-7) {
        const double mid = 0.5 * (lo + hi);
        const double hm = h(mid);
        ++evals;
        if ((hm > 0) == (hlo > 0)) {
            lo = mid;
            hlo = hm;
        } else {
            hi = mid;
            hhi = hm;
        }
    }

    misiurewicz_result res;
    res.v_r = std::abs(hlo) < std::abs(hhi) ? lo : hi;
    res.residual = std::abs(hlo) < std::abs(hhi) ? hlo : hhi;
    res.iterations = evals;

    model_params q = p;
    q.v_reset = res.v_r;
    res.w_fixed = fixed_point(q, map_tol);
    if (!(std::abs(res.residual) < 1e-4))
        throw numeric_error("tune_misiurewicz: tuned residual " + std::to_string(res.residual) +
                            " exceeds 1e-4");
    const auto band = find_slope_band(q, map_tol);
    if (!band || !(band->alpha < res.w_fixed && res.w_fixed < band->xi))
        throw numeric_error("tune_misiurewicz: fixed point is not inside the steep band "
                            "(alpha, xi); instability context not confirmed");
    return res;
}

density_estimate acip_histogram(const model_params& p, double w0, long n, int bins,
                                double map_tol, int transient_n) {
    if (n < 100000) throw domain_error("acip_histogram requires n >= 1e5");
    if (bins < 2) throw domain_error("acip_histogram requires bins >= 2");
    const landmarks lm = compute_landmarks(p);
    const double c1 = phi(p, lm.w_star, map_tol).phi;
    const double c2 = phi(p, c1, map_tol).phi;
    if (!(c2 < c1)) throw domain_error("acip_histogram: dynamical core is empty");

    density_estimate est;
    est.bins = bins;
    est.lo = c2;
    est.hi = c1;
    est.mass.assign(bins, 0.0);
    est.n_samples = n;

    const double escape_slack = 1e-6 * std::max(1.0, std::abs(c1));
    double w = w0;
    for (int i = 0; i < transient_n; ++i) w = phi(p, w, map_tol).phi;
    for (long i = 0; i < n; ++i) {
        w = phi(p, w, map_tol).phi;
        if (w < c2 - escape_slack || w > c1 + escape_slack)
            throw numeric_error("acip_histogram: orbit escaped the dynamical core at w = " +
                                std::to_string(w));
        const double x = std::clamp((w - c2) / (c1 - c2), 0.0, 1.0);
        const int bin = std::min(bins - 1, static_cast<int>(x * bins));
        est.mass[bin] += 1.0;
    }
    double total = 0;
    for (double m : est.mass) total += m;
    for (double& m : est.mass) m /= total;
    return est;
}

double l1_distance(const density_estimate& a, const density_estimate& b) {
    if (a.bins != b.bins) throw domain_error("l1_distance: bin counts differ");
    double s = 0;
    for (int i = 0; i < a.bins; ++i) s += std::abs(a.mass[i] - b.mass[i]);
    return s;
}

} // namespace adaptmap
