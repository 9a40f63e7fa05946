#include "adaptmap/singular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "adaptmap/flow.hpp"
#include "adaptmap/parallel.hpp"

namespace adaptmap {

singular_map make_singular_map(const model_params& p) {
    const landmarks lm = compute_landmarks(p);
    return {lm.w_star, lm.p0, p.d};
}

double phi0(const singular_map& m, double w) {
    return w <= m.w_star ? w + m.d : m.p0;
}

int phi0_period(const singular_map& m) {
    if (m.w_star < m.p0) return 1;
    if (m.d <= 0) return 1; // degenerate: p0 <= w_star and no climb, p0 is fixed
    // smallest k with p0 + (k-1) d > w_star, strict
    long k = static_cast<long>(std::floor((m.w_star - m.p0) / m.d)) + 1;
    if (k < 1) k = 1;
    while (m.p0 + double(k - 1) * m.d <= m.w_star) ++k;
    while (k > 1 && m.p0 + double(k - 2) * m.d > m.w_star) --k;

    // published closed form, with a tie guard implementing the same strictness
    const long k_floor = static_cast<long>(std::floor((m.w_star - m.p0) / m.d + 1e-12)) + 2;
    if (std::abs(k - k_floor) > 1)
        throw numeric_error("phi0_period: min-k and floor formulas disagree");
    return static_cast<int>(k);
}

std::vector<double> phi0_orbit(const singular_map& m) {
    const int p = phi0_period(m);
    std::vector<double> orbit(p);
    for (int i = 0; i < p; ++i) orbit[i] = m.p0 + double(i) * m.d;
    return orbit;
}

namespace {

// Sampling grid over [w** - lo_pad d, w* + hi_pad d]; a fifth of the points
// cluster geometrically around w*, where the two graphs disagree most.
std::vector<double> hausdorff_grid(const landmarks& lm, double d, int n, double lo_pad,
                                   double hi_pad) {
    const double span = std::max(d, 1.0);
    const double lo = lm.w_star2 - lo_pad * span;
    const double hi = lm.w_star + hi_pad * span;
    const int n_cluster = n / 5;
    std::vector<double> grid = linspace(lo, hi, n - n_cluster);
    const int half = std::max(1, n_cluster / 2);
    const double r0 = span / 10.0;
    const double shrink = std::pow(1e-6, 1.0 / std::max(1, half - 1));
    double off = r0;
    for (int j = 0; j < half; ++j) {
        grid.push_back(lm.w_star - off);
        grid.push_back(std::min(hi, lm.w_star + off));
        off *= shrink;
    }
    std::sort(grid.begin(), grid.end());
    return grid;
}

struct pt {
    double x, y;
};

struct seg {
    pt a, b;
};

double dist2_point_segment(const pt& q, const seg& s) {
    const double dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0;
    if (len2 > 0) t = std::clamp(((q.x - s.a.x) * dx + (q.y - s.a.y) * dy) / len2, 0.0, 1.0);
    const double px = s.a.x + t * dx - q.x, py = s.a.y + t * dy - q.y;
    return px * px + py * py;
}

double sup_points_to_curve(const std::vector<pt>& from, const std::vector<seg>& to) {
    double worst = 0;
    for (const pt& q : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const seg& s : to) best = std::min(best, dist2_point_segment(q, s));
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

} // namespace

double hausdorff_distance(const model_params& p, const hausdorff_spec& spec) {
    const landmarks lm = compute_landmarks(p);
    const singular_map sm{lm.w_star, lm.p0, p.d};
    const std::vector<double> grid =
        hausdorff_grid(lm, p.d, spec.n_grid, spec.lo_pad, spec.hi_pad);

    std::vector<pt> graph_eps(grid.size());
    parallel_for(static_cast<long>(grid.size()), spec.workers, [&](long i) {
        graph_eps[i] = {grid[i], fly(p, grid[i], spec.tol).w_at_spike + p.d};
    });

    // The map develops a near-vertical plunge right of w* as eps shrinks;
    // bisect any cell whose y-jump is large until the sampled graph has no
    // artificial vertical gaps (they would inflate the distance from the
    // vertical segment of the limit graph).
    std::sort(graph_eps.begin(), graph_eps.end(), [](const pt& a, const pt& b) { return a.x < b.x; });
    const double y_gap_tol = 0.02 * std::max(p.d, 1.0);
    std::vector<std::pair<pt, pt>> work;
    for (size_t i = 0; i + 1 < graph_eps.size(); ++i)
        if (std::abs(graph_eps[i + 1].y - graph_eps[i].y) > y_gap_tol)
            work.push_back({graph_eps[i], graph_eps[i + 1]});
    const long extra_budget = 40L * spec.n_grid;
    long extra = 0;
    while (!work.empty() && extra < extra_budget) {
        const auto [a, b] = work.back();
        work.pop_back();
        if (b.x - a.x < 1e-12) continue;
        const double xm = 0.5 * (a.x + b.x);
        const pt m{xm, fly(p, xm, spec.tol).w_at_spike + p.d};
        graph_eps.push_back(m);
        ++extra;
        if (std::abs(m.y - a.y) > y_gap_tol) work.push_back({a, m});
        if (std::abs(b.y - m.y) > y_gap_tol) work.push_back({m, b});
    }

    std::sort(graph_eps.begin(), graph_eps.end(), [](const pt& a, const pt& b) { return a.x < b.x; });

    // The limit graph is three exact segments: the translation line up to w*,
    // the vertical segment of the augmentation, and the plateau line.
    const double w_lo = graph_eps.front().x, w_hi = graph_eps.back().x;
    const std::vector<seg> lim_segs = {
        {{w_lo, w_lo + sm.d}, {sm.w_star, sm.w_star + sm.d}},
        {{sm.w_star, sm.p0}, {sm.w_star, sm.w_star + sm.d}},
        {{sm.w_star, sm.p0}, {w_hi, sm.p0}},
    };
    std::vector<pt> lim_pts;
    lim_pts.reserve(graph_eps.size() + spec.n_vertical);
    for (const pt& q : graph_eps) lim_pts.push_back({q.x, phi0(sm, q.x)});
    for (double y : linspace(sm.p0, sm.w_star + sm.d, spec.n_vertical))
        lim_pts.push_back({sm.w_star, y});

    std::vector<seg> eps_segs;
    eps_segs.reserve(graph_eps.size());
    for (size_t i = 0; i + 1 < graph_eps.size(); ++i)
        eps_segs.push_back({graph_eps[i], graph_eps[i + 1]});

    return std::max(sup_points_to_curve(graph_eps, lim_segs),
                    sup_points_to_curve(lim_pts, eps_segs));
}

double c1_discrepancy(const model_params& p, double exclusion, int n_grid, double tol,
                      int workers) {
    const landmarks lm = compute_landmarks(p);
    const double span = std::max(p.d, 1.0);
    std::vector<double> grid;
    for (double w : linspace(lm.w_star2 - 5.0 * span, lm.w_star + 10.0 * span, n_grid))
        if (std::abs(w - lm.w_star) >= exclusion) grid.push_back(w);

    std::vector<double> dev(grid.size());
    parallel_for(static_cast<long>(grid.size()), workers, [&](long i) {
        const double slope0 = grid[i] < lm.w_star ? 1.0 : 0.0;
        dev[i] = std::abs(fly(p, grid[i], tol).derivative - slope0);
    });
    double worst = 0;
    for (double v : dev) worst = std::max(worst, v);
    return worst;
}

} // namespace adaptmap
