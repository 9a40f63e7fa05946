#include "adaptmap/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace adaptmap {

namespace {

// Rotates one period so the maximal point comes last; an L^(m)R^(n) cyclic
// word then reads in its canonical order.
std::vector<double> align_phase(std::vector<double> orbit) {
    if (orbit.size() < 2) return orbit;
    const auto it = std::max_element(orbit.begin(), orbit.end());
    std::rotate(orbit.begin(), it + 1 == orbit.end() ? orbit.begin() : it + 1, orbit.end());
    return orbit;
}

std::string letters(const std::vector<double>& orbit, double w_star) {
    std::string s;
    s.reserve(orbit.size());
    for (double w : orbit) s.push_back(w < w_star ? 'L' : 'R');
    return s;
}

} // namespace

attractor_result classify_samples(const model_params& p, const std::vector<double>& samples,
                                  const detect_options& opt) {
    const landmarks lm = compute_landmarks(p);
    const int n = static_cast<int>(samples.size());
    attractor_result res;

    const int p_cap = std::min(opt.p_max, n / 2);
    for (int period = 1; period <= p_cap; ++period) {
        bool closed = true;
        for (int i = 0; i + period < n; ++i) {
            if (std::abs(samples[i + period] - samples[i]) >= opt.tol) {
                closed = false;
                break;
            }
        }
        if (!closed) continue;

        res.kind = period == 1 ? attractor_kind::fixed_point : attractor_kind::periodic;
        res.period = period;
        res.orbit = align_phase({samples.end() - period, samples.end()});
        res.itinerary = letters(res.orbit, lm.w_star);
        res.multiplier = 1.0;
        double log_sum = 0;
        for (double w : res.orbit) {
            const double dphi = phi(p, w, opt.map_tol).dphi;
            res.multiplier *= dphi;
            log_sum += std::log(std::abs(dphi));
        }
        res.lyapunov = log_sum / period;
        return res;
    }

    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    const double diameter = *mx - *mn;
    res.kind = diameter > 10.0 * opt.tol ? attractor_kind::chaotic : attractor_kind::undecided;
    res.period = 0;
    double log_sum = 0;
    for (double w : samples) log_sum += std::log(std::abs(phi(p, w, opt.map_tol).dphi));
    res.lyapunov = log_sum / std::max(1, n);
    return res;
}

attractor_result detect_attractor(const model_params& p, double w0, const detect_options& opt) {
    if (opt.transient_n < 1) throw domain_error("detect_attractor requires transient_n >= 1");
    if (opt.sample_n < 2) throw domain_error("detect_attractor requires sample_n >= 2");
    double w = w0;
    for (int i = 0; i < opt.transient_n; ++i) w = phi(p, w, opt.map_tol).phi;
    std::vector<double> samples(opt.sample_n);
    for (int i = 0; i < opt.sample_n; ++i) {
        w = phi(p, w, opt.map_tol).phi;
        samples[i] = w;
    }
    return classify_samples(p, samples, opt);
}

std::string itinerary(const model_params& p, const std::vector<double>& orbit, double tol) {
    const landmarks lm = compute_landmarks(p);
    for (double w : orbit)
        if (std::abs(w - lm.w_star) < tol) {
            std::ostringstream os;
            os << "AmbiguousItinerary: orbit point " << w << " within " << tol << " of w*";
            throw domain_error(os.str());
        }
    return letters(orbit, lm.w_star);
}

lyapunov_result lyapunov(const model_params& p, double w0, long n, double map_tol,
                         int transient_n) {
    if (n < 1000) throw domain_error("lyapunov requires n >= 1000");
    const landmarks lm = compute_landmarks(p);
    double w = w0;
    for (int i = 0; i < transient_n; ++i) w = phi(p, w, map_tol).phi;

    double sum = 0, half_sum = 0;
    const long half = n / 2;
    for (long i = 0; i < n; ++i) {
        if (std::abs(w - lm.w_star) < 1e-12) w += 1e-12;
        const map_sample s = phi(p, w, map_tol);
        sum += std::log(std::abs(s.dphi));
        if (i < half) half_sum = sum;
        w = s.phi;
    }
    lyapunov_result r;
    r.value = sum / double(n);
    r.band = std::abs(half_sum / double(half) - r.value);
    return r;
}

certify_outcome certify_k(const model_params& p, double map_tol) {
    const landmarks lm = compute_landmarks(p);
    const double c1 = phi(p, lm.w_star, map_tol).phi;
    if (!(c1 > lm.w_star))
        return certify_failure{"Phi(w*) <= w*: globally attracting fixed point regime"};
    const double c2 = phi(p, c1, map_tol).phi;
    if (!(c2 < lm.w_star)) return certify_failure{"Phi^2(w*) >= w*: at most a period-2 regime"};
    const double c3 = phi(p, c2, map_tol).phi;
    if (!(c3 < lm.w_star)) return certify_failure{"Phi^3(w*) >= w*"};

    // k = min { i >= 3 : Phi^(i+1)(w*) > w* }
    int k = 0;
    double it = c3;
    std::vector<double> crit = {c1, c2, c3}; // crit[i-1] = Phi^i(w*)
    for (int i = 3; i <= 64; ++i) {
        const double next = phi(p, it, map_tol).phi;
        crit.push_back(next); // Phi^(i+1)
        if (next > lm.w_star) {
            k = i;
            break;
        }
        it = next;
    }
    if (k == 0) return certify_failure{"critical orbit did not return right of w* within 64 steps"};

    const auto band = find_slope_band(p, map_tol);
    if (!band)
        return certify_failure{"no slope band: Phi' stays above -1 on [w*, Phi(w*)]"};

    const double phi_k1 = crit[k]; // Phi^(k+1)(w*)
    const std::vector<double> grid = linspace(band->xi, c1 - 1e-9 * std::max(1.0, std::abs(c1)), 400);
    for (double w_tilde : grid) {
        if (!(phi_k1 > w_tilde)) continue;
        bool ok = true;
        double wt_it = w_tilde; // Phi^(i-1)(w_tilde) as i runs 2..k
        for (int i = 2; i <= k && ok; ++i) {
            wt_it = phi(p, wt_it, map_tol).phi;
            ok = crit[i - 1] < wt_it && wt_it < lm.w_star; // Phi^i(w*) < Phi^(i-1)(wt) < w*
        }
        if (!ok) continue;

        detect_options opt;
        opt.transient_n = 2000;
        opt.sample_n = std::max(40, 4 * k);
        opt.tol = 1e-9;
        opt.map_tol = map_tol;
        attractor_result orbit = detect_attractor(p, lm.w_star, opt);
        if (!(orbit.kind == attractor_kind::periodic && orbit.period == k)) {
            std::ostringstream os;
            os << "witness found but the attractor of w* is not " << k << "-periodic";
            return certify_failure{os.str()};
        }
        certificate cert;
        cert.k = k;
        cert.w_tilde = w_tilde;
        cert.alpha = band->alpha;
        cert.xi = band->xi;
        cert.orbit = orbit;
        cert.multiplier = orbit.multiplier;
        return cert;
    }
    return certify_failure{"no witness w_tilde in [xi, Phi(w*)) satisfied the orbit-order "
                           "inequalities"};
}

basin_result basin_gap(const model_params& p, const certificate& cert, double map_tol) {
    const landmarks lm = compute_landmarks(p);
    const double c1 = phi(p, lm.w_star, map_tol).phi;
    const double c2 = phi(p, c1, map_tol).phi;

    basin_result res;
    res.w_tilde = cert.w_tilde;

    const double gamma = invert_on_branch(p, cert.w_tilde, branch::right, map_tol);
    double lo = gamma, hi = cert.w_tilde;
    if (!(hi > lo)) throw numeric_error("basin_gap: right-branch preimage of w_tilde is not "
                                        "left of w_tilde");
    res.intervals.push_back({lo, hi});
    res.lambda = hi - lo;

    for (int i = 2; i <= cert.k - 1; ++i) {
        // pull back through the increasing left branch, then clip to (Phi^2(w*), w*)
        double nlo, nhi;
        try {
            nlo = invert_on_branch(p, lo, branch::left, map_tol);
            nhi = invert_on_branch(p, hi, branch::left, map_tol);
        } catch (const domain_error&) {
            break; // preimage fell off the branch range: the chain terminates
        }
        nlo = std::max(nlo, c2);
        nhi = std::min(nhi, lm.w_star);
        if (!(nhi > nlo)) break;
        res.intervals.push_back({nlo, nhi});
        res.lambda += nhi - nlo;
        lo = nlo;
        hi = nhi;
    }
    return res;
}

} // namespace adaptmap
