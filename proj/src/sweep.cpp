#include "adaptmap/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "adaptmap/parallel.hpp"

namespace adaptmap {

namespace {

sweep_row run_row(const model_params& base, double vr, double w0, const sweep_protocol& proto,
                  double* carry_out) {
    sweep_row row;
    row.param_value = vr;
    model_params q = base;
    q.v_reset = vr;
    try {
        double w = w0;
        for (int i = 0; i < proto.transient_n; ++i) w = phi(q, w, proto.map_tol).phi;
        row.samples.resize(proto.sample_n);
        for (int i = 0; i < proto.sample_n; ++i) {
            w = phi(q, w, proto.map_tol).phi;
            row.samples[i] = w;
        }
        detect_options opt;
        opt.transient_n = proto.transient_n;
        opt.sample_n = proto.sample_n;
        opt.tol = proto.orbit_tol;
        opt.p_max = proto.p_max;
        opt.map_tol = proto.map_tol;
        row.attractor = classify_samples(q, row.samples, opt);
        if (carry_out) *carry_out = w;
    } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
    }
    return row;
}

} // namespace

std::vector<sweep_row> sweep_vr(const model_params& base, double v_lo, double v_hi, double step,
                                const sweep_protocol& proto) {
    if (step <= 0) throw domain_error("sweep_vr requires step > 0");
    if (!(v_hi >= v_lo)) throw domain_error("sweep_vr requires v_hi >= v_lo");
    const long n = std::lround((v_hi - v_lo) / step) + 1;

    std::vector<sweep_row> rows(n);
    if (proto.warm_start) {
        bool have_carry = false;
        double carry = 0;
        for (long i = 0; i < n; ++i) {
            const double vr = v_lo + double(i) * step;
            model_params q = base;
            q.v_reset = vr;
            const double w0 = have_carry ? carry : compute_landmarks(q).w_star;
            rows[i] = run_row(base, vr, w0, proto, &carry);
            have_carry = rows[i].ok;
        }
    } else {
        parallel_for(n, proto.workers, [&](long i) {
            const double vr = v_lo + double(i) * step;
            model_params q = base;
            q.v_reset = vr;
            rows[i] = run_row(base, vr, compute_landmarks(q).w_star, proto, nullptr);
        });
    }
    return rows;
}

window_table extract_windows(const std::vector<sweep_row>& rows, int min_run) {
    window_table table;
    if (rows.empty()) return table;

    // classify each row: period > 0, or -1 chaotic, -2 undecided, -3 failed
    auto key_of = [](const sweep_row& r) -> int {
        if (!r.ok) return -3;
        switch (r.attractor.kind) {
            case attractor_kind::fixed_point: return 1;
            case attractor_kind::periodic: return r.attractor.period;
            case attractor_kind::chaotic: return -1;
            case attractor_kind::undecided: return -2;
        }
        return -3;
    };

    struct run {
        int key;
        size_t lo, hi; // inclusive row indices
    };
    std::vector<run> runs;
    size_t start = 0;
    for (size_t i = 1; i <= rows.size(); ++i) {
        if (i == rows.size() || key_of(rows[i]) != key_of(rows[start])) {
            runs.push_back({key_of(rows[start]), start, i - 1});
            start = i;
        }
    }

    // periodic runs that continue the incrementing cascade become windows
    std::vector<std::pair<run, int>> win_runs; // run + k
    for (const run& r : runs) {
        if (r.key <= 0 || static_cast<int>(r.hi - r.lo + 1) < min_run) continue;
        if (win_runs.empty() || r.key == win_runs.back().second + 1) {
            win_runs.push_back({r, r.key});
        } else if (r.key == win_runs.back().second) {
            win_runs.back().first.hi = r.hi; // same-k continuation across a blip
        }
        // other periods (doubled orbits inside transitions) stay gap material
    }

    for (const auto& [r, k] : win_runs)
        table.windows.push_back({k, rows[r.lo].param_value, rows[r.hi].param_value});

    for (size_t i = 0; i + 1 < win_runs.size(); ++i) {
        const size_t glo = win_runs[i].first.hi + 1;
        const size_t ghi = win_runs[i + 1].first.lo - 1;
        if (glo > ghi) continue;
        int n_periodic = 0, n_chaotic = 0, n_other = 0;
        for (size_t j = glo; j <= ghi; ++j) {
            const int key = key_of(rows[j]);
            if (key > 0) ++n_periodic;
            else if (key == -1) ++n_chaotic;
            else ++n_other;
        }
        std::string cls = "undecided";
        if (n_periodic >= n_chaotic && n_periodic >= n_other) cls = "doubling";
        else if (n_chaotic >= n_other) cls = "chaotic";
        table.gaps.push_back({rows[glo].param_value, rows[ghi].param_value, cls});
    }
    return table;
}

std::vector<eps_row> sweep_eps(const model_params& base, const std::vector<double>& eps_list,
                               double v_reset, const hausdorff_spec& spec) {
    for (size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            throw domain_error("sweep_eps requires a strictly decreasing eps list");
    std::vector<eps_row> rows;
    rows.reserve(eps_list.size());
    for (double eps : eps_list) {
        model_params q = base;
        q.eps = eps;
        q.v_reset = v_reset;
        eps_row r;
        r.eps = eps;
        r.d_hausdorff = hausdorff_distance(q, spec);
        r.c1_max = c1_discrepancy(q, 0.1, 400, spec.tol, spec.workers);
        rows.push_back(r);
    }
    return rows;
}

double fitted_loglog_slope(const std::vector<eps_row>& rows) {
    if (rows.size() < 2) throw domain_error("fitted_loglog_slope requires >= 2 rows");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(rows.size());
    for (const eps_row& r : rows) {
        const double x = std::log(r.eps), y = std::log(r.d_hausdorff);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace adaptmap
