#pragma once

#include <string>
#include <vector>

#include "adaptmap/orbits.hpp"
#include "adaptmap/singular.hpp"

namespace adaptmap {

struct sweep_protocol {
    int transient_n = 1000;
    int sample_n = 100;
    double orbit_tol = 1e-7;
    double map_tol = 1e-8;
    int p_max = 64;
    bool warm_start = true; // carry the last iterate to the next row
    int workers = 1;        // used by cold-start sweeps only
};

struct sweep_row {
    double param_value = 0;
    std::vector<double> samples; // post-transient iterates
    attractor_result attractor;
    bool ok = true;
    std::string error;
};

/// One row per v_R grid point. Warm-start sweeps are sequential by
/// construction; cold-start rows are independent (each starts at its own w*)
/// and parallelize freely with output independent of the worker count.
std::vector<sweep_row> sweep_vr(const model_params& base, double v_lo, double v_hi,
                                double step, const sweep_protocol& proto = {});

struct window {
    int k = 0;
    double v_lo = 0, v_hi = 0;
};

struct window_gap {
    double v_lo = 0, v_hi = 0;
    std::string classification; // doubling | chaotic | undecided
};

struct window_table {
    std::vector<window> windows;
    std::vector<window_gap> gaps;
};

/// Maximal runs (>= min_run rows) of a constant period become windows when
/// they continue the incrementing cascade (first window, k+1 of the previous,
/// or an extension of the same k); everything between consecutive windows is a
/// gap classified by the majority attractor kind of its rows.
window_table extract_windows(const std::vector<sweep_row>& rows, int min_run = 5);

struct eps_row {
    double eps = 0;
    double d_hausdorff = 0;
    double c1_max = 0;
};

/// Convergence table toward the singular limit along a decreasing eps list.
std::vector<eps_row> sweep_eps(const model_params& base, const std::vector<double>& eps_list,
                               double v_reset, const hausdorff_spec& spec = {});

/// Least-squares slope of log d_H against log eps (reported, not asserted).
double fitted_loglog_slope(const std::vector<eps_row>& rows);

} // namespace adaptmap
