#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adaptmap/orbits.hpp"

namespace adaptmap {

struct interval {
    double lo = 0;
    double hi = 0;
};

struct turbulence_pair {
    int m = 0;
    interval a1, a2;
};

/// Shape diagnostics of the map at the current parameters. order_ok certifies
/// the hypothesis Phi^2(w*) < Phi^3(w*) < w* < Phi(w*), from which periodic
/// orbits of all periods, turbulence of an iterate, positive topological
/// entropy and Devaney/Li-Yorke/Block-Coppel chaos on a core subset all
/// follow; those are reported as implied flags, never measured.
struct chaos_report {
    bool shape_ok = false;
    bool order_ok = false;
    bool fixed_point_unstable = false;
    double phi1 = 0, phi2 = 0, phi3 = 0; // iterates of w*
    double w_star = 0;
    double w_fixed = 0;
    double slope_at_fixed = 0;
    bool implied_all_periods = false;
    bool implied_positive_entropy = false;
    bool implied_topological_chaos = false;
    std::optional<turbulence_pair> turbulence_witness;
    std::vector<std::string> notes;
};

chaos_report chaos_conditions(const model_params& p, double map_tol = default_map_tol);

/// Searches Phi^m on the dynamical core for two closed intervals with disjoint
/// interiors whose images each cover their union (a 2-horseshoe of the m-th
/// iterate), with a 1e-6 safety margin on the covering.
std::optional<std::pair<interval, interval>> turbulence_witness(const model_params& p, int m,
                                                                double map_tol = 1e-8,
                                                                int grid_n = 2000);

struct misiurewicz_result {
    double v_r = 0;
    double residual = 0; // Phi^(k+1)(w*) - w^f at the tuned parameter
    double w_fixed = 0;
    int iterations = 0;
};

/// Tunes v_R inside the bracket so the critical point lands on the (unstable)
/// fixed point after k+1 steps. Bisection on h(v_R) = Phi^(k+1)(w*) - w^f.
misiurewicz_result tune_misiurewicz(const model_params& p, int k,
                                    std::pair<double, double> bracket,
                                    double map_tol = default_map_tol);

struct density_estimate {
    int bins = 0;
    double lo = 0, hi = 0; // dynamical core [Phi^2(w*), Phi(w*)]
    std::vector<double> mass;
    long n_samples = 0;
};

density_estimate acip_histogram(const model_params& p, double w0, long n, int bins = 200,
                                double map_tol = 1e-8, int transient_n = 1000);

double l1_distance(const density_estimate& a, const density_estimate& b);

} // namespace adaptmap
