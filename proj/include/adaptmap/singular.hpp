#pragma once

#include <vector>

#include "adaptmap/model.hpp"

namespace adaptmap {

/// The piecewise linear slow-adaptation limit of the map:
///   w + d  for w <= w_star,   p0  for w > w_star.
struct singular_map {
    double w_star = 0;
    double p0 = 0;
    double d = 0;
};

singular_map make_singular_map(const model_params& p);

double phi0(const singular_map& m, double w);

/// Period of the unique globally attracting orbit: smallest k with
/// p0 + (k-1) d > w_star, or 1 when the fixed point p0 survives (w_star < p0).
/// At exact ties w_star = p0 + (k-1) d the strict inequality yields k + 1.
int phi0_period(const singular_map& m);

/// The attracting orbit [p0, p0 + d, ..., p0 + (p-1) d].
std::vector<double> phi0_orbit(const singular_map& m);

struct hausdorff_spec {
    int n_grid = 2000;     // graph sampling points (20% clustered near w*)
    int n_vertical = 200;  // points on the vertical segment of the limit graph
    double lo_pad = 5.0;   // range [w** - lo_pad d, w* + hi_pad d]
    double hi_pad = 10.0;
    double tol = 1e-8;
    int workers = 1;
};

/// Discrete symmetric Hausdorff distance between the graph of the map and the
/// graph of its singular limit (augmented with the vertical segment
/// {w*} x [p0, w* + d] at the discontinuity).
double hausdorff_distance(const model_params& p, const hausdorff_spec& spec = {});

/// max |Phi' - Phi0'| over the same range, excluding |w - w*| < exclusion;
/// Phi0' is 1 left of w* and 0 right of it.
double c1_discrepancy(const model_params& p, double exclusion = 0.1, int n_grid = 400,
                      double tol = 1e-8, int workers = 1);

} // namespace adaptmap
