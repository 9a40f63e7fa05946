#pragma once

#include <optional>
#include <vector>

#include "adaptmap/flow.hpp"

namespace adaptmap {

inline constexpr double default_map_tol = 1e-10;
inline constexpr double default_root_tol = 1e-10;

/// One evaluation of the adaptation map: phi = w_at_spike + d, dphi from the
/// first-variation equation.
struct map_sample {
    double w = 0;
    double phi = 0;
    double dphi = 0;
    spike_flight flight;
};

map_sample phi(const model_params& p, double w, double tol = default_map_tol);

/// [Phi(w), Phi^2(w), ..., Phi^n(w)], each from a fresh flight.
std::vector<double> phi_iter(const model_params& p, double w, int n,
                             double tol = default_map_tol);

/// The unique fixed point of Phi (bracketing around [w**, w* + 10 d], doubling
/// expansion, then bisection).
double fixed_point(const model_params& p, double tol = default_map_tol,
                   double root_tol = default_root_tol);

/// [alpha, xi]: first and last roots of Phi' = -1 on [w*, Phi(w*)].
struct slope_band {
    double alpha = 0;
    double xi = 0;
};

std::optional<slope_band> find_slope_band(const model_params& p,
                                          double tol = default_map_tol,
                                          int grid_n = 200);

/// Plateau p_eps = lim_{w -> inf} Phi(w), estimated along w = w* + 2^k d.
/// Throws if the sequence increases (the map must be decreasing right of w*).
double plateau(const model_params& p, double tol);

struct schwarzian_result {
    double value = 0;
    double error = 0;     // propagated finite-difference error estimate
    bool reliable = true; // false when error > 10% of |value|
};

/// S Phi = Phi'''/Phi' - 1.5 (Phi''/Phi')^2 with Phi'', Phi''' from Richardson-
/// extrapolated central differences of the variational Phi'. Refuses w within
/// the exclusion radius of w* (default 0.05 d), where Phi' -> 0.
schwarzian_result schwarzian(const model_params& p, double w, double h,
                             double exclusion_radius = -1,
                             double tol = default_map_tol);

/// One-sided limit of Phi'' at w* from the left, extrapolated in delta.
/// Requires F'(v_reset) > eps.
double second_derivative_at_wstar(const model_params& p, double delta = 0.01,
                                  double tol = default_map_tol);

enum class branch { left, right };

/// Inverts Phi restricted to a monotone branch (left: increasing on
/// (-inf, w*]; right: decreasing on [w*, inf)). Throws domain_error when y is
/// not attained on the branch.
double invert_on_branch(const model_params& p, double y, branch br,
                        double tol = default_map_tol,
                        double root_tol = default_root_tol);

} // namespace adaptmap
