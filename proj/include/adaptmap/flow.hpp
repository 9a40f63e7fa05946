#pragma once

#include <optional>
#include <vector>

#include "adaptmap/model.hpp"

namespace adaptmap {

enum class flight_mode { direct_rise, loop_then_rise };

/// One trajectory from the reset line to the next spike.
///   w_at_spike : lim of W as v -> infinity, before the +d increment
///   derivative : d(w_at_spike)/d(w_start), from the first-variation equation
///   crossing_w : for loop flights, the w-coordinate P(w_start) where the
///                trajectory re-crosses {v = v_reset} below the v-nullcline
///   tail_bound : certified bound on the truncation error of the v -> infinity
///                tail (quadrature error plus frozen-W sensitivity)
struct spike_flight {
    double w_start = 0;
    double w_at_spike = 0;
    double derivative = 0;
    std::optional<double> crossing_w;
    long n_steps = 0;
    double tail_bound = 0;
    flight_mode mode = flight_mode::direct_rise;
};

/// Point of a trajectory dump (debugging aid behind a CLI flag).
struct trajectory_point {
    double t, v, w;
};

/// Flight from w0 <= w*: the trajectory rises monotonically in v, integrated
/// as dW/dv = eps (b v - W) / (F(v) - W + I) to an adaptive V_max plus a
/// certified tail. Starts within a whisker of w* (or exactly on it) are pushed
/// off the nullcline by a short time-domain prelude first.
spike_flight fly_direct(const model_params& p, double w0, double tol);

/// Flight from w0 > w*: time-domain integration with event detection for the
/// return crossing of {v = v_reset}, then delegation to fly_direct; the
/// derivative is composed by the chain rule through the section projection.
spike_flight fly_loop(const model_params& p, double w0, double tol);

/// Dispatch on w0 <= w*.
spike_flight fly(const model_params& p, double w0, double tol);

/// As fly(), also recording (t, v, w) samples at accepted steps.
spike_flight fly_traced(const model_params& p, double w0, double tol,
                        std::vector<trajectory_point>& trace);

} // namespace adaptmap
