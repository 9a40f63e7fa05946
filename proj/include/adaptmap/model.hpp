#pragma once

#include <optional>
#include <string>

#include "adaptmap/common.hpp"

namespace adaptmap {

enum class nonlinearity { quartic, exponential };

/// Full parameterization of the hybrid system
///   v' = F(v) - w + I,   w' = eps (b v - w),
/// with reset v -> v_reset, w -> w + d at each blow-up of v.
/// The adaptation reset is a pure increment (spike impulse fully integrated).
struct model_params {
    nonlinearity family = nonlinearity::quartic;
    double a = 0.2;       // quartic shape parameter, unused by the exponential family
    double b = 0.7;       // adaptation/voltage coupling, > 0
    double I = 2.0;       // input current
    double d = 1.0;       // spike-triggered adaptation increment, >= 0
    double eps = 0.4;     // timescale ratio, > 0
    double v_reset = 1.3; // reset voltage v_R

    void validate() const;
};

/// F and its first three derivatives, exact per family.
double f_eval(const model_params& p, double v);
double f_prime(const model_params& p, double v);
double f_second(const model_params& p, double v);
double f_third(const model_params& p, double v);

struct field_derivs {
    double dv;
    double dw;
};

/// Right-hand side of the subthreshold flow at (v, w).
field_derivs eval_field(const model_params& p, double v, double w);

/// Geometric landmarks of the phase plane.
///   (v_fold, w_fold): minimum of the v-nullcline w = F(v) + I
///   p0 = w_fold + d : plateau of the singular map
///   w_star = F(v_R) + I : reset line meets the v-nullcline (critical point of Phi)
///   w_star2 = b v_R     : reset line meets the w-nullcline
///   plateau: p_eps, filled lazily by the map module
struct landmarks {
    double v_fold = 0;
    double w_fold = 0;
    double p0 = 0;
    double w_star = 0;
    double w_star2 = 0;
    std::optional<double> plateau;
};

struct fold_point {
    double v_fold;
    double w_fold;
    double p0;
};

/// Locates the unique zero of F' (closed form per family, Newton-polished to 1e-12).
fold_point find_fold(const model_params& p);

landmarks compute_landmarks(const model_params& p);

/// One clause of the standing assumptions, with a diagnostic.
struct assumption_clause {
    bool pass = false;
    std::string detail;
};

/// Assumption checks:
///   convexity : F strictly convex with a non-degenerate fold
///   plateau_clause : lim F'(-inf) < -eps (b + sqrt(2))
///   blowup_clause  : F(v)/v^(2+eta) >= alpha for large v
///   no_equilibrium : F(v) + I > b v for all v (min of F + I - b v positive)
///   reset_right_of_fold : v_R > v_fold
struct assumption_report {
    assumption_clause convexity;
    assumption_clause plateau_clause;
    assumption_clause blowup_clause;
    assumption_clause no_equilibrium;
    assumption_clause reset_right_of_fold;
    double equilibrium_gap = 0;  // min of F(v) + I - b v
    double equilibrium_argmin = 0;

    bool all_pass() const {
        return convexity.pass && plateau_clause.pass && blowup_clause.pass &&
               no_equilibrium.pass && reset_right_of_fold.pass;
    }
};

assumption_report check_assumptions(const model_params& p);

} // namespace adaptmap
