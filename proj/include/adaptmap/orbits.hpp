#pragma once

#include <string>
#include <variant>
#include <vector>

#include "adaptmap/map.hpp"

namespace adaptmap {

enum class attractor_kind { fixed_point, periodic, chaotic, undecided };

/// Detected asymptotic behavior of the iteration. For periodic results the
/// orbit holds one period, rotated so the largest point (the R point for
/// L^(k-1)R orbits) comes last; itinerary is letter-per-point in that order.
struct attractor_result {
    attractor_kind kind = attractor_kind::undecided;
    int period = 0;
    std::vector<double> orbit;
    std::string itinerary;
    double multiplier = 0; // product of Phi' over the orbit (periodic only)
    double lyapunov = 0;
};

struct detect_options {
    int transient_n = 1000;
    int sample_n = 200;
    double tol = 1e-7;    // closure tolerance for period detection
    int p_max = 64;
    double map_tol = 1e-8;
};

attractor_result detect_attractor(const model_params& p, double w0,
                                  const detect_options& opt = {});

/// Classification core shared with parameter sweeps: the samples are the
/// post-transient iterates in order.
attractor_result classify_samples(const model_params& p, const std::vector<double>& samples,
                                  const detect_options& opt);

/// Strict itinerary of an orbit: L iff w < w*. Throws when a point sits within
/// tol of w* (ambiguous letter).
std::string itinerary(const model_params& p, const std::vector<double>& orbit,
                      double tol = 1e-7);

struct lyapunov_result {
    double value = 0;
    double band = 0; // |half-sample mean - full-sample mean|
};

lyapunov_result lyapunov(const model_params& p, double w0, long n, double map_tol = 1e-8,
                         int transient_n = 1000);

/// Constructive stability certificate for a k-periodic orbit with itinerary
/// L^(k-1)R: a witness w_tilde in [xi, Phi(w*)) whose first k-1 iterates
/// interleave the critical orbit, plus the located attractor.
struct certificate {
    int k = 0;
    double w_tilde = 0;
    double alpha = 0, xi = 0;
    attractor_result orbit;
    double multiplier = 0;
};

struct certify_failure {
    std::string reason;
};

using certify_outcome = std::variant<certificate, certify_failure>;

certify_outcome certify_k(const model_params& p, double map_tol = default_map_tol);

/// The exceptional set H = A_1 u ... u A_(k-1) that may escape the certified
/// orbit: A_1 = (gamma, w_tilde) with gamma the right-branch preimage of
/// w_tilde, deeper sets pulled back through the left branch.
struct basin_result {
    double lambda = 0; // total length of H
    double w_tilde = 0;
    std::vector<std::pair<double, double>> intervals;
};

basin_result basin_gap(const model_params& p, const certificate& cert,
                       double map_tol = default_map_tol);

} // namespace adaptmap
