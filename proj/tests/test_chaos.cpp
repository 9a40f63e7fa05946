#include <doctest.h>

#include <cmath>
#include <vector>

#include "adaptmap/chaos.hpp"

using namespace adaptmap;

namespace {
model_params standard() {
    return {nonlinearity::quartic, 0.2, 0.7, 2.0, 1.0, 0.4, 1.3};
}

constexpr double tuned_vr = 1.1416423; // root of Phi^5(w*) = w^f at eps = 0.4
} // namespace

TEST_CASE("shape conditions hold in the cascade and fail in the trivial regime") {
    model_params p = standard();
    chaos_report rep = chaos_conditions(p);
    CHECK(rep.shape_ok);
    CHECK(rep.order_ok);
    CHECK(rep.implied_all_periods);
    CHECK(rep.implied_positive_entropy);
    CHECK(rep.implied_topological_chaos);

    p.v_reset = compute_landmarks(p).v_fold + 0.05; // globally attracting fixed point
    rep = chaos_conditions(p);
    CHECK_FALSE(rep.shape_ok);
    CHECK_FALSE(rep.order_ok);
}

TEST_CASE("shape conditions in the small-eps incrementing regime") {
    model_params p = standard();
    p.eps = 0.05;
    p.v_reset = 1.24; // interior of the period-4 window
    const chaos_report rep = chaos_conditions(p);
    CHECK(rep.shape_ok);
    CHECK(rep.order_ok);
}

TEST_CASE("shape booleans are stable across map tolerances") {
    model_params p = standard();
    for (double vr : {0.97, 1.1416423, 1.3}) {
        p.v_reset = vr;
        const chaos_report a = chaos_conditions(p, 1e-8);
        const chaos_report b = chaos_conditions(p, 1e-10);
        CHECK(a.shape_ok == b.shape_ok);
        CHECK(a.order_ok == b.order_ok);
        CHECK(a.fixed_point_unstable == b.fixed_point_unstable);
    }
}

TEST_CASE("turbulence witness at the tuned point survives a brute-force re-check") {
    model_params p = standard();
    p.v_reset = tuned_vr;
    const auto tw = turbulence_witness(p, 2);
    REQUIRE(tw.has_value());
    const auto [a1, a2] = *tw;
    CHECK(a1.hi <= a2.lo + 1e-12); // disjoint interiors

    const double hull_lo = a1.lo, hull_hi = a2.hi;
    for (const interval& iv : {a1, a2}) {
        double img_lo = 1e300, img_hi = -1e300;
        for (int i = 0; i < 100; ++i) {
            double w = iv.lo + (iv.hi - iv.lo) * i / 99.0;
            w = phi(p, w, 1e-9).phi;
            w = phi(p, w, 1e-9).phi; // Phi^2
            img_lo = std::min(img_lo, w);
            img_hi = std::max(img_hi, w);
        }
        CHECK(img_lo <= hull_lo);
        CHECK(img_hi >= hull_hi);
    }
}

TEST_CASE("no turbulence in the globally attracting regime") {
    model_params p = standard();
    p.v_reset = compute_landmarks(p).v_fold + 0.05;
    CHECK_FALSE(turbulence_witness(p, 2).has_value());
    CHECK_THROWS_AS(turbulence_witness(p, 5), domain_error);
}

TEST_CASE("misiurewicz tuning lands on the measured root") {
    const model_params p = standard();
    const misiurewicz_result r = tune_misiurewicz(p, 4, {1.10, 1.20});
    CHECK(r.v_r == doctest::Approx(tuned_vr).epsilon(2e-6));
    CHECK(std::abs(r.residual) < 1e-4);
    CHECK(r.w_fixed == doctest::Approx(4.34772).epsilon(1e-4));

    // direct verification of the defining equation
    model_params q = p;
    q.v_reset = r.v_r;
    double w = compute_landmarks(q).w_star;
    for (int i = 0; i < 5; ++i) w = phi(q, w).phi;
    CHECK(std::abs(w - fixed_point(q)) < 1e-4);
}

TEST_CASE("misiurewicz root is stable under bracket perturbation") {
    const model_params p = standard();
    const misiurewicz_result a = tune_misiurewicz(p, 4, {1.10, 1.20});
    const misiurewicz_result b = tune_misiurewicz(p, 4, {1.11, 1.19});
    CHECK(std::abs(a.v_r - b.v_r) < 1e-6);
}

TEST_CASE("misiurewicz tuning demands a sign change") {
    const model_params p = standard();
    // interior of the period-5 window: h = Phi^5(w*) - w^f stays one-signed
    CHECK_THROWS_AS(tune_misiurewicz(p, 4, {1.19, 1.21}), numeric_error);
}

TEST_CASE("acip histogram of a periodic regime concentrates on the orbit") {
    model_params p = standard();
    p.v_reset = 1.2; // stable period 5
    const density_estimate est = acip_histogram(p, 3.0, 100000, 200, 1e-7);
    int occupied = 0;
    for (double m : est.mass) occupied += m > 0;
    CHECK(occupied <= 5);
    double sum = 0;
    for (double m : est.mass) sum += m;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("acip histograms at the tuned point reproduce across starts") {
    model_params p = standard();
    p.v_reset = tuned_vr;
    const landmarks lm = compute_landmarks(p);
    const density_estimate a = acip_histogram(p, lm.w_star + 1e-3, 200000, 50, 1e-7);
    const density_estimate b = acip_histogram(p, lm.w_star - 0.7, 200000, 50, 1e-7);
    CHECK(l1_distance(a, b) < 0.05);
    CHECK(a.lo == doctest::Approx(b.lo));
    CHECK(a.hi == doctest::Approx(b.hi));
}

TEST_CASE("acip measure is invariant under the map pushforward") {
    model_params p = standard();
    p.v_reset = tuned_vr;
    const landmarks lm = compute_landmarks(p);

    const long n = 200000;
    const auto run = phi_iter(p, lm.w_star + 1e-3, n + 1001, 1e-7);
    const double c1 = phi(p, lm.w_star).phi;
    const double c2 = phi(p, c1).phi;
    const int bins = 50;
    std::vector<double> h0(bins, 0.0), h1(bins, 0.0);
    auto bin_of = [&](double w) {
        const double x = std::clamp((w - c2) / (c1 - c2), 0.0, 1.0);
        return std::min(bins - 1, static_cast<int>(x * bins));
    };
    for (long i = 1000; i < 1000 + n; ++i) {
        h0[bin_of(run[i])] += 1.0 / n;      // samples w_i
        h1[bin_of(run[i + 1])] += 1.0 / n;  // their images Phi(w_i)
    }
    double l1 = 0;
    for (int i = 0; i < bins; ++i) l1 += std::abs(h0[i] - h1[i]);
    CHECK(l1 < 0.05);
}

TEST_CASE("acip preconditions") {
    model_params p = standard();
    CHECK_THROWS_AS(acip_histogram(p, 3.0, 1000, 200), domain_error);
    CHECK_THROWS_AS(acip_histogram(p, 3.0, 100000, 1), domain_error);
}
