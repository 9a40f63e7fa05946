#include <doctest.h>

#include <cmath>
#include <random>

#include "adaptmap/model.hpp"

using namespace adaptmap;

namespace {
model_params standard() {
    return {nonlinearity::quartic, 0.2, 0.7, 2.0, 1.0, 0.4, 1.3};
}
} // namespace

TEST_CASE("field evaluation at the standard parameter set") {
    const model_params p = standard();
    const auto [dv, dw] = eval_field(p, 1.3, 0.0);
    CHECK(dv == doctest::Approx(5.3761).epsilon(1e-12));
    CHECK(dw == doctest::Approx(0.364).epsilon(1e-12));
}

TEST_CASE("field vanishes on the nullclines") {
    const model_params p = standard();
    for (double v : {-1.0, 0.3, 1.7}) {
        CHECK(eval_field(p, v, f_eval(p, v) + p.I).dv == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(eval_field(p, v, p.b * v).dw == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("non-finite inputs are rejected") {
    const model_params p = standard();
    CHECK_THROWS_AS(eval_field(p, std::nan(""), 0.0), domain_error);
    CHECK_THROWS_AS(eval_field(p, 0.0, std::numeric_limits<double>::infinity()), domain_error);
    model_params bad = p;
    bad.eps = -0.1;
    CHECK_THROWS_AS(bad.validate(), domain_error);
}

TEST_CASE("fold point: quartic closed form") {
    model_params p = standard();
    const fold_point fp = find_fold(p);
    CHECK(fp.v_fold == doctest::Approx(-std::cbrt(0.1)).epsilon(1e-12));
    CHECK(fp.w_fold == doctest::Approx(1.8607523349910582).epsilon(1e-9));
    CHECK(fp.p0 == doctest::Approx(2.8607523349910582).epsilon(1e-9));

    p.a = 0.5;
    CHECK(find_fold(p).v_fold == doctest::Approx(-std::cbrt(0.25)).epsilon(1e-12));
}

TEST_CASE("fold point: exponential closed form") {
    model_params p = standard();
    p.family = nonlinearity::exponential;
    const fold_point fp = find_fold(p);
    CHECK(fp.v_fold == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(fp.w_fold == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(fp.p0 == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("fold agrees with the closed form for random quartic shapes") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ua(0.01, 2.0);
    model_params p = standard();
    for (int i = 0; i < 100; ++i) {
        p.a = ua(rng);
        const double expect = -std::cbrt(p.a / 2.0);
        CHECK(std::abs(find_fold(p).v_fold - expect) < 1e-12);
    }
}

TEST_CASE("landmarks at the standard parameter set") {
    const model_params p = standard();
    const landmarks lm = compute_landmarks(p);
    CHECK(lm.w_star == doctest::Approx(5.3761).epsilon(1e-12));
    CHECK(lm.w_star2 == doctest::Approx(0.91).epsilon(1e-12));
    CHECK(lm.w_star - lm.w_star2 == doctest::Approx(4.4661).epsilon(1e-10));
    CHECK(lm.p0 == doctest::Approx(lm.w_fold + p.d).epsilon(1e-15));
    CHECK_FALSE(lm.plateau.has_value());

    model_params q = p;
    q.v_reset = lm.v_fold;
    CHECK(compute_landmarks(q).w_star == doctest::Approx(lm.w_fold).epsilon(1e-14));
}

TEST_CASE("w_star increases with v_reset right of the fold") {
    model_params p = standard();
    const double v_fold = find_fold(p).v_fold;
    double prev = -1e300;
    for (int i = 0; i < 100; ++i) {
        p.v_reset = v_fold + 1e-3 + i * 0.03;
        const double ws = compute_landmarks(p).w_star;
        CHECK(ws > prev);
        prev = ws;
    }
}

TEST_CASE("assumptions pass at the standard parameter set") {
    const assumption_report rep = check_assumptions(standard());
    CHECK(rep.all_pass());
    CHECK(rep.equilibrium_gap == doctest::Approx(1.9051).epsilon(1e-4));
}

TEST_CASE("no-equilibrium clause fails for small input current") {
    model_params p = standard();
    p.I = 0.05;
    const assumption_report rep = check_assumptions(p);
    CHECK_FALSE(rep.no_equilibrium.pass);
    CHECK(rep.equilibrium_gap == doctest::Approx(0.05 - 0.0949).epsilon(1e-2));
}

TEST_CASE("reset clause fails left of the fold") {
    model_params p = standard();
    p.v_reset = find_fold(p).v_fold - 0.1;
    CHECK_FALSE(check_assumptions(p).reset_right_of_fold.pass);
}

TEST_CASE("exponential plateau clause constrains eps") {
    model_params p = standard();
    p.family = nonlinearity::exponential;
    p.eps = 0.4; // 0.4 (0.7 + sqrt 2) < 1
    CHECK(check_assumptions(p).plateau_clause.pass);
    p.eps = 0.5; // 0.5 (0.7 + sqrt 2) > 1
    CHECK_FALSE(check_assumptions(p).plateau_clause.pass);
    CHECK(check_assumptions(p).blowup_clause.pass);
}
