#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "adaptmap/common.hpp"

namespace adaptmap {

/// Dormand-Prince 5(4) embedded Runge-Kutta stepper with FSAL, a standard
/// step-size controller, and cubic Hermite dense output. State dimension is a
/// compile-time constant; the right-hand side is any callable
/// f(t, const state&, state&).
template <int N>
class rk45 {
public:
    using state = std::array<double, N>;

    struct step_record {
        double t0 = 0, t1 = 0;
        state y0{}, y1{};
        state f0{}, f1{};
    };

    double atol = 1e-11;
    double rtol = 1e-11;
    double h_min = 1e-24;
    double h_max = 1e18;
    long max_steps = 2'000'000;

    template <class RHS>
    void start(RHS&& f, double t, const state& y) {
        t_ = t;
        y_ = y;
        f(t_, y_, k_[0]);
        accepted_ = 0;
        rejected_ = 0;
        h_ = initial_step();
        have_fsal_ = true;
    }

    double time() const { return t_; }
    const state& value() const { return y_; }
    long accepted_steps() const { return accepted_; }

    void suggest_step(double h) { h_ = std::min(h_, std::max(h, h_min)); }
    void limit_step(double hmax) { h_max = hmax; }

    /// Advances one accepted step, returning its record for event handling.
    template <class RHS>
    step_record step(RHS&& f) {
        state y1, err, k7;
        for (;;) {
            if (accepted_ + rejected_ > max_steps)
                throw numeric_error("rk45: step budget exhausted at t = " + std::to_string(t_));
            const double h = std::min(h_, h_max);
            attempt(f, h, y1, err, k7);
            const double e = error_norm(y1, err);
            if (e <= 1.0) {
                step_record rec;
                rec.t0 = t_;
                rec.t1 = t_ + h;
                rec.y0 = y_;
                rec.y1 = y1;
                rec.f0 = k_[0];
                rec.f1 = k7;
                t_ += h;
                y_ = y1;
                k_[0] = k7; // FSAL
                ++accepted_;
                h_ = h * std::clamp(0.9 * std::pow(std::max(e, 1e-10), -0.2), 0.2, 5.0);
                return rec;
            }
            ++rejected_;
            h_ = h * std::clamp(0.9 * std::pow(e, -0.2), 0.1, 0.9);
            if (h_ < h_min)
                throw numeric_error("rk45: step size underflow at t = " + std::to_string(t_));
        }
    }

    /// Integrates until t_end (last step truncated to land exactly).
    template <class RHS>
    void integrate_to(RHS&& f, double t_end) {
        while (t_ < t_end) {
            h_ = std::min(h_, t_end - t_);
            step(f);
        }
    }

    /// Cubic Hermite interpolant on a step record, theta in [0, 1].
    static state dense(const step_record& r, double theta) {
        const double h = r.t1 - r.t0;
        const double t2 = theta * theta, t3 = t2 * theta;
        const double c0 = 2 * t3 - 3 * t2 + 1;
        const double c1 = t3 - 2 * t2 + theta;
        const double c2 = -2 * t3 + 3 * t2;
        const double c3 = t3 - t2;
        state out;
        for (int i = 0; i < N; ++i)
            out[i] = c0 * r.y0[i] + c1 * h * r.f0[i] + c2 * r.y1[i] + c3 * h * r.f1[i];
        return out;
    }

private:
    double t_ = 0;
    state y_{};
    state k_[7]{};
    double h_ = 1e-6;
    long accepted_ = 0, rejected_ = 0;
    bool have_fsal_ = false;

    double initial_step() const {
        double h = std::min(h_max, 1e-2);
        for (int i = 0; i < N; ++i) {
            const double scale = atol + rtol * std::abs(y_[i]);
            const double df = std::abs(k_[0][i]);
            if (df > 0) h = std::min(h, 0.01 * scale / df);
        }
        return std::clamp(h, h_min, h_max);
    }

    template <class RHS>
    void attempt(RHS&& f, double h, state& y1, state& err, state& k7) {
        static constexpr double c[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
        static constexpr double a2[] = {1.0 / 5};
        static constexpr double a3[] = {3.0 / 40, 9.0 / 40};
        static constexpr double a4[] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
        static constexpr double a5[] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561,
                                        -212.0 / 729};
        static constexpr double a6[] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                                        -5103.0 / 18656};
        static constexpr double a7[] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192,
                                        -2187.0 / 6784, 11.0 / 84};
        static constexpr double e[] = {71.0 / 57600,     0.0,          -71.0 / 16695, 71.0 / 1920,
                                       -17253.0 / 339200, 22.0 / 525,  -1.0 / 40};

        state tmp;
        auto stage = [&](const double* a, int n, double ci, state& kout) {
            for (int i = 0; i < N; ++i) {
                double acc = 0;
                for (int j = 0; j < n; ++j) acc += a[j] * k_[j][i];
                tmp[i] = y_[i] + h * acc;
            }
            f(t_ + ci * h, tmp, kout);
        };
        stage(a2, 1, c[1], k_[1]);
        stage(a3, 2, c[2], k_[2]);
        stage(a4, 3, c[3], k_[3]);
        stage(a5, 4, c[4], k_[4]);
        stage(a6, 5, c[5], k_[5]);
        for (int i = 0; i < N; ++i) {
            double acc = 0;
            for (int j = 0; j < 6; ++j) acc += a7[j] * k_[j][i];
            y1[i] = y_[i] + h * acc;
        }
        f(t_ + h, y1, k7);
        k_[6] = k7;
        for (int i = 0; i < N; ++i) {
            double acc = 0;
            for (int j = 0; j < 7; ++j) acc += e[j] * k_[j][i];
            err[i] = h * acc;
        }
    }

    double error_norm(const state& y1, const state& err) const {
        double s = 0;
        for (int i = 0; i < N; ++i) {
            const double scale = atol + rtol * std::max(std::abs(y_[i]), std::abs(y1[i]));
            const double q = err[i] / scale;
            s += q * q;
        }
        return std::sqrt(s / N);
    }
};

} // namespace adaptmap
