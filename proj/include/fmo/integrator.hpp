// integrator.hpp: fixed-step RK4 with a step-doubling convergence guard
//
// Generic over any state type S with `S + S`, `double * S` and a free
// `bool is_finite(const S&)` found by ADL.

#pragma once

#include "fmo/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <string>
#include <vector>

namespace fmo {

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(std::complex<double> z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

template <class S>
concept OdeState = std::copyable<S> && requires(const S a, const S b, double h) {
    { a + b } -> std::convertible_to<S>;
    { h * a } -> std::convertible_to<S>;
    { is_finite(a) } -> std::convertible_to<bool>;
};

struct Sample {
    double t = 0.0;
    std::array<double, 7> populations{};  // n_mm / N0 per site
    double sink = 0.0;                    // absolute sink population n_8
    std::vector<double> aux;              // theory-specific observables, see Trajectory::aux_names
};

struct Trajectory {
    int n0 = 1;
    std::vector<Sample> samples;
    std::vector<std::string> aux_names;
    double final_efficiency = 0.0;
    // Final sink population of the step/2 rerun (equals the last sample's sink with the guard off).
    double guard_sink = 0.0;

    std::vector<double> times() const {
        std::vector<double> t;
        t.reserve(samples.size());
        for (const auto& s : samples) t.push_back(s.t);
        return t;
    }
};

struct IntegrationOptions {
    double horizon = 5.0;
    double step = 0.001;
    double sample_interval = 0.01;
    bool guard = true;
    double guard_tolerance = 1e-6;  // absolute, on the final sink population
};

// Classical fourth-order Runge–Kutta update.
template <OdeState S, class F>
S rk4_step(const F& derivative, const S& state, double t, double h) {
    const S k1 = derivative(t, state);
    const S k2 = derivative(t + 0.5 * h, state + (0.5 * h) * k1);
    const S k3 = derivative(t + 0.5 * h, state + (0.5 * h) * k2);
    const S k4 = derivative(t + h, state + h * k3);
    S next = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!is_finite(next)) throw NumericalError("rk4_step: non-finite state", t + h);
    return next;
}

namespace detail {

template <OdeState S, class F, class Observe>
S run_fixed(const F& derivative, S state, double horizon, double step, double sample_interval,
            const Observe& observe, std::vector<Sample>* record) {
    const long long n_steps = std::max(1LL, std::llround(horizon / step));
    const long long stride = std::max(1LL, std::llround(sample_interval / step));
    if (record) record->push_back(observe(0.0, state));
    for (long long k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * step;
        state = rk4_step(derivative, state, t, step);
        if (record && ((k + 1) % stride == 0 || k + 1 == n_steps)) {
            record->push_back(observe(static_cast<double>(k + 1) * step, state));
        }
    }
    return state;
}

} // namespace detail

// Integrates from t = 0 to the horizon, sampling every sample_interval. With the
// guard on, the run is repeated at step/2 and the final sink populations must
// agree within guard_tolerance, else StepSizeError.
//
// observe(t, state) -> Sample. final_efficiency is left for the caller.
template <OdeState S, class F, class Observe>
Trajectory integrate(const F& derivative, const S& initial, const IntegrationOptions& opt,
                     const Observe& observe) {
    if (!(opt.step > 0.0) || !(opt.horizon > 0.0) || opt.step > opt.horizon) {
        throw DomainError("integrate: need 0 < step <= horizon");
    }
    if (opt.sample_interval < opt.step) {
        throw DomainError("integrate: sample interval must be >= step");
    }
    Trajectory traj;
    detail::run_fixed(derivative, initial, opt.horizon, opt.step, opt.sample_interval, observe,
                      &traj.samples);
    if (opt.guard) {
        const S half = detail::run_fixed(derivative, initial, opt.horizon, 0.5 * opt.step,
                                         opt.sample_interval, observe, nullptr);
        const Sample last = observe(traj.samples.back().t, half);
        const double diff = std::abs(last.sink - traj.samples.back().sink);
        if (!(diff <= opt.guard_tolerance)) {
            throw StepSizeError("step-doubling guard failed: final sink populations differ by " +
                                std::to_string(diff) + " (tolerance " +
                                std::to_string(opt.guard_tolerance) + "); use a smaller step than " +
                                std::to_string(opt.step) + " ps");
        }
        traj.guard_sink = last.sink;
    } else {
        traj.guard_sink = traj.samples.back().sink;
    }
    return traj;
}

} // namespace fmo
