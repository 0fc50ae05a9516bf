#include "qpd/planner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qpd/errors.hpp"

namespace qpd::planner {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kExhaustedTol = 1e-12;
} // namespace

PlannerState PlannerState::initial_uniform(std::size_t n_values, std::size_t r) {
    if (n_values == 0) throw Error("planner dimension must be positive");
    if (r == 0 || r > n_values) throw Error("marked count must be in [1, N]");
    PlannerState s;
    s.n_values = n_values;
    s.r = r;
    const double a = 1.0 / std::sqrt(static_cast<double>(n_values));
    s.k_bar = s.l_bar = s.alpha = a;
    s.b = 1.0;
    s.step = 1;
    s.t = 0;
    s.untouched = n_values - r;
    return s;
}

double angular_rate(std::size_t n_values, std::size_t r) {
    if (r == 0 || r > n_values) throw Error("marked count must be in [1, N]");
    return 2.0 * std::asin(std::sqrt(static_cast<double>(r) / static_cast<double>(n_values)));
}

Evolved evolve(double k0, double l0, std::size_t n_values, std::size_t r, int t) {
    if (t < 0) throw Error("iteration count must be non-negative");
    const double w = angular_rate(n_values, r);
    const double n = static_cast<double>(n_values);
    const double rr = static_cast<double>(r);
    const double c = std::cos(w * t);
    const double sn = std::sin(w * t);

    Evolved out;
    if (r == n_values) {
        // no unmarked states left; the iterate just alternates the sign
        out.k_bar = k0 * c;
        out.l_bar = 0.0;
        out.l_bar_defined = false;
        return out;
    }
    out.k_bar = k0 * c + l0 * std::sqrt((n - rr) / rr) * sn;
    out.l_bar = l0 * c - k0 * std::sqrt(rr / (n - rr)) * sn;
    return out;
}

double alpha_next(const PlannerState& s) {
    if (s.untouched == 0)
        throw Error("alpha recursion needs at least one untouched state");
    const double n = static_cast<double>(s.n_values);
    const double r = static_cast<double>(s.r);
    return (2.0 / n) * ((n - r) * s.l_bar - r * s.k_bar) - s.alpha;
}

PlannerState advanced(PlannerState s, int t) {
    if (t < 0) throw Error("iteration count must be non-negative");
    const double w = angular_rate(s.n_values, s.r);
    const double n = static_cast<double>(s.n_values);
    const double r = static_cast<double>(s.r);
    const double c = std::cos(w);
    const double sn = std::sin(w);
    const bool full = (s.r == s.n_values);
    const double kl = full ? 0.0 : std::sqrt((n - r) / r);
    const double lk = full ? 0.0 : std::sqrt(r / (n - r));

    for (int i = 0; i < t; ++i) {
        const double a_next = (s.untouched > 0) ? alpha_next(s) : 0.0;
        const double k_next = s.k_bar * c + s.l_bar * kl * sn;
        const double l_next = full ? 0.0 : s.l_bar * c - s.k_bar * lk * sn;
        s.alpha = a_next;
        s.k_bar = k_next;
        s.l_bar = l_next;
        ++s.t;
    }
    return s;
}

IterationBound iteration_upper_bound(const PlannerState& s) {
    IterationBound out;
    const double n = static_cast<double>(s.n_values);
    const double r = static_cast<double>(s.r);
    if (s.r == s.n_values || s.l_bar <= 0.0) {
        out.degenerate = true;
        return out;
    }
    const double ratio = (s.k_bar / s.l_bar) * std::sqrt(r / (n - r));
    out.exact = (kPi / 2.0 - std::atan(ratio)) / std::acos(1.0 - 2.0 * r / n);
    out.leading_order = -0.5 * (s.k_bar / s.l_bar) + (kPi / 4.0) * std::sqrt(n / r);
    if (out.exact < 0.0) out.exact = 0.0;
    return out;
}

double precision_bound(std::size_t n_values) {
    if (n_values == 0) throw Error("dimension must be positive");
    return 1.0 / std::sqrt(static_cast<double>(n_values));
}

StepPlan plan_step(const PlannerState& s, double target_per_state,
                   int max_iterations, double overshoot_tolerance) {
    if (target_per_state < 0.0 || target_per_state > 1.0)
        throw Error("target probability must lie in [0, 1]");
    if (max_iterations < 0) throw Error("iteration cap must be non-negative");

    const IterationBound bound = iteration_upper_bound(s);
    int t_hi = bound.degenerate ? 0 : static_cast<int>(std::ceil(bound.exact));
    t_hi = std::min(t_hi, max_iterations);

    const double b2 = s.b * s.b;
    int best_t = 0;
    double best_err = std::numeric_limits<double>::infinity();
    double best_achieved = 0.0;
    Evolved best_ev;
    double max_achievable = 0.0;

    for (int t = 0; t <= t_hi; ++t) {
        const Evolved ev = evolve(s.k_bar, s.l_bar, s.n_values, s.r, t);
        const double achieved = b2 * ev.k_bar * ev.k_bar;
        max_achievable = std::max(max_achievable, achieved);
        const double err = std::fabs(achieved - target_per_state);
        if (err < best_err) {
            best_err = err;
            best_t = t;
            best_achieved = achieved;
            best_ev = ev;
        }
    }

    const double tol = overshoot_tolerance >= 0.0 ? overshoot_tolerance
                                                  : precision_bound(s.n_values);
    if (target_per_state > max_achievable + tol) {
        throw OvershootError("target per-state probability " +
                                 std::to_string(target_per_state) +
                                 " exceeds best achievable " +
                                 std::to_string(max_achievable),
                             max_achievable, s.step);
    }

    StepPlan plan;
    plan.target_per_state = target_per_state;
    plan.t_f = best_t;
    plan.predicted_k_bar = best_ev.k_bar;
    plan.predicted_l_bar = best_ev.l_bar;
    plan.predicted_alpha = advanced(s, best_t).alpha;
    plan.achieved_per_state = best_achieved;
    plan.abs_error = best_err;
    return plan;
}

PlannerState link_steps(const PlannerState& at_t_f, std::size_t next_r) {
    const PlannerState& s = at_t_f;
    if (next_r == 0) throw Error("next marked count must be positive");
    if (next_r > s.untouched)
        throw Error("next marked set larger than the untouched pool");

    const double n = static_cast<double>(s.n_values);
    const double r = static_cast<double>(s.r);
    const double consumed = r * s.k_bar * s.k_bar; // within the ancilla-1 branch
    const double residual = 1.0 - consumed;
    if (residual < kExhaustedTol)
        throw ExhaustedBranchError(
            "no ancilla-1 mass left after step " + std::to_string(s.step), s.step);

    PlannerState next;
    next.n_values = s.n_values;
    next.r = next_r;
    next.b = s.b * std::sqrt(residual);
    const double scale = 1.0 / std::sqrt(residual); // = b_i / b_{i+1}
    next.k_bar = next.alpha = scale * s.alpha;
    next.l_bar = scale * ((n - r) * s.l_bar - static_cast<double>(next_r) * s.alpha) /
                 (n - static_cast<double>(next_r));
    next.step = s.step + 1;
    next.t = 0;
    next.untouched = s.untouched - next_r;
    return next;
}

} // namespace qpd::planner
