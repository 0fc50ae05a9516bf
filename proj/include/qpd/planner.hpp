#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace qpd::planner {

// Classical summary of the register between Grover iterations. k_bar is the
// common amplitude of the states being amplified this step, l_bar the mean
// amplitude of the other states, alpha the common amplitude of states no
// step has touched yet, and b the weight of the unticked (ancilla-1) branch.
// All amplitudes are in the unit-norm convention of the ancilla-1 branch.
struct PlannerState {
    std::size_t n_values = 0; // N
    std::size_t r = 0;        // size of the marked set this step
    double k_bar = 0.0;
    double l_bar = 0.0;
    double alpha = 0.0;
    double b = 1.0;
    int step = 1;              // 1-based step index
    int t = 0;                 // iterations performed within this step
    std::size_t untouched = 0; // never-amplified states outside the marked set

    static PlannerState initial_uniform(std::size_t n_values, std::size_t r);
};

struct StepPlan {
    std::size_t class_id = 0;
    double target_per_state = 0.0;
    int t_f = 0;
    double predicted_k_bar = 0.0;
    double predicted_l_bar = 0.0;
    double predicted_alpha = 0.0;
    double achieved_per_state = 0.0; // b^2 k_bar(t_f)^2
    double abs_error = 0.0;          // |achieved - target|
};

struct EncodingPlan {
    std::vector<StepPlan> steps;           // one per encoded class
    long total_grover_iterations = 0;
    std::vector<double> class_probability; // per class, remainder included
    std::vector<double> state_probability; // per value, measurement-rule semantics
};

// w = 2 arcsin(sqrt(r/N)), the per-iteration rotation angle
double angular_rate(std::size_t n_values, std::size_t r);

struct Evolved {
    double k_bar = 0.0;
    double l_bar = 0.0;
    bool l_bar_defined = true; // false when r == N (no unmarked states)
};

// closed-form values after t iterations from the step's starting pair
Evolved evolve(double k0, double l0, std::size_t n_values, std::size_t r, int t);

// alpha after one more iteration, from the current summary
double alpha_next(const PlannerState& s);

// advance the summary by t iterations
PlannerState advanced(PlannerState s, int t);

struct IterationBound {
    double exact = 0.0;
    double leading_order = 0.0;
    bool degenerate = false; // l_bar(0) <= 0 or r == N
};

// upper bound on the useful number of iterations for the current step
IterationBound iteration_upper_bound(const PlannerState& s);

// nominal probability granularity of one iteration, c/sqrt(N) with c = 1
double precision_bound(std::size_t n_values);

constexpr int kNoIterationCap = std::numeric_limits<int>::max();

// Pick t_f in [0, min(max_iterations, ceil(bound))] minimizing
// |b^2 k_bar(t)^2 - target_per_state|; ties go to the smaller t.
// Throws OvershootError if the target exceeds the best reachable value
// by more than overshoot_tolerance (< 0 selects precision_bound(N)).
StepPlan plan_step(const PlannerState& s, double target_per_state,
                   int max_iterations = kNoIterationCap,
                   double overshoot_tolerance = -1.0);

// Re-seed the summary for the next step, after the current class (at t_f)
// has been ticked away. next_r is the size of the next marked set.
PlannerState link_steps(const PlannerState& at_t_f, std::size_t next_r);

} // namespace qpd::planner
