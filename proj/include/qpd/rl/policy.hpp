#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qpd/counting.hpp"
#include "qpd/rl/qfunction.hpp"
#include "qpd/rng.hpp"

namespace qpd::rl {

// Equal-width split of the value range [m, M]. Intervals are half-open
// [lo, hi) with the last one closed; the degenerate m == M case collapses
// to a single interval.
struct IntervalPartition {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> boundaries; // J + 1 ascending values

    std::size_t intervals() const { return boundaries.size() - 1; }
    double midpoint(std::size_t j) const;
    std::size_t interval_of(double value) const; // throws StalePartitionError
};

IntervalPartition partition_intervals(double m, double big_m, std::size_t j_count);

struct ClassAssignment {
    std::vector<std::size_t> interval_of_action;         // per action position
    std::vector<std::vector<std::size_t>> class_members; // J lists of positions
};

ClassAssignment classify_actions(const QFunction& q, std::size_t s,
                                 const std::vector<std::size_t>& actions,
                                 const IntervalPartition& p);
// same, from already-evaluated values
ClassAssignment classify_values(const std::vector<double>& values,
                                const IntervalPartition& p);

// Boltzmann-like weight per class: |C_j| * exp(mid(I_j)/T), normalized;
// empty classes get probability zero.
std::vector<double> class_probabilities(const IntervalPartition& p,
                                        const std::vector<std::size_t>& counts,
                                        double temperature);

struct PolicyConfig {
    std::size_t j_intervals = 4;
    // exponential temperature decay
    double t_start = 1.0;
    double t_min = 0.05;
    double t_decay = 0.995;

    counting::CountingConfig counting; // precision_bits 0: derive from |A_s|
    enum class Selector { quantum, classical };
    Selector selector = Selector::quantum;

    // class weights from the exact per-action Boltzmann sums instead of the
    // count-times-midpoint surrogate; costs |A_s| evaluations, so it exists
    // for comparison runs only
    bool exact_sum_weights = false;

    // re-run quantum counting on every decision (the algorithm box order);
    // when false, cached counts are reused while the class membership of a
    // state is unchanged
    bool recount_each_decision = true;

    double temperature(std::size_t episode) const;
};

// per-state cache of class counts, keyed by a membership signature
struct CountCache {
    struct Entry {
        std::size_t signature = 0;
        std::vector<std::size_t> counts;
    };
    std::vector<Entry> by_state; // indexed by state id; empty counts = vacant
};

struct DecisionStats {
    std::uint64_t j_calls = 0;
    std::uint64_t grover_iterations = 0;
    std::uint64_t counting_invocations = 0;
    std::uint64_t classical_q_evals = 0;
    double encoding_error = 0.0;

    DecisionStats& operator+=(const DecisionStats& other);
};

struct Selection {
    std::size_t action = 0;
    DecisionStats stats;
};

// Quantum pipeline: partition, classify, count every class, weight, encode
// the class distribution on the register, sample with the ancilla rule.
// One J call is charged per oracle application (counting run, Grover
// iteration, or per-class tick setup), modeling superposed evaluation.
// cache may be null; it is consulted only when the policy disables
// per-decision recounting.
Selection select_action_quantum(const QFunction& q, std::size_t s,
                                const std::vector<std::size_t>& actions,
                                const PolicyConfig& policy, double temperature,
                                Rng& rng, CountCache* cache = nullptr);

// Classical baseline: evaluates every action (|A_s| calls), aggregates into
// the same class distribution, samples directly.
Selection select_action_classical(const QFunction& q, std::size_t s,
                                  const std::vector<std::size_t>& actions,
                                  const PolicyConfig& policy, double temperature,
                                  Rng& rng);

// the per-action distribution both selectors target, for analysis/tests
std::vector<double> action_distribution(const QFunction& q, std::size_t s,
                                        const std::vector<std::size_t>& actions,
                                        const PolicyConfig& policy,
                                        double temperature);

} // namespace qpd::rl
