#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "qpd/planner.hpp"
#include "qpd/rng.hpp"
#include "qpd/statevector.hpp"

namespace qpd::encoder {

// A discrete distribution over N values, expressed class-wise: the classes
// partition [0, N), every member of a class gets the same probability, and
// the last class is realized as the normalization remainder (it is never
// amplified; its mass is whatever stays on ancilla 1).
struct TargetDistribution {
    std::size_t n_values = 0;
    std::vector<MarkedSet> classes;
    std::vector<double> class_targets; // one per class, summing to 1
};

struct EncodeOptions {
    int max_iterations_per_step = planner::kNoIterationCap;
    double overshoot_tolerance = -1.0; // < 0: use precision_bound(N)
    bool largest_class_as_remainder = false;
    // invoked after every conditional Grover and every tick, for tracing
    std::function<void(const StateVector&)> after_each_op;
};

struct EncodedState {
    StateVector state;
    TargetDistribution dist;
    planner::EncodingPlan plan;
    std::vector<double> class_probability; // achieved, per class
    std::vector<double> state_probability; // achieved, per value
    double max_class_error = 0.0;
};

// Checks the partition/normalization invariants and per-class feasibility
// (classical dry run). Throws ConfigError on any violation.
void validate_targets(const TargetDistribution& dist, const EncodeOptions& opt = {});

// classical dry run: the full step schedule without touching a state vector
planner::EncodingPlan plan_encoding(const TargetDistribution& dist,
                                    const EncodeOptions& opt = {});

// run the schedule on the simulator: amplify class, tick its members,
// re-seed, repeat; the last class stays on ancilla 1
EncodedState encode(const TargetDistribution& dist, const EncodeOptions& opt = {});

// measurement rule: read the ancilla first; 0 -> the measured value,
// 1 -> a uniformly chosen member of the remainder class
std::size_t sample_value(const EncodedState& enc, Rng& rng);

struct AchievedDistribution {
    std::vector<double> per_class;
    std::vector<double> per_state;
    double remainder_mass = 0.0;
};

// probabilities implied by the sampling rule, recomputed from the state
AchievedDistribution achieved_distribution(const EncodedState& enc);

// Random partition of [0, N) into j_classes non-empty classes with random
// targets; encoded-class targets are scaled by headroom so the schedule
// stays feasible. Used by the sweep command and the scaling experiments.
// max_class_size caps the encoded (non-remainder) class sizes; 0 leaves
// them unconstrained. The 1/sqrt(N) precision regime needs small classes,
// so the scaling experiments run with the cap at 1.
TargetDistribution random_distribution(std::size_t n_values, std::size_t j_classes,
                                       Rng& rng, double headroom = 0.85,
                                       std::size_t max_class_size = 0);

} // namespace qpd::encoder
