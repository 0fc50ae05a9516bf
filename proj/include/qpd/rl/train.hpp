#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qpd/rl/environment.hpp"
#include "qpd/rl/policy.hpp"
#include "qpd/rl/qfunction.hpp"

namespace qpd::rl {

struct TrainingConfig {
    double learning_rate = 0.1; // in (0, 1]
    double discount = 0.95;     // in [0, 1)
    std::size_t episodes = 1000;
    std::size_t max_steps = 100;
    std::uint64_t seed = 0;
};

struct RunStats {
    std::vector<double> episode_returns;
    std::vector<std::uint64_t> episode_steps;
    std::uint64_t decisions = 0;
    DecisionStats totals;
    std::vector<double> selection_errors; // encoding error per quantum decision
};

// one-step TD backup: Q(s,a) += lr * (r + gamma * max_a' Q(s',a') - Q(s,a)),
// bootstrapping 0 at terminal states
void td_update(QFunction& q, std::size_t s, std::size_t a, double reward,
               std::size_t s_next, const std::vector<std::size_t>& actions_s,
               const std::vector<std::size_t>& actions_next, bool next_terminal,
               const TrainingConfig& cfg);

// full loop: select with the configured selector, act, update, repeat
RunStats train(const Environment& env, QFunction& q, const PolicyConfig& policy,
               const TrainingConfig& cfg);

// greedy action per state (ties to the first maximizer)
std::size_t greedy_action(const QFunction& q, std::size_t s,
                          const std::vector<std::size_t>& actions);

// return of the greedy policy from the initial state (deterministic envs)
double greedy_return(const Environment& env, const QFunction& q,
                     std::size_t max_steps, std::uint64_t seed);

} // namespace qpd::rl
