#include "qpd/rl/train.hpp"

#include <algorithm>

#include "qpd/errors.hpp"

namespace qpd::rl {

void td_update(QFunction& q, std::size_t s, std::size_t a, double reward,
               std::size_t s_next, const std::vector<std::size_t>& actions_s,
               const std::vector<std::size_t>& actions_next, bool next_terminal,
               const TrainingConfig& cfg) {
    if (std::find(actions_s.begin(), actions_s.end(), a) == actions_s.end())
        throw Error("action not allowed in this state");
    if (cfg.learning_rate <= 0.0 || cfg.learning_rate > 1.0)
        throw ConfigError("learning rate must be in (0, 1]");
    if (cfg.discount < 0.0 || cfg.discount >= 1.0)
        throw ConfigError("discount must be in [0, 1)");

    double bootstrap = 0.0;
    if (!next_terminal && !actions_next.empty()) {
        bootstrap = q.evaluate(s_next, actions_next[0]);
        for (std::size_t i = 1; i < actions_next.size(); ++i)
            bootstrap = std::max(bootstrap, q.evaluate(s_next, actions_next[i]));
    }
    const double target = reward + cfg.discount * bootstrap;
    const double delta = target - q.evaluate(s, a);
    q.td_step(s, a, cfg.learning_rate, delta);
}

RunStats train(const Environment& env, QFunction& q, const PolicyConfig& policy,
               const TrainingConfig& cfg) {
    if (cfg.learning_rate <= 0.0 || cfg.learning_rate > 1.0)
        throw ConfigError("learning rate must be in (0, 1]");
    if (cfg.discount < 0.0 || cfg.discount >= 1.0)
        throw ConfigError("discount must be in [0, 1)");

    RunStats stats;
    Rng rng(cfg.seed);
    CountCache cache;

    for (std::size_t ep = 0; ep < cfg.episodes; ++ep) {
        std::size_t s = env.initial_state();
        const double temperature = policy.temperature(ep);
        double ret = 0.0;
        std::uint64_t steps = 0;

        for (std::size_t step = 0; step < cfg.max_steps && !env.is_terminal(s); ++step) {
            const std::vector<std::size_t>& actions = env.allowed_actions(s);
            const Selection sel =
                policy.selector == PolicyConfig::Selector::quantum
                    ? select_action_quantum(q, s, actions, policy, temperature, rng, &cache)
                    : select_action_classical(q, s, actions, policy, temperature, rng);
            stats.totals += sel.stats;
            ++stats.decisions;
            if (policy.selector == PolicyConfig::Selector::quantum)
                stats.selection_errors.push_back(sel.stats.encoding_error);

            const StepOutcome out = env.step(s, sel.action, rng);
            const bool terminal = env.is_terminal(out.next_state);
            static const std::vector<std::size_t> kNone;
            td_update(q, s, sel.action, out.reward, out.next_state, actions,
                      terminal ? kNone : env.allowed_actions(out.next_state),
                      terminal, cfg);
            ret += out.reward;
            ++steps;
            s = out.next_state;
        }
        stats.episode_returns.push_back(ret);
        stats.episode_steps.push_back(steps);
    }
    return stats;
}

std::size_t greedy_action(const QFunction& q, std::size_t s,
                          const std::vector<std::size_t>& actions) {
    if (actions.empty()) throw Error("no allowed actions");
    std::size_t best = actions[0];
    double best_v = q.evaluate(s, actions[0]);
    for (std::size_t i = 1; i < actions.size(); ++i) {
        const double v = q.evaluate(s, actions[i]);
        if (v > best_v) {
            best_v = v;
            best = actions[i];
        }
    }
    return best;
}

double greedy_return(const Environment& env, const QFunction& q,
                     std::size_t max_steps, std::uint64_t seed) {
    Rng rng(seed);
    std::size_t s = env.initial_state();
    double ret = 0.0;
    for (std::size_t step = 0; step < max_steps && !env.is_terminal(s); ++step) {
        const StepOutcome out =
            env.step(s, greedy_action(q, s, env.allowed_actions(s)), rng);
        ret += out.reward;
        s = out.next_state;
    }
    return ret;
}

} // namespace qpd::rl
