#include "qpd/rl/policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qpd/encoder.hpp"
#include "qpd/errors.hpp"

namespace qpd::rl {

double IntervalPartition::midpoint(std::size_t j) const {
    if (j >= intervals()) throw Error("interval index out of range");
    return 0.5 * (boundaries[j] + boundaries[j + 1]);
}

std::size_t IntervalPartition::interval_of(double value) const {
    if (value < lo || value > hi)
        throw StalePartitionError("value " + std::to_string(value) +
                                  " outside the partition range [" +
                                  std::to_string(lo) + ", " + std::to_string(hi) + "]");
    const std::size_t j = intervals();
    if (value >= boundaries[j]) return j - 1; // M lands in the last interval
    for (std::size_t i = 0; i < j; ++i)
        if (value < boundaries[i + 1]) return i;
    return j - 1;
}

IntervalPartition partition_intervals(double m, double big_m, std::size_t j_count) {
    if (j_count < 1) throw Error("at least one interval is required");
    if (big_m < m) throw Error("interval maximum below minimum");

    IntervalPartition p;
    p.lo = m;
    p.hi = big_m;
    if (big_m == m) { // degenerate: everything falls into one class
        p.boundaries = {m, m};
        return p;
    }
    p.boundaries.resize(j_count + 1);
    const double width = (big_m - m) / static_cast<double>(j_count);
    for (std::size_t i = 0; i <= j_count; ++i)
        p.boundaries[i] = m + width * static_cast<double>(i);
    p.boundaries[j_count] = big_m;
    return p;
}

ClassAssignment classify_values(const std::vector<double>& values,
                                const IntervalPartition& p) {
    ClassAssignment ca;
    ca.interval_of_action.resize(values.size());
    ca.class_members.resize(p.intervals());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::size_t j = p.interval_of(values[i]);
        ca.interval_of_action[i] = j;
        ca.class_members[j].push_back(i);
    }
    return ca;
}

ClassAssignment classify_actions(const QFunction& q, std::size_t s,
                                 const std::vector<std::size_t>& actions,
                                 const IntervalPartition& p) {
    std::vector<double> values(actions.size());
    for (std::size_t i = 0; i < actions.size(); ++i)
        values[i] = q.evaluate(s, actions[i]);
    return classify_values(values, p);
}

std::vector<double> class_probabilities(const IntervalPartition& p,
                                        const std::vector<std::size_t>& counts,
                                        double temperature) {
    if (counts.size() != p.intervals())
        throw Error("one count per interval is required");
    if (temperature <= 0.0) throw Error("temperature must be positive");

    // shift by the largest populated midpoint so the exponentials stay tame
    double top = -std::numeric_limits<double>::infinity();
    std::size_t total = 0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
        total += counts[j];
        if (counts[j] > 0) top = std::max(top, p.midpoint(j));
    }
    if (total == 0) throw Error("all classes are empty");

    std::vector<double> w(counts.size(), 0.0);
    double z = 0.0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
        if (counts[j] == 0) continue;
        w[j] = static_cast<double>(counts[j]) *
               std::exp((p.midpoint(j) - top) / temperature);
        z += w[j];
    }
    for (auto& x : w) x /= z;
    return w;
}

double PolicyConfig::temperature(std::size_t episode) const {
    const double t = t_start * std::pow(t_decay, static_cast<double>(episode));
    return std::max(t_min, t);
}

DecisionStats& DecisionStats::operator+=(const DecisionStats& other) {
    j_calls += other.j_calls;
    grover_iterations += other.grover_iterations;
    counting_invocations += other.counting_invocations;
    classical_q_evals += other.classical_q_evals;
    encoding_error = std::max(encoding_error, other.encoding_error);
    return *this;
}

namespace {

struct Pipeline {
    std::vector<double> values;      // Q(s, a) per action position
    IntervalPartition partition;
    ClassAssignment assignment;
    double temperature = 0.0;
};

Pipeline evaluate_and_classify(const QFunction& q, std::size_t s,
                               const std::vector<std::size_t>& actions,
                               const PolicyConfig& policy, double temperature) {
    Pipeline pl;
    pl.temperature = temperature;
    pl.values.resize(actions.size());
    for (std::size_t i = 0; i < actions.size(); ++i)
        pl.values[i] = q.evaluate(s, actions[i]);
    const auto [lo, hi] = std::minmax_element(pl.values.begin(), pl.values.end());
    pl.partition = partition_intervals(*lo, *hi, policy.j_intervals);
    pl.assignment = classify_values(pl.values, pl.partition);
    return pl;
}

// class weights for the exact-sum comparison mode
std::vector<double> exact_sum_probabilities(const Pipeline& pl) {
    const std::size_t j = pl.partition.intervals();
    double top = *std::max_element(pl.values.begin(), pl.values.end());
    std::vector<double> w(j, 0.0);
    double z = 0.0;
    for (std::size_t c = 0; c < j; ++c) {
        for (std::size_t i : pl.assignment.class_members[c])
            w[c] += std::exp((pl.values[i] - top) / pl.temperature);
        z += w[c];
    }
    for (auto& x : w) x /= z;
    return w;
}

std::vector<double> weights_from_counts(const Pipeline& pl,
                                        const std::vector<std::size_t>& counts,
                                        const PolicyConfig& policy) {
    if (policy.exact_sum_weights) return exact_sum_probabilities(pl);
    return class_probabilities(pl.partition, counts, pl.temperature);
}

} // namespace

std::vector<double> action_distribution(const QFunction& q, std::size_t s,
                                        const std::vector<std::size_t>& actions,
                                        const PolicyConfig& policy,
                                        double temperature) {
    if (actions.empty()) throw Error("no allowed actions");
    if (actions.size() == 1) return {1.0};
    const Pipeline pl = evaluate_and_classify(q, s, actions, policy, temperature);
    std::vector<std::size_t> counts(pl.partition.intervals());
    for (std::size_t c = 0; c < counts.size(); ++c)
        counts[c] = pl.assignment.class_members[c].size();
    const std::vector<double> pj = weights_from_counts(pl, counts, policy);

    std::vector<double> pa(actions.size(), 0.0);
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) continue;
        const double per = pj[c] / static_cast<double>(counts[c]);
        for (std::size_t i : pl.assignment.class_members[c]) pa[i] = per;
    }
    return pa;
}

namespace {

// order-sensitive hash of the class membership lists
std::size_t membership_signature(const ClassAssignment& ca) {
    std::size_t h = 1469598103934665603ull;
    const auto mix = [&h](std::size_t v) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    for (const auto& members : ca.class_members) {
        mix(members.size());
        for (std::size_t i : members) mix(i);
        mix(~std::size_t{0});
    }
    return h;
}

} // namespace

Selection select_action_quantum(const QFunction& q, std::size_t s,
                                const std::vector<std::size_t>& actions,
                                const PolicyConfig& policy, double temperature,
                                Rng& rng, CountCache* cache) {
    if (actions.empty()) throw Error("no allowed actions");
    Selection sel;
    if (actions.size() == 1) { // nothing to choose; no quantum calls
        sel.action = actions[0];
        return sel;
    }

    const std::size_t n = actions.size();
    // classical min/max scan over Q (quantum min/max routines are out of
    // scope); the evaluations are logged under classical_q_evals
    const Pipeline pl = evaluate_and_classify(q, s, actions, policy, temperature);
    sel.stats.classical_q_evals += n;

    const std::size_t j = pl.partition.intervals();
    std::vector<MarkedSet> class_sets(j);
    for (std::size_t c = 0; c < j; ++c)
        class_sets[c] = MarkedSet(std::vector<std::size_t>(
            pl.assignment.class_members[c].begin(), pl.assignment.class_members[c].end()));

    counting::CountingConfig ccfg = policy.counting;
    if (ccfg.precision_bits == 0)
        ccfg.precision_bits = counting::CountingConfig::for_n(n).precision_bits;

    std::vector<std::size_t> counts;
    const bool use_cache = cache != nullptr && !policy.recount_each_decision;
    const std::size_t signature = use_cache ? membership_signature(pl.assignment) : 0;
    CountCache::Entry* slot = nullptr;
    if (use_cache) {
        if (cache->by_state.size() <= s) cache->by_state.resize(s + 1);
        slot = &cache->by_state[s];
        if (!slot->counts.empty() && slot->signature == signature)
            counts = slot->counts; // membership unchanged since the last count
    }
    if (counts.empty()) {
        const counting::ClassCounts cc =
            counting::count_all_classes(n, class_sets, ccfg, rng);
        sel.stats.counting_invocations += cc.estimates.size();
        sel.stats.j_calls += cc.estimates.size(); // one oracle application per run
        counts = cc.counts;
        if (slot != nullptr) {
            slot->signature = signature;
            slot->counts = counts;
        }
    }

    std::vector<double> pj = weights_from_counts(pl, counts, policy);

    // an off estimate can assign weight to an empty class; push that weight
    // back onto the populated ones before building the register schedule
    double dropped = 0.0;
    for (std::size_t c = 0; c < j; ++c) {
        if (class_sets[c].empty() && pj[c] > 0.0) {
            dropped += pj[c];
            pj[c] = 0.0;
        }
    }
    if (dropped > 0.0) {
        const double kept = 1.0 - dropped;
        if (kept <= 0.0) { // degenerate estimates: fall back to uniform
            std::size_t populated = 0;
            for (const auto& cs : class_sets) populated += cs.empty() ? 0 : 1;
            for (std::size_t c = 0; c < j; ++c)
                pj[c] = class_sets[c].empty() ? 0.0 : 1.0 / static_cast<double>(populated);
        } else {
            for (auto& x : pj) x /= kept;
        }
    }

    encoder::TargetDistribution dist;
    dist.n_values = n;
    for (std::size_t c = 0; c < j; ++c) {
        if (class_sets[c].empty()) continue;
        dist.classes.push_back(class_sets[c]);
        dist.class_targets.push_back(pj[c]);
    }

    const encoder::EncodedState enc = encoder::encode(dist);
    for (const auto& step : enc.plan.steps) {
        sel.stats.grover_iterations += static_cast<std::uint64_t>(step.t_f);
        sel.stats.j_calls += static_cast<std::uint64_t>(step.t_f); // oracle per iteration
        sel.stats.j_calls += 1;                                    // oracle build + tick
    }
    sel.stats.encoding_error = enc.max_class_error;

    sel.action = actions[encoder::sample_value(enc, rng)];
    return sel;
}

Selection select_action_classical(const QFunction& q, std::size_t s,
                                  const std::vector<std::size_t>& actions,
                                  const PolicyConfig& policy, double temperature,
                                  Rng& rng) {
    if (actions.empty()) throw Error("no allowed actions");
    Selection sel;
    if (actions.size() == 1) {
        sel.action = actions[0];
        return sel;
    }

    const std::vector<double> pa = action_distribution(q, s, actions, policy, temperature);
    sel.stats.classical_q_evals += actions.size();

    const double u = rng.uniform();
    double cum = 0.0;
    std::size_t pick = actions.size() - 1;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        cum += pa[i];
        if (u < cum) { pick = i; break; }
    }
    sel.action = actions[pick];
    return sel;
}

} // namespace qpd::rl
