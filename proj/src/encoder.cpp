#include "qpd/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qpd/errors.hpp"

namespace qpd::encoder {

namespace {

constexpr double kSumTol = 1e-12;

void check_structure(const TargetDistribution& dist) {
    const std::size_t n = dist.n_values;
    const std::size_t j = dist.classes.size();
    if (n == 0) throw ConfigError("distribution dimension must be positive");
    if (j == 0) throw ConfigError("at least one class is required");
    if (dist.class_targets.size() != j)
        throw ConfigError("one target per class is required");
    if (dist.classes.back().empty())
        throw ConfigError("the remainder class must be non-empty");

    std::vector<char> seen(n, 0);
    for (const auto& cls : dist.classes) {
        for (std::size_t k : cls.indices()) {
            if (k >= n) throw ConfigError("class index beyond dimension");
            if (seen[k]) throw ConfigError("classes overlap at index " + std::to_string(k));
            seen[k] = 1;
        }
    }
    for (std::size_t k = 0; k < n; ++k)
        if (!seen[k]) throw ConfigError("classes leave index " + std::to_string(k) + " uncovered");

    double sum = 0.0;
    for (std::size_t c = 0; c < j; ++c) {
        const double p = dist.class_targets[c];
        if (p < 0.0) throw ConfigError("negative class target");
        if (dist.classes[c].empty() && p > 0.0)
            throw ConfigError("empty class " + std::to_string(c) + " cannot carry probability");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > kSumTol)
        throw ConfigError("class targets sum to " + std::to_string(sum) + ", expected 1");
}

// move the largest class to the back so it becomes the remainder; returns
// the permutation old_index -> new_index
std::vector<std::size_t> remainder_permutation(const TargetDistribution& dist) {
    const std::size_t j = dist.classes.size();
    std::size_t largest = 0;
    for (std::size_t c = 1; c < j; ++c)
        if (dist.classes[c].size() > dist.classes[largest].size()) largest = c;
    std::vector<std::size_t> perm(j);
    std::size_t pos = 0;
    for (std::size_t c = 0; c < j; ++c)
        if (c != largest) perm[c] = pos++;
    perm[largest] = j - 1;
    return perm;
}

TargetDistribution permuted(const TargetDistribution& dist,
                            const std::vector<std::size_t>& perm) {
    TargetDistribution out;
    out.n_values = dist.n_values;
    out.classes.resize(dist.classes.size());
    out.class_targets.resize(dist.class_targets.size());
    for (std::size_t c = 0; c < dist.classes.size(); ++c) {
        out.classes[perm[c]] = dist.classes[c];
        out.class_targets[perm[c]] = dist.class_targets[c];
    }
    return out;
}

// schedule the encoded steps; drive_state is optional (dry run when null)
planner::EncodingPlan run_schedule(const TargetDistribution& dist,
                                   const EncodeOptions& opt,
                                   StateVector* drive_state) {
    const std::size_t n = dist.n_values;
    const std::size_t j = dist.classes.size();

    planner::EncodingPlan plan;
    plan.class_probability.assign(j, 0.0);
    plan.state_probability.assign(n, 0.0);

    // first non-empty encoded class seeds the planner chain
    std::size_t first = j; // j: nothing to encode
    for (std::size_t c = 0; c + 1 < j; ++c)
        if (!dist.classes[c].empty()) { first = c; break; }

    planner::PlannerState ps;
    if (first < j)
        ps = planner::PlannerState::initial_uniform(n, dist.classes[first].size());

    double encoded_mass = 0.0;
    for (std::size_t c = 0; c + 1 < j; ++c) {
        const MarkedSet& cls = dist.classes[c];
        const std::size_t r = cls.size();
        planner::StepPlan sp;
        sp.class_id = c;
        if (r == 0) { // validated target 0; nothing to amplify or tick
            plan.steps.push_back(sp);
            continue;
        }
        const double per_state = dist.class_targets[c] / static_cast<double>(r);
        sp = planner::plan_step(ps, per_state, opt.max_iterations_per_step,
                                opt.overshoot_tolerance);
        sp.class_id = c;
        plan.steps.push_back(sp);
        plan.total_grover_iterations += sp.t_f;

        if (drive_state) {
            for (int it = 0; it < sp.t_f; ++it) {
                drive_state->apply_conditional_grover(cls);
                if (opt.after_each_op) opt.after_each_op(*drive_state);
            }
            for (std::size_t k : cls.indices()) {
                drive_state->apply_tick(k);
                if (opt.after_each_op) opt.after_each_op(*drive_state);
            }
        }

        plan.class_probability[c] = static_cast<double>(r) * sp.achieved_per_state;
        for (std::size_t k : cls.indices())
            plan.state_probability[k] = sp.achieved_per_state;
        encoded_mass += plan.class_probability[c];

        ps = planner::advanced(ps, sp.t_f);

        // link only if a later class still needs amplification
        std::size_t next = j - 1;
        bool more = false;
        for (std::size_t d = c + 1; d + 1 < j; ++d)
            if (!dist.classes[d].empty()) { next = d; more = true; break; }
        if (more) ps = planner::link_steps(ps, dist.classes[next].size());
    }

    // the last class keeps whatever mass is left on ancilla 1
    const double remainder = std::max(0.0, 1.0 - encoded_mass);
    plan.class_probability[j - 1] = remainder;
    const double per = remainder / static_cast<double>(dist.classes[j - 1].size());
    for (std::size_t k : dist.classes[j - 1].indices()) plan.state_probability[k] = per;
    return plan;
}

} // namespace

void validate_targets(const TargetDistribution& dist, const EncodeOptions& opt) {
    check_structure(dist);
    try {
        if (opt.largest_class_as_remainder) {
            const auto perm = remainder_permutation(dist);
            run_schedule(permuted(dist, perm), opt, nullptr);
        } else {
            run_schedule(dist, opt, nullptr);
        }
    } catch (const OvershootError& e) {
        throw ConfigError(std::string("infeasible target: ") + e.what());
    } catch (const ExhaustedBranchError& e) {
        throw ConfigError(std::string("infeasible schedule: ") + e.what());
    }
}

// When largest_class_as_remainder is set, results are reported in the
// reordered view (remainder last), same as encode().
planner::EncodingPlan plan_encoding(const TargetDistribution& dist,
                                    const EncodeOptions& opt) {
    check_structure(dist);
    if (opt.largest_class_as_remainder) {
        const auto perm = remainder_permutation(dist);
        return run_schedule(permuted(dist, perm), opt, nullptr);
    }
    return run_schedule(dist, opt, nullptr);
}

EncodedState encode(const TargetDistribution& dist, const EncodeOptions& opt) {
    check_structure(dist);

    TargetDistribution work = dist;
    std::vector<std::size_t> perm;
    if (opt.largest_class_as_remainder) {
        perm = remainder_permutation(dist);
        work = permuted(dist, perm);
    }

    StateVector sv = StateVector::uniform(work.n_values);
    if (opt.after_each_op) opt.after_each_op(sv);
    planner::EncodingPlan plan = run_schedule(work, opt, &sv);

    EncodedState enc{std::move(sv), std::move(work), std::move(plan), {}, {}, 0.0};
    const AchievedDistribution ach = achieved_distribution(enc);
    enc.class_probability = ach.per_class;
    enc.state_probability = ach.per_state;
    for (std::size_t c = 0; c < enc.dist.classes.size(); ++c)
        enc.max_class_error = std::max(
            enc.max_class_error,
            std::fabs(enc.class_probability[c] - enc.dist.class_targets[c]));
    return enc;
}

std::size_t sample_value(const EncodedState& enc, Rng& rng) {
    const StateVector& sv = enc.state;
    const MarkedSet& remainder = enc.dist.classes.back();
    const double mass1 = sv.ancilla_mass(1);
    const double u = rng.uniform() * sv.norm_squared();
    if (u < mass1)
        return remainder.indices()[rng.uniform_index(remainder.size())];

    double cum = mass1;
    std::size_t last = 0;
    for (std::size_t k = 0; k < sv.n_values(); ++k) {
        const double p = sv.probability(k, 0);
        if (p == 0.0) continue;
        last = k;
        cum += p;
        if (u < cum) return k;
    }
    return last;
}

AchievedDistribution achieved_distribution(const EncodedState& enc) {
    const StateVector& sv = enc.state;
    const std::size_t n = sv.n_values();
    const std::size_t j = enc.dist.classes.size();

    AchievedDistribution out;
    out.per_class.assign(j, 0.0);
    out.per_state.assign(n, 0.0);
    out.remainder_mass = sv.ancilla_mass(1);

    for (std::size_t k = 0; k < n; ++k) out.per_state[k] = sv.probability(k, 0);
    for (std::size_t c = 0; c + 1 < j; ++c)
        for (std::size_t k : enc.dist.classes[c].indices())
            out.per_class[c] += out.per_state[k];

    const MarkedSet& remainder = enc.dist.classes.back();
    out.per_class[j - 1] = out.remainder_mass;
    const double per = out.remainder_mass / static_cast<double>(remainder.size());
    for (std::size_t k : remainder.indices()) out.per_state[k] += per;
    return out;
}

TargetDistribution random_distribution(std::size_t n_values, std::size_t j_classes,
                                       Rng& rng, double headroom,
                                       std::size_t max_class_size) {
    if (j_classes == 0 || j_classes > n_values)
        throw Error("class count must be in [1, N]");
    if (max_class_size > 0 && (j_classes - 1) * max_class_size >= n_values)
        throw Error("capped classes would not leave a remainder");

    // Rejection-sample until the dry run accepts the schedule; some draws
    // are unreachable because amplitude spread left by earlier steps caps
    // what later amplification can collect. The headroom shrinks with each
    // retry, so termination is guaranteed.
    for (int attempt = 0; attempt < 200; ++attempt) {
        const double room = headroom * std::pow(0.95, attempt);

        TargetDistribution dist;
        dist.n_values = n_values;
        if (max_class_size == 0) {
            // random cut points -> non-empty contiguous classes
            std::vector<std::size_t> cuts{0, n_values};
            while (cuts.size() < j_classes + 1) {
                const std::size_t c = 1 + rng.uniform_index(n_values - 1);
                if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
            }
            std::sort(cuts.begin(), cuts.end());
            for (std::size_t c = 0; c < j_classes; ++c)
                dist.classes.push_back(MarkedSet::range(cuts[c], cuts[c + 1] - 1));
        } else {
            std::size_t offset = 0;
            for (std::size_t c = 0; c + 1 < j_classes; ++c) {
                const std::size_t size = 1 + rng.uniform_index(max_class_size);
                dist.classes.push_back(MarkedSet::range(offset, offset + size - 1));
                offset += size;
            }
            dist.classes.push_back(MarkedSet::range(offset, n_values - 1));
        }

        // exponential draws -> a point on the simplex, scaled into the room
        std::vector<double> w(j_classes);
        double sum = 0.0;
        for (auto& x : w) {
            x = -std::log(1.0 - rng.uniform());
            sum += x;
        }
        dist.class_targets.assign(j_classes, 0.0);
        double encoded = 0.0;
        for (std::size_t c = 0; c + 1 < j_classes; ++c) {
            dist.class_targets[c] = room * w[c] / sum;
            encoded += dist.class_targets[c];
        }
        dist.class_targets[j_classes - 1] = 1.0 - encoded;

        try {
            run_schedule(dist, EncodeOptions{}, nullptr);
            return dist;
        } catch (const Error&) {
            continue;
        }
    }
    throw Error("no feasible random distribution found");
}

} // namespace qpd::encoder
