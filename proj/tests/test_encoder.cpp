#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qpd/encoder.hpp"
#include "qpd/errors.hpp"

using namespace qpd;
using namespace qpd::encoder;

namespace {

TargetDistribution three_class_n8() {
    TargetDistribution dist;
    dist.n_values = 8;
    dist.classes = {MarkedSet::range(0, 1), MarkedSet::range(2, 4), MarkedSet::range(5, 7)};
    dist.class_targets = {0.6, 0.3, 0.1};
    return dist;
}

} // namespace

TEST_CASE("validate_targets") {
    SUBCASE("clean partition passes") {
        TargetDistribution dist;
        dist.n_values = 4;
        dist.classes = {MarkedSet::single(0), MarkedSet::single(1), MarkedSet::single(2),
                        MarkedSet::single(3)};
        dist.class_targets = {0.25, 0.25, 0.25, 0.25};
        CHECK_NOTHROW(validate_targets(dist));
    }
    SUBCASE("overlap is rejected") {
        TargetDistribution dist;
        dist.n_values = 4;
        dist.classes = {MarkedSet::range(0, 2), MarkedSet::range(2, 3)};
        dist.class_targets = {0.5, 0.5};
        CHECK_THROWS_AS(validate_targets(dist), ConfigError);
    }
    SUBCASE("gap is rejected") {
        TargetDistribution dist;
        dist.n_values = 4;
        dist.classes = {MarkedSet::single(0), MarkedSet::range(2, 3)};
        dist.class_targets = {0.5, 0.5};
        CHECK_THROWS_AS(validate_targets(dist), ConfigError);
    }
    SUBCASE("bad normalization is rejected") {
        TargetDistribution dist = three_class_n8();
        dist.class_targets = {0.6, 0.2, 0.1};
        CHECK_THROWS_AS(validate_targets(dist), ConfigError);
    }
    SUBCASE("negative target is rejected") {
        TargetDistribution dist = three_class_n8();
        dist.class_targets = {0.6, -0.1, 0.5};
        CHECK_THROWS_AS(validate_targets(dist), ConfigError);
    }
    SUBCASE("infeasible chain is rejected") {
        // the first two classes ask for more mass than exists
        TargetDistribution dist;
        dist.n_values = 64;
        dist.classes = {MarkedSet::single(0), MarkedSet::single(1), MarkedSet::range(2, 63)};
        dist.class_targets = {0.95, 0.9, 1.0 - 0.95 - 0.9};
        CHECK_THROWS_AS(validate_targets(dist), ConfigError);
    }
}

TEST_CASE("encode") {
    SUBCASE("single class keeps the uniform superposition") {
        TargetDistribution dist;
        dist.n_values = 8;
        dist.classes = {MarkedSet::range(0, 7)};
        dist.class_targets = {1.0};
        const EncodedState enc = encode(dist);
        CHECK(enc.plan.steps.empty());
        CHECK(enc.plan.total_grover_iterations == 0);
        CHECK(enc.state.ancilla_mass(1) == doctest::Approx(1.0).epsilon(1e-14));
        for (std::size_t k = 0; k < 8; ++k)
            CHECK(enc.state_probability[k] == doctest::Approx(0.125).epsilon(1e-13));
    }
    SUBCASE("exact search plus tick, N=4") {
        TargetDistribution dist;
        dist.n_values = 4;
        dist.classes = {MarkedSet::single(2),
                        MarkedSet(std::vector<std::size_t>{0, 1, 3})};
        dist.class_targets = {1.0, 0.0};
        const EncodedState enc = encode(dist);
        REQUIRE(enc.plan.steps.size() == 1);
        CHECK(enc.plan.steps[0].t_f == 1);
        CHECK(std::fabs(enc.state.amplitude(2, 0).real() - 1.0) < 1e-12);
        CHECK(enc.class_probability[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(enc.max_class_error < 1e-12);
    }
    SUBCASE("N=8 three classes match a hand-driven register") {
        const TargetDistribution dist = three_class_n8();
        const EncodedState enc = encode(dist);

        // drive the same schedule directly on statevector operations
        StateVector sv = StateVector::uniform(8);
        for (std::size_t c = 0; c + 1 < dist.classes.size(); ++c) {
            const auto& step = enc.plan.steps[c];
            for (int t = 0; t < step.t_f; ++t) sv.apply_conditional_grover(dist.classes[c]);
            for (std::size_t k : dist.classes[c].indices()) sv.apply_tick(k);
        }
        for (std::size_t k = 0; k < 8; ++k) {
            CHECK(std::abs(sv.amplitude(k, 0) - enc.state.amplitude(k, 0)) < 1e-13);
            CHECK(std::abs(sv.amplitude(k, 1) - enc.state.amplitude(k, 1)) < 1e-13);
        }
        // class errors equal the plan's own error report (coarse at N=8)
        for (std::size_t c = 0; c + 1 < dist.classes.size(); ++c) {
            const double plan_err =
                std::fabs(enc.plan.class_probability[c] - dist.class_targets[c]);
            const double real_err =
                std::fabs(enc.class_probability[c] - dist.class_targets[c]);
            CHECK(real_err == doctest::Approx(plan_err).epsilon(1e-9));
        }
    }
    SUBCASE("achieved state probabilities equal the plan prediction") {
        Rng rng(13);
        for (int rep = 0; rep < 20; ++rep) {
            const std::size_t n = 8 + rng.uniform_index(120);
            const std::size_t j = 2 + rng.uniform_index(5);
            const TargetDistribution dist = random_distribution(n, j, rng);
            const EncodedState enc = encode(dist);
            for (std::size_t k = 0; k < n; ++k)
                CHECK(std::fabs(enc.state_probability[k] - enc.plan.state_probability[k]) <
                      1e-9);
        }
    }
    SUBCASE("probability of a ticked state never moves again") {
        Rng rng(29);
        for (int rep = 0; rep < 10; ++rep) {
            const std::size_t n = 8 + rng.uniform_index(56);
            const std::size_t j = 2 + rng.uniform_index(4);
            const TargetDistribution dist = random_distribution(n, j, rng);

            // a state acquires ancilla-0 probability the moment it is
            // ticked; from then on the value must never change
            std::vector<double> frozen(n, -1.0);
            EncodeOptions opt;
            opt.after_each_op = [&](const StateVector& sv) {
                for (std::size_t k = 0; k < n; ++k) {
                    if (frozen[k] >= 0.0)
                        CHECK(std::fabs(sv.probability(k, 0) - frozen[k]) <= 1e-12);
                    else if (sv.probability(k, 0) > 0.0)
                        frozen[k] = sv.probability(k, 0);
                }
            };
            encode(dist, opt);
        }
    }
    SUBCASE("remainder mass complements the ticked classes") {
        Rng rng(41);
        for (int rep = 0; rep < 10; ++rep) {
            const TargetDistribution dist = random_distribution(32, 4, rng);
            const EncodedState enc = encode(dist);
            double ticked = 0.0;
            for (std::size_t c = 0; c + 1 < dist.classes.size(); ++c)
                ticked += enc.class_probability[c];
            CHECK(std::fabs(enc.state.ancilla_mass(1) - (1.0 - ticked)) < 1e-12);
        }
    }
    SUBCASE("per-state probabilities agree within a class") {
        Rng rng(43);
        const TargetDistribution dist = random_distribution(48, 5, rng);
        const EncodedState enc = encode(dist);
        for (std::size_t c = 0; c < dist.classes.size(); ++c) {
            const auto& idx = dist.classes[c].indices();
            for (std::size_t i = 1; i < idx.size(); ++i)
                CHECK(std::fabs(enc.state_probability[idx[i]] -
                                enc.state_probability[idx[0]]) < 1e-9);
        }
    }
    SUBCASE("largest class as remainder takes the normalization role") {
        TargetDistribution dist;
        dist.n_values = 8;
        dist.classes = {MarkedSet::range(0, 4), MarkedSet::range(5, 6), MarkedSet::single(7)};
        dist.class_targets = {0.5, 0.3, 0.2};
        EncodeOptions opt;
        opt.largest_class_as_remainder = true;
        const EncodedState enc = encode(dist, opt);
        CHECK(enc.dist.classes.back() == dist.classes[0]); // biggest moved last
        CHECK(enc.dist.class_targets.back() == doctest::Approx(0.5));
        CHECK(enc.plan.steps.size() == 2); // the two smaller classes amplify
        const auto plan = plan_encoding(dist, opt);
        for (std::size_t c = 0; c < 3; ++c) // dry run agrees with the register
            CHECK(std::fabs(plan.class_probability[c] - enc.plan.class_probability[c]) <
                  1e-12);
        double sum = 0.0;
        for (double p : enc.class_probability) sum += p;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("sample_value") {
    SUBCASE("deterministic point mass") {
        TargetDistribution dist;
        dist.n_values = 4;
        dist.classes = {MarkedSet::single(2),
                        MarkedSet(std::vector<std::size_t>{0, 1, 3})};
        dist.class_targets = {1.0, 0.0};
        const EncodedState enc = encode(dist);
        Rng rng(1);
        for (int i = 0; i < 200; ++i) CHECK(sample_value(enc, rng) == 2);
    }
    SUBCASE("ancilla 1 always maps into the remainder class") {
        TargetDistribution dist;
        dist.n_values = 4;
        dist.classes = {MarkedSet::range(0, 2), MarkedSet::single(3)};
        dist.class_targets = {0.0, 1.0};
        const EncodedState enc = encode(dist);
        // the first class was ticked at its uniform amplitude, so some mass
        // sits on ancilla 0; all remaining draws must return the singleton
        Rng rng(2);
        std::size_t hits3 = 0;
        for (int i = 0; i < 2000; ++i) {
            const std::size_t v = sample_value(enc, rng);
            if (v == 3) ++hits3;
        }
        CHECK(oracle::freq_within_3sigma(hits3, 2000, enc.class_probability[1]));
    }
    SUBCASE("empirical class frequencies track the achieved distribution") {
        const TargetDistribution dist = three_class_n8();
        const EncodedState enc = encode(dist);
        Rng rng(77);
        const std::size_t draws = 50000;
        std::vector<std::size_t> hits(8, 0);
        for (std::size_t i = 0; i < draws; ++i) ++hits[sample_value(enc, rng)];
        for (std::size_t c = 0; c < 3; ++c) {
            std::size_t class_hits = 0;
            for (std::size_t k : dist.classes[c].indices()) class_hits += hits[k];
            CHECK(oracle::freq_within_3sigma(class_hits, draws, enc.class_probability[c]));
        }
    }
}

TEST_CASE("achieved_distribution") {
    SUBCASE("single class is uniform") {
        TargetDistribution dist;
        dist.n_values = 5;
        dist.classes = {MarkedSet::range(0, 4)};
        dist.class_targets = {1.0};
        const EncodedState enc = encode(dist);
        const AchievedDistribution ach = achieved_distribution(enc);
        for (double p : ach.per_state) CHECK(p == doctest::Approx(0.2).epsilon(1e-13));
    }
    SUBCASE("sums to one and matches the plan") {
        Rng rng(53);
        for (int rep = 0; rep < 10; ++rep) {
            const TargetDistribution dist = random_distribution(24, 3, rng);
            const EncodedState enc = encode(dist);
            const AchievedDistribution ach = achieved_distribution(enc);
            double sum = 0.0;
            for (double p : ach.per_state) sum += p;
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
            for (std::size_t c = 0; c < dist.classes.size(); ++c)
                CHECK(std::fabs(ach.per_class[c] - enc.plan.class_probability[c]) < 1e-9);
        }
    }
}
