#include <doctest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "qpd/errors.hpp"
#include "qpd/statevector.hpp"

using namespace qpd;

TEST_CASE("uniform start puts all mass on ancilla 1") {
    SUBCASE("N=1") {
        const StateVector sv = StateVector::uniform(1);
        CHECK(sv.amplitude(0, 1).real() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(sv.amplitude(0, 0) == cplx{0.0, 0.0});
    }
    SUBCASE("N=4") {
        const StateVector sv = StateVector::uniform(4);
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(sv.amplitude(k, 1).real() == doctest::Approx(0.5).epsilon(1e-15));
            CHECK(sv.amplitude(k, 0) == cplx{0.0, 0.0});
        }
    }
    SUBCASE("N=8 probabilities") {
        const StateVector sv = StateVector::uniform(8);
        for (std::size_t k = 0; k < 8; ++k)
            CHECK(sv.probability(k, 1) == doctest::Approx(0.125).epsilon(1e-15));
        CHECK(sv.norm_squared() == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(StateVector::uniform(0), Error);
}

TEST_CASE("conditional Grover amplifies on the ancilla-1 branch only") {
    SUBCASE("N=4 single application is exact") {
        StateVector sv = StateVector::uniform(4);
        sv.apply_conditional_grover(MarkedSet::single(2));
        CHECK(sv.probability(2, 1) == doctest::Approx(1.0).epsilon(1e-14));
        for (std::size_t k = 0; k < 4; ++k) {
            if (k != 2) CHECK(sv.probability(k, 1) == doctest::Approx(0.0).epsilon(1e-14));
            CHECK(sv.probability(k, 0) == doctest::Approx(0.0));
        }
    }
    SUBCASE("two applications rotate back to 1/4") {
        StateVector sv = StateVector::uniform(4);
        sv.apply_conditional_grover(MarkedSet::single(2));
        sv.apply_conditional_grover(MarkedSet::single(2));
        CHECK(sv.probability(2, 1) == doctest::Approx(0.25).epsilon(1e-12));
    }
    SUBCASE("ancilla-0 amplitudes never move") {
        StateVector sv = StateVector::uniform(4);
        sv.set_amplitude(1, 0, cplx{0.3, 0.0});
        // not normalized; the operator is linear so that is irrelevant here
        sv.apply_conditional_grover(MarkedSet::single(2));
        CHECK(sv.amplitude(1, 0) == cplx{0.3, 0.0});
    }
    SUBCASE("empty marked set is rejected") {
        StateVector sv = StateVector::uniform(4);
        CHECK_THROWS_AS(sv.apply_conditional_grover(MarkedSet{}), Error);
    }
    SUBCASE("matches the dense block matrix for random states, N<=32") {
        Rng rng(7);
        for (int rep = 0; rep < 40; ++rep) {
            const std::size_t n = 2 + rng.uniform_index(31);
            std::vector<std::size_t> idx;
            for (std::size_t k = 0; k < n; ++k)
                if (rng.uniform() < 0.4) idx.push_back(k);
            if (idx.empty()) idx.push_back(rng.uniform_index(n));
            const MarkedSet marked(idx);

            StateVector sv = StateVector::uniform(n);
            std::vector<cplx> raw(2 * n);
            double norm = 0.0;
            for (std::size_t i = 0; i < 2 * n; ++i) {
                raw[i] = cplx{rng.uniform() - 0.5, rng.uniform() - 0.5};
                norm += std::norm(raw[i]);
            }
            norm = std::sqrt(norm);
            for (std::size_t k = 0; k < n; ++k) {
                sv.set_amplitude(k, 0, raw[k] / norm);
                sv.set_amplitude(k, 1, raw[n + k] / norm);
            }
            std::vector<cplx> flat(2 * n);
            for (std::size_t k = 0; k < n; ++k) {
                flat[k] = sv.amplitude(k, 0);
                flat[n + k] = sv.amplitude(k, 1);
            }

            sv.apply_conditional_grover(marked);
            const auto expect = oracle::apply_conditional_dense(
                oracle::grover_matrix(n, marked), flat);
            for (std::size_t k = 0; k < n; ++k) {
                CHECK(std::abs(sv.amplitude(k, 0) - expect[k]) < 1e-12);
                CHECK(std::abs(sv.amplitude(k, 1) - expect[n + k]) < 1e-12);
            }
            CHECK(std::fabs(sv.norm_squared() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("plain Grover iterate on a system-only vector") {
    SUBCASE("N=4 one application finds the mark") {
        std::vector<cplx> psi(4, cplx{0.5, 0.0});
        apply_grover_plain(psi, MarkedSet::single(0));
        CHECK(std::norm(psi[0]) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("marking everything is a global phase") {
        std::vector<cplx> psi(8, cplx{1.0 / std::sqrt(8.0), 0.0});
        apply_grover_plain(psi, MarkedSet::range(0, 7));
        for (const auto& a : psi)
            CHECK(std::norm(a) == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
    }
    SUBCASE("N=16, marked {3}, three applications match the dense matrix power") {
        const std::size_t n = 16;
        std::vector<cplx> psi(n, cplx{1.0 / 4.0, 0.0});
        std::vector<cplx> ref = psi;
        const auto g = oracle::grover_matrix(n, MarkedSet::single(3));
        for (int t = 0; t < 3; ++t) {
            apply_grover_plain(psi, MarkedSet::single(3));
            ref = oracle::apply_matrix(g, ref);
        }
        for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(psi[k] - ref[k]) < 1e-12);
        // closed form sin^2((2t+1) asin(sqrt(1/16))) at t = 3
        const double expect = std::pow(std::sin(7.0 * std::asin(0.25)), 2);
        CHECK(std::norm(psi[3]) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("tick swaps one column between the ancilla branches") {
    StateVector sv = StateVector::uniform(4);
    const cplx a = sv.amplitude(1, 1);
    sv.apply_tick(1);
    CHECK(sv.amplitude(1, 0) == a);
    CHECK(sv.amplitude(1, 1) == cplx{0.0, 0.0});
    for (std::size_t k = 0; k < 4; ++k) {
        if (k == 1) continue;
        CHECK(sv.amplitude(k, 1) == a); // untouched in amplitude and phase
        CHECK(sv.amplitude(k, 0) == cplx{0.0, 0.0});
    }
    SUBCASE("applied twice is the identity") {
        sv.apply_tick(1);
        CHECK(sv.amplitude(1, 1) == a);
        CHECK(sv.amplitude(1, 0) == cplx{0.0, 0.0});
    }
    SUBCASE("out of range") {
        CHECK_THROWS_AS(sv.apply_tick(4), std::out_of_range);
    }
}

TEST_CASE("probability table is normalized") {
    StateVector sv = StateVector::uniform(4);
    auto p = sv.probabilities();
    double sum = 0.0;
    for (double v : p) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t k = 0; k < 4; ++k) CHECK(p[4 + k] == doctest::Approx(0.25));

    sv.apply_conditional_grover(MarkedSet::single(1));
    sv.apply_tick(1);
    p = sv.probabilities();
    sum = 0.0;
    for (double v : p) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("norm is preserved by every operation") {
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 2 + rng.uniform_index(63);
        StateVector sv = StateVector::uniform(n);
        for (int op = 0; op < 50; ++op) {
            if (rng.uniform() < 0.7) {
                std::vector<std::size_t> idx{rng.uniform_index(n)};
                if (rng.uniform() < 0.5) idx.push_back(rng.uniform_index(n));
                sv.apply_conditional_grover(MarkedSet(idx));
            } else {
                sv.apply_tick(rng.uniform_index(n));
            }
            CHECK(std::fabs(sv.norm_squared() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("sampling") {
    SUBCASE("deterministic state always yields its outcome") {
        StateVector sv = StateVector::uniform(4);
        sv.apply_conditional_grover(MarkedSet::single(2));
        sv.apply_tick(2);
        Rng rng(3);
        for (int i = 0; i < 100; ++i) {
            const auto [k, y] = sv.sample(rng);
            CHECK(k == 2);
            CHECK(y == 0);
        }
    }
    SUBCASE("uniform frequencies within three binomial sigmas") {
        const StateVector sv = StateVector::uniform(4);
        Rng rng(99);
        std::map<std::size_t, std::size_t> hits;
        const std::size_t draws = 10000;
        for (std::size_t i = 0; i < draws; ++i) {
            const auto [k, y] = sv.sample(rng);
            CHECK(y == 1);
            ++hits[k];
        }
        for (std::size_t k = 0; k < 4; ++k)
            CHECK(oracle::freq_within_3sigma(hits[k], draws, 0.25));
    }
    SUBCASE("fixed seed reproduces the sequence") {
        const StateVector sv = StateVector::uniform(8);
        Rng a(42), b(42);
        for (int i = 0; i < 50; ++i) CHECK(sv.sample(a) == sv.sample(b));
    }
}
