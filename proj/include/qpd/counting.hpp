#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "qpd/rng.hpp"
#include "qpd/statevector.hpp"

namespace qpd::counting {

struct CountingConfig {
    int precision_bits = 0; // t, size of the counting register
    enum class Mode { deterministic, stochastic };
    Mode mode = Mode::deterministic;

    // default register size: ceil(log2 N) + 3 bits
    static CountingConfig for_n(std::size_t n_values);
};

struct CountEstimate {
    std::uint64_t raw_outcome = 0; // measured y in [0, 2^t)
    double phase = 0.0;            // y / 2^t
    double estimate_real = 0.0;    // N sin^2(pi y / 2^t)
    std::size_t estimate = 0;      // rounded, clamped to [0, N]
    double error_bound = 0.0;
};

// Phase estimation over the Grover iterate built from the membership
// oracle: t-qubit counting register, controlled powers G^(2^k), inverse
// Fourier transform, measurement. Deterministic mode reads off the most
// likely outcome; stochastic mode samples one.
CountEstimate count(std::size_t n_values, const MarkedSet& members,
                    const CountingConfig& cfg, Rng& rng);
CountEstimate count(std::size_t n_values,
                    const std::function<bool(std::size_t)>& membership,
                    const CountingConfig& cfg, Rng& rng);

// exact outcome distribution over the counting register (2^t entries)
std::vector<double> outcome_distribution(std::size_t n_values, std::size_t marked_count,
                                         int precision_bits);

struct ClassCounts {
    std::vector<CountEstimate> estimates; // the first J-1 classes
    std::vector<std::size_t> counts;      // all J, last inferred by difference
};

// Counts the first J-1 classes of a partition; the last is N minus the sum.
// Throws if the estimates are inconsistent (negative inferred remainder).
ClassCounts count_all_classes(std::size_t n_values,
                              const std::vector<MarkedSet>& classes,
                              const CountingConfig& cfg, Rng& rng);

} // namespace qpd::counting
