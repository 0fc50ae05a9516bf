#pragma once

#include <cstdint>
#include <random>

namespace qpd {

// Deterministic uniform source. Every piece of randomness in the project
// flows through one of these so a run is reproducible from a single seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform double in [0,1), 53 mantissa bits, engine-portable
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform integer in [0,n)
    std::size_t uniform_index(std::size_t n) {
        if (n == 0) return 0;
        auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
        return k < n ? k : n - 1;
    }

    // independent stream for a sub-task (isolated stats / parallel runs)
    Rng fork(std::uint64_t salt) {
        return Rng(eng_() ^ (salt * 0x9e3779b97f4a7c15ull));
    }

private:
    std::mt19937_64 eng_;
};

} // namespace qpd
