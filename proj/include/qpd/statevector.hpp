#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "qpd/rng.hpp"

namespace qpd {

using cplx = std::complex<double>;

// Oracle target set: the basis indices whose sign the oracle flips
// (a single value, or a whole class of actions).
class MarkedSet {
public:
    MarkedSet() = default;
    explicit MarkedSet(std::vector<std::size_t> indices);

    static MarkedSet single(std::size_t index);
    static MarkedSet range(std::size_t first, std::size_t last); // inclusive
    static MarkedSet from_predicate(std::size_t n_values,
                                    const std::function<bool(std::size_t)>& member);

    bool empty() const { return indices_.empty(); }
    std::size_t size() const { return indices_.size(); }
    bool contains(std::size_t k) const;
    std::size_t max_index() const; // requires non-empty
    const std::vector<std::size_t>& indices() const { return indices_; }

    bool operator==(const MarkedSet& other) const { return indices_ == other.indices_; }

private:
    std::vector<std::size_t> indices_; // sorted, unique
};

// The simulated (system x ancilla) register: N basis values times one
// ancilla bit. N is the number of values, not rounded to a power of two.
// Layout: amplitude(k, y) lives at amp_[y * N + k], so each ancilla branch
// is a contiguous N-dim slice.
class StateVector {
public:
    // start state: every value at 1/sqrt(N), all of it on ancilla = 1
    static StateVector uniform(std::size_t n_values);

    std::size_t n_values() const { return n_; }

    cplx amplitude(std::size_t k, int ancilla) const;
    void set_amplitude(std::size_t k, int ancilla, cplx a);

    double norm_squared() const;
    double probability(std::size_t k, int ancilla) const;
    double ancilla_mass(int ancilla) const;

    // flat |amplitude|^2 table in storage order (ancilla 0 slice, then 1)
    std::vector<double> probabilities() const;

    // G = R * O applied to the ancilla-1 slice only; ancilla-0 amplitudes
    // are never touched
    void apply_conditional_grover(const MarkedSet& marked);

    // swap the (index, 1) and (index, 0) amplitudes; an involution
    void apply_tick(std::size_t index);

    // draw one (value, ancilla) outcome from the joint distribution
    std::pair<std::size_t, int> sample(Rng& rng) const;

private:
    StateVector(std::size_t n, std::vector<cplx> amp)
        : n_(n), amp_(std::move(amp)) {}

    std::size_t n_ = 0;
    std::vector<cplx> amp_;
};

// Ancilla-free Grover iterate on a plain N-dim vector: flip the sign of the
// marked components, then reflect about the mean. Used by the counting
// module's phase estimation.
void apply_grover_plain(std::vector<cplx>& psi, const MarkedSet& marked);

} // namespace qpd
