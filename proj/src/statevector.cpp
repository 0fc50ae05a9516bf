#include "qpd/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qpd/errors.hpp"

namespace qpd {

MarkedSet::MarkedSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
}

MarkedSet MarkedSet::single(std::size_t index) {
    return MarkedSet(std::vector<std::size_t>{index});
}

MarkedSet MarkedSet::range(std::size_t first, std::size_t last) {
    std::vector<std::size_t> v;
    for (std::size_t k = first; k <= last; ++k) v.push_back(k);
    return MarkedSet(std::move(v));
}

MarkedSet MarkedSet::from_predicate(std::size_t n_values,
                                    const std::function<bool(std::size_t)>& member) {
    std::vector<std::size_t> v;
    for (std::size_t k = 0; k < n_values; ++k)
        if (member(k)) v.push_back(k);
    return MarkedSet(std::move(v));
}

bool MarkedSet::contains(std::size_t k) const {
    return std::binary_search(indices_.begin(), indices_.end(), k);
}

std::size_t MarkedSet::max_index() const {
    if (indices_.empty()) throw Error("max_index of an empty marked set");
    return indices_.back();
}

StateVector StateVector::uniform(std::size_t n_values) {
    if (n_values == 0) throw Error("state dimension must be positive");
    std::vector<cplx> amp(2 * n_values, cplx{0.0, 0.0});
    const double a = 1.0 / std::sqrt(static_cast<double>(n_values));
    for (std::size_t k = 0; k < n_values; ++k)
        amp[n_values + k] = cplx{a, 0.0}; // ancilla = 1 slice
    return StateVector(n_values, std::move(amp));
}

cplx StateVector::amplitude(std::size_t k, int ancilla) const {
    if (k >= n_ || ancilla < 0 || ancilla > 1)
        throw std::out_of_range("amplitude index out of range");
    return amp_[static_cast<std::size_t>(ancilla) * n_ + k];
}

void StateVector::set_amplitude(std::size_t k, int ancilla, cplx a) {
    if (k >= n_ || ancilla < 0 || ancilla > 1)
        throw std::out_of_range("amplitude index out of range");
    amp_[static_cast<std::size_t>(ancilla) * n_ + k] = a;
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amp_) s += std::norm(a);
    return s;
}

double StateVector::probability(std::size_t k, int ancilla) const {
    return std::norm(amplitude(k, ancilla));
}

double StateVector::ancilla_mass(int ancilla) const {
    if (ancilla < 0 || ancilla > 1) throw std::out_of_range("ancilla bit");
    double s = 0.0;
    const std::size_t off = static_cast<std::size_t>(ancilla) * n_;
    for (std::size_t k = 0; k < n_; ++k) s += std::norm(amp_[off + k]);
    return s;
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> p(amp_.size());
    for (std::size_t i = 0; i < amp_.size(); ++i) p[i] = std::norm(amp_[i]);
    return p;
}

void StateVector::apply_conditional_grover(const MarkedSet& marked) {
    if (marked.empty()) throw Error("oracle needs a non-empty marked set");
    if (marked.max_index() >= n_)
        throw std::out_of_range("marked index beyond state dimension");

    cplx* slice = amp_.data() + n_; // ancilla = 1 branch
    for (std::size_t k : marked.indices()) slice[k] = -slice[k];

    cplx mean{0.0, 0.0};
    for (std::size_t k = 0; k < n_; ++k) mean += slice[k];
    mean /= static_cast<double>(n_);
    for (std::size_t k = 0; k < n_; ++k) slice[k] = 2.0 * mean - slice[k];
}

void StateVector::apply_tick(std::size_t index) {
    if (index >= n_) throw std::out_of_range("tick index beyond state dimension");
    std::swap(amp_[index], amp_[n_ + index]);
}

std::pair<std::size_t, int> StateVector::sample(Rng& rng) const {
    const double u = rng.uniform() * norm_squared();
    double cum = 0.0;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        cum += std::norm(amp_[i]);
        if (u < cum) return {i % n_, static_cast<int>(i / n_)};
    }
    return {n_ - 1, 1};
}

void apply_grover_plain(std::vector<cplx>& psi, const MarkedSet& marked) {
    if (marked.empty()) throw Error("oracle needs a non-empty marked set");
    if (marked.max_index() >= psi.size())
        throw std::out_of_range("marked index beyond state dimension");

    for (std::size_t k : marked.indices()) psi[k] = -psi[k];

    cplx mean{0.0, 0.0};
    for (const auto& a : psi) mean += a;
    mean /= static_cast<double>(psi.size());
    for (auto& a : psi) a = 2.0 * mean - a;
}

} // namespace qpd
