#include "qpd/rl/qfunction.hpp"

#include <string>

#include "qpd/errors.hpp"

namespace qpd::rl {

TabularQ::TabularQ(std::size_t num_states, std::size_t num_actions, double initial)
    : num_actions_(num_actions), q_(num_states * num_actions, initial) {
    if (num_states == 0 || num_actions == 0)
        throw Error("table dimensions must be positive");
}

double TabularQ::evaluate(std::size_t s, std::size_t a) const {
    const std::size_t idx = s * num_actions_ + a;
    if (a >= num_actions_ || idx >= q_.size()) throw Error("state/action out of range");
    return q_[idx];
}

void TabularQ::td_step(std::size_t s, std::size_t a, double lr, double delta) {
    const std::size_t idx = s * num_actions_ + a;
    if (a >= num_actions_ || idx >= q_.size()) throw Error("state/action out of range");
    q_[idx] += lr * delta;
}

LinearQ::LinearQ(std::size_t feature_dim, FeatureFn features)
    : theta_(feature_dim, 0.0), features_(std::move(features)) {
    if (feature_dim == 0) throw Error("feature dimension must be positive");
    if (!features_) throw Error("feature map is required");
}

double LinearQ::evaluate(std::size_t s, std::size_t a) const {
    const std::vector<double> phi = features_(s, a);
    if (phi.size() != theta_.size()) throw Error("feature dimension mismatch");
    double v = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) v += theta_[i] * phi[i];
    return v;
}

void LinearQ::td_step(std::size_t s, std::size_t a, double lr, double delta) {
    const std::vector<double> phi = features_(s, a);
    if (phi.size() != theta_.size()) throw Error("feature dimension mismatch");
    for (std::size_t i = 0; i < phi.size(); ++i) theta_[i] += lr * delta * phi[i];
}

std::vector<double> LinearQ::gradient(std::size_t s, std::size_t a) const {
    return features_(s, a);
}

} // namespace qpd::rl
