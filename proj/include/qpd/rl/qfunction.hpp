#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace qpd::rl {

// Action-value estimator. td_step applies one gradient step of size
// lr * delta toward the TD target.
class QFunction {
public:
    virtual ~QFunction() = default;
    virtual double evaluate(std::size_t s, std::size_t a) const = 0;
    virtual void td_step(std::size_t s, std::size_t a, double lr, double delta) = 0;
};

class TabularQ final : public QFunction {
public:
    TabularQ(std::size_t num_states, std::size_t num_actions, double initial = 0.0);

    double evaluate(std::size_t s, std::size_t a) const override;
    void td_step(std::size_t s, std::size_t a, double lr, double delta) override;

private:
    std::size_t num_actions_;
    std::vector<double> q_;
};

// Linear estimator Q(s,a) = theta . phi(s,a) over a fixed feature map;
// the TD gradient in theta is exactly phi(s,a).
class LinearQ final : public QFunction {
public:
    using FeatureFn = std::function<std::vector<double>(std::size_t, std::size_t)>;

    LinearQ(std::size_t feature_dim, FeatureFn features);

    double evaluate(std::size_t s, std::size_t a) const override;
    void td_step(std::size_t s, std::size_t a, double lr, double delta) override;

    std::vector<double> gradient(std::size_t s, std::size_t a) const;
    const std::vector<double>& weights() const { return theta_; }

private:
    std::vector<double> theta_;
    FeatureFn features_;
};

} // namespace qpd::rl
