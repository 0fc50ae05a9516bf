#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qpd/rng.hpp"

namespace qpd::rl {

struct StepOutcome {
    std::size_t next_state = 0;
    double reward = 0.0;
};

// Finite, enumerable environment; dynamics are a pure function of
// (state, action, rng), so runs are deterministic given a seed.
class Environment {
public:
    virtual ~Environment() = default;
    virtual std::size_t num_states() const = 0;
    virtual std::size_t initial_state() const = 0;
    virtual bool is_terminal(std::size_t s) const = 0;
    virtual const std::vector<std::size_t>& allowed_actions(std::size_t s) const = 0;
    virtual StepOutcome step(std::size_t s, std::size_t a, Rng& rng) const = 0;
};

// Rectangular grid, deterministic moves. Actions: 0 up, 1 down, 2 left,
// 3 right; walking into a wall or off the board leaves the state unchanged.
// Reward is -1 per move and +10 on reaching the goal (terminal).
class GridWorld final : public Environment {
public:
    GridWorld(std::size_t width, std::size_t height,
              std::size_t start_x, std::size_t start_y,
              std::size_t goal_x, std::size_t goal_y,
              std::vector<std::pair<std::size_t, std::size_t>> walls = {});

    // layout characters: S start, G goal, # wall, . floor
    static GridWorld from_text(const std::string& text);
    static GridWorld from_file(const std::string& path);

    std::size_t num_states() const override { return width_ * height_; }
    std::size_t initial_state() const override { return start_; }
    bool is_terminal(std::size_t s) const override { return s == goal_; }
    const std::vector<std::size_t>& allowed_actions(std::size_t s) const override;
    StepOutcome step(std::size_t s, std::size_t a, Rng& rng) const override;

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t goal_state() const { return goal_; }
    bool is_wall(std::size_t s) const { return wall_[s]; }

private:
    std::size_t width_, height_, start_, goal_;
    std::vector<char> wall_;
    std::vector<std::size_t> actions_;
};

// One playable state with K arms; pulling arm a yields its fixed mean plus
// bounded uniform noise and returns to the same state. Episodes end at the
// step cap.
class KArmedBandit final : public Environment {
public:
    KArmedBandit(std::vector<double> arm_means, double noise_half_width);

    std::size_t num_states() const override { return 1; }
    std::size_t initial_state() const override { return 0; }
    bool is_terminal(std::size_t) const override { return false; }
    const std::vector<std::size_t>& allowed_actions(std::size_t) const override {
        return arms_;
    }
    StepOutcome step(std::size_t s, std::size_t a, Rng& rng) const override;

    std::size_t best_arm() const;
    const std::vector<double>& arm_means() const { return means_; }

private:
    std::vector<double> means_;
    double noise_;
    std::vector<std::size_t> arms_;
};

} // namespace qpd::rl
