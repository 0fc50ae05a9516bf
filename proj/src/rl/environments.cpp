#include "qpd/rl/environment.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "qpd/errors.hpp"

namespace qpd::rl {

GridWorld::GridWorld(std::size_t width, std::size_t height,
                     std::size_t start_x, std::size_t start_y,
                     std::size_t goal_x, std::size_t goal_y,
                     std::vector<std::pair<std::size_t, std::size_t>> walls)
    : width_(width), height_(height),
      start_(start_y * width + start_x),
      goal_(goal_y * width + goal_x),
      wall_(width * height, 0),
      actions_{0, 1, 2, 3} {
    if (width == 0 || height == 0) throw ConfigError("grid must be non-empty");
    if (start_x >= width || start_y >= height || goal_x >= width || goal_y >= height)
        throw ConfigError("start/goal outside the grid");
    for (auto [x, y] : walls) {
        if (x >= width || y >= height) throw ConfigError("wall outside the grid");
        wall_[y * width + x] = 1;
    }
    if (wall_[start_] || wall_[goal_]) throw ConfigError("start/goal on a wall");
}

GridWorld GridWorld::from_text(const std::string& text) {
    std::vector<std::string> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) rows.push_back(line);
    }
    if (rows.empty()) throw ConfigError("empty grid layout");
    const std::size_t w = rows[0].size();
    const std::size_t h = rows.size();

    std::vector<std::pair<std::size_t, std::size_t>> walls;
    long sx = -1, sy = -1, gx = -1, gy = -1;
    for (std::size_t y = 0; y < h; ++y) {
        if (rows[y].size() != w) throw ConfigError("ragged grid layout");
        for (std::size_t x = 0; x < w; ++x) {
            switch (rows[y][x]) {
            case '.': break;
            case '#': walls.emplace_back(x, y); break;
            case 'S':
                if (sx >= 0) throw ConfigError("more than one start cell");
                sx = static_cast<long>(x); sy = static_cast<long>(y);
                break;
            case 'G':
                if (gx >= 0) throw ConfigError("more than one goal cell");
                gx = static_cast<long>(x); gy = static_cast<long>(y);
                break;
            default:
                throw ConfigError(std::string("unknown layout character '") +
                                  rows[y][x] + "'");
            }
        }
    }
    if (sx < 0) throw ConfigError("layout has no start cell");
    if (gx < 0) throw ConfigError("layout has no goal cell");
    return GridWorld(w, h, static_cast<std::size_t>(sx), static_cast<std::size_t>(sy),
                     static_cast<std::size_t>(gx), static_cast<std::size_t>(gy),
                     std::move(walls));
}

GridWorld GridWorld::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open grid file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

const std::vector<std::size_t>& GridWorld::allowed_actions(std::size_t s) const {
    if (s >= num_states()) throw Error("state out of range");
    return actions_;
}

StepOutcome GridWorld::step(std::size_t s, std::size_t a, Rng&) const {
    if (s >= num_states()) throw Error("state out of range");
    if (a > 3) throw Error("action out of range");
    const long x = static_cast<long>(s % width_);
    const long y = static_cast<long>(s / width_);
    long nx = x, ny = y;
    switch (a) {
    case 0: ny = y - 1; break;
    case 1: ny = y + 1; break;
    case 2: nx = x - 1; break;
    case 3: nx = x + 1; break;
    }
    std::size_t next = s;
    if (nx >= 0 && ny >= 0 && nx < static_cast<long>(width_) && ny < static_cast<long>(height_)) {
        const std::size_t cand = static_cast<std::size_t>(ny) * width_ +
                                 static_cast<std::size_t>(nx);
        if (!wall_[cand]) next = cand;
    }
    return {next, next == goal_ ? 10.0 : -1.0};
}

KArmedBandit::KArmedBandit(std::vector<double> arm_means, double noise_half_width)
    : means_(std::move(arm_means)), noise_(noise_half_width) {
    if (means_.empty()) throw ConfigError("bandit needs at least one arm");
    if (noise_ < 0.0) throw ConfigError("noise half-width must be non-negative");
    arms_.resize(means_.size());
    for (std::size_t a = 0; a < arms_.size(); ++a) arms_[a] = a;
}

StepOutcome KArmedBandit::step(std::size_t s, std::size_t a, Rng& rng) const {
    if (s != 0) throw Error("bandit has a single state");
    if (a >= means_.size()) throw Error("arm out of range");
    const double noise = noise_ > 0.0 ? noise_ * (2.0 * rng.uniform() - 1.0) : 0.0;
    return {0, means_[a] + noise};
}

std::size_t KArmedBandit::best_arm() const {
    return static_cast<std::size_t>(
        std::max_element(means_.begin(), means_.end()) - means_.begin());
}

} // namespace qpd::rl
