#include "qpd/counting.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "qpd/errors.hpp"

namespace qpd::counting {

namespace {

constexpr double kPi = 3.14159265358979323846;
// conceptual register is 2^t x N; desk-scale cap is N = 4096 with t = 15
constexpr std::uint64_t kBudgetEntries = 1ull << 27;

// in-place radix-2 forward DFT, kernel exp(-2*pi*i*c*y/M)
void fft(std::vector<cplx>& a) {
    const std::size_t m = a.size();
    for (std::size_t i = 1, rev = 0; i < m; ++i) {
        std::size_t bit = m >> 1;
        for (; rev & bit; bit >>= 1) rev ^= bit;
        rev ^= bit;
        if (i < rev) std::swap(a[i], a[rev]);
    }
    for (std::size_t len = 2; len <= m; len <<= 1) {
        const double ang = -2.0 * kPi / static_cast<double>(len);
        const cplx w_len(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < m; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= w_len;
            }
        }
    }
}

void check_budget(std::size_t n_values, int precision_bits) {
    if (precision_bits < 1) throw Error("counting register needs at least one bit");
    if (precision_bits > 62) throw BudgetError("counting register size is absurd");
    const std::uint64_t entries = (1ull << precision_bits) * static_cast<std::uint64_t>(n_values);
    if (entries > kBudgetEntries)
        throw BudgetError("counting register 2^" + std::to_string(precision_bits) +
                          " x " + std::to_string(n_values) +
                          " exceeds the simulation budget");
}

} // namespace

CountingConfig CountingConfig::for_n(std::size_t n_values) {
    int bits = 1;
    while ((1ull << bits) < n_values) ++bits; // ceil(log2 N)
    if (n_values <= 1) bits = 0;
    CountingConfig cfg;
    cfg.precision_bits = bits + 3;
    return cfg;
}

std::vector<double> outcome_distribution(std::size_t n_values, std::size_t marked_count,
                                         int precision_bits) {
    if (n_values == 0) throw Error("dimension must be positive");
    if (marked_count > n_values) throw Error("marked count beyond dimension");
    check_budget(n_values, precision_bits);

    const std::size_t m = std::size_t{1} << precision_bits;
    const double theta =
        2.0 * std::asin(std::sqrt(static_cast<double>(marked_count) /
                                  static_cast<double>(n_values)));

    // The register state after the controlled powers is
    //   (1/sqrt(M)) sum_c |c> G^c |phi>,
    // and G^c |phi> stays in the plane spanned by the uniform-marked and
    // uniform-unmarked vectors: G^c|phi> = sin((2c+1)theta/2)|m> +
    // cos((2c+1)theta/2)|u>. Tracking the two coordinates is an exact
    // change of basis, so the outcome distribution matches the full
    // 2^t x N register simulation.
    std::vector<cplx> s(m), u(m);
    for (std::size_t c = 0; c < m; ++c) {
        const double ang = (2.0 * static_cast<double>(c) + 1.0) * theta / 2.0;
        s[c] = cplx(std::sin(ang), 0.0);
        u[c] = cplx(std::cos(ang), 0.0);
    }
    fft(s);
    fft(u);

    std::vector<double> p(m);
    const double inv = 1.0 / (static_cast<double>(m) * static_cast<double>(m));
    for (std::size_t y = 0; y < m; ++y)
        p[y] = (std::norm(s[y]) + std::norm(u[y])) * inv;
    return p;
}

CountEstimate count(std::size_t n_values, const MarkedSet& members,
                    const CountingConfig& cfg, Rng& rng) {
    if (!members.empty() && members.max_index() >= n_values)
        throw Error("marked index beyond dimension");

    const std::vector<double> p =
        outcome_distribution(n_values, members.size(), cfg.precision_bits);
    const std::size_t m = p.size();

    std::size_t y = 0;
    if (cfg.mode == CountingConfig::Mode::deterministic) {
        for (std::size_t i = 1; i < m; ++i)
            if (p[i] > p[y]) y = i;
    } else {
        const double u = rng.uniform();
        double cum = 0.0;
        y = m - 1;
        for (std::size_t i = 0; i < m; ++i) {
            cum += p[i];
            if (u < cum) { y = i; break; }
        }
    }

    CountEstimate est;
    est.raw_outcome = y;
    est.phase = static_cast<double>(y) / static_cast<double>(m);
    const double sp = std::sin(kPi * est.phase);
    est.estimate_real = static_cast<double>(n_values) * sp * sp;
    const double rounded = std::round(est.estimate_real);
    est.estimate = static_cast<std::size_t>(
        std::clamp(rounded, 0.0, static_cast<double>(n_values)));
    const double inside =
        std::max(0.0, est.estimate_real * (static_cast<double>(n_values) - est.estimate_real));
    est.error_bound = 2.0 * kPi * std::sqrt(inside) / static_cast<double>(m) +
                      kPi * kPi * static_cast<double>(n_values) /
                          (static_cast<double>(m) * static_cast<double>(m));
    return est;
}

CountEstimate count(std::size_t n_values,
                    const std::function<bool(std::size_t)>& membership,
                    const CountingConfig& cfg, Rng& rng) {
    return count(n_values, MarkedSet::from_predicate(n_values, membership), cfg, rng);
}

ClassCounts count_all_classes(std::size_t n_values,
                              const std::vector<MarkedSet>& classes,
                              const CountingConfig& cfg, Rng& rng) {
    if (classes.empty()) throw Error("at least one class is required");

    ClassCounts out;
    std::size_t sum = 0;
    for (std::size_t c = 0; c + 1 < classes.size(); ++c) {
        const CountEstimate est = count(n_values, classes[c], cfg, rng);
        sum += est.estimate;
        out.estimates.push_back(est);
        out.counts.push_back(est.estimate);
    }
    if (sum > n_values)
        throw Error("class count estimates sum to " + std::to_string(sum) +
                    " which exceeds N = " + std::to_string(n_values));
    out.counts.push_back(n_values - sum);
    return out;
}

} // namespace qpd::counting
