// Independent reference implementations used as test oracles. Everything in
// here recomputes results from first principles (dense linear algebra,
// exhaustive iteration) without going through the code paths under test.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "qpd/rl/environment.hpp"
#include "qpd/statevector.hpp"

namespace oracle {

using qpd::cplx;
using Matrix = std::vector<std::vector<cplx>>;

// dense Grover iterate G = R * O; column k is sign_k * (2/N * ones - e_k)
inline Matrix grover_matrix(std::size_t n, const qpd::MarkedSet& marked) {
    Matrix g(n, std::vector<cplx>(n, cplx{0.0, 0.0}));
    for (std::size_t k = 0; k < n; ++k) {
        const double sign = marked.contains(k) ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            double v = 2.0 / static_cast<double>(n);
            if (i == k) v -= 1.0;
            g[i][k] = cplx{sign * v, 0.0};
        }
    }
    return g;
}

inline std::vector<cplx> apply_matrix(const Matrix& m, const std::vector<cplx>& v) {
    std::vector<cplx> out(m.size(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t k = 0; k < v.size(); ++k) out[i] += m[i][k] * v[k];
    return out;
}

// apply the block matrix (I on ancilla 0) + (G on ancilla 1) to a flattened
// 2N amplitude vector in the simulator's layout
inline std::vector<cplx> apply_conditional_dense(const Matrix& g,
                                                 const std::vector<cplx>& amp) {
    const std::size_t n = g.size();
    std::vector<cplx> out(amp.begin(), amp.begin() + static_cast<long>(n));
    const std::vector<cplx> branch(amp.begin() + static_cast<long>(n), amp.end());
    const std::vector<cplx> rotated = apply_matrix(g, branch);
    out.insert(out.end(), rotated.begin(), rotated.end());
    return out;
}

// Full 2^t x N phase-estimation register, simulated literally: uniform
// counting register, controlled powers G^(2^k) applied slice by slice via
// dense products, inverse Fourier transform, marginal over the system.
// Returns the outcome distribution over the counting register.
inline std::vector<double> dense_phase_estimation(std::size_t n, std::size_t marked_count,
                                                  int precision_bits) {
    const std::size_t m = std::size_t{1} << precision_bits;
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < marked_count; ++k) idx.push_back(k);
    const Matrix g = grover_matrix(n, qpd::MarkedSet(idx));

    const double amp0 = 1.0 / std::sqrt(static_cast<double>(n) * static_cast<double>(m));
    std::vector<std::vector<cplx>> slices(m, std::vector<cplx>(n, cplx{amp0, 0.0}));
    for (int bit = 0; bit < precision_bits; ++bit)
        for (std::size_t c = 0; c < m; ++c)
            if ((c >> bit) & 1)
                for (std::size_t rep = 0; rep < (std::size_t{1} << bit); ++rep)
                    slices[c] = apply_matrix(g, slices[c]);

    const double pi = 3.14159265358979323846;
    std::vector<double> p(m, 0.0);
    for (std::size_t y = 0; y < m; ++y) {
        std::vector<cplx> out(n, cplx{0.0, 0.0});
        for (std::size_t c = 0; c < m; ++c) {
            const double ang = -2.0 * pi * static_cast<double>(c) * static_cast<double>(y) /
                               static_cast<double>(m);
            const cplx w(std::cos(ang), std::sin(ang));
            for (std::size_t k = 0; k < n; ++k) out[k] += w * slices[c][k];
        }
        for (std::size_t k = 0; k < n; ++k)
            p[y] += std::norm(out[k]) / static_cast<double>(m);
    }
    return p;
}

// Optimal action values by value iteration over the environment's own
// dynamics (deterministic environments only; the rng is never consulted
// because GridWorld moves are deterministic).
inline std::vector<std::vector<double>> value_iteration(const qpd::rl::Environment& env,
                                                        double gamma,
                                                        double tol = 1e-12) {
    const std::size_t ns = env.num_states();
    std::vector<std::vector<double>> q(ns);
    for (std::size_t s = 0; s < ns; ++s)
        if (!env.is_terminal(s)) q[s].assign(env.allowed_actions(s).size(), 0.0);

    qpd::Rng rng(0);
    for (int iter = 0; iter < 100000; ++iter) {
        double change = 0.0;
        for (std::size_t s = 0; s < ns; ++s) {
            if (env.is_terminal(s)) continue;
            const auto& actions = env.allowed_actions(s);
            for (std::size_t i = 0; i < actions.size(); ++i) {
                const auto out = env.step(s, actions[i], rng);
                double boot = 0.0;
                if (!env.is_terminal(out.next_state) && !q[out.next_state].empty()) {
                    boot = q[out.next_state][0];
                    for (double v : q[out.next_state]) boot = std::max(boot, v);
                }
                const double target = out.reward + gamma * boot;
                change = std::max(change, std::fabs(target - q[s][i]));
                q[s][i] = target;
            }
        }
        if (change < tol) break;
    }
    return q;
}

// three-sigma binomial window around an expected frequency
inline bool freq_within_3sigma(std::size_t hits, std::size_t draws, double p) {
    const double f = static_cast<double>(hits) / static_cast<double>(draws);
    const double sigma = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(draws));
    return std::fabs(f - p) <= 3.0 * sigma + 1e-12;
}

} // namespace oracle
