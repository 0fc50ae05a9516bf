#pragma once

#include <stdexcept>
#include <string>

namespace qpd {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// malformed configuration or an invalid target distribution (CLI exit 2)
struct ConfigError : Error {
    using Error::Error;
};

// the requested probability is beyond what amplification can reach;
// carries the best value found during the scan
struct OvershootError : Error {
    OvershootError(const std::string& msg, double best, int step_index)
        : Error(msg), best_achievable(best), step(step_index) {}
    double best_achievable;
    int step;
};

// no ancilla-1 mass left for the remaining classes
struct ExhaustedBranchError : Error {
    ExhaustedBranchError(const std::string& msg, int step_index)
        : Error(msg), step(step_index) {}
    int step;
};

// the 2^t x N counting register would exceed the desk-scale budget (CLI exit 4)
struct BudgetError : Error {
    using Error::Error;
};

// a Q value fell outside the partition's [m, M]
struct StalePartitionError : Error {
    using Error::Error;
};

} // namespace qpd
