#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qpd/statevector.hpp"

namespace qpd::cli {

// Parsed experiment file: [section] headers over key=value lines, full-line
// # comments. Unknown sections or keys are rejected at dispatch time.
struct ExperimentConfig {
    std::map<std::string, std::map<std::string, std::string>> sections;

    std::string command() const;             // from [run] command=...
    std::uint64_t seed() const;               // [run] seed, default 0
    std::string out_dir() const;              // [run] out, default "."

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;

    bool operator==(const ExperimentConfig& other) const {
        return sections == other.sections;
    }
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// value parsing helpers (throw ConfigError with the offending key)
std::uint64_t to_u64(const std::string& key, const std::string& value);
double to_double(const std::string& key, const std::string& value);
bool to_bool(const std::string& key, const std::string& value);
std::vector<std::uint64_t> parse_u64_list(const std::string& key, const std::string& value);
std::vector<double> parse_double_list(const std::string& key, const std::string& value);
// class list syntax: classes separated by ';', each a comma list of
// indices or inclusive a-b ranges, e.g. "0-1;2-4;5,6,7"
std::vector<MarkedSet> parse_classes(const std::string& key, const std::string& value);

// every metrics file embeds its effective config as '# '-prefixed lines;
// this re-parses that echo
ExperimentConfig config_echo_from_metrics(const std::string& path);

// command bodies; they throw, dispatch() maps exceptions to exit codes
void cmd_encode(const ExperimentConfig& cfg);
void cmd_count(const ExperimentConfig& cfg);
void cmd_train(const ExperimentConfig& cfg);
void cmd_sweep(const ExperimentConfig& cfg);

// 0 ok, 2 config/validation, 3 encoder, 4 resource budget
int dispatch(const ExperimentConfig& cfg);

} // namespace qpd::cli
