#include "qpd/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include "qpd/counting.hpp"
#include "qpd/encoder.hpp"
#include "qpd/errors.hpp"
#include "qpd/rl/environment.hpp"
#include "qpd/rl/train.hpp"

namespace qpd::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// known sections/keys per command; anything else is rejected
const std::map<std::string, std::map<std::string, std::set<std::string>>>& schema() {
    static const std::map<std::string, std::map<std::string, std::set<std::string>>> s = {
        {"encode",
         {{"run", {"command", "seed", "out"}},
          {"encode", {"n", "classes", "targets", "largest_remainder", "max_iterations"}}}},
        {"count",
         {{"run", {"command", "seed", "out"}},
          {"count", {"n", "classes", "precision_bits", "mode"}}}},
        {"train",
         {{"run", {"command", "seed", "out"}},
          {"train",
           {"env", "grid_file", "width", "height", "start_x", "start_y", "goal_x",
            "goal_y", "arms", "arm_means", "dominant_arm", "dominant_gap", "noise",
            "episodes", "max_steps", "learning_rate", "discount", "q_init", "j_intervals",
            "t_start", "t_min", "t_decay", "selector", "precision_bits",
            "exact_sum_weights", "recount_each_decision"}}}},
        {"sweep",
         {{"run", {"command", "seed", "out"}},
          {"sweep", {"n_values", "j_classes", "target_sets", "headroom", "max_class_size"}}}},
    };
    return s;
}

void reject_unknown_keys(const ExperimentConfig& cfg) {
    const auto it = schema().find(cfg.command());
    if (it == schema().end())
        throw ConfigError("unknown command '" + cfg.command() + "'");
    for (const auto& [sec, kv] : cfg.sections) {
        const auto sit = it->second.find(sec);
        if (sit == it->second.end())
            throw ConfigError("unknown section [" + sec + "] for command " + cfg.command());
        for (const auto& [key, value] : kv) {
            (void)value;
            if (!sit->second.count(key))
                throw ConfigError("unknown key '" + key + "' in section [" + sec + "]");
        }
    }
}

std::string run_id(const ExperimentConfig& cfg) {
    return cfg.command() + "-seed" + std::to_string(cfg.seed());
}

// metrics files carry the effective config as a '# ' echo, then CSV with a
// header row; written to a temp name and renamed so readers never see a
// partial file
void write_metrics(const ExperimentConfig& cfg, const std::string& header,
                   const std::vector<std::string>& rows) {
    namespace fs = std::filesystem;
    const fs::path dir(cfg.out_dir());
    fs::create_directories(dir);
    const fs::path path = dir / (cfg.command() + "_metrics.csv");
    const fs::path tmp = dir / (cfg.command() + "_metrics.csv.tmp");

    {
        std::ofstream out(tmp);
        if (!out) throw Error("cannot write " + tmp.string());
        out << "# qpd-metrics run=" << run_id(cfg) << "\n";
        for (const auto& [sec, kv] : cfg.sections) {
            out << "# [" << sec << "]\n";
            for (const auto& [key, value] : kv) out << "# " << key << "=" << value << "\n";
        }
        out << header << "\n";
        for (const auto& row : rows) out << row << "\n";
    }
    fs::rename(tmp, path);

    // wall-clock bookkeeping lives outside the deterministic metrics file
    std::ofstream log(dir / (cfg.command() + "_run.log"), std::ios::app);
    log << run_id(cfg) << " finished at " << std::time(nullptr) << "\n";
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

std::string ExperimentConfig::command() const { return get_or("run", "command", ""); }

std::uint64_t ExperimentConfig::seed() const {
    return has("run", "seed") ? to_u64("seed", get("run", "seed")) : 0;
}

std::string ExperimentConfig::out_dir() const { return get_or("run", "out", "."); }

bool ExperimentConfig::has(const std::string& section, const std::string& key) const {
    const auto it = sections.find(section);
    return it != sections.end() && it->second.count(key) > 0;
}

std::string ExperimentConfig::get(const std::string& section, const std::string& key) const {
    if (!has(section, key))
        throw ConfigError("missing key '" + key + "' in section [" + section + "]");
    return sections.at(section).at(key);
}

std::string ExperimentConfig::get_or(const std::string& section, const std::string& key,
                                     const std::string& fallback) const {
    return has(section, key) ? sections.at(section).at(key) : fallback;
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
            cfg.sections[section]; // register even when empty
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key before any section");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (cfg.sections[section].count(key))
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        cfg.sections[section][key] = value;
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
    }
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("key '" + key + "': expected a boolean, got '" + value + "'");
}

std::vector<std::uint64_t> parse_u64_list(const std::string& key, const std::string& value) {
    std::vector<std::uint64_t> out;
    std::istringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(to_u64(key, trim(item)));
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::istringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(to_double(key, trim(item)));
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

std::vector<MarkedSet> parse_classes(const std::string& key, const std::string& value) {
    std::vector<MarkedSet> out;
    std::istringstream in(value);
    std::string cls;
    while (std::getline(in, cls, ';')) {
        std::vector<std::size_t> members;
        std::istringstream items(cls);
        std::string item;
        while (std::getline(items, item, ',')) {
            const std::string t = trim(item);
            if (t.empty()) continue;
            const auto dash = t.find('-');
            if (dash == std::string::npos) {
                members.push_back(to_u64(key, t));
            } else {
                const std::uint64_t a = to_u64(key, trim(t.substr(0, dash)));
                const std::uint64_t b = to_u64(key, trim(t.substr(dash + 1)));
                if (b < a) throw ConfigError("key '" + key + "': inverted range " + t);
                for (std::uint64_t k = a; k <= b; ++k) members.push_back(k);
            }
        }
        out.push_back(MarkedSet(std::move(members)));
    }
    if (out.empty()) throw ConfigError("key '" + key + "': no classes given");
    return out;
}

ExperimentConfig config_echo_from_metrics(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open metrics file " + path);
    std::ostringstream echo;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) != 0) break;
        const std::string body = line.substr(2);
        if (body.rfind("qpd-metrics", 0) == 0) continue;
        echo << body << "\n";
    }
    return parse_config_text(echo.str());
}

void cmd_encode(const ExperimentConfig& cfg) {
    const std::size_t n = to_u64("n", cfg.get("encode", "n"));
    encoder::TargetDistribution dist;
    dist.n_values = n;
    dist.classes = parse_classes("classes", cfg.get("encode", "classes"));
    std::vector<double> targets = parse_double_list("targets", cfg.get("encode", "targets"));
    if (targets.size() + 1 == dist.classes.size()) { // last target by normalization
        double sum = 0.0;
        for (double t : targets) sum += t;
        targets.push_back(1.0 - sum);
    }
    dist.class_targets = std::move(targets);

    encoder::EncodeOptions opt;
    if (cfg.has("encode", "largest_remainder"))
        opt.largest_class_as_remainder =
            to_bool("largest_remainder", cfg.get("encode", "largest_remainder"));
    if (cfg.has("encode", "max_iterations"))
        opt.max_iterations_per_step =
            static_cast<int>(to_u64("max_iterations", cfg.get("encode", "max_iterations")));

    encoder::validate_targets(dist, opt);
    const encoder::EncodedState enc = encoder::encode(dist, opt);

    std::vector<std::string> rows;
    for (std::size_t c = 0; c < enc.dist.classes.size(); ++c) {
        int t_f = 0;
        for (const auto& s : enc.plan.steps)
            if (s.class_id == c) t_f = s.t_f;
        rows.push_back("class," + std::to_string(c) + "," +
                       std::to_string(enc.dist.classes[c].size()) + "," +
                       fmt(enc.dist.class_targets[c]) + "," +
                       fmt(enc.class_probability[c]) + "," +
                       fmt(std::fabs(enc.class_probability[c] - enc.dist.class_targets[c])) +
                       "," + std::to_string(t_f) + ",,");
    }
    rows.push_back("total,,,,,,," + std::to_string(enc.plan.total_grover_iterations) + "," +
                   fmt(enc.max_class_error));
    write_metrics(cfg, "record,class,size,target,achieved,abs_error,t_f,total_iterations,max_class_error",
                  rows);
}

void cmd_count(const ExperimentConfig& cfg) {
    const std::size_t n = to_u64("n", cfg.get("count", "n"));
    const std::vector<MarkedSet> classes = parse_classes("classes", cfg.get("count", "classes"));
    for (const auto& cls : classes)
        if (!cls.empty() && cls.max_index() >= n)
            throw ConfigError("class index beyond n");

    counting::CountingConfig ccfg = counting::CountingConfig::for_n(n);
    if (cfg.has("count", "precision_bits"))
        ccfg.precision_bits =
            static_cast<int>(to_u64("precision_bits", cfg.get("count", "precision_bits")));
    const std::string mode = cfg.get_or("count", "mode", "deterministic");
    if (mode == "stochastic")
        ccfg.mode = counting::CountingConfig::Mode::stochastic;
    else if (mode != "deterministic")
        throw ConfigError("mode must be deterministic or stochastic");

    Rng rng(cfg.seed());
    const counting::ClassCounts cc = counting::count_all_classes(n, classes, ccfg, rng);

    std::vector<std::string> rows;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (c < cc.estimates.size()) {
            const auto& e = cc.estimates[c];
            rows.push_back(std::to_string(c) + "," + std::to_string(classes[c].size()) + "," +
                           std::to_string(e.raw_outcome) + "," + fmt(e.phase) + "," +
                           fmt(e.estimate_real) + "," + std::to_string(e.estimate) + "," +
                           fmt(e.error_bound) + ",measured");
        } else {
            rows.push_back(std::to_string(c) + "," + std::to_string(classes[c].size()) +
                           ",,,," + std::to_string(cc.counts[c]) + ",,inferred");
        }
    }
    write_metrics(cfg, "class,size,raw_outcome,phase,estimate_real,estimate,error_bound,kind",
                  rows);
}

namespace {

rl::PolicyConfig policy_from(const ExperimentConfig& cfg) {
    rl::PolicyConfig policy;
    policy.j_intervals = to_u64("j_intervals", cfg.get_or("train", "j_intervals", "4"));
    policy.t_start = to_double("t_start", cfg.get_or("train", "t_start", "1.0"));
    policy.t_min = to_double("t_min", cfg.get_or("train", "t_min", "0.05"));
    policy.t_decay = to_double("t_decay", cfg.get_or("train", "t_decay", "0.995"));
    if (cfg.has("train", "precision_bits"))
        policy.counting.precision_bits =
            static_cast<int>(to_u64("precision_bits", cfg.get("train", "precision_bits")));
    if (cfg.has("train", "exact_sum_weights"))
        policy.exact_sum_weights =
            to_bool("exact_sum_weights", cfg.get("train", "exact_sum_weights"));
    if (cfg.has("train", "recount_each_decision"))
        policy.recount_each_decision =
            to_bool("recount_each_decision", cfg.get("train", "recount_each_decision"));
    const std::string selector = cfg.get_or("train", "selector", "quantum");
    if (selector == "classical")
        policy.selector = rl::PolicyConfig::Selector::classical;
    else if (selector != "quantum")
        throw ConfigError("selector must be quantum or classical");
    return policy;
}

std::unique_ptr<rl::Environment> environment_from(const ExperimentConfig& cfg) {
    const std::string env = cfg.get("train", "env");
    if (env == "gridworld") {
        if (cfg.has("train", "grid_file"))
            return std::make_unique<rl::GridWorld>(
                rl::GridWorld::from_file(cfg.get("train", "grid_file")));
        const std::size_t w = to_u64("width", cfg.get_or("train", "width", "4"));
        const std::size_t h = to_u64("height", cfg.get_or("train", "height", "4"));
        return std::make_unique<rl::GridWorld>(
            w, h, to_u64("start_x", cfg.get_or("train", "start_x", "0")),
            to_u64("start_y", cfg.get_or("train", "start_y", "0")),
            to_u64("goal_x", cfg.get_or("train", "goal_x", std::to_string(w - 1))),
            to_u64("goal_y", cfg.get_or("train", "goal_y", std::to_string(h - 1))));
    }
    if (env == "bandit") {
        std::vector<double> means;
        if (cfg.has("train", "arm_means")) {
            means = parse_double_list("arm_means", cfg.get("train", "arm_means"));
        } else {
            const std::size_t arms = to_u64("arms", cfg.get("train", "arms"));
            if (arms == 0) throw ConfigError("bandit needs at least one arm");
            means.resize(arms);
            for (std::size_t a = 0; a < arms; ++a) // deterministic ramp in [0, 0.5]
                means[a] = 0.5 * static_cast<double>(a) / std::max<std::size_t>(1, arms - 1);
            if (cfg.has("train", "dominant_arm")) {
                const std::size_t best = to_u64("dominant_arm", cfg.get("train", "dominant_arm"));
                if (best >= arms) throw ConfigError("dominant arm out of range");
                means[best] = 0.5 + to_double("dominant_gap",
                                              cfg.get_or("train", "dominant_gap", "0.3"));
            }
        }
        const double noise = to_double("noise", cfg.get_or("train", "noise", "0.1"));
        return std::make_unique<rl::KArmedBandit>(std::move(means), noise);
    }
    throw ConfigError("env must be gridworld or bandit");
}

} // namespace

void cmd_train(const ExperimentConfig& cfg) {
    const std::unique_ptr<rl::Environment> env = environment_from(cfg);
    const rl::PolicyConfig policy = policy_from(cfg);

    rl::TrainingConfig tc;
    tc.learning_rate = to_double("learning_rate", cfg.get_or("train", "learning_rate", "0.1"));
    tc.discount = to_double("discount", cfg.get_or("train", "discount", "0.95"));
    tc.episodes = to_u64("episodes", cfg.get_or("train", "episodes", "1000"));
    tc.max_steps = to_u64("max_steps", cfg.get_or("train", "max_steps", "100"));
    tc.seed = cfg.seed();

    std::size_t max_actions = 0;
    for (std::size_t s = 0; s < env->num_states(); ++s)
        if (!env->is_terminal(s))
            max_actions = std::max(max_actions, env->allowed_actions(s).size());
    const double q_init = to_double("q_init", cfg.get_or("train", "q_init", "0"));
    rl::TabularQ q(env->num_states(), max_actions, q_init);

    const rl::RunStats stats = rl::train(*env, q, policy, tc);

    std::vector<std::string> rows;
    for (std::size_t ep = 0; ep < stats.episode_returns.size(); ++ep)
        rows.push_back("episode," + std::to_string(ep) + "," + fmt(stats.episode_returns[ep]) +
                       "," + std::to_string(stats.episode_steps[ep]) + ",,,,,,,");
    double max_err = 0.0;
    for (double e : stats.selection_errors) max_err = std::max(max_err, e);
    rows.push_back("summary,,,," + std::to_string(stats.decisions) + "," +
                   std::to_string(stats.totals.j_calls) + "," +
                   std::to_string(stats.totals.grover_iterations) + "," +
                   std::to_string(stats.totals.counting_invocations) + "," +
                   std::to_string(stats.totals.classical_q_evals) + "," +
                   fmt(max_err) + "," +
                   fmt(rl::greedy_return(*env, q, tc.max_steps, tc.seed)));
    write_metrics(cfg,
                  "record,episode,return,steps,decisions,j_calls,grover_iterations,"
                  "counting_invocations,classical_q_evals,max_encoding_error,greedy_return",
                  rows);
}

void cmd_sweep(const ExperimentConfig& cfg) {
    const std::vector<std::uint64_t> n_list =
        parse_u64_list("n_values", cfg.get("sweep", "n_values"));
    const std::size_t j = to_u64("j_classes", cfg.get_or("sweep", "j_classes", "4"));
    const std::size_t sets = to_u64("target_sets", cfg.get_or("sweep", "target_sets", "50"));
    const double headroom = to_double("headroom", cfg.get_or("sweep", "headroom", "0.85"));
    // the 1/sqrt(N) precision story is about small amplified classes, so the
    // default keeps them at single states
    const std::size_t cap =
        to_u64("max_class_size", cfg.get_or("sweep", "max_class_size", "1"));

    std::vector<std::string> rows;
    for (const std::uint64_t n : n_list) {
        Rng rng = Rng(cfg.seed()).fork(n);
        std::vector<double> worst_errors;
        std::vector<double> iterations;
        for (std::size_t rep = 0; rep < sets; ++rep) {
            const encoder::TargetDistribution dist =
                encoder::random_distribution(n, j, rng, headroom, cap);
            const planner::EncodingPlan plan = encoder::plan_encoding(dist);
            double worst = 0.0;
            for (std::size_t c = 0; c < dist.classes.size(); ++c)
                worst = std::max(worst, std::fabs(plan.class_probability[c] -
                                                  dist.class_targets[c]));
            worst_errors.push_back(worst);
            iterations.push_back(static_cast<double>(plan.total_grover_iterations));
        }
        double mean_err = 0.0;
        for (double e : worst_errors) mean_err += e;
        mean_err /= static_cast<double>(worst_errors.size());
        rows.push_back(std::to_string(n) + "," + std::to_string(sets) + "," + fmt(mean_err) +
                       "," + fmt(median(iterations)));
    }
    write_metrics(cfg, "n,target_sets,mean_worst_class_error,median_grover_iterations", rows);
}

int dispatch(const ExperimentConfig& cfg) {
    try {
        reject_unknown_keys(cfg);
        const std::string cmd = cfg.command();
        if (cmd == "encode") cmd_encode(cfg);
        else if (cmd == "count") cmd_count(cfg);
        else if (cmd == "train") cmd_train(cfg);
        else if (cmd == "sweep") cmd_sweep(cfg);
        else throw ConfigError("unknown command '" + cmd + "'");
        return 0;
    } catch (const BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 4;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace qpd::cli
