#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "qpd/cli.hpp"
#include "qpd/errors.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::string selector;
    long long seed = -1;
    bool seed_set = false;
};

void add_common(CLI::App* sub, CommonArgs& args, bool with_selector) {
    sub->add_option("--config", args.config_path, "experiment config file")->required();
    sub->add_option("--seed", args.seed, "override the run seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
    sub->add_option("--out", args.out_dir, "output directory for metric files");
    if (with_selector)
        sub->add_option("--selector", args.selector, "quantum or classical")
            ->check(CLI::IsMember({"quantum", "classical"}));
}

int run(const std::string& command, const CommonArgs& args) {
    try {
        qpd::cli::ExperimentConfig cfg = qpd::cli::parse_config_file(args.config_path);
        cfg.sections["run"]["command"] = command;
        if (args.seed_set) cfg.sections["run"]["seed"] = std::to_string(args.seed);
        if (!args.out_dir.empty()) cfg.sections["run"]["out"] = args.out_dir;
        if (!args.selector.empty()) cfg.sections["train"]["selector"] = args.selector;
        return qpd::cli::dispatch(cfg);
    } catch (const qpd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sequential Grover encoding of probability distributions, "
                 "quantum counting, and hybrid Q-learning experiments"};
    app.require_subcommand(1);

    CommonArgs encode_args, count_args, train_args, sweep_args;
    add_common(app.add_subcommand("encode", "encode a class distribution on the register"),
               encode_args, false);
    add_common(app.add_subcommand("count", "estimate class sizes by phase estimation"),
               count_args, false);
    add_common(app.add_subcommand("train", "run a Q-learning experiment"), train_args, true);
    add_common(app.add_subcommand("sweep", "encoding error and cost across dimensions"),
               sweep_args, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (app.got_subcommand("encode")) return run("encode", encode_args);
    if (app.got_subcommand("count")) return run("count", count_args);
    if (app.got_subcommand("train")) return run("train", train_args);
    return run("sweep", sweep_args);
}
