#include "musched/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

struct CommonOpts {
    std::string config;
    std::string out;
    std::string methods;
    long long seed = -1;
    int realizations = -1;
    int trials = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("config", opts.config, "preset name or config file path")->required();
    cmd->add_option("--out", opts.out, "output directory");
    cmd->add_option("--seed", opts.seed, "master seed override");
    cmd->add_option("--realizations", opts.realizations, "channel realization count override");
    cmd->add_option("--trials", opts.trials, "Monte Carlo trials per realization override");
    cmd->add_option("--methods", opts.methods, "comma-separated method list override");
}

int load_and_override(const CommonOpts& opts, musched::ExperimentConfig& cfg) {
    std::vector<std::string> diags;
    try {
        cfg = musched::load_config(opts.config, &diags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    if (!diags.empty()) {
        for (const auto& d : diags) std::cerr << "config: " << d << '\n';
        return 2;
    }
    if (!opts.out.empty()) cfg.out_dir = opts.out;
    if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);
    if (opts.realizations >= 0) cfg.realizations = opts.realizations;
    if (opts.trials >= 0) cfg.trials = opts.trials;
    if (!opts.methods.empty()) {
        cfg.methods.clear();
        std::string tok;
        std::istringstream is(opts.methods);
        while (std::getline(is, tok, ',')) {
            try {
                cfg.methods.push_back(musched::parse_method(tok));
            } catch (const std::exception& e) {
                std::cerr << "config: " << e.what() << '\n';
                return 2;
            }
        }
    }
    return 0;
}

int run_config(const musched::ExperimentConfig& cfg) {
    try {
        const musched::ExperimentResult result = musched::run_experiment(cfg, std::cout);
        std::cout << "metrics: " << result.metrics_csv << '\n'
                  << "summary: " << result.summary_json << '\n';
        return result.method_failures > 0 ? 3 : 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MU-MIMO user scheduling experiments"};
    app.require_subcommand(1);

    CommonOpts run_opts, validate_opts, oracle_opts;
    CLI::App* run_cmd = app.add_subcommand("run", "run a full method x realization experiment grid");
    add_common(run_cmd, run_opts);
    CLI::App* validate_cmd = app.add_subcommand("validate", "check a config without running anything");
    add_common(validate_cmd, validate_opts);
    CLI::App* oracle_cmd = app.add_subcommand("oracle", "run only the exhaustive-search methods");
    add_common(oracle_cmd, oracle_opts);

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) {
        musched::ExperimentConfig cfg;
        if (int rc = load_and_override(run_opts, cfg)) return rc;
        return run_config(cfg);
    }

    if (validate_cmd->parsed()) {
        musched::ExperimentConfig cfg;
        if (int rc = load_and_override(validate_opts, cfg)) return rc;
        const auto problems = musched::validate_config(cfg);
        if (problems.empty()) {
            std::cout << "config ok\n";
            return 0;
        }
        for (const auto& p : problems) std::cout << "violation: " << p << '\n';
        return 2;
    }

    musched::ExperimentConfig cfg;
    if (int rc = load_and_override(oracle_opts, cfg)) return rc;
    std::vector<musched::MethodSpec> es_only;
    for (const auto& m : cfg.methods)
        if (m.kind == musched::MethodSpec::Kind::Es) es_only.push_back(m);
    if (es_only.empty()) {
        for (const char* name : {"es-mse", "es-capacity", "es-rate"})
            es_only.push_back(musched::parse_method(name));
    }
    cfg.methods = std::move(es_only);
    return run_config(cfg);
}
