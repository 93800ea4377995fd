#pragma once

#include "musched/baselines.hpp"
#include "musched/channel.hpp"
#include "musched/model.hpp"
#include "musched/modulation.hpp"
#include "musched/montecarlo.hpp"
#include "musched/solver.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace musched {

struct MethodSpec {
    enum class Kind { Objective, Random, Aua, Es, File };

    Kind kind = Kind::Objective;
    ObjectiveKind objective = ObjectiveKind::MseLmmse;  // Objective and Es
    std::string file;                                   // File
    std::string name;                                   // canonical label in reports

    // the box this method guarantees for its schedules
    ConstraintBox method_box(const Scenario& scenario, const ConstraintBox& box) const;
};

MethodSpec parse_method(const std::string& token);

struct ExperimentConfig {
    Scenario scenario;
    ConstraintBox box;
    ChannelModel channel;
    NoiseModel noise;
    std::string modulation = "qpsk";
    double alpha_mse = 0.1;
    double alpha_capacity = 10.0;
    double alpha_rate = 1.0;
    std::vector<MethodSpec> methods;
    int realizations = 100;
    int trials = 10000;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    FbsConfig fbs;
    std::uint64_t es_cap = 10'000'000;
    std::string channel_import;  // optional path pattern containing {i}

    double alpha_for(ObjectiveKind kind) const;
};

// Built-in desk-scale presets (also shipped as files under configs/):
// s1-desk .. s6-desk mirror the evaluated scenario tables, es-desk is a small
// instance on which exhaustive search is tractable.
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
ExperimentConfig preset_config(const std::string& name);

// Key-value config file ("key = value", '#' comments). Throws on unreadable
// files; collects per-key problems into `diagnostics` when non-null.
ExperimentConfig parse_config_file(const std::string& path, std::vector<std::string>* diagnostics = nullptr);

// Accepts a preset name or a config file path.
ExperimentConfig load_config(const std::string& name_or_path, std::vector<std::string>* diagnostics = nullptr);

// All violations found without running anything: precheck failures, unknown
// methods, missing divisibility for the random baseline, bad counts.
std::vector<std::string> validate_config(const ExperimentConfig& cfg);

struct ExperimentResult {
    int method_failures = 0;  // (method, realization) cells that errored
    std::string metrics_csv;
    std::string schedules_csv;
    std::string summary_json;
    std::string comparison_txt;
};

// Full experiment: per realization generate or import a channel, run every
// method, evaluate metrics, and emit CSV rows plus per-method 90th-percentile
// summaries. Rerunning with the same config and seed is byte-identical.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace musched
