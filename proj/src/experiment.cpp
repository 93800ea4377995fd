#include "musched/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace musched {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

MethodSpec parse_method(const std::string& token) {
    MethodSpec m;
    m.name = token;
    if (token == "mse-lmmse" || token == "capacity" || token == "sum-rate") {
        m.kind = MethodSpec::Kind::Objective;
        m.objective = token == "mse-lmmse" ? ObjectiveKind::MseLmmse
                    : token == "capacity"  ? ObjectiveKind::Capacity
                                           : ObjectiveKind::SumRate;
        return m;
    }
    if (token == "random") {
        m.kind = MethodSpec::Kind::Random;
        return m;
    }
    if (token == "aua") {
        m.kind = MethodSpec::Kind::Aua;
        return m;
    }
    if (token == "es-mse" || token == "es-capacity" || token == "es-rate") {
        m.kind = MethodSpec::Kind::Es;
        m.objective = token == "es-mse"      ? ObjectiveKind::MseLmmse
                    : token == "es-capacity" ? ObjectiveKind::Capacity
                                             : ObjectiveKind::SumRate;
        return m;
    }
    if (token.rfind("file:", 0) == 0) {
        m.kind = MethodSpec::Kind::File;
        m.file = token.substr(5);
        if (m.file.empty()) throw std::invalid_argument("method 'file:' needs a path");
        return m;
    }
    throw std::invalid_argument("unknown method '" + token + "'");
}

ConstraintBox MethodSpec::method_box(const Scenario& scenario, const ConstraintBox& box) const {
    switch (kind) {
        case Kind::Objective:
        case Kind::Es: return box;
        case Kind::Random: {
            const int per_slot = scenario.T > 0 ? scenario.U / scenario.T : 0;
            return ConstraintBox{per_slot, per_slot, 1, 1};
        }
        case Kind::Aua: return ConstraintBox{scenario.U, scenario.U, scenario.T, scenario.T};
        case Kind::File: return ConstraintBox{0, scenario.U, 0, scenario.T};
    }
    return box;
}

double ExperimentConfig::alpha_for(ObjectiveKind kind) const {
    switch (kind) {
        case ObjectiveKind::MseLmmse: return alpha_mse;
        case ObjectiveKind::Capacity: return alpha_capacity;
        case ObjectiveKind::SumRate: return alpha_rate;
    }
    return 0.0;
}

namespace {

void apply_methods(ExperimentConfig& cfg, const std::vector<std::string>& tokens,
                   std::vector<std::string>* diagnostics) {
    cfg.methods.clear();
    for (const auto& tok : tokens) {
        try {
            cfg.methods.push_back(parse_method(tok));
        } catch (const std::exception& e) {
            if (diagnostics) diagnostics->push_back(e.what());
        }
    }
}

ExperimentConfig desk_base() {
    ExperimentConfig cfg;
    cfg.realizations = 100;
    cfg.trials = 10000;
    cfg.seed = 1;
    cfg.fbs.tau_init = 0.01;
    cfg.fbs.I_max = 100;
    return cfg;
}

struct PresetRow {
    const char* name;
    int B, L, n_A, U, T, T_min, T_max, U_min, U_max, K_init;
    double a_mse, a_cap, a_rate;
    bool mmwave;
};

constexpr PresetRow kPresets[] = {
    {"s1-desk", 16, 1, 16, 16, 2, 1, 2, 8, 10, 8, 1e-1, 10, 1, true},
    {"s2-desk", 32, 1, 32, 32, 2, 1, 2, 16, 20, 5, 1e-1, 5, 1, true},
    {"s3-desk", 32, 1, 32, 64, 4, 1, 2, 16, 20, 3, 1, 1, 1e-1, true},
    {"s4-desk", 16, 8, 2, 16, 2, 1, 2, 8, 10, 8, 10, 5, 5, false},
    {"s5-desk", 32, 16, 2, 32, 2, 1, 2, 16, 20, 5, 1e-5, 20, 1, false},
    {"s6-desk", 32, 16, 2, 64, 4, 1, 2, 16, 20, 3, 1e-3, 1, 1e-2, false},
};

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& row : kPresets) names.emplace_back(row.name);
    names.emplace_back("es-desk");
    return names;
}

bool is_preset(const std::string& name) {
    const auto names = preset_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

ExperimentConfig preset_config(const std::string& name) {
    if (name == "es-desk") {
        // small instance where exhaustive search is tractable
        ExperimentConfig cfg = desk_base();
        cfg.scenario = Scenario{6, 1, 6, 6, 2, 0.1, 6.0, 0.0, 2, 20};
        cfg.box = ConstraintBox{3, 3, 1, 1};
        cfg.channel.kind = ChannelModel::Kind::MmwaveUla;
        cfg.channel.carrier_hz = 60e9;
        cfg.modulation = "qpsk";
        cfg.alpha_mse = 0.1;
        cfg.alpha_capacity = 10.0;
        cfg.alpha_rate = 1.0;
        cfg.realizations = 50;
        cfg.trials = 2000;
        apply_methods(cfg,
                      {"mse-lmmse", "capacity", "sum-rate", "random", "aua", "es-mse", "es-capacity",
                       "es-rate"},
                      nullptr);
        cfg.scenario.N0_w = noise_power(cfg.noise);
        return cfg;
    }
    for (const auto& row : kPresets) {
        if (name != row.name) continue;
        ExperimentConfig cfg = desk_base();
        cfg.scenario = Scenario{row.B, row.L, row.n_A, row.U, row.T, row.mmwave ? 0.1 : 0.01,
                                6.0,   0.0,   row.mmwave ? 2 : 6, row.K_init};
        cfg.box = ConstraintBox{row.U_min, row.U_max, row.T_min, row.T_max};
        cfg.channel.kind = row.mmwave ? ChannelModel::Kind::MmwaveUla : ChannelModel::Kind::CellfreeRayleigh;
        cfg.channel.carrier_hz = row.mmwave ? 60e9 : 1.9e9;
        cfg.channel.area_x_m = row.mmwave ? 150.0 : 200.0;
        cfg.channel.area_y_m = row.mmwave ? 200.0 : 300.0;
        cfg.modulation = row.mmwave ? "qpsk" : "qam64";
        cfg.alpha_mse = row.a_mse;
        cfg.alpha_capacity = row.a_cap;
        cfg.alpha_rate = row.a_rate;
        if (name == "s1-desk") {
            apply_methods(cfg, {"mse-lmmse", "random", "aua"}, nullptr);
        } else {
            apply_methods(cfg, {"mse-lmmse", "capacity", "sum-rate", "random", "aua"}, nullptr);
        }
        cfg.scenario.N0_w = noise_power(cfg.noise);
        return cfg;
    }
    throw std::invalid_argument("unknown preset '" + name + "'");
}

namespace {

struct KvReader {
    std::map<std::string, std::string> kv;
    std::vector<std::string>* diags;
    std::map<std::string, bool> used;

    bool has(const std::string& key) const { return kv.count(key) > 0; }

    template <typename F>
    void with(const std::string& key, F&& f) {
        auto it = kv.find(key);
        if (it == kv.end()) return;
        used[key] = true;
        try {
            f(it->second);
        } catch (const std::exception& e) {
            if (diags) diags->push_back("key '" + key + "': " + e.what());
        }
    }

    void num(const std::string& key, double& target) {
        with(key, [&](const std::string& v) {
            std::size_t pos = 0;
            const double parsed = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("trailing characters in '" + v + "'");
            target = parsed;
        });
    }

    void integer(const std::string& key, int& target) {
        with(key, [&](const std::string& v) {
            std::size_t pos = 0;
            const double parsed = std::stod(v, &pos);
            if (pos != v.size() || parsed != std::floor(parsed))
                throw std::invalid_argument("expected an integer, got '" + v + "'");
            target = static_cast<int>(parsed);
        });
    }

    void u64(const std::string& key, std::uint64_t& target) {
        with(key, [&](const std::string& v) {
            std::size_t pos = 0;
            const double parsed = std::stod(v, &pos);
            if (pos != v.size() || parsed < 0 || parsed != std::floor(parsed))
                throw std::invalid_argument("expected a non-negative integer, got '" + v + "'");
            target = static_cast<std::uint64_t>(parsed);
        });
    }

    void text(const std::string& key, std::string& target) {
        with(key, [&](const std::string& v) { target = v; });
    }
};

}  // namespace

ExperimentConfig parse_config_file(const std::string& path, std::vector<std::string>* diagnostics) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);

    KvReader reader;
    reader.diags = diagnostics;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (diagnostics)
                diagnostics->push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
            continue;
        }
        reader.kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    ExperimentConfig cfg = desk_base();
    std::string base;
    reader.text("preset", base);
    if (!base.empty()) {
        if (is_preset(base)) {
            cfg = preset_config(base);
        } else if (diagnostics) {
            diagnostics->push_back("unknown preset '" + base + "'");
        }
    }

    reader.integer("L", cfg.scenario.L);
    reader.integer("n_A", cfg.scenario.n_A);
    reader.integer("U", cfg.scenario.U);
    reader.integer("T", cfg.scenario.T);
    reader.integer("U_min", cfg.box.U_min);
    reader.integer("U_max", cfg.box.U_max);
    reader.integer("T_min", cfg.box.T_min);
    reader.integer("T_max", cfg.box.T_max);
    reader.integer("K_init", cfg.scenario.K_init);
    reader.num("rho_w", cfg.scenario.rho_w);
    reader.num("eta_db", cfg.scenario.eta_db);
    reader.text("modulation", cfg.modulation);

    reader.num("bandwidth_hz", cfg.noise.bandwidth_hz);
    reader.num("noise_temp_k", cfg.noise.noise_temp_k);
    reader.num("noise_figure_db", cfg.noise.noise_figure_db);

    reader.with("channel_model", [&](const std::string& v) {
        if (v == "mmwave-ula")
            cfg.channel.kind = ChannelModel::Kind::MmwaveUla;
        else if (v == "cellfree-rayleigh")
            cfg.channel.kind = ChannelModel::Kind::CellfreeRayleigh;
        else
            throw std::invalid_argument("unknown channel model '" + v + "'");
    });
    reader.num("carrier_hz", cfg.channel.carrier_hz);
    reader.num("area_x_m", cfg.channel.area_x_m);
    reader.num("area_y_m", cfg.channel.area_y_m);
    reader.num("bs_height_m", cfg.channel.bs_height_m);
    reader.num("ue_height_m", cfg.channel.ue_height_m);
    reader.integer("path_count", cfg.channel.path_count);
    reader.num("pathloss_exponent", cfg.channel.pathloss_exponent);

    reader.num("alpha_mse", cfg.alpha_mse);
    reader.num("alpha_capacity", cfg.alpha_capacity);
    reader.num("alpha_rate", cfg.alpha_rate);

    reader.with("methods", [&](const std::string& v) { apply_methods(cfg, split_list(v), diagnostics); });
    reader.integer("realizations", cfg.realizations);
    reader.integer("trials", cfg.trials);
    reader.u64("seed", cfg.seed);
    reader.text("out_dir", cfg.out_dir);

    reader.num("tau_init", cfg.fbs.tau_init);
    reader.integer("i_max", cfg.fbs.I_max);
    reader.num("fbs_tol", cfg.fbs.tol);
    reader.num("drs_beta", cfg.fbs.drs.beta);
    reader.integer("drs_kmax", cfg.fbs.drs.K_max);
    reader.num("drs_tol", cfg.fbs.drs.tol);
    reader.u64("es_cap", cfg.es_cap);
    reader.text("channel_import", cfg.channel_import);

    for (const auto& [key, value] : reader.kv) {
        (void)value;
        if (key != "preset" && !reader.used.count(key)) {
            if (diagnostics) diagnostics->push_back("unknown key '" + key + "'");
        }
    }

    cfg.scenario.B = cfg.scenario.L * cfg.scenario.n_A;
    cfg.scenario.N0_w = noise_power(cfg.noise);
    try {
        cfg.scenario.Q = ModulationScheme::from_name(cfg.modulation).Q;
    } catch (const std::exception& e) {
        if (diagnostics) diagnostics->push_back(e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& name_or_path, std::vector<std::string>* diagnostics) {
    if (is_preset(name_or_path)) return preset_config(name_or_path);
    return parse_config_file(name_or_path, diagnostics);
}

std::vector<std::string> validate_config(const ExperimentConfig& cfg) {
    std::vector<std::string> problems;
    try {
        cfg.scenario.validate();
    } catch (const std::exception& e) {
        problems.emplace_back(e.what());
    }
    try {
        cfg.fbs.validate();
    } catch (const std::exception& e) {
        problems.emplace_back(e.what());
    }
    try {
        cfg.channel.validate();
    } catch (const std::exception& e) {
        problems.emplace_back(e.what());
    }
    if (!feasibility_precheck(cfg.scenario.U, cfg.scenario.T, cfg.box))
        problems.push_back("constraint box fails the feasibility precheck for U=" +
                           std::to_string(cfg.scenario.U) + ", T=" + std::to_string(cfg.scenario.T));
    if (cfg.methods.empty()) problems.push_back("no methods configured");
    for (const auto& m : cfg.methods) {
        if (m.kind == MethodSpec::Kind::Random && cfg.scenario.T > 0 && cfg.scenario.U % cfg.scenario.T != 0)
            problems.push_back("method 'random' requires T to divide U");
        if (m.kind == MethodSpec::Kind::File && !std::filesystem::exists(m.file))
            problems.push_back("schedule file '" + m.file + "' does not exist");
    }
    if (cfg.realizations < 1) problems.push_back("realizations must be >= 1");
    if (cfg.trials < 1) problems.push_back("trials must be >= 1");
    try {
        ModulationScheme::from_name(cfg.modulation);
    } catch (const std::exception& e) {
        problems.emplace_back(e.what());
    }
    if (!cfg.channel_import.empty() && cfg.channel_import.find("{i}") == std::string::npos)
        problems.push_back("channel_import must contain the {i} realization placeholder");
    return problems;
}

namespace {

std::string import_path(const std::string& pattern, int realization) {
    const auto pos = pattern.find("{i}");
    std::string path = pattern;
    path.replace(pos, 3, std::to_string(realization));
    return path;
}

ChannelSet channel_set_for(const ExperimentConfig& cfg, int realization) {
    if (cfg.channel_import.empty())
        return make_channel_set(cfg.channel, cfg.scenario, 1.0, cfg.seed,
                                static_cast<std::uint64_t>(realization));
    const LoadedChannel lc = load_channel(import_path(cfg.channel_import, realization));
    if (lc.Hbar.rows() != cfg.scenario.B || lc.Hbar.cols() != cfg.scenario.U)
        throw std::runtime_error("imported channel has wrong dimensions");
    ChannelSet cs;
    cs.Hbar = lc.Hbar;
    cs.Delta = power_control(cs.Hbar, cfg.scenario.eta_db);
    cs.H = effective_channel(cs.Hbar, cs.Delta, cfg.scenario.rho_w, cfg.scenario.N0_w);
    Rng est_rng = derive_rng(cfg.seed, "chanest", static_cast<std::uint64_t>(realization));
    ChannelEstimate est = estimate_channel(cs.H, 1.0, est_rng);
    cs.Hhat = std::move(est.Hhat);
    cs.E = std::move(est.E);
    cs.Gamma = std::move(est.Gamma);
    return cs;
}

SchedulingMatrix schedule_for(const ExperimentConfig& cfg, const MethodSpec& method, const ChannelSet& channel,
                              int realization) {
    switch (method.kind) {
        case MethodSpec::Kind::Objective: {
            ObjectiveSpec spec{method.objective, cfg.alpha_for(method.objective), 1.0};
            FbsConfig fbs = cfg.fbs;
            fbs.K_init = cfg.scenario.K_init;
            const std::uint64_t seed =
                derive_seed(cfg.seed, "solver-" + method.name, static_cast<std::uint64_t>(realization));
            return schedule(spec, channel, cfg.scenario.T, cfg.box, fbs, seed).C_binary;
        }
        case MethodSpec::Kind::Random:
            return random_schedule(cfg.scenario.U, cfg.scenario.T,
                                   derive_seed(cfg.seed, "random", static_cast<std::uint64_t>(realization)));
        case MethodSpec::Kind::Aua: return aua_schedule(cfg.scenario.U, cfg.scenario.T);
        case MethodSpec::Kind::Es: {
            ObjectiveSpec spec{method.objective, 0.0, 1.0};
            return exhaustive_search(spec, channel, cfg.scenario.T, cfg.box, cfg.es_cap).C_binary;
        }
        case MethodSpec::Kind::File: {
            SchedulingMatrix c = load_schedule(method.file);
            if (c.users() != cfg.scenario.U || c.slots() != cfg.scenario.T)
                throw std::runtime_error("schedule file '" + method.file + "' has wrong dimensions");
            return c;
        }
    }
    throw std::logic_error("schedule_for: unhandled method kind");
}

std::string flatten_schedule(const SchedulingMatrix& c) {
    std::string s;
    for (int u = 0; u < c.users(); ++u) {
        if (u) s += ';';
        for (int t = 0; t < c.slots(); ++t) s += c.entries(u, t) == 1.0 ? '1' : '0';
    }
    return s;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
    const std::vector<std::string> problems = validate_config(cfg);
    if (!problems.empty()) {
        std::string msg = "invalid experiment config:";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw std::invalid_argument(msg);
    }

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    ExperimentResult result;
    result.metrics_csv = (fs::path(cfg.out_dir) / "metrics.csv").string();
    result.schedules_csv = (fs::path(cfg.out_dir) / "schedules.csv").string();
    result.summary_json = (fs::path(cfg.out_dir) / "summary.json").string();
    result.comparison_txt = (fs::path(cfg.out_dir) / "comparison.txt").string();

    std::ofstream metrics(result.metrics_csv);
    std::ofstream schedules(result.schedules_csv);
    if (!metrics || !schedules) throw std::runtime_error("cannot write into output directory " + cfg.out_dir);
    metrics << "method,realization,ue,ber,hmi,mse_db,rate\n";
    schedules << "method,realization,schedule\n";

    const ModulationScheme mod = ModulationScheme::from_name(cfg.modulation);
    MonteCarloConfig mc;
    mc.trials = cfg.trials;
    mc.n0 = 1.0;

    struct MethodSamples {
        std::vector<double> ber, hmi, mse_db, rate;
        int failures = 0;
        std::vector<std::string> errors;
    };
    std::vector<MethodSamples> samples(cfg.methods.size());

    for (int r = 0; r < cfg.realizations; ++r) {
        ChannelSet channel;
        try {
            channel = channel_set_for(cfg, r);
        } catch (const std::exception& e) {
            // a bad channel import fails every method for this realization
            for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
                samples[mi].failures += 1;
                samples[mi].errors.push_back("realization " + std::to_string(r) + ": " + e.what());
            }
            result.method_failures += static_cast<int>(cfg.methods.size());
            continue;
        }

        for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
            const MethodSpec& method = cfg.methods[mi];
            try {
                const SchedulingMatrix c = schedule_for(cfg, method, channel, r);
                if (!is_feasible(c, method.method_box(cfg.scenario, cfg.box)))
                    throw std::runtime_error("schedule violates the method's constraint box");
                const MetricsReport report =
                    evaluate_schedule(channel, c, mod, mc, derive_seed(cfg.seed, "mc", r));
                for (int u = 0; u < cfg.scenario.U; ++u) {
                    metrics << method.name << ',' << r << ',' << u << ',' << fmt17(report.ber(u)) << ','
                            << fmt17(report.hmi(u)) << ',' << fmt17(report.mse_db(u)) << ','
                            << fmt17(report.rate(u)) << '\n';
                    samples[mi].ber.push_back(report.ber(u));
                    samples[mi].hmi.push_back(report.hmi(u));
                    samples[mi].mse_db.push_back(report.mse_db(u));
                    samples[mi].rate.push_back(report.rate(u));
                }
                schedules << method.name << ',' << r << ',' << flatten_schedule(c) << '\n';
            } catch (const std::exception& e) {
                samples[mi].failures += 1;
                samples[mi].errors.push_back("realization " + std::to_string(r) + ": " + e.what());
                result.method_failures += 1;
            }
        }
        if ((r + 1) % 10 == 0 || r + 1 == cfg.realizations)
            log << "realization " << r + 1 << "/" << cfg.realizations << " done\n";
    }

    nlohmann::ordered_json summary;
    summary["scenario"] = {{"B", cfg.scenario.B},         {"L", cfg.scenario.L},
                           {"n_A", cfg.scenario.n_A},     {"U", cfg.scenario.U},
                           {"T", cfg.scenario.T},         {"Q", cfg.scenario.Q},
                           {"K_init", cfg.scenario.K_init}, {"rho_w", cfg.scenario.rho_w},
                           {"eta_db", cfg.scenario.eta_db}, {"N0_w", cfg.scenario.N0_w}};
    summary["box"] = {{"U_min", cfg.box.U_min},
                      {"U_max", cfg.box.U_max},
                      {"T_min", cfg.box.T_min},
                      {"T_max", cfg.box.T_max}};
    summary["realizations"] = cfg.realizations;
    summary["trials"] = cfg.trials;
    summary["seed"] = cfg.seed;
    summary["modulation"] = cfg.modulation;

    std::ostringstream table;
    table << std::left << std::setw(14) << "method" << std::right << std::setw(12) << "BER90"
          << std::setw(12) << "HMI90" << std::setw(12) << "MSEdB90" << std::setw(12) << "Rate90"
          << std::setw(10) << "fail" << '\n';
    nlohmann::ordered_json per_method;
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
        const auto& s = samples[mi];
        nlohmann::ordered_json entry;
        entry["rows"] = s.ber.size();
        entry["failures"] = s.failures;
        if (!s.errors.empty()) entry["errors"] = s.errors;
        table << std::left << std::setw(14) << cfg.methods[mi].name << std::right;
        if (!s.ber.empty()) {
            const double ber90 = percentile90(s.ber, Direction::Cdf);
            const double hmi90 = percentile90(s.hmi, Direction::Ccdf);
            const double mse90 = percentile90(s.mse_db, Direction::Cdf);
            const double rate90 = percentile90(s.rate, Direction::Ccdf);
            entry["ber_cdf90"] = ber90;
            entry["hmi_ccdf90"] = hmi90;
            entry["mse_db_cdf90"] = mse90;
            entry["rate_ccdf90"] = rate90;
            table << std::setw(12) << std::setprecision(4) << ber90 << std::setw(12) << hmi90
                  << std::setw(12) << mse90 << std::setw(12) << rate90;
        } else {
            table << std::setw(12) << "-" << std::setw(12) << "-" << std::setw(12) << "-" << std::setw(12)
                  << "-";
        }
        table << std::setw(10) << s.failures << '\n';
        per_method[cfg.methods[mi].name] = std::move(entry);
    }
    summary["methods"] = std::move(per_method);
    summary["failures"] = result.method_failures;

    std::ofstream summary_out(result.summary_json);
    summary_out << summary.dump(2) << '\n';
    std::ofstream comparison(result.comparison_txt);
    comparison << table.str();
    log << table.str();
    return result;
}

}  // namespace musched
