#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "obp/environment.hpp"
#include "obp/errors.hpp"
#include "obp/harness.hpp"
#include "obp/metrics.hpp"
#include "obp/report.hpp"
#include "obp/rng.hpp"

namespace {

using nlohmann::json;

enum Exit { Ok = 0, Failure = 1, BadConfig = 2, TooLarge = 3, BadTrace = 4 };

// Values given on the command line. Only the ones actually set override the
// config file.
struct Flags {
    std::string config_path;
    std::optional<std::size_t> arms, players, horizon, reps, parallel;
    std::optional<double> tau, mu_uniform_max;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> policy, rule, steering, regret_target, collision, random_mode, trace, out_dir;
    std::vector<double> mu;
};

void add_experiment_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config_path, "JSON file with ExperimentConfig fields")->check(CLI::ExistingFile);
    cmd->add_option("--arms", f.arms, "number of arms K");
    cmd->add_option("--players", f.players, "number of players M");
    cmd->add_option("--tau", f.tau, "per-observation cost");
    cmd->add_option("--horizon", f.horizon, "rounds per repetition");
    cmd->add_option("--reps", f.reps, "repetitions");
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--policy", f.policy,
                    "obp-ucb | c-mp-obp | d-mp-obp | d-mp-adapt-obp | random | single-opt | single-real");
    cmd->add_option("--rule", f.rule, "assignment rule: greedy-sorted | greedy-reverse");
    cmd->add_option("--steering", f.steering, "steering target of d-mp-adapt-obp");
    cmd->add_option("--regret-target", f.regret_target, "target profile of the controller's regret");
    cmd->add_option("--random-mode", f.random_mode, "random baseline: independent | disjoint");
    cmd->add_option("--mu", f.mu, "explicit means")->delimiter(',');
    cmd->add_option("--mu-uniform-max", f.mu_uniform_max, "draw means from U(0, x)");
    cmd->add_option("--trace", f.trace, "availability trace CSV");
    cmd->add_option("--collision-rule", f.collision, "zero | share");
    cmd->add_option("--out-dir", f.out_dir, "directory for CSV and JSON output");
    cmd->add_option("--parallel", f.parallel, "worker threads (repetitions run in parallel)");
}

obp::ExperimentConfig build_config(const Flags& f) {
    obp::ExperimentConfig base;
    if (!f.config_path.empty()) base = obp::load_config(f.config_path);
    json o = json::object();
    if (f.arms) o["arms"] = *f.arms;
    if (f.players) o["players"] = *f.players;
    if (f.tau) o["cost"] = *f.tau;
    if (f.horizon) o["horizon"] = *f.horizon;
    if (f.reps) o["repetitions"] = *f.reps;
    if (f.seed) o["seed"] = *f.seed;
    if (f.parallel) o["parallel"] = *f.parallel;
    if (f.policy) o["policy"] = *f.policy;
    if (f.rule) o["rule"] = *f.rule;
    if (f.steering) o["steering"] = *f.steering;
    if (f.regret_target) o["regret_target"] = *f.regret_target;
    if (f.random_mode) o["random_mode"] = *f.random_mode;
    if (f.collision) o["collision_rule"] = *f.collision;
    if (f.out_dir) o["out_dir"] = *f.out_dir;
    // a mean source on the command line replaces the file's source
    if (!f.mu.empty() || f.mu_uniform_max || f.trace) {
        o["means"] = f.mu;
        o["mu_uniform_max"] = f.mu_uniform_max ? json(*f.mu_uniform_max) : json(nullptr);
        o["trace_path"] = f.trace.value_or("");
    }
    return obp::config_from_json(o, base);
}

std::filesystem::path output_dir(const obp::ExperimentConfig& c) {
    std::filesystem::path dir(c.out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void write_json(const std::filesystem::path& path, const json& doc) {
    std::ofstream out(path, std::ios::binary);
    out << doc.dump(2) << '\n';
}

int cmd_run(const Flags& f) {
    const auto config = build_config(f);
    const auto series = obp::run_experiment(config);
    const json summary = obp::summary_json(config, series);
    if (config.out_dir.empty()) {
        std::cout << summary.dump(2) << '\n';
        return Ok;
    }
    const auto dir = output_dir(config);
    const std::string stem = "series_" + obp::to_string(config.policy);
    {
        std::ofstream out(dir / (stem + ".csv"), std::ios::binary);
        obp::write_series_csv(out, series);
    }
    write_json(dir / (stem + ".json"), summary);
    std::cout << "wrote " << (dir / (stem + ".csv")).string() << " and " << (dir / (stem + ".json")).string() << '\n';
    return Ok;
}

int cmd_sweep(const Flags& f, obp::SweepAxis axis, std::vector<double> values) {
    auto config = build_config(f);
    const std::string axis_name = axis == obp::SweepAxis::Cost ? "tau" : "mu_uniform_max";
    if (values.empty()) {
        if (axis == obp::SweepAxis::Cost)
            values = config.players == 1 ? std::vector<double>{0.01, 0.05, 0.1} : std::vector<double>{0.1, 0.2, 0.3};
        else
            values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    }
    if (axis == obp::SweepAxis::UniformMax) {
        config.means.clear();
        config.trace_path.clear();
        config.mu_uniform_max = values.front();
    }
    const auto rows = obp::sweep(config, axis, values);
    const json doc = obp::sweep_json(config, axis_name, rows);
    if (config.out_dir.empty()) {
        obp::write_sweep_csv(std::cout, axis_name, rows);
        return Ok;
    }
    const auto dir = output_dir(config);
    const std::string stem = "sweep_" + axis_name + "_" + obp::to_string(config.policy);
    {
        std::ofstream out(dir / (stem + ".csv"), std::ios::binary);
        obp::write_sweep_csv(out, axis_name, rows);
    }
    write_json(dir / (stem + ".json"), doc);
    std::cout << "wrote " << (dir / (stem + ".csv")).string() << " and " << (dir / (stem + ".json")).string() << '\n';
    return Ok;
}

struct OracleFlags {
    obp::OracleCheckSpec spec;
    std::vector<double> taus;
    std::string out_dir;
};

int cmd_oracle(const OracleFlags& f) {
    const std::vector<double> taus = f.taus.empty() ? std::vector<double>{f.spec.cost} : f.taus;
    json all = json::array();
    for (double tau : taus) {
        auto spec = f.spec;
        spec.cost = tau;
        all.push_back(obp::oracle_report_json(spec, obp::oracle_check(spec)));
    }
    if (f.out_dir.empty()) {
        std::cout << all.dump(2) << '\n';
    } else {
        std::filesystem::create_directories(f.out_dir);
        write_json(std::filesystem::path(f.out_dir) / "oracle_check.json", all);
        std::cout << "wrote " << (std::filesystem::path(f.out_dir) / "oracle_check.json").string() << '\n';
    }
    return Ok;
}

int cmd_gen_trace(const Flags& f, const std::string& output) {
    auto config = build_config(f);
    if (!config.trace_path.empty()) throw obp::ConfigError("gen-trace needs --mu or --mu-uniform-max, not --trace");
    config.validate();
    std::vector<double> means = config.means;
    if (means.empty()) {
        obp::Rng rng = obp::make_rng(config.seed, 0, obp::Stream::Means);
        means.resize(config.arms);
        for (auto& mu : means) mu = *config.mu_uniform_max * obp::uniform01(rng);
    }
    auto source = obp::RewardSource::iid(means);
    obp::Rng rng = obp::make_rng(config.seed, 0, obp::Stream::Realization);
    std::vector<std::vector<std::uint8_t>> rows;
    rows.reserve(config.horizon);
    for (std::size_t t = 0; t < config.horizon; ++t) rows.push_back(source.sample(rng).available);
    if (output.empty() || output == "-") {
        obp::write_trace(std::cout, rows);
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) throw obp::ConfigError("cannot write " + output);
        obp::write_trace(out, rows);
    }
    return Ok;
}

int cmd_bounds(const Flags& f) {
    auto config = build_config(f);
    // both bounds are printed; the policy field plays no part
    if (config.players > 1) config.policy = obp::PolicyKind::CMpObp;
    config.validate();
    std::vector<double> means = config.means;
    if (!config.trace_path.empty()) {
        means = obp::load_trace(config.trace_path).means();
    } else if (means.empty()) {
        obp::Rng rng = obp::make_rng(config.seed, 0, obp::Stream::Means);
        means.resize(config.arms);
        for (auto& mu : means) mu = *config.mu_uniform_max * obp::uniform01(rng);
    }
    const auto instance = obp::BanditInstance::with_means(means, config.players, config.cost);
    const std::vector<double> padded(instance.means().begin(), instance.means().end());
    const double horizon = static_cast<double>(config.horizon);
    json doc;
    doc["means"] = padded;
    doc["players"] = config.players;
    doc["tau"] = config.cost;
    doc["horizon"] = config.horizon;
    doc["single_player_bound"] = obp::single_player_regret_bound(padded, config.cost, horizon);
    doc["centralized_bound"] = obp::centralized_regret_bound(padded, config.players, horizon);
    std::cout << doc.dump(2) << '\n';
    return Ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Observe-before-play bandit simulator"};
    app.require_subcommand(1);

    Flags run_flags, tau_flags, mu_flags, trace_flags, bound_flags;
    std::vector<double> tau_values, mu_values;
    std::string trace_output;
    OracleFlags oracle;

    auto* run = app.add_subcommand("run", "run one experiment and write its series");
    add_experiment_flags(run, run_flags);

    auto* sweep_tau = app.add_subcommand("sweep-tau", "sweep the observation cost against the baselines");
    add_experiment_flags(sweep_tau, tau_flags);
    sweep_tau->add_option("--values", tau_values, "costs to sweep")->delimiter(',');

    auto* sweep_mu = app.add_subcommand("sweep-mu", "sweep x for means drawn from U(0, x)");
    add_experiment_flags(sweep_mu, mu_flags);
    sweep_mu->add_option("--values", mu_values, "range maxima to sweep")->delimiter(',');

    auto* oracle_cmd = app.add_subcommand("oracle-check", "compare greedy profiles with the brute-force optimum");
    oracle_cmd->add_option("--arms", oracle.spec.arms, "number of arms K");
    oracle_cmd->add_option("--players", oracle.spec.players, "number of players M");
    oracle_cmd->add_option("--tau", oracle.taus, "cost, or a comma list of costs")->delimiter(',');
    oracle_cmd->add_option("--mu-uniform-max", oracle.spec.mu_max, "draw means from U(0, x)");
    oracle_cmd->add_option("--samples", oracle.spec.samples, "instances to sample");
    oracle_cmd->add_option("--seed", oracle.spec.seed, "master seed");
    oracle_cmd->add_option("--out-dir", oracle.out_dir, "directory for the JSON report");

    auto* gen = app.add_subcommand("gen-trace", "write a Bernoulli availability trace");
    add_experiment_flags(gen, trace_flags);
    gen->add_option("--output,-o", trace_output, "trace file (stdout when omitted)");

    auto* bounds = app.add_subcommand("bounds", "print the regret bound values for an instance");
    add_experiment_flags(bounds, bound_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Ok : BadConfig;
    }

    try {
        if (*run) return cmd_run(run_flags);
        if (*sweep_tau) return cmd_sweep(tau_flags, obp::SweepAxis::Cost, tau_values);
        if (*sweep_mu) return cmd_sweep(mu_flags, obp::SweepAxis::UniformMax, mu_values);
        if (*oracle_cmd) return cmd_oracle(oracle);
        if (*gen) return cmd_gen_trace(trace_flags, trace_output);
        if (*bounds) return cmd_bounds(bound_flags);
    } catch (const obp::BudgetError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return TooLarge;
    } catch (const obp::TraceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return BadTrace;
    } catch (const obp::Error& e) {
        // config, parameter, structure and degenerate-gap errors all trace back to the input
        std::cerr << "error: " << e.what() << '\n';
        return BadConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Failure;
    }
    return Ok;
}
