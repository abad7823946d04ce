#include "obp/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "obp/errors.hpp"

namespace obp {

namespace {

using nlohmann::json;

// NaN has no JSON encoding; it becomes null.
json number(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

void put(std::ostream& out, double v) {
    if (std::isnan(v)) return;
    out << v;
}

}  // namespace

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["arms"] = c.arms;
    j["players"] = c.players;
    j["cost"] = c.cost;
    j["means"] = c.means;
    j["mu_uniform_max"] = c.mu_uniform_max ? json(*c.mu_uniform_max) : json(nullptr);
    j["trace_path"] = c.trace_path;
    j["horizon"] = c.horizon;
    j["repetitions"] = c.repetitions;
    j["seed"] = c.seed;
    j["policy"] = to_string(c.policy);
    j["rule"] = to_string(c.rule);
    j["steering"] = to_string(c.steering);
    j["regret_target"] = to_string(c.regret_target);
    j["collision_rule"] = to_string(c.collision);
    j["random_mode"] = to_string(c.random_mode);
    j["common_random_numbers"] = c.common_random_numbers;
    j["parallel"] = c.parallel;
    j["keep_repetition_series"] = c.keep_repetition_series;
    j["out_dir"] = c.out_dir;
    return j;
}

namespace {

// Config echo for result files: thread count and output location do not affect
// results, so they are left out to keep files identical across hosts.
json result_config(const ExperimentConfig& c) {
    json j = config_to_json(c);
    j.erase("parallel");
    j.erase("out_dir");
    return j;
}

}  // namespace

ExperimentConfig config_from_json(const json& doc, ExperimentConfig c) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "arms") c.arms = value.get<std::size_t>();
            else if (key == "players") c.players = value.get<std::size_t>();
            else if (key == "cost") c.cost = value.get<double>();
            else if (key == "means") c.means = value.get<std::vector<double>>();
            else if (key == "mu_uniform_max")
                c.mu_uniform_max = value.is_null() ? std::nullopt : std::optional<double>(value.get<double>());
            else if (key == "trace_path") c.trace_path = value.get<std::string>();
            else if (key == "horizon") c.horizon = value.get<std::size_t>();
            else if (key == "repetitions") c.repetitions = value.get<std::size_t>();
            else if (key == "seed") c.seed = value.get<std::uint64_t>();
            else if (key == "policy") c.policy = parse_policy(value.get<std::string>());
            else if (key == "rule") c.rule = parse_rule(value.get<std::string>());
            else if (key == "steering") c.steering = parse_rule(value.get<std::string>());
            else if (key == "regret_target") c.regret_target = parse_rule(value.get<std::string>());
            else if (key == "collision_rule") c.collision = parse_collision_rule(value.get<std::string>());
            else if (key == "random_mode") c.random_mode = parse_random_mode(value.get<std::string>());
            else if (key == "common_random_numbers") c.common_random_numbers = value.get<bool>();
            else if (key == "parallel") c.parallel = value.get<std::size_t>();
            else if (key == "keep_repetition_series") c.keep_repetition_series = value.get<bool>();
            else if (key == "out_dir") c.out_dir = value.get<std::string>();
            else throw ConfigError("unknown config key `" + key + "`");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    try {
        return config_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
}

json environment_fingerprint() {
    json j;
    j["library"] = "obp 1.0.0";
#if defined(__clang__)
    j["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
    j["compiler"] = std::string("gcc ") + __VERSION__;
#else
    j["compiler"] = "unknown";
#endif
    j["cplusplus"] = __cplusplus;
    j["rng"] = "mt19937_64 / splitmix64 substreams";
    return j;
}

void write_series_csv(std::ostream& out, const SeriesOutput& s) {
    out << "t,mean_cumulative_reward,mean_cumulative_regret,mean_cumulative_collisions,bound\n";
    out << std::setprecision(12);
    for (std::size_t t = 0; t < s.rows(); ++t) {
        out << (t + 1) << ',';
        put(out, s.cumulative_reward[t]);
        out << ',';
        put(out, s.cumulative_regret[t]);
        out << ',';
        put(out, s.cumulative_collisions[t]);
        out << ',';
        put(out, s.bound[t]);
        out << '\n';
    }
}

json summary_json(const ExperimentConfig& config, const SeriesOutput& s) {
    json j;
    j["config"] = result_config(config);
    j["final"] = {{"mean_cumulative_reward", number(s.final_reward())},
                  {"mean_cumulative_regret", number(s.final_regret())},
                  {"mean_cumulative_collisions", number(s.cumulative_collisions.back())},
                  {"bound", number(s.bound.back())}};
    json reps = json::array();
    for (const auto& r : s.repetitions) {
        reps.push_back({{"means", r.means},
                        {"cumulative_reward", r.cumulative_reward},
                        {"cumulative_regret", r.cumulative_regret},
                        {"cumulative_collisions", r.cumulative_collisions}});
    }
    j["repetitions"] = std::move(reps);
    j["environment"] = environment_fingerprint();
    return j;
}

void write_sweep_csv(std::ostream& out, const std::string& axis_name, std::span<const SweepRow> rows) {
    out << axis_name
        << ",policy_reward,policy_regret,random_reward,single_opt_reward,single_real_reward,"
           "improvement_vs_random_pct,improvement_vs_single_opt_pct,improvement_vs_single_real_pct,"
           "gap_vs_random,gap_vs_single_opt,gap_vs_single_real\n";
    out << std::setprecision(12);
    for (const auto& r : rows) {
        out << r.axis_value << ',' << r.policy_reward << ',' << r.policy_regret << ',' << r.random_reward << ','
            << r.single_opt_reward << ',' << r.single_real_reward << ',' << r.improvement_vs_random() << ','
            << r.improvement_vs_single_opt() << ',' << r.improvement_vs_single_real() << ',' << r.gap_vs_random()
            << ',' << r.gap_vs_single_opt() << ',' << r.gap_vs_single_real() << '\n';
    }
}

json sweep_json(const ExperimentConfig& config, const std::string& axis_name, std::span<const SweepRow> rows) {
    json j;
    j["config"] = result_config(config);
    j["axis"] = axis_name;
    json out = json::array();
    for (const auto& r : rows) {
        out.push_back({{"value", r.axis_value},
                       {"policy_reward", r.policy_reward},
                       {"policy_regret", r.policy_regret},
                       {"random_reward", r.random_reward},
                       {"single_opt_reward", r.single_opt_reward},
                       {"single_real_reward", r.single_real_reward},
                       {"improvement_vs_random_pct", r.improvement_vs_random()},
                       {"improvement_vs_single_opt_pct", r.improvement_vs_single_opt()},
                       {"improvement_vs_single_real_pct", r.improvement_vs_single_real()}});
    }
    j["rows"] = std::move(out);
    j["environment"] = environment_fingerprint();
    return j;
}

json oracle_report_json(const OracleCheckSpec& spec, const OracleCheckReport& r) {
    json j;
    j["family"] = {{"arms", spec.arms},       {"players", spec.players}, {"mu_max", spec.mu_max},
                   {"cost", spec.cost},       {"samples", spec.samples}, {"seed", spec.seed}};
    j["descending_vs_brute_force"] = {{"checked", r.descending_checked}, {"passed", r.descending_passed}};
    j["reverse_vs_brute_force"] = {{"checked", r.reverse_optimal_checked}, {"passed", r.reverse_optimal_passed}};
    j["reverse_is_best_greedy_fraction"] = r.reverse_best_fraction();
    j["optimum_non_greedy_fraction"] = r.non_greedy_fraction();
    j["counterexamples"] = r.counterexamples;
    return j;
}

}  // namespace obp
