#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "obp/centralized.hpp"
#include "obp/environment.hpp"
#include "obp/oracles.hpp"

namespace obp {

enum class PolicyKind { ObpUcb, CMpObp, DMpObp, DMpAdaptObp, Random, SingleOpt, SingleReal };

// Random heuristic flavour: every player shuffles on its own (collisions possible),
// or one shuffle is dealt into disjoint lists.
enum class RandomMode { Independent, Disjoint };

struct ExperimentConfig {
    // 0 infers the arm count from the explicit means or the trace header.
    std::size_t arms = 0;
    std::size_t players = 1;
    double cost = 0.05;

    // Exactly one source of means.
    std::vector<double> means;
    std::optional<double> mu_uniform_max;
    std::string trace_path;

    std::size_t horizon = 5000;
    std::size_t repetitions = 100;
    std::uint64_t seed = 1;

    PolicyKind policy = PolicyKind::ObpUcb;
    AssignmentRule rule = AssignmentRule::GreedySorted;
    AssignmentRule steering = AssignmentRule::GreedySorted;
    AssignmentRule regret_target = AssignmentRule::GreedySorted;
    CollisionRule collision = CollisionRule::ZeroOnCollision;
    RandomMode random_mode = RandomMode::Independent;
    // Baselines replay the realization stream of the policy under test.
    bool common_random_numbers = true;

    std::size_t parallel = 1;
    bool keep_repetition_series = false;
    std::string out_dir;

    // Throws ConfigError.
    void validate() const;
};

struct RepetitionSummary {
    std::vector<double> means;
    double cumulative_reward = 0.0;
    double cumulative_regret = 0.0;
    double cumulative_collisions = 0.0;
};

// Per-round series averaged over repetitions. Row t (0-based) describes rounds 1..t+1.
struct SeriesOutput {
    std::vector<double> cumulative_reward;
    std::vector<double> cumulative_regret;
    std::vector<double> cumulative_collisions;
    // Regret bound overlay (NaN where no bound applies).
    std::vector<double> bound;
    std::vector<RepetitionSummary> repetitions;

    // Only with keep_repetition_series: [repetition][round].
    std::vector<std::vector<double>> repetition_reward;
    std::vector<std::vector<double>> repetition_regret;

    std::size_t rows() const noexcept { return cumulative_reward.size(); }
    double final_reward() const { return cumulative_reward.back(); }
    double final_regret() const { return cumulative_regret.back(); }
};

// Regret column semantics per policy:
//   obp-ucb         pseudo-regret against the descending list
//   c-mp-obp        pseudo-regret against the greedy target profile (may be negative)
//   d-mp-obp        realized loss against the best collision-free greedy profile
//   d-mp-adapt-obp  realized loss against the steering target profile
//   baselines       realized loss against the best collision-free greedy profile
SeriesOutput run_experiment(const ExperimentConfig& config);

enum class SweepAxis { Cost, UniformMax };

struct SweepRow {
    double axis_value = 0.0;
    double policy_reward = 0.0;
    double policy_regret = 0.0;
    double random_reward = 0.0;
    double single_opt_reward = 0.0;
    double single_real_reward = 0.0;

    double improvement_vs_random() const;
    double improvement_vs_single_opt() const;
    double improvement_vs_single_real() const;
    double gap_vs_random() const { return policy_reward - random_reward; }
    double gap_vs_single_opt() const { return policy_reward - single_opt_reward; }
    double gap_vs_single_real() const { return policy_reward - single_real_reward; }
};

// 100 * (policy - baseline) / baseline on cumulative reward at the horizon.
double improvement_percent(double policy_reward, double baseline_reward);

// Random-heuristic flavour matched to a policy: disjoint lists for the controller,
// independent shuffles otherwise.
RandomMode baseline_random_mode(PolicyKind policy);

// Runs the configured policy and the random, single-opt and single-real baselines at
// each axis value with identical seeds.
std::vector<SweepRow> sweep(const ExperimentConfig& config, SweepAxis axis, std::span<const double> values);

struct OracleCheckSpec {
    std::size_t arms = 9;
    std::size_t players = 3;
    double mu_max = 1.0;
    double cost = 0.0;
    std::size_t samples = 500;
    std::uint64_t seed = 1;
    EnumerationBudget budget{};
    std::size_t max_counterexamples = 5;
};

struct OracleCheckReport {
    std::size_t samples = 0;
    std::size_t descending_checked = 0;
    std::size_t descending_passed = 0;
    std::size_t reverse_optimal_checked = 0;
    std::size_t reverse_optimal_passed = 0;
    std::size_t reverse_is_best_greedy = 0;
    std::size_t optimum_non_greedy = 0;
    std::vector<std::vector<double>> counterexamples;

    double reverse_best_fraction() const;
    double non_greedy_fraction() const;
};

OracleCheckReport oracle_check(const OracleCheckSpec& spec);

std::string to_string(PolicyKind policy);
std::string to_string(AssignmentRule rule);
std::string to_string(CollisionRule rule);
std::string to_string(RandomMode mode);
// Throw ConfigError on unknown names.
PolicyKind parse_policy(const std::string& name);
AssignmentRule parse_rule(const std::string& name);
CollisionRule parse_collision_rule(const std::string& name);
RandomMode parse_random_mode(const std::string& name);

}  // namespace obp
