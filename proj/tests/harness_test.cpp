#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "obp/environment.hpp"
#include "obp/errors.hpp"
#include "obp/harness.hpp"
#include "obp/report.hpp"
#include "obp/rng.hpp"

using namespace obp;

namespace {

ExperimentConfig small_config(PolicyKind policy, std::size_t players) {
    ExperimentConfig c;
    c.arms = 6;
    c.players = players;
    c.mu_uniform_max = 0.5;
    c.cost = 0.05;
    c.horizon = 300;
    c.repetitions = 6;
    c.seed = 11;
    c.policy = policy;
    return c;
}

std::string csv_of(const SeriesOutput& s) {
    std::ostringstream out;
    write_series_csv(out, s);
    return out.str();
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("obp_harness_test_" + name);
}

}  // namespace

TEST(RunExperiment, SingleOptOneRound) {
    ExperimentConfig c;
    c.means = {0.3, 0.9, 0.6, 0.1};
    c.players = 2;
    c.cost = 0.1;
    c.horizon = 1;
    c.repetitions = 1;
    c.seed = 5;
    c.policy = PolicyKind::SingleOpt;
    auto out = run_experiment(c);
    ASSERT_EQ(out.rows(), 1u);
    auto src = RewardSource::iid(c.means);
    Rng rng = make_rng(5, 0, Stream::Realization);
    auto y = src.sample(rng);
    EXPECT_NEAR(out.final_reward(), 0.9 * (y[1] + y[2]), 1e-12);
}

TEST(RunExperiment, RowCountAndRepetitions) {
    auto out = run_experiment(small_config(PolicyKind::CMpObp, 2));
    EXPECT_EQ(out.rows(), 300u);
    EXPECT_EQ(out.repetitions.size(), 6u);
    EXPECT_EQ(out.bound.size(), 300u);
}

TEST(RunExperiment, ByteIdenticalAcrossRunsAndThreadCounts) {
    for (auto policy : {PolicyKind::ObpUcb, PolicyKind::CMpObp, PolicyKind::DMpObp, PolicyKind::Random}) {
        auto c = small_config(policy, policy == PolicyKind::ObpUcb ? 1 : 3);
        c.arms = 9;
        const auto a = run_experiment(c);
        const auto b = run_experiment(c);
        c.parallel = 4;
        const auto p = run_experiment(c);
        EXPECT_EQ(csv_of(a), csv_of(b));
        EXPECT_EQ(csv_of(a), csv_of(p));
        EXPECT_EQ(summary_json(c, a).dump(), summary_json(c, p).dump());
    }
}

TEST(RunExperiment, SeriesAreMeansOfRepetitions) {
    auto c = small_config(PolicyKind::DMpObp, 2);
    c.keep_repetition_series = true;
    c.parallel = 3;
    auto out = run_experiment(c);
    ASSERT_EQ(out.repetition_reward.size(), c.repetitions);
    for (std::size_t t = 0; t < out.rows(); ++t) {
        double reward = 0.0, regret = 0.0;
        for (std::size_t r = 0; r < c.repetitions; ++r) {
            reward += out.repetition_reward[r][t];
            regret += out.repetition_regret[r][t];
        }
        ASSERT_NEAR(out.cumulative_reward[t], reward / c.repetitions, 1e-12);
        ASSERT_NEAR(out.cumulative_regret[t], regret / c.repetitions, 1e-12);
    }
    for (std::size_t r = 0; r < c.repetitions; ++r)
        EXPECT_DOUBLE_EQ(out.repetitions[r].cumulative_reward, out.repetition_reward[r].back());
}

TEST(RunExperiment, SingleLearnerRegretIsNonnegativeAndNondecreasing) {
    auto c = small_config(PolicyKind::ObpUcb, 1);
    c.keep_repetition_series = true;
    auto out = run_experiment(c);
    for (const auto& series : out.repetition_regret) {
        ASSERT_GE(series.front(), -1e-12);
        for (std::size_t t = 1; t < series.size(); ++t) ASSERT_GE(series[t], series[t - 1] - 1e-12);
    }
    for (double b : out.bound) EXPECT_TRUE(std::isfinite(b));
}

TEST(RunExperiment, ControllerNeverCollides) {
    auto out = run_experiment(small_config(PolicyKind::CMpObp, 3));
    EXPECT_EQ(out.cumulative_collisions.back(), 0.0);
}

TEST(RunExperiment, TraceDriven) {
    auto path = temp_file("trace.csv");
    std::vector<std::vector<std::uint8_t>> rows(200, std::vector<std::uint8_t>(4));
    Rng rng(3);
    for (auto& row : rows)
        for (auto& cell : row) cell = bernoulli(rng, 0.4);
    {
        std::ofstream out(path);
        write_trace(out, rows);
    }
    ExperimentConfig c;
    c.trace_path = path.string();
    c.players = 1;
    c.cost = 0.05;
    c.horizon = 200;
    c.repetitions = 2;
    auto out = run_experiment(c);
    EXPECT_EQ(out.rows(), 200u);
    // every repetition replays the same trace
    EXPECT_DOUBLE_EQ(out.repetitions[0].cumulative_reward, out.repetitions[1].cumulative_reward);
    c.horizon = 201;
    EXPECT_THROW(run_experiment(c), TraceError);
    std::filesystem::remove(path);
}

TEST(Config, Validation) {
    auto ok = small_config(PolicyKind::CMpObp, 2);
    EXPECT_NO_THROW(ok.validate());
    auto c = ok;
    c.mu_uniform_max.reset();
    EXPECT_THROW(c.validate(), ConfigError);
    c = ok;
    c.means = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    EXPECT_THROW(c.validate(), ConfigError);
    c = ok;
    c.policy = PolicyKind::ObpUcb;
    EXPECT_THROW(c.validate(), ConfigError);
    c = ok;
    c.cost = 0.4;
    EXPECT_THROW(c.validate(), ConfigError);
    c = ok;
    c.horizon = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = ok;
    c.mu_uniform_max = 1.5;
    EXPECT_THROW(c.validate(), ConfigError);
    c = ok;
    c.players = 7;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, JsonRoundTripAndUnknownKeys) {
    auto c = small_config(PolicyKind::DMpAdaptObp, 3);
    c.steering = AssignmentRule::GreedyReverse;
    c.collision = CollisionRule::ShareEqually;
    auto doc = config_to_json(c);
    auto back = config_from_json(doc);
    EXPECT_EQ(config_to_json(back).dump(), doc.dump());
    doc["no_such_field"] = 1;
    EXPECT_THROW(config_from_json(doc), ConfigError);
    nlohmann::json bad_policy = {{"policy", "thompson"}};
    EXPECT_THROW(config_from_json(bad_policy), ConfigError);
}

TEST(Config, NamesRoundTrip) {
    for (auto p : {PolicyKind::ObpUcb, PolicyKind::CMpObp, PolicyKind::DMpObp, PolicyKind::DMpAdaptObp,
                   PolicyKind::Random, PolicyKind::SingleOpt, PolicyKind::SingleReal})
        EXPECT_EQ(parse_policy(to_string(p)), p);
    EXPECT_EQ(parse_rule("greedy-reverse"), AssignmentRule::GreedyReverse);
    EXPECT_EQ(parse_collision_rule("share"), CollisionRule::ShareEqually);
    EXPECT_THROW(parse_rule("greedy"), ConfigError);
}

TEST(Sweep, RowsPerAxisValue) {
    auto c = small_config(PolicyKind::CMpObp, 2);
    c.horizon = 200;
    const std::vector<double> taus{0.05, 0.1};
    auto rows = sweep(c, SweepAxis::Cost, taus);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_DOUBLE_EQ(rows[1].axis_value, 0.1);
    EXPECT_NEAR(rows[0].improvement_vs_random(), improvement_percent(rows[0].policy_reward, rows[0].random_reward),
                1e-12);
    EXPECT_THROW(sweep(c, SweepAxis::Cost, std::vector<double>{}), ConfigError);
    std::ostringstream csv;
    write_sweep_csv(csv, "tau", rows);
    const std::string text = csv.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

TEST(Sweep, SweptPolicyMatchesStandaloneRun) {
    auto c = small_config(PolicyKind::ObpUcb, 1);
    c.horizon = 150;
    auto rows = sweep(c, SweepAxis::Cost, std::vector<double>{0.08});
    c.cost = 0.08;
    EXPECT_DOUBLE_EQ(rows[0].policy_reward, run_experiment(c).final_reward());
    c.policy = PolicyKind::Random;
    EXPECT_DOUBLE_EQ(rows[0].random_reward, run_experiment(c).final_reward());
}

TEST(OracleCheck, SinglePlayerFamily) {
    OracleCheckSpec s;
    s.arms = 5;
    s.players = 1;
    s.cost = 0.05;
    s.samples = 50;
    auto r = oracle_check(s);
    EXPECT_EQ(r.descending_checked, 50u);
    EXPECT_EQ(r.descending_passed, 50u);
    EXPECT_EQ(r.optimum_non_greedy, 0u);
}

TEST(OracleCheck, TwoStepFamily) {
    OracleCheckSpec s;
    s.arms = 4;
    s.players = 2;
    s.cost = 0.05;
    s.samples = 200;
    auto r = oracle_check(s);
    EXPECT_EQ(r.reverse_optimal_checked, 200u);
    EXPECT_EQ(r.reverse_optimal_passed, 200u);
    EXPECT_EQ(r.reverse_is_best_greedy, 200u);
}

TEST(Report, SeriesCsvHeaderAndBlankBound) {
    auto c = small_config(PolicyKind::DMpObp, 2);
    c.horizon = 3;
    c.repetitions = 1;
    auto text = csv_of(run_experiment(c));
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "t,mean_cumulative_reward,mean_cumulative_regret,mean_cumulative_collisions,bound");
    std::getline(in, line);
    EXPECT_EQ(line.substr(0, 2), "1,");
    EXPECT_EQ(line.back(), ',');  // no bound for the distributed policy
}
