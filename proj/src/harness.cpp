#include "obp/harness.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <thread>

#include "obp/distributed.hpp"
#include "obp/errors.hpp"
#include "obp/metrics.hpp"
#include "obp/ucb.hpp"

namespace obp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kOracleTolerance = 1e-12;

struct StepResult {
    double reward = 0.0;
    double regret = 0.0;
    double collisions = 0.0;
};

class Runner {
public:
    virtual ~Runner() = default;
    virtual StepResult step(const RoundRealization& realization) = 0;
};

struct RunContext {
    const ExperimentConfig& config;
    std::vector<double> means;  // padded
    std::size_t players;
    double cost;
};

double best_greedy_reference(const RunContext& ctx) {
    return best_greedy_value(ctx.means, ctx.players, ctx.cost);
}

class ObpUcbRunner final : public Runner {
public:
    explicit ObpUcbRunner(const RunContext& ctx)
        : ctx_(ctx), learner_(ctx.means.size()),
          optimum_(expected_list_reward(descending_list(ctx.means), ctx.means, ctx.cost)) {}

    StepResult step(const RoundRealization& y) override {
        const ObservationList list = learner_.next_list();
        const RoundRecord record = learner_.play(y, ctx_.cost);
        return {record.total_payoff, optimum_ - expected_list_reward(list, ctx_.means, ctx_.cost), 0.0};
    }

private:
    const RunContext& ctx_;
    ObpUcb learner_;
    double optimum_;
};

class CentralRunner final : public Runner {
public:
    explicit CentralRunner(const RunContext& ctx)
        : ctx_(ctx), controller_(ctx.means.size(), ctx.players, ctx.config.rule),
          target_(expected_profile_reward(greedy_profile(ctx.means, ctx.players, ctx.config.regret_target),
                                          ctx.means, ctx.cost)) {}

    StepResult step(const RoundRealization& y) override {
        const ControllerRound round = controller_.play(y, ctx_.cost, ctx_.config.collision);
        return {round.record.total_payoff, target_ - expected_profile_reward(round.profile, ctx_.means, ctx_.cost),
                static_cast<double>(round.record.collision_events())};
    }

private:
    const RunContext& ctx_;
    CentralController controller_;
    double target_;
};

class DistributedRunner final : public Runner {
public:
    DistributedRunner(const RunContext& ctx, std::uint64_t repetition, bool adapt)
        : ctx_(ctx),
          system_(ctx.means.size(), ctx.players, ctx.config.seed, repetition,
                  AgentOptions{adapt, ctx.config.steering}),
          reference_(adapt ? expected_profile_reward(greedy_profile(ctx.means, ctx.players, ctx.config.steering),
                                                     ctx.means, ctx.cost)
                           : best_greedy_reference(ctx)) {}

    StepResult step(const RoundRealization& y) override {
        const auto round = system_.play(y, ctx_.cost, ctx_.config.collision);
        return {round.record.total_payoff, reference_ - round.record.total_payoff,
                static_cast<double>(round.record.collision_events())};
    }

private:
    const RunContext& ctx_;
    DistributedSystem system_;
    double reference_;
};

// Baselines that submit lists and are scored by realized loss.
class BaselineRunner final : public Runner {
public:
    BaselineRunner(const RunContext& ctx, std::uint64_t repetition)
        : ctx_(ctx),
          rng_(make_rng(ctx.config.seed, repetition, Stream::Policy)),
          reference_(best_greedy_reference(ctx)),
          single_real_(ctx.means.size(), ctx.players) {
        if (ctx.config.policy == PolicyKind::SingleOpt) fixed_ = single_opt_profile(ctx.means, ctx.players);
    }

    StepResult step(const RoundRealization& y) override {
        RoundRecord record;
        switch (ctx_.config.policy) {
            case PolicyKind::Random:
                if (ctx_.config.random_mode == RandomMode::Disjoint) {
                    const auto profile = random_disjoint_profile(ctx_.means.size(), ctx_.players, rng_);
                    record = resolve_round(profile.lists(), y, ctx_.cost, ctx_.config.collision);
                } else {
                    const auto lists = random_baseline_lists(ctx_.means.size(), ctx_.players, rng_,
                                                             ctx_.means.size() / ctx_.players);
                    record = resolve_round(lists, y, ctx_.cost, ctx_.config.collision);
                }
                break;
            case PolicyKind::SingleOpt:
                record = resolve_round(fixed_.lists(), y, ctx_.cost, ctx_.config.collision);
                break;
            case PolicyKind::SingleReal:
                record = single_real_.play(y, ctx_.cost, ctx_.config.collision);
                break;
            default:
                throw ConfigError("not a baseline policy");
        }
        return {record.total_payoff, reference_ - record.total_payoff,
                static_cast<double>(record.collision_events())};
    }

private:
    const RunContext& ctx_;
    Rng rng_;
    double reference_;
    PolicyProfile fixed_;
    SingleObservationUcb single_real_;
};

std::unique_ptr<Runner> make_runner(const RunContext& ctx, std::uint64_t repetition) {
    switch (ctx.config.policy) {
        case PolicyKind::ObpUcb:
            return std::make_unique<ObpUcbRunner>(ctx);
        case PolicyKind::CMpObp:
            return std::make_unique<CentralRunner>(ctx);
        case PolicyKind::DMpObp:
            return std::make_unique<DistributedRunner>(ctx, repetition, false);
        case PolicyKind::DMpAdaptObp:
            return std::make_unique<DistributedRunner>(ctx, repetition, true);
        default:
            return std::make_unique<BaselineRunner>(ctx, repetition);
    }
}

struct RepetitionResult {
    RepetitionSummary summary;
    std::vector<double> reward;
    std::vector<double> regret;
    std::vector<double> collisions;
    std::vector<double> bound;
};

// Bound overlay for one repetition, NaN where the policy has none or the means tie.
std::vector<double> bound_series(const ExperimentConfig& config, std::span<const double> means,
                                 std::size_t players, double cost) {
    std::vector<double> out(config.horizon, kNaN);
    try {
        for (std::size_t t = 0; t < config.horizon; ++t) {
            const double horizon = static_cast<double>(t + 1);
            if (config.policy == PolicyKind::ObpUcb) {
                out[t] = single_player_regret_bound(means, cost, horizon);
            } else if (config.policy == PolicyKind::CMpObp) {
                out[t] = centralized_regret_bound(means, players, horizon);
            } else {
                break;
            }
        }
    } catch (const DegenerateGapError&) {
        std::fill(out.begin(), out.end(), kNaN);
    }
    return out;
}

class Experiment {
public:
    explicit Experiment(const ExperimentConfig& config) : config_(config) {
        config_.validate();
        if (!config_.trace_path.empty()) trace_ = load_trace(config_.trace_path);
        const std::size_t arms = arm_count();
        instance_arms_ = BanditInstance::without_means(arms, config_.players, config_.cost).num_arms();
        if (trace_ && trace_->remaining() < config_.horizon) {
            throw TraceError("trace holds " + std::to_string(trace_->remaining()) + " rounds but the horizon is " +
                             std::to_string(config_.horizon));
        }
    }

    RepetitionResult run(std::uint64_t repetition) const {
        std::vector<double> means;
        std::optional<RewardSource> source;
        if (trace_) {
            source = *trace_;
            source->pad_to(instance_arms_);
            means = source->means();
        } else {
            if (!config_.means.empty()) {
                means = config_.means;
            } else {
                Rng rng = make_rng(config_.seed, repetition, Stream::Means);
                means.resize(arm_count());
                for (auto& mu : means) mu = *config_.mu_uniform_max * uniform01(rng);
            }
            const auto instance = BanditInstance::with_means(std::move(means), config_.players, config_.cost);
            means.assign(instance.means().begin(), instance.means().end());
            source = RewardSource::iid(means);
        }

        const std::uint64_t lane =
            config_.common_random_numbers ? 0 : static_cast<std::uint64_t>(config_.policy) + 1;
        Rng realization_rng = make_rng(config_.seed, repetition, Stream::Realization, lane);

        RunContext ctx{config_, means, config_.players, config_.cost};
        auto runner = make_runner(ctx, repetition);

        RepetitionResult out;
        out.reward.resize(config_.horizon);
        out.regret.resize(config_.horizon);
        out.collisions.resize(config_.horizon);
        double reward = 0.0, regret = 0.0, collisions = 0.0;
        for (std::size_t t = 0; t < config_.horizon; ++t) {
            const RoundRealization y = source->sample(realization_rng);
            const StepResult s = runner->step(y);
            reward += s.reward;
            regret += s.regret;
            collisions += s.collisions;
            out.reward[t] = reward;
            out.regret[t] = regret;
            out.collisions[t] = collisions;
        }
        out.bound = bound_series(config_, means, config_.players, config_.cost);
        out.summary = {means, reward, regret, collisions};
        return out;
    }

    std::size_t arm_count() const {
        if (trace_) return trace_->num_arms();
        if (!config_.means.empty()) return config_.means.size();
        return config_.arms;
    }

private:
    ExperimentConfig config_;
    std::optional<RewardSource> trace_;
    std::size_t instance_arms_ = 0;
};

}  // namespace

void ExperimentConfig::validate() const {
    const int sources = (!means.empty() ? 1 : 0) + (mu_uniform_max ? 1 : 0) + (!trace_path.empty() ? 1 : 0);
    if (sources != 1) throw ConfigError("exactly one of explicit means, a uniform range or a trace is required");
    if (horizon < 1) throw ConfigError("horizon must be at least 1");
    if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
    if (players < 1) throw ConfigError("at least one player is required");
    if (mu_uniform_max && !(*mu_uniform_max > 0.0 && *mu_uniform_max <= 1.0)) {
        throw ConfigError("uniform mean range must lie in (0, 1]");
    }
    if (mu_uniform_max && arms == 0) throw ConfigError("--arms is required with a uniform mean range");
    if (!means.empty() && arms != 0 && arms != means.size()) {
        throw ConfigError("--arms disagrees with the number of explicit means");
    }
    if (policy == PolicyKind::ObpUcb && players != 1) throw ConfigError("obp-ucb is a single-player policy");
    if (!(cost > 0.0)) throw ConfigError("cost must be positive");
    if (parallel < 1) throw ConfigError("parallel must be at least 1");
    const std::size_t k = !means.empty() ? means.size() : arms;
    if (k != 0) {
        if (players > k) throw ConfigError("more players than arms");
        const double steps = static_cast<double>(padded_arm_count(k, players) / players);
        if (!(steps * cost < 1.0)) throw ConfigError("cost times list length must stay below 1");
    }
}

SeriesOutput run_experiment(const ExperimentConfig& config) {
    Experiment experiment(config);
    std::vector<RepetitionResult> results(config.repetitions);
    std::vector<std::exception_ptr> errors(config.repetitions);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t r = next++; r < config.repetitions; r = next++) {
            try {
                results[r] = experiment.run(r);
            } catch (...) {
                errors[r] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min(config.parallel, config.repetitions);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    // Summation in repetition order keeps output independent of thread count.
    const std::size_t rows = config.horizon;
    const double reps = static_cast<double>(config.repetitions);
    SeriesOutput out;
    out.cumulative_reward.assign(rows, 0.0);
    out.cumulative_regret.assign(rows, 0.0);
    out.cumulative_collisions.assign(rows, 0.0);
    out.bound.assign(rows, 0.0);
    for (const auto& r : results) {
        for (std::size_t t = 0; t < rows; ++t) {
            out.cumulative_reward[t] += r.reward[t];
            out.cumulative_regret[t] += r.regret[t];
            out.cumulative_collisions[t] += r.collisions[t];
            out.bound[t] += r.bound[t];
        }
        out.repetitions.push_back(r.summary);
    }
    for (std::size_t t = 0; t < rows; ++t) {
        out.cumulative_reward[t] /= reps;
        out.cumulative_regret[t] /= reps;
        out.cumulative_collisions[t] /= reps;
        out.bound[t] /= reps;
    }
    if (config.keep_repetition_series) {
        for (auto& r : results) {
            out.repetition_reward.push_back(std::move(r.reward));
            out.repetition_regret.push_back(std::move(r.regret));
        }
    }
    return out;
}

double improvement_percent(double policy_reward, double baseline_reward) {
    return 100.0 * (policy_reward - baseline_reward) / baseline_reward;
}

double SweepRow::improvement_vs_random() const { return improvement_percent(policy_reward, random_reward); }
double SweepRow::improvement_vs_single_opt() const { return improvement_percent(policy_reward, single_opt_reward); }
double SweepRow::improvement_vs_single_real() const {
    return improvement_percent(policy_reward, single_real_reward);
}

RandomMode baseline_random_mode(PolicyKind policy) {
    return policy == PolicyKind::CMpObp ? RandomMode::Disjoint : RandomMode::Independent;
}

std::vector<SweepRow> sweep(const ExperimentConfig& config, SweepAxis axis, std::span<const double> values) {
    if (values.empty()) throw ConfigError("sweep axis is empty");
    std::vector<SweepRow> rows;
    for (double v : values) {
        ExperimentConfig base = config;
        if (axis == SweepAxis::Cost) {
            base.cost = v;
        } else {
            base.means.clear();
            base.trace_path.clear();
            base.mu_uniform_max = v;
        }
        base.keep_repetition_series = false;

        SweepRow row;
        row.axis_value = v;
        const SeriesOutput policy = run_experiment(base);
        row.policy_reward = policy.final_reward();
        row.policy_regret = policy.final_regret();

        ExperimentConfig random = base;
        random.policy = PolicyKind::Random;
        random.random_mode = baseline_random_mode(config.policy);
        row.random_reward = run_experiment(random).final_reward();

        ExperimentConfig single_opt = base;
        single_opt.policy = PolicyKind::SingleOpt;
        row.single_opt_reward = run_experiment(single_opt).final_reward();

        ExperimentConfig single_real = base;
        single_real.policy = PolicyKind::SingleReal;
        row.single_real_reward = run_experiment(single_real).final_reward();
        rows.push_back(row);
    }
    return rows;
}

double OracleCheckReport::reverse_best_fraction() const {
    return samples ? static_cast<double>(reverse_is_best_greedy) / static_cast<double>(samples) : 0.0;
}

double OracleCheckReport::non_greedy_fraction() const {
    return samples ? static_cast<double>(optimum_non_greedy) / static_cast<double>(samples) : 0.0;
}

OracleCheckReport oracle_check(const OracleCheckSpec& spec) {
    if (spec.players == 0 || spec.arms % spec.players != 0) {
        throw ConfigError("oracle check needs M dividing K");
    }
    OracleCheckReport report;
    std::vector<double> means(spec.arms);
    for (std::size_t s = 0; s < spec.samples; ++s) {
        Rng rng = make_rng(spec.seed, s, Stream::Oracle);
        for (auto& mu : means) mu = spec.mu_max * uniform01(rng);
        ++report.samples;

        const double optimum = brute_force_optimal(means, spec.players, spec.cost, spec.budget).value;
        const double best_greedy_val = best_greedy_value(means, spec.players, spec.cost, spec.budget);
        const double reverse =
            expected_profile_reward(greedy_profile(means, spec.players, AssignmentRule::GreedyReverse), means,
                                    spec.cost);

        if (spec.players == 1 && spec.arms <= spec.budget.max_single_player_arms) {
            ++report.descending_checked;
            const double descending = expected_list_reward(descending_list(means), means, spec.cost);
            if (std::abs(descending - single_player_brute_force(means, spec.cost, spec.budget).second) <=
                kOracleTolerance) {
                ++report.descending_passed;
            }
        }
        if (spec.arms <= 2 * spec.players) {
            ++report.reverse_optimal_checked;
            if (std::abs(optimum - reverse) <= kOracleTolerance) ++report.reverse_optimal_passed;
        }
        if (reverse >= best_greedy_val - kOracleTolerance) ++report.reverse_is_best_greedy;
        if (optimum > best_greedy_val + kOracleTolerance) {
            ++report.optimum_non_greedy;
            if (report.counterexamples.size() < spec.max_counterexamples) report.counterexamples.push_back(means);
        }
    }
    return report;
}

std::string to_string(PolicyKind policy) {
    switch (policy) {
        case PolicyKind::ObpUcb: return "obp-ucb";
        case PolicyKind::CMpObp: return "c-mp-obp";
        case PolicyKind::DMpObp: return "d-mp-obp";
        case PolicyKind::DMpAdaptObp: return "d-mp-adapt-obp";
        case PolicyKind::Random: return "random";
        case PolicyKind::SingleOpt: return "single-opt";
        case PolicyKind::SingleReal: return "single-real";
    }
    return "unknown";
}

std::string to_string(AssignmentRule rule) {
    return rule == AssignmentRule::GreedySorted ? "greedy-sorted" : "greedy-reverse";
}

std::string to_string(CollisionRule rule) {
    return rule == CollisionRule::ZeroOnCollision ? "zero" : "share";
}

std::string to_string(RandomMode mode) {
    return mode == RandomMode::Independent ? "independent" : "disjoint";
}

PolicyKind parse_policy(const std::string& name) {
    for (auto p : {PolicyKind::ObpUcb, PolicyKind::CMpObp, PolicyKind::DMpObp, PolicyKind::DMpAdaptObp,
                   PolicyKind::Random, PolicyKind::SingleOpt, PolicyKind::SingleReal}) {
        if (to_string(p) == name) return p;
    }
    throw ConfigError("unknown policy `" + name + "`");
}

AssignmentRule parse_rule(const std::string& name) {
    if (name == "greedy-sorted") return AssignmentRule::GreedySorted;
    if (name == "greedy-reverse") return AssignmentRule::GreedyReverse;
    throw ConfigError("unknown assignment rule `" + name + "`");
}

CollisionRule parse_collision_rule(const std::string& name) {
    if (name == "zero") return CollisionRule::ZeroOnCollision;
    if (name == "share") return CollisionRule::ShareEqually;
    throw ConfigError("unknown collision rule `" + name + "`");
}

RandomMode parse_random_mode(const std::string& name) {
    if (name == "independent") return RandomMode::Independent;
    if (name == "disjoint") return RandomMode::Disjoint;
    throw ConfigError("unknown random mode `" + name + "`");
}

}  // namespace obp
