#include "obp/distributed.hpp"

#include <algorithm>
#include <numeric>

#include "obp/errors.hpp"

namespace obp {

DistributedAgent::DistributedAgent(std::size_t arms, std::size_t players, Rng rng, AgentOptions options)
    : state_(arms), players_(players), rng_(rng), options_(options) {
    if (players == 0 || arms % players != 0) {
        throw ParameterError("agent needs M > 0 dividing K; pad the instance first");
    }
    sticky_.assign(arms / players, std::nullopt);
}

Arm DistributedAgent::choose_step_arm(std::size_t step, std::span<const Arm> step_set) {
    if (step_set.empty()) throw StructureError("empty observation step");
    auto& held = sticky_.at(step);
    if (held && std::find(step_set.begin(), step_set.end(), *held) != step_set.end()) return *held;
    held = step_set[uniform_index(rng_, step_set.size())];
    return *held;
}

Arm DistributedAgent::adapt_choose(std::size_t step, std::size_t step1_rank, const Steps& steps) const {
    if (step == 0 || step >= steps.size()) throw StructureError("steered choice needs a step after the first");
    if (step1_rank >= players_) throw StructureError("step-1 rank out of range");
    const PolicyProfile steered = assign_within_steps(steps, options_.steering, state_.estimates());
    return steered.list(step1_rank)[step];
}

ObservationList DistributedAgent::walk(const RoundRealization& realization) {
    std::vector<Arm> sensed;
    if (!initialized()) {
        // Every arm is sensed once; the play follows a random order of them.
        std::vector<Arm> order(state_.num_arms());
        std::iota(order.begin(), order.end(), Arm{0});
        shuffle(std::span(order), rng_);
        init_observations_.clear();
        for (Arm k = 0; k < order.size(); ++k) init_observations_.push_back({k, realization[k]});
        for (Arm arm : order) {
            sensed.push_back(arm);
            if (realization[arm]) break;
        }
        return ObservationList(std::move(sensed));
    }

    const Steps steps = partition_steps(select_list(state_), players_);
    std::size_t first_rank = 0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        Arm arm;
        if (i == 0 || !options_.adapt) {
            arm = choose_step_arm(i, steps[i]);
            if (i == 0) {
                first_rank = static_cast<std::size_t>(std::find(steps[0].begin(), steps[0].end(), arm) -
                                                      steps[0].begin());
            }
        } else {
            arm = adapt_choose(i, first_rank, steps);
        }
        sensed.push_back(arm);
        if (realization[arm]) break;
    }
    return ObservationList(std::move(sensed));
}

void DistributedAgent::finish(const PlayerOutcome& outcome) {
    if (!initialized()) {
        started_ = true;
        state_.update(init_observations_);
        init_observations_.clear();
        return;
    }
    state_.update(outcome.observed);
    if (outcome.collided && outcome.stop_index > 0) {
        // Only step 1 is randomized in the steered variant.
        const std::size_t step = options_.adapt ? 0 : outcome.stop_index - 1;
        sticky_.at(step).reset();
    }
}

DistributedSystem::DistributedSystem(std::size_t arms, std::size_t players, std::uint64_t master_seed,
                                     std::uint64_t repetition, AgentOptions options) {
    agents_.reserve(players);
    for (std::size_t m = 0; m < players; ++m) {
        agents_.emplace_back(arms, players, make_rng(master_seed, repetition, Stream::Policy, m), options);
    }
}

DistributedSystem::Round DistributedSystem::play(const RoundRealization& realization, double cost,
                                                 CollisionRule collision) {
    Round out;
    out.lists.reserve(agents_.size());
    for (auto& agent : agents_) out.lists.push_back(agent.walk(realization));
    out.record = resolve_round(out.lists, realization, cost, collision);
    for (std::size_t m = 0; m < agents_.size(); ++m) agents_[m].finish(out.record.players[m]);
    return out;
}

}  // namespace obp
