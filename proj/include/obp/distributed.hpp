#pragma once

#include <optional>
#include <span>
#include <vector>

#include "obp/centralized.hpp"
#include "obp/environment.hpp"
#include "obp/model.hpp"
#include "obp/rng.hpp"
#include "obp/ucb.hpp"

namespace obp {

struct AgentOptions {
    // Rank-steered variant: only step 1 is randomized; later steps follow the
    // step-1 rank through the steering rule.
    bool adapt = false;
    AssignmentRule steering = AssignmentRule::GreedySorted;
};

// One player with no communication channel. It sees its own observations and a
// single bit per round telling whether its own play collided.
class DistributedAgent {
public:
    DistributedAgent(std::size_t arms, std::size_t players, Rng rng, AgentOptions options = {});

    const UcbState& state() const noexcept { return state_; }
    UcbState& state() noexcept { return state_; }
    const AgentOptions& options() const noexcept { return options_; }
    bool initialized() const noexcept { return started_ || state_.pinned(); }

    std::optional<Arm> sticky(std::size_t step) const { return sticky_.at(step); }
    void set_sticky(std::size_t step, std::optional<Arm> arm) { sticky_.at(step) = arm; }

    // Keeps the sticky arm for this step if it is still in `step_set`; otherwise
    // draws uniformly from `step_set` and makes that the new sticky arm.
    Arm choose_step_arm(std::size_t step, std::span<const Arm> step_set);

    // Arm for step `step` (>= 1) under steering: the arm holding, in this agent's own
    // steered profile, the list of the player whose step-1 rank is `step1_rank`.
    Arm adapt_choose(std::size_t step, std::size_t step1_rank, const Steps& steps) const;

    // Senses arms step by step against the realization until one is available or
    // the steps run out, and returns the arms sensed (the submitted list).
    ObservationList walk(const RoundRealization& realization);

    // Learns from the resolved outcome of the last walk.
    void finish(const PlayerOutcome& outcome);

private:
    UcbState state_;
    std::size_t players_;
    Rng rng_;
    AgentOptions options_;
    std::vector<std::optional<Arm>> sticky_;
    bool started_ = false;
    // Filled by walk() during the initialization round.
    std::vector<Observation> init_observations_;
};

// Round driver for a set of agents. Agents never see each other's state.
class DistributedSystem {
public:
    DistributedSystem(std::size_t arms, std::size_t players, std::uint64_t master_seed, std::uint64_t repetition,
                      AgentOptions options = {});

    std::span<DistributedAgent> agents() noexcept { return agents_; }
    std::span<const DistributedAgent> agents() const noexcept { return agents_; }

    struct Round {
        std::vector<ObservationList> lists;
        RoundRecord record;
    };
    Round play(const RoundRealization& realization, double cost,
               CollisionRule collision = CollisionRule::ZeroOnCollision);

private:
    std::vector<DistributedAgent> agents_;
};

}  // namespace obp
