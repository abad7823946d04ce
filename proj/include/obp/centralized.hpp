#pragma once

#include <span>
#include <vector>

#include "obp/environment.hpp"
#include "obp/model.hpp"
#include "obp/ucb.hpp"

namespace obp {

enum class AssignmentRule { GreedySorted, GreedyReverse };

// Observation steps: block i holds the arms ranked i*M .. i*M+M-1, in rank order.
using Steps = std::vector<std::vector<Arm>>;

// Splits a full ranking into K/M blocks of M arms. Throws StructureError when M
// does not divide K (pad the instance first).
Steps partition_steps(const ObservationList& order, std::size_t players);

// Builds each player's list from the steps.
//
// GreedySorted: the rank-m arm of every step goes to player m.
// GreedyReverse: within step i, arms go best-first to players sorted by their
// probability of having found nothing yet, prod_{l<i} (1 - est[o_m^(l)]),
// highest first; ties to the smaller player index. Estimates are clipped to [0,1].
PolicyProfile assign_within_steps(const Steps& steps, AssignmentRule rule, std::span<const double> estimates);

// Initialization profile: player m senses arms m, m+M, m+2M, ... so that every arm
// is observed exactly once across players.
PolicyProfile initialization_profile(std::size_t arms, std::size_t players);

struct ControllerRound {
    PolicyProfile profile;
    RoundRecord record;
};

// Central controller: one shared UCB state for all players. Every round ranks arms
// by UCB index, cuts the ranking into steps, assigns arms within steps by the rule
// and learns from every player's observed prefix.
class CentralController {
public:
    CentralController(std::size_t arms, std::size_t players, AssignmentRule rule);

    const UcbState& state() const noexcept { return state_; }
    UcbState& state() noexcept { return state_; }
    std::size_t num_players() const noexcept { return players_; }
    bool initialized() const noexcept { return started_ || state_.pinned(); }

    PolicyProfile next_profile() const;
    ControllerRound play(const RoundRealization& realization, double cost,
                         CollisionRule collision = CollisionRule::ZeroOnCollision);

private:
    UcbState state_;
    std::size_t players_;
    AssignmentRule rule_;
    bool started_ = false;
};

}  // namespace obp
