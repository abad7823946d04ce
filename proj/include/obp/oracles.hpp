#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "obp/centralized.hpp"
#include "obp/environment.hpp"
#include "obp/model.hpp"
#include "obp/rng.hpp"
#include "obp/ucb.hpp"

namespace obp {

// Hard limits on exhaustive enumeration. Exceeding one throws BudgetError.
struct EnumerationBudget {
    std::size_t max_arms = 12;
    std::size_t max_players = 4;
    // Cap on the number of within-step assignment combinations (M!)^L.
    std::uint64_t max_greedy_combinations = 331776;  // 24^4
    std::size_t max_single_player_arms = 8;
};

// Arm-to-player assignment; owner[k] < 0 marks an unassigned arm.
struct Allocation {
    std::vector<int> owner;

    // Each player's arms ordered by mean descending (ties to the smaller index).
    PolicyProfile profile(std::span<const double> means, std::size_t players) const;
};

struct OptimalProfile {
    Allocation allocation;
    PolicyProfile profile;
    double value = 0.0;
};

// Exhaustive search over all M^K assignments of arms to players (or (M+1)^K when
// `allow_unassigned`), with each player's arms in descending order. A player holds
// at most `max_list_length` arms; 0 means ceil(K/M), the number of observation
// steps, and K lifts the cap. Assignments are visited in lexicographic order and a
// later one replaces the incumbent only if it is better by more than 1e-12.
OptimalProfile brute_force_optimal(std::span<const double> means, std::size_t players, double cost,
                                   const EnumerationBudget& budget = {}, bool allow_unassigned = false,
                                   std::size_t max_list_length = 0);

// Best of all K! orders for one player.
std::pair<ObservationList, double> single_player_brute_force(std::span<const double> means, double cost,
                                                             const EnumerationBudget& budget = {});

// Greedy profile under the true means: descending ranking cut into steps, then
// assigned by the rule. Requires M | K.
PolicyProfile greedy_profile(std::span<const double> means, std::size_t players, AssignmentRule rule);

// Maximum expected reward over every within-step assignment of the greedy steps.
OptimalProfile best_greedy(std::span<const double> means, std::size_t players, double cost,
                           const EnumerationBudget& budget = {});
double best_greedy_value(std::span<const double> means, std::size_t players, double cost,
                         const EnumerationBudget& budget = {});

// Top-M arms by mean, one singleton list each.
PolicyProfile single_opt_profile(std::span<const double> means, std::size_t players);

// Random heuristic, one player at a time: a uniform permutation of all K arms cut
// to `list_length` (0 means K). Lists of different players may overlap.
std::vector<ObservationList> random_baseline_lists(std::size_t arms, std::size_t players, Rng& rng,
                                                   std::size_t list_length = 0);

// Random heuristic under a controller: one uniform permutation dealt into M
// disjoint lists of K/M arms.
PolicyProfile random_disjoint_profile(std::size_t arms, std::size_t players, Rng& rng);

// Single-observation UCB baseline: each round the M arms with the highest UCB
// index are handed out one per player. Uses the shared initialization round of the
// controller.
class SingleObservationUcb {
public:
    SingleObservationUcb(std::size_t arms, std::size_t players);

    const UcbState& state() const noexcept { return state_; }
    UcbState& state() noexcept { return state_; }
    bool initialized() const noexcept { return started_ || state_.pinned(); }

    PolicyProfile next_profile() const;
    RoundRecord play(const RoundRealization& realization, double cost,
                     CollisionRule collision = CollisionRule::ZeroOnCollision);

private:
    UcbState state_;
    std::size_t players_;
    bool started_ = false;
};

}  // namespace obp
