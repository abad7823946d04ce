#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace obp {

using Arm = std::size_t;

// Problem parameters. Immutable after construction.
//
// The per-observation cost must satisfy 0 < L * cost < 1 where L = K / M is the
// length of every player's list in a collision-free greedy profile (L = K for a
// single player). Arms are padded with zero-mean virtual arms until M divides K.
class BanditInstance {
public:
    // Validates and pads. Throws ParameterError.
    static BanditInstance with_means(std::vector<double> means, std::size_t players, double cost);
    // Means unknown up front (trace driven); arm count is still padded.
    static BanditInstance without_means(std::size_t arms, std::size_t players, double cost);

    std::size_t num_arms() const noexcept { return num_arms_; }
    // Arms before padding.
    std::size_t original_arms() const noexcept { return original_arms_; }
    std::size_t num_players() const noexcept { return num_players_; }
    std::size_t steps() const noexcept { return num_arms_ / num_players_; }
    double cost() const noexcept { return cost_; }
    bool has_means() const noexcept { return means_.has_value(); }
    // Throws StateError for trace-driven instances.
    std::span<const double> means() const;

private:
    BanditInstance(std::size_t original, std::size_t arms, std::size_t players, double cost,
                   std::optional<std::vector<double>> means)
        : original_arms_(original), num_arms_(arms), num_players_(players), cost_(cost), means_(std::move(means)) {}

    std::size_t original_arms_;
    std::size_t num_arms_;
    std::size_t num_players_;
    double cost_;
    std::optional<std::vector<double>> means_;
};

// Smallest multiple of `players` that is >= arms.
std::size_t padded_arm_count(std::size_t arms, std::size_t players);

// Ordered sequence of distinct arms one player senses in a round.
class ObservationList {
public:
    ObservationList() = default;
    explicit ObservationList(std::vector<Arm> arms) : arms_(std::move(arms)) {}
    ObservationList(std::initializer_list<Arm> arms) : arms_(arms) {}

    std::span<const Arm> arms() const noexcept { return arms_; }
    std::size_t size() const noexcept { return arms_.size(); }
    bool empty() const noexcept { return arms_.empty(); }
    Arm operator[](std::size_t i) const { return arms_[i]; }
    auto begin() const noexcept { return arms_.begin(); }
    auto end() const noexcept { return arms_.end(); }

    // Throws StructureError on duplicates or indices >= num_arms.
    void validate(std::size_t num_arms) const;

    friend bool operator==(const ObservationList&, const ObservationList&) = default;

private:
    std::vector<Arm> arms_;
};

// One list per player.
class PolicyProfile {
public:
    PolicyProfile() = default;
    explicit PolicyProfile(std::vector<ObservationList> lists) : lists_(std::move(lists)) {}

    std::size_t num_players() const noexcept { return lists_.size(); }
    const ObservationList& list(std::size_t player) const { return lists_.at(player); }
    std::span<const ObservationList> lists() const noexcept { return lists_; }

    // Arms at position `step` of each player's list (skipping players whose list is shorter).
    std::vector<Arm> step(std::size_t step) const;

    bool disjoint() const;
    // Validates every list and throws StructureError when two lists share an arm.
    void validate_collision_free(std::size_t num_arms) const;

    friend bool operator==(const PolicyProfile&, const PolicyProfile&) = default;

private:
    std::vector<ObservationList> lists_;
};

// Arm availabilities for one round.
struct RoundRealization {
    std::vector<std::uint8_t> available;

    std::size_t num_arms() const noexcept { return available.size(); }
    bool operator[](Arm arm) const { return available[arm] != 0; }
};

struct Observation {
    Arm arm;
    bool available;

    friend bool operator==(const Observation&, const Observation&) = default;
};

struct PlayerOutcome {
    std::vector<Observation> observed;  // prefix of the submitted list
    std::optional<Arm> played;
    std::size_t stop_index = 0;  // number of observations made
    double payoff = 0.0;
    bool collided = false;
};

struct RoundRecord {
    std::vector<PlayerOutcome> players;
    std::vector<std::uint8_t> collision;  // per arm: >= 2 players played it
    double total_payoff = 0.0;

    // Number of players whose play collided.
    std::size_t collision_events() const;
};

// One-round expected payoff of a single player walking `list` and stopping at the
// first available arm: sum_k (1 - k cost) mu[o_k] prod_{i<k} (1 - mu[o_i]).
// Requires cost >= 0 and |list| * cost < 1 (ParameterError); validates the list.
double expected_list_reward(const ObservationList& list, std::span<const double> means, double cost);

// Sum of expected_list_reward over players of a collision-free profile.
double expected_profile_reward(const PolicyProfile& profile, std::span<const double> means, double cost);

// All arms sorted by mean descending, ties to the smaller index.
ObservationList descending_list(std::span<const double> means);

// Permutation of arm indices sorted by `scores` descending, ties to the smaller index.
std::vector<Arm> argsort_descending(std::span<const double> scores);

}  // namespace obp
