#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "obp/environment.hpp"
#include "obp/model.hpp"

namespace obp {

// Per-arm observation counts and empirical means plus the round counter t.
//
// The UCB index of arm i in round t is mean_i + sqrt(2 ln t / n_i) (natural log).
// A pinned state reports fixed indices (zero exploration bonus); it keeps counting
// observations but its indices never move. Tests and oracle comparisons use it to
// freeze an ordering.
class UcbState {
public:
    explicit UcbState(std::size_t arms);

    std::size_t num_arms() const noexcept { return counts_.size(); }
    std::uint64_t round() const noexcept { return round_; }
    std::uint64_t count(Arm arm) const { return counts_.at(arm); }
    double mean(Arm arm) const { return means_.at(arm); }
    std::uint64_t total_observations() const noexcept;
    // Every arm observed at least once (or pinned).
    bool initialized() const noexcept;
    bool pinned() const noexcept { return pinned_.has_value(); }

    void observe(Arm arm, bool available);
    // Records every observation, then advances the round counter by one.
    void update(std::span<const Observation> observations);
    void pin(std::vector<double> indices);

    // Indices of every arm; StateError if some arm is unobserved.
    std::vector<double> indices() const;
    // Empirical (or pinned) means clipped to [0,1].
    std::vector<double> estimates() const;

private:
    std::uint64_t round_ = 1;
    std::vector<std::uint64_t> counts_;
    std::vector<double> means_;
    std::optional<std::vector<double>> pinned_;
};

// mean + sqrt(2 ln t / n); n must be positive.
double ucb_value(double mean, std::uint64_t count, double round);

// Throws StateError for an arm with no observations.
double ucb_index(const UcbState& state, Arm arm);

// All arms by UCB index descending, ties to the smaller index.
ObservationList select_list(const UcbState& state);

// Initialization round: the player senses every arm in index order, plays the first
// available one and learns from all K observations.
RoundRecord initialize(UcbState& state, const RoundRealization& realization, double cost);

// Single-player learner: one initialization round, then UCB-ordered full lists.
class ObpUcb {
public:
    explicit ObpUcb(std::size_t arms) : state_(arms) {}

    const UcbState& state() const noexcept { return state_; }
    UcbState& state() noexcept { return state_; }
    bool initialized() const noexcept { return started_; }

    // List for the next round; the identity order during initialization.
    ObservationList next_list() const;
    RoundRecord play(const RoundRealization& realization, double cost);

private:
    UcbState state_;
    bool started_ = false;
};

}  // namespace obp
