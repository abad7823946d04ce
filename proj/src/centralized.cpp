#include "obp/centralized.hpp"

#include <algorithm>
#include <numeric>

#include "obp/errors.hpp"

namespace obp {

Steps partition_steps(const ObservationList& order, std::size_t players) {
    if (players == 0) throw StructureError("cannot partition for zero players");
    if (order.empty() || order.size() % players != 0) {
        throw StructureError("ranking of " + std::to_string(order.size()) + " arms does not split into steps of " +
                             std::to_string(players));
    }
    Steps steps(order.size() / players);
    for (std::size_t i = 0; i < steps.size(); ++i) {
        steps[i].assign(order.begin() + static_cast<std::ptrdiff_t>(i * players),
                        order.begin() + static_cast<std::ptrdiff_t>((i + 1) * players));
    }
    return steps;
}

PolicyProfile assign_within_steps(const Steps& steps, AssignmentRule rule, std::span<const double> estimates) {
    if (steps.empty()) return {};
    const std::size_t players = steps.front().size();
    std::vector<std::vector<Arm>> lists(players);
    std::vector<double> survival(players, 1.0);
    std::vector<std::size_t> by_survival(players);

    for (const auto& step : steps) {
        if (step.size() != players) throw StructureError("observation steps have unequal sizes");
        std::iota(by_survival.begin(), by_survival.end(), std::size_t{0});
        if (rule == AssignmentRule::GreedyReverse) {
            std::stable_sort(by_survival.begin(), by_survival.end(),
                             [&](std::size_t a, std::size_t b) { return survival[a] > survival[b]; });
        }
        for (std::size_t rank = 0; rank < players; ++rank) {
            const std::size_t player = by_survival[rank];
            const Arm arm = step[rank];
            if (arm >= estimates.size()) throw StructureError("arm without an estimate");
            lists[player].push_back(arm);
            survival[player] *= 1.0 - std::clamp(estimates[arm], 0.0, 1.0);
        }
    }
    std::vector<ObservationList> out;
    out.reserve(players);
    for (auto& l : lists) out.emplace_back(std::move(l));
    PolicyProfile profile(std::move(out));
    profile.validate_collision_free(estimates.size());
    return profile;
}

PolicyProfile initialization_profile(std::size_t arms, std::size_t players) {
    std::vector<ObservationList> lists;
    for (std::size_t m = 0; m < players; ++m) {
        std::vector<Arm> own;
        for (Arm k = m; k < arms; k += players) own.push_back(k);
        lists.emplace_back(std::move(own));
    }
    return PolicyProfile(std::move(lists));
}

CentralController::CentralController(std::size_t arms, std::size_t players, AssignmentRule rule)
    : state_(arms), players_(players), rule_(rule) {
    if (players == 0 || arms % players != 0) {
        throw ParameterError("controller needs M > 0 dividing K; pad the instance first");
    }
}

PolicyProfile CentralController::next_profile() const {
    if (!initialized()) return initialization_profile(state_.num_arms(), players_);
    return assign_within_steps(partition_steps(select_list(state_), players_), rule_, state_.estimates());
}

ControllerRound CentralController::play(const RoundRealization& realization, double cost, CollisionRule collision) {
    ControllerRound out;
    out.profile = next_profile();
    out.record = resolve_round(out.profile.lists(), realization, cost, collision);
    if (!initialized()) {
        started_ = true;
        std::vector<Observation> all(state_.num_arms());
        for (Arm k = 0; k < all.size(); ++k) all[k] = {k, realization[k]};
        state_.update(all);
        return out;
    }
    std::vector<Observation> seen;
    for (const auto& p : out.record.players) seen.insert(seen.end(), p.observed.begin(), p.observed.end());
    state_.update(seen);
    return out;
}

}  // namespace obp
