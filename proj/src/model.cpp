#include "obp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "obp/errors.hpp"

namespace obp {

namespace {

void check_shape(std::size_t arms, std::size_t players, double cost) {
    if (arms == 0) throw ParameterError("instance needs at least one arm");
    if (players == 0) throw ParameterError("instance needs at least one player");
    if (players > arms) throw ParameterError("more players than arms");
    const std::size_t steps = padded_arm_count(arms, players) / players;
    if (!(cost > 0.0) || !(static_cast<double>(steps) * cost < 1.0)) {
        throw ParameterError("cost must satisfy 0 < (K/M) * cost < 1, got cost " + std::to_string(cost) +
                             " with list length " + std::to_string(steps));
    }
}

}  // namespace

std::size_t padded_arm_count(std::size_t arms, std::size_t players) {
    if (players == 0) return arms;
    return (arms + players - 1) / players * players;
}

BanditInstance BanditInstance::with_means(std::vector<double> means, std::size_t players, double cost) {
    check_shape(means.size(), players, cost);
    for (double mu : means) {
        if (!(mu >= 0.0 && mu <= 1.0)) throw ParameterError("arm mean outside [0,1]: " + std::to_string(mu));
    }
    const std::size_t original = means.size();
    means.resize(padded_arm_count(original, players), 0.0);
    const std::size_t arms = means.size();
    return BanditInstance(original, arms, players, cost, std::move(means));
}

BanditInstance BanditInstance::without_means(std::size_t arms, std::size_t players, double cost) {
    check_shape(arms, players, cost);
    return BanditInstance(arms, padded_arm_count(arms, players), players, cost, std::nullopt);
}

std::span<const double> BanditInstance::means() const {
    if (!means_) throw StateError("instance has no known means");
    return *means_;
}

void ObservationList::validate(std::size_t num_arms) const {
    std::vector<bool> seen(num_arms, false);
    for (Arm arm : arms_) {
        if (arm >= num_arms) {
            throw StructureError("arm index " + std::to_string(arm) + " out of range for " +
                                 std::to_string(num_arms) + " arms");
        }
        if (seen[arm]) throw StructureError("arm " + std::to_string(arm) + " listed twice");
        seen[arm] = true;
    }
}

std::vector<Arm> PolicyProfile::step(std::size_t step) const {
    std::vector<Arm> out;
    out.reserve(lists_.size());
    for (const auto& list : lists_) {
        if (step < list.size()) out.push_back(list[step]);
    }
    return out;
}

bool PolicyProfile::disjoint() const {
    std::vector<Arm> all;
    for (const auto& list : lists_) all.insert(all.end(), list.begin(), list.end());
    std::sort(all.begin(), all.end());
    return std::adjacent_find(all.begin(), all.end()) == all.end();
}

void PolicyProfile::validate_collision_free(std::size_t num_arms) const {
    std::vector<int> owner(num_arms, -1);
    for (std::size_t m = 0; m < lists_.size(); ++m) {
        lists_[m].validate(num_arms);
        for (Arm arm : lists_[m]) {
            if (owner[arm] >= 0) {
                throw StructureError("arm " + std::to_string(arm) + " appears in the lists of players " +
                                     std::to_string(owner[arm]) + " and " + std::to_string(m));
            }
            owner[arm] = static_cast<int>(m);
        }
    }
}

std::size_t RoundRecord::collision_events() const {
    return static_cast<std::size_t>(
        std::count_if(players.begin(), players.end(), [](const PlayerOutcome& p) { return p.collided; }));
}

double expected_list_reward(const ObservationList& list, std::span<const double> means, double cost) {
    list.validate(means.size());
    if (!(cost >= 0.0) || !(static_cast<double>(list.size()) * cost < 1.0)) {
        throw ParameterError("observation cost violates 0 <= |list| * cost < 1");
    }
    double survival = 1.0;
    double value = 0.0;
    for (std::size_t k = 0; k < list.size(); ++k) {
        const double mu = means[list[k]];
        value += (1.0 - static_cast<double>(k + 1) * cost) * mu * survival;
        survival *= 1.0 - mu;
    }
    return value;
}

double expected_profile_reward(const PolicyProfile& profile, std::span<const double> means, double cost) {
    profile.validate_collision_free(means.size());
    double total = 0.0;
    for (const auto& list : profile.lists()) total += expected_list_reward(list, means, cost);
    return total;
}

std::vector<Arm> argsort_descending(std::span<const double> scores) {
    std::vector<Arm> order(scores.size());
    std::iota(order.begin(), order.end(), Arm{0});
    std::stable_sort(order.begin(), order.end(), [&](Arm a, Arm b) { return scores[a] > scores[b]; });
    return order;
}

ObservationList descending_list(std::span<const double> means) {
    return ObservationList(argsort_descending(means));
}

}  // namespace obp
