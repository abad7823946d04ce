#include "obp/oracles.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "obp/errors.hpp"

namespace obp {

namespace {

constexpr double kTieTolerance = 1e-12;

void check_players(std::size_t arms, std::size_t players) {
    if (players == 0) throw ParameterError("need at least one player");
    if (players > arms) throw ParameterError("more players than arms");
}

// Value of an allocation, walking arms in descending-mean order.
class AllocationEvaluator {
public:
    AllocationEvaluator(std::span<const double> means, std::size_t players, double cost)
        : means_(means), order_(argsort_descending(means)), cost_(cost), survival_(players), position_(players) {}

    double operator()(std::span<const int> owner) {
        std::fill(survival_.begin(), survival_.end(), 1.0);
        std::fill(position_.begin(), position_.end(), 0);
        double value = 0.0;
        for (Arm arm : order_) {
            const int m = owner[arm];
            if (m < 0) continue;
            const double mu = means_[arm];
            const auto k = ++position_[static_cast<std::size_t>(m)];
            value += (1.0 - static_cast<double>(k) * cost_) * mu * survival_[static_cast<std::size_t>(m)];
            survival_[static_cast<std::size_t>(m)] *= 1.0 - mu;
        }
        return value;
    }

private:
    std::span<const double> means_;
    std::vector<Arm> order_;
    double cost_;
    std::vector<double> survival_;
    std::vector<std::size_t> position_;
};

void check_cost(std::size_t list_length, double cost) {
    if (!(cost >= 0.0) || !(static_cast<double>(list_length) * cost < 1.0)) {
        throw ParameterError("observation cost violates 0 <= list length * cost < 1");
    }
}

}  // namespace

PolicyProfile Allocation::profile(std::span<const double> means, std::size_t players) const {
    std::vector<std::vector<Arm>> lists(players);
    for (Arm arm : argsort_descending(means)) {
        const int m = owner.at(arm);
        if (m >= 0) lists.at(static_cast<std::size_t>(m)).push_back(arm);
    }
    std::vector<ObservationList> out;
    for (auto& l : lists) out.emplace_back(std::move(l));
    return PolicyProfile(std::move(out));
}

OptimalProfile brute_force_optimal(std::span<const double> means, std::size_t players, double cost,
                                   const EnumerationBudget& budget, bool allow_unassigned,
                                   std::size_t max_list_length) {
    const std::size_t arms = means.size();
    check_players(arms, players);
    if (arms > budget.max_arms || players > budget.max_players) {
        throw BudgetError("brute force limited to K <= " + std::to_string(budget.max_arms) + " and M <= " +
                          std::to_string(budget.max_players));
    }
    const std::size_t cap = max_list_length == 0 ? (arms + players - 1) / players : std::min(max_list_length, arms);
    check_cost(cap, cost);

    const int lowest = allow_unassigned ? -1 : 0;
    const int highest = static_cast<int>(players) - 1;
    std::vector<int> owner(arms, lowest);
    std::vector<std::size_t> held(players, 0);
    auto within_cap = [&] {
        std::fill(held.begin(), held.end(), 0);
        for (int m : owner)
            if (m >= 0 && ++held[static_cast<std::size_t>(m)] > cap) return false;
        return true;
    };
    AllocationEvaluator evaluate(means, players, cost);

    OptimalProfile best;
    best.value = -1.0;
    // Odometer with the last arm fastest gives lexicographic order.
    while (true) {
        if (within_cap()) {
            const double value = evaluate(owner);
            if (value > best.value + kTieTolerance) {
                best.value = value;
                best.allocation.owner = owner;
            }
        }
        std::size_t pos = arms;
        while (pos > 0 && owner[pos - 1] == highest) {
            owner[pos - 1] = lowest;
            --pos;
        }
        if (pos == 0) break;
        ++owner[pos - 1];
    }
    best.profile = best.allocation.profile(means, players);
    return best;
}

std::pair<ObservationList, double> single_player_brute_force(std::span<const double> means, double cost,
                                                             const EnumerationBudget& budget) {
    if (means.empty()) throw ParameterError("need at least one arm");
    if (means.size() > budget.max_single_player_arms) {
        throw BudgetError("single-player brute force limited to K <= " +
                          std::to_string(budget.max_single_player_arms));
    }
    std::vector<Arm> order(means.size());
    std::iota(order.begin(), order.end(), Arm{0});
    std::vector<Arm> best_order = order;
    double best = expected_list_reward(ObservationList(order), means, cost);
    while (std::next_permutation(order.begin(), order.end())) {
        const double value = expected_list_reward(ObservationList(order), means, cost);
        if (value > best + kTieTolerance) {
            best = value;
            best_order = order;
        }
    }
    return {ObservationList(std::move(best_order)), best};
}

PolicyProfile greedy_profile(std::span<const double> means, std::size_t players, AssignmentRule rule) {
    check_players(means.size(), players);
    return assign_within_steps(partition_steps(descending_list(means), players), rule, means);
}

OptimalProfile best_greedy(std::span<const double> means, std::size_t players, double cost,
                           const EnumerationBudget& budget) {
    check_players(means.size(), players);
    const Steps steps = partition_steps(descending_list(means), players);
    check_cost(steps.size(), cost);

    std::uint64_t per_step = 1;
    for (std::size_t m = 2; m <= players; ++m) per_step *= m;
    std::uint64_t combos = 1;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (combos > budget.max_greedy_combinations / per_step) {
            throw BudgetError("greedy enumeration exceeds " + std::to_string(budget.max_greedy_combinations) +
                              " combinations");
        }
        combos *= per_step;
    }

    // perms[i][m] = which rank of step i player m receives.
    std::vector<std::vector<std::size_t>> perms(steps.size(), std::vector<std::size_t>(players));
    for (auto& p : perms) std::iota(p.begin(), p.end(), std::size_t{0});

    std::vector<int> owner(means.size(), -1);
    AllocationEvaluator evaluate(means, players, cost);
    auto fill_owner = [&] {
        for (std::size_t i = 0; i < steps.size(); ++i) {
            for (std::size_t m = 0; m < players; ++m) owner[steps[i][perms[i][m]]] = static_cast<int>(m);
        }
    };

    OptimalProfile best;
    fill_owner();
    best.value = evaluate(owner);
    best.allocation.owner = owner;
    while (true) {
        std::size_t i = steps.size();
        bool advanced = false;
        while (i > 0) {
            if (std::next_permutation(perms[i - 1].begin(), perms[i - 1].end())) {
                advanced = true;
                break;
            }
            --i;  // next_permutation already wrapped this step back to identity
        }
        if (!advanced) break;
        fill_owner();
        const double value = evaluate(owner);
        if (value > best.value + kTieTolerance) {
            best.value = value;
            best.allocation.owner = owner;
        }
    }
    best.profile = best.allocation.profile(means, players);
    return best;
}

double best_greedy_value(std::span<const double> means, std::size_t players, double cost,
                         const EnumerationBudget& budget) {
    return best_greedy(means, players, cost, budget).value;
}

PolicyProfile single_opt_profile(std::span<const double> means, std::size_t players) {
    check_players(means.size(), players);
    const auto order = argsort_descending(means);
    std::vector<ObservationList> lists;
    for (std::size_t m = 0; m < players; ++m) lists.push_back(ObservationList{order[m]});
    return PolicyProfile(std::move(lists));
}

std::vector<ObservationList> random_baseline_lists(std::size_t arms, std::size_t players, Rng& rng,
                                                   std::size_t list_length) {
    if (arms == 0) throw ParameterError("need at least one arm");
    if (list_length == 0 || list_length > arms) list_length = arms;
    std::vector<ObservationList> out;
    out.reserve(players);
    std::vector<Arm> order(arms);
    for (std::size_t m = 0; m < players; ++m) {
        std::iota(order.begin(), order.end(), Arm{0});
        shuffle(std::span(order), rng);
        out.emplace_back(std::vector<Arm>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(list_length)));
    }
    return out;
}

PolicyProfile random_disjoint_profile(std::size_t arms, std::size_t players, Rng& rng) {
    std::vector<Arm> order(arms);
    std::iota(order.begin(), order.end(), Arm{0});
    shuffle(std::span(order), rng);
    const Steps steps = partition_steps(ObservationList(std::move(order)), players);
    std::vector<std::vector<Arm>> lists(players);
    for (const auto& step : steps) {
        for (std::size_t m = 0; m < players; ++m) lists[m].push_back(step[m]);
    }
    std::vector<ObservationList> out;
    for (auto& l : lists) out.emplace_back(std::move(l));
    return PolicyProfile(std::move(out));
}

SingleObservationUcb::SingleObservationUcb(std::size_t arms, std::size_t players)
    : state_(arms), players_(players) {
    check_players(arms, players);
}

PolicyProfile SingleObservationUcb::next_profile() const {
    if (!initialized()) return initialization_profile(state_.num_arms(), players_);
    const auto order = argsort_descending(state_.indices());
    std::vector<ObservationList> lists;
    for (std::size_t m = 0; m < players_; ++m) lists.push_back(ObservationList{order[m]});
    return PolicyProfile(std::move(lists));
}

RoundRecord SingleObservationUcb::play(const RoundRealization& realization, double cost, CollisionRule collision) {
    const PolicyProfile profile = next_profile();
    RoundRecord record = resolve_round(profile.lists(), realization, cost, collision);
    std::vector<Observation> seen;
    if (!initialized()) {
        started_ = true;
        for (Arm k = 0; k < state_.num_arms(); ++k) seen.push_back({k, realization[k]});
    } else {
        for (const auto& p : record.players) seen.insert(seen.end(), p.observed.begin(), p.observed.end());
    }
    state_.update(seen);
    return record;
}

}  // namespace obp
