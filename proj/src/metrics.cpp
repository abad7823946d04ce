#include "obp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "obp/errors.hpp"

namespace obp {

namespace {

constexpr double kLargeDeviationTerm = 1.0 + std::numbers::pi * std::numbers::pi / 3.0;

void require_separated(const GapTable& gaps) {
    if (gaps.sorted.size() > 1 && !(gaps.delta_min > 0.0)) {
        throw DegenerateGapError("regret bound undefined: two arms share the same mean");
    }
}

void require_horizon(double horizon) {
    if (!(horizon >= 1.0)) throw ParameterError("horizon must be at least 1");
}

}  // namespace

GapTable GapTable::build(std::span<const double> means, double cost) {
    GapTable g;
    g.sorted.assign(means.begin(), means.end());
    std::sort(g.sorted.begin(), g.sorted.end(), std::greater<>());
    const std::size_t k = g.sorted.size();
    g.delta.assign(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) g.delta[i][j] = g.sorted[i] - g.sorted[j];
    }
    g.delta_min = k > 1 ? std::numeric_limits<double>::infinity() : 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) g.delta_min = std::min(g.delta_min, g.delta[i][i + 1]);
    g.delta_max = k > 1 ? g.sorted.front() - g.sorted.back() : 0.0;
    g.c_mu = g.delta_min > 0.0 ? g.sorted.front() / g.delta_min : std::numeric_limits<double>::infinity();

    g.weight.resize(k);
    double survival = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        g.weight[i] = (1.0 - static_cast<double>(i + 1) * cost) * survival;
        survival *= 1.0 - g.sorted[i];
    }
    return g;
}

double pseudo_regret_single(const ObservationList& list, std::span<const double> means, double cost) {
    return expected_list_reward(descending_list(means), means, cost) - expected_list_reward(list, means, cost);
}

double pseudo_regret_central(const PolicyProfile& profile, std::span<const double> means, double cost,
                             AssignmentRule target) {
    const PolicyProfile best = greedy_profile(means, profile.num_players(), target);
    return expected_profile_reward(best, means, cost) - expected_profile_reward(profile, means, cost);
}

double loss_round(double realized_total_payoff, std::span<const double> means, std::size_t players, double cost,
                  const EnumerationBudget& budget) {
    return best_greedy_value(means, players, cost, budget) - realized_total_payoff;
}

double single_player_regret_bound(std::span<const double> means, double cost, double horizon) {
    require_horizon(horizon);
    const GapTable g = GapTable::build(means, cost);
    require_separated(g);
    const double log_t = std::log(horizon);
    const std::size_t k = g.sorted.size();
    double bound = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        double inner = 0.0;
        for (std::size_t j = i + 1; j < k; ++j) {
            const double d = g.delta[i][j];
            inner += 8.0 * log_t / d + kLargeDeviationTerm * d;
        }
        bound += static_cast<double>(i + 1) * g.weight[i] * inner;
    }
    return bound;
}

double centralized_regret_bound(std::span<const double> means, std::size_t players, double horizon) {
    require_horizon(horizon);
    if (players == 0 || means.size() % players != 0) throw ParameterError("M must divide K");
    const GapTable g = GapTable::build(means, 0.0);
    if (g.sorted.size() < 2) return 0.0;
    require_separated(g);
    const double k = static_cast<double>(means.size());
    const double l = k / static_cast<double>(players);
    return g.c_mu * k * k * (l * l + l) *
           (8.0 * std::log(horizon) / g.delta_min + kLargeDeviationTerm * g.delta_max);
}

CollisionStats collision_stats(std::span<const RoundRecord> records) {
    CollisionStats s;
    std::size_t running = 0;
    for (const auto& r : records) {
        const std::size_t n = r.collision_events();
        running += n;
        s.per_round.push_back(n);
        s.cumulative.push_back(running);
    }
    return s;
}

}  // namespace obp
