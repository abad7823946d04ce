#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "obp/centralized.hpp"
#include "obp/model.hpp"
#include "obp/oracles.hpp"

namespace obp {

// Gaps and weights of the means in descending order (index 0 is the best arm).
struct GapTable {
    std::vector<double> sorted;               // means, descending
    std::vector<std::vector<double>> delta;   // delta[i][j] = sorted[i] - sorted[j] for i < j, else 0
    double delta_min = 0.0;                   // smallest adjacent gap (== smallest pairwise gap)
    double delta_max = 0.0;                   // sorted.front() - sorted.back()
    double c_mu = 0.0;                        // mu_max / delta_min, +inf when delta_min == 0
    std::vector<double> weight;               // weight[k-1] = (1 - k cost) prod_{i<k} (1 - sorted[i])

    static GapTable build(std::span<const double> means, double cost);
};

// Expected reward of the best single-player list minus that of `list`.
double pseudo_regret_single(const ObservationList& list, std::span<const double> means, double cost);

// Expected reward of the greedy target profile minus that of `profile`. May be negative.
double pseudo_regret_central(const PolicyProfile& profile, std::span<const double> means, double cost,
                             AssignmentRule target = AssignmentRule::GreedySorted);

// Best collision-free greedy value minus the realized total payoff of one round.
double loss_round(double realized_total_payoff, std::span<const double> means, std::size_t players, double cost,
                  const EnumerationBudget& budget = {});

// Single-player regret bound:
//   sum_{i=1}^{K-1} i W_i sum_{j>i} [8 ln T / d_ij + (1 + pi^2/3) d_ij].
// Throws DegenerateGapError on repeated means.
double single_player_regret_bound(std::span<const double> means, double cost, double horizon);

// Centralized regret bound with L = K/M:
//   c_mu K^2 (L^2 + L) (8 ln T / delta_min + (1 + pi^2/3) delta_max).
double centralized_regret_bound(std::span<const double> means, std::size_t players, double horizon);

struct CollisionStats {
    std::vector<std::size_t> per_round;   // players whose play collided
    std::vector<std::size_t> cumulative;
};

CollisionStats collision_stats(std::span<const RoundRecord> records);

}  // namespace obp
