// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "obp/centralized.hpp"
#include "obp/distributed.hpp"
#include "obp/environment.hpp"
#include "obp/harness.hpp"
#include "obp/metrics.hpp"
#include "obp/model.hpp"
#include "obp/oracles.hpp"
#include "obp/rng.hpp"

using namespace obp;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::size_t threads() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string join(const std::vector<double>& v, const char* f = "%.1f") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "/" : "") + fmt(f, v[i]);
    return s;
}

bool increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) return false;
    return true;
}

bool decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

bool within(const std::vector<double>& got, const std::vector<double>& want, double tol) {
    for (std::size_t i = 0; i < got.size(); ++i)
        if (std::abs(got[i] - want[i]) > tol) return false;
    return true;
}

std::vector<double> uniform_means(Rng& rng, std::size_t k, double hi = 1.0) {
    std::vector<double> mu(k);
    for (auto& m : mu) m = hi * uniform01(rng);
    return mu;
}

std::vector<Arm> random_permutation(Rng& rng, std::size_t k) {
    std::vector<Arm> p(k);
    std::iota(p.begin(), p.end(), Arm{0});
    shuffle(std::span(p), rng);
    return p;
}

ExperimentConfig table_config(PolicyKind policy, std::size_t players) {
    ExperimentConfig c;
    c.arms = 9;
    c.players = players;
    c.mu_uniform_max = 0.5;
    c.horizon = 5000;
    c.repetitions = 100;
    c.seed = 7;
    c.policy = policy;
    c.parallel = threads();
    return c;
}

// 1 -------------------------------------------------------------------------
Verdict descending_matches_brute_force() {
    Rng rng = make_rng(101, 0, Stream::Oracle);
    int passed = 0;
    const int n = 500;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const std::size_t k = 2 + uniform_index(rng, 5);
        std::vector<double> mu;
        do {
            mu = uniform_means(rng, k);
        } while (std::set<double>(mu.begin(), mu.end()).size() != k);
        const double tau = uniform01(rng) / (2.0 * static_cast<double>(k));
        const double diff = std::abs(expected_list_reward(descending_list(mu), mu, tau) -
                                     single_player_brute_force(mu, tau).second);
        worst = std::max(worst, diff);
        if (diff <= 1e-12) ++passed;
    }
    return {passed == n, std::to_string(passed) + "/" + std::to_string(n) + " equal, max |diff| " + fmt("%.2e", worst)};
}

// 2 -------------------------------------------------------------------------
Verdict adjacent_swaps_never_hurt() {
    Rng rng = make_rng(102, 0, Stream::Oracle);
    const int n = 100'000;
    int bad = 0;
    double worst = 0.0;
    for (int i = 0; i < n;) {
        const std::size_t k = 2 + uniform_index(rng, 7);
        const auto mu = uniform_means(rng, k);
        const double tau = uniform01(rng) / static_cast<double>(k);
        auto list = random_permutation(rng, k);
        std::vector<std::size_t> candidates;
        for (std::size_t j = 0; j + 1 < k; ++j)
            if (mu[list[j]] < mu[list[j + 1]]) candidates.push_back(j);
        if (candidates.empty()) continue;
        const std::size_t j = candidates[uniform_index(rng, candidates.size())];
        const double before = expected_list_reward(ObservationList(list), mu, tau);
        std::swap(list[j], list[j + 1]);
        const double change = expected_list_reward(ObservationList(list), mu, tau) - before;
        worst = std::min(worst, change);
        if (change < -1e-12) ++bad;
        ++i;
    }
    return {bad == 0, std::to_string(n - bad) + "/" + std::to_string(n) + " swaps non-decreasing, min change " +
                          fmt("%.2e", worst)};
}

// 3 -------------------------------------------------------------------------
Verdict reverse_optimal_for_two_steps() {
    Rng rng = make_rng(103, 0, Stream::Oracle);
    int passed = 0, n = 0;
    std::string per;
    for (std::size_t m : {2u, 3u, 4u}) {
        int ok = 0;
        for (int i = 0; i < 100; ++i, ++n) {
            const auto mu = uniform_means(rng, 2 * m);
            const double tau = uniform01(rng) / 4.0;  // L * tau < 1/2
            const double opt = brute_force_optimal(mu, m, tau).value;
            const double rev = expected_profile_reward(greedy_profile(mu, m, AssignmentRule::GreedyReverse), mu, tau);
            if (std::abs(opt - rev) <= 1e-12) ++ok;
        }
        passed += ok;
        per += (per.empty() ? "" : ", ") + std::string("(M=") + std::to_string(m) + ") " + std::to_string(ok) + "/100";
    }
    return {passed == n, std::to_string(passed) + "/" + std::to_string(n) + " equal [" + per + "]"};
}

// 4 -------------------------------------------------------------------------
Verdict greedy_statistics() {
    bool pass = true;
    std::string detail;
    for (double tau : {0.0, 0.05, 0.1}) {
        OracleCheckSpec spec;
        spec.arms = 9;
        spec.players = 3;
        spec.cost = tau;
        spec.samples = 500;
        spec.seed = 104;
        const auto r = oracle_check(spec);
        const bool ok = r.reverse_best_fraction() >= 0.80 && r.non_greedy_fraction() <= 0.35;
        pass = pass && ok;
        detail += (detail.empty() ? "" : "; ") + std::string("tau=") + fmt("%.2f", tau) + ": reverse best " +
                  fmt("%.1f%%", 100 * r.reverse_best_fraction()) + ", optimum non-greedy " +
                  fmt("%.1f%%", 100 * r.non_greedy_fraction());
    }
    return {pass, detail + " (need >= 80% and <= 35% at every tau)"};
}

// 5 -------------------------------------------------------------------------
Verdict controller_is_collision_free() {
    double worst = 0.0;
    std::size_t runs = 0;
    for (auto rule : {AssignmentRule::GreedySorted, AssignmentRule::GreedyReverse}) {
        auto c = table_config(PolicyKind::CMpObp, 3);
        c.rule = rule;
        c.keep_repetition_series = false;
        const auto out = run_experiment(c);
        // per-repetition cumulative counts are sums of nonnegative per-round counts
        for (const auto& rep : out.repetitions) worst = std::max(worst, rep.cumulative_collisions);
        runs += out.repetitions.size();
    }
    return {worst == 0.0,
            std::to_string(runs) + " runs x 5000 rounds, max collisions in a run " + fmt("%.0f", worst)};
}

// 6 -------------------------------------------------------------------------
Verdict sublinear_regret() {
    bool pass = true;
    std::string detail;
    struct Setting {
        const char* name;
        PolicyKind policy;
        std::size_t players;
        bool bounded;
    };
    for (const Setting& s : {Setting{"obp-ucb", PolicyKind::ObpUcb, 1, true},
                             Setting{"c-mp-obp", PolicyKind::CMpObp, 3, true},
                             Setting{"d-mp-obp", PolicyKind::DMpObp, 3, false}}) {
        auto c = table_config(s.policy, s.players);
        c.cost = 0.05;
        const auto out = run_experiment(c);
        const double ratio = out.cumulative_regret[4999] / out.cumulative_regret[2499];
        bool ok = ratio < 1.8;
        std::string bound_note;
        if (s.bounded) {
            std::size_t above = 0;
            double tightest = 1e300;
            for (std::size_t t = 0; t < out.rows(); ++t) {
                if (!(out.cumulative_regret[t] <= out.bound[t])) ++above;
                tightest = std::min(tightest, out.bound[t] / std::max(out.cumulative_regret[t], 1e-300));
            }
            ok = ok && above == 0;
            bound_note = ", rounds above bound " + std::to_string(above) + ", min bound/regret " + fmt("%.3g", tightest);
        }
        pass = pass && ok;
        detail += (detail.empty() ? "" : "; ") + std::string(s.name) + " S(5000)/S(2500)=" + fmt("%.3f", ratio) +
                  " (S(5000)=" + fmt("%.2f", out.cumulative_regret[4999]) + ")" + bound_note;
    }
    return {pass, detail};
}

struct TableRow {
    std::vector<double> vs_single_opt, vs_random;
};

TableRow table(PolicyKind policy, std::size_t players, const std::vector<double>& taus) {
    const auto rows = sweep(table_config(policy, players), SweepAxis::Cost, taus);
    TableRow out;
    for (const auto& r : rows) {
        out.vs_single_opt.push_back(r.improvement_vs_single_opt());
        out.vs_random.push_back(r.improvement_vs_random());
    }
    return out;
}

// 7 -------------------------------------------------------------------------
Verdict single_player_table() {
    const auto t = table(PolicyKind::ObpUcb, 1, {0.01, 0.05, 0.1});
    const std::vector<double> want_opt{102, 92, 78}, want_rand{5, 34, 140};
    const bool trend = increasing(t.vs_random) && decreasing(t.vs_single_opt);
    const bool opt_ok = within(t.vs_single_opt, want_opt, 15.0);
    const bool rand_ok = within(t.vs_random, want_rand, 15.0);
    std::string detail = "vs single-opt " + join(t.vs_single_opt) + "% (target 102/92/78, " +
                         (opt_ok ? "within" : "outside") + " 15), vs random " + join(t.vs_random) +
                         "% (target 5/34/140, " + (rand_ok ? "within" : "outside") + " 15), trends " +
                         (trend ? "hold" : "broken");
    return {trend && opt_ok && rand_ok, detail};
}

// 8 -------------------------------------------------------------------------
Verdict multi_player_table() {
    const std::vector<double> taus{0.1, 0.2, 0.3};
    const auto c = table(PolicyKind::CMpObp, 3, taus);
    const auto d = table(PolicyKind::DMpObp, 3, taus);
    const bool trend = decreasing(c.vs_single_opt) && decreasing(d.vs_single_opt) && increasing(c.vs_random) &&
                       increasing(d.vs_random);
    bool order = true;
    for (std::size_t i = 0; i < taus.size(); ++i) order = order && c.vs_single_opt[i] >= d.vs_single_opt[i];
    const bool points = within(c.vs_single_opt, {41, 33, 22}, 15.0) && within(d.vs_single_opt, {27, 20, 11}, 15.0);
    std::string detail = "vs single-opt C " + join(c.vs_single_opt) + "% (target 41/33/22), D " +
                         join(d.vs_single_opt) + "% (target 27/20/11); vs random C " + join(c.vs_random) +
                         "% (target 7/15/30), D " + join(d.vs_random) + "% (target 39/47/60, not gated); trends " +
                         (trend ? "hold" : "broken") + ", C>=D " + (order ? "yes" : "no") + ", points " +
                         (points ? "within 15" : "outside 15");
    return {trend && order && points, detail};
}

// 9 -------------------------------------------------------------------------
struct Gap {
    double mean = 0.0, se = 0.0;
};

Gap paired_gap(const SeriesOutput& policy, const SeriesOutput& baseline) {
    const std::size_t n = policy.repetitions.size();
    std::vector<double> d(n);
    for (std::size_t r = 0; r < n; ++r)
        d[r] = policy.repetitions[r].cumulative_reward - baseline.repetitions[r].cumulative_reward;
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double x : d) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n))};
}

Verdict mean_range_shape() {
    bool pass = true;
    std::string detail;
    struct Setting {
        const char* name;
        PolicyKind policy;
        std::size_t players;
    };
    for (const Setting& s : {Setting{"obp-ucb", PolicyKind::ObpUcb, 1}, Setting{"c-mp-obp", PolicyKind::CMpObp, 3},
                             Setting{"d-mp-obp", PolicyKind::DMpObp, 3}}) {
        std::vector<Gap> vs_random, vs_opt;
        for (int i = 1; i <= 9; ++i) {
            auto c = table_config(s.policy, s.players);
            c.cost = 0.1;
            c.mu_uniform_max = 0.1 * i;
            const auto policy = run_experiment(c);
            auto r = c;
            r.policy = PolicyKind::Random;
            r.random_mode = baseline_random_mode(s.policy);
            auto o = c;
            o.policy = PolicyKind::SingleOpt;
            vs_random.push_back(paired_gap(policy, run_experiment(r)));
            vs_opt.push_back(paired_gap(policy, run_experiment(o)));
        }
        int inversions = 0;
        bool inversions_in_noise = true;
        for (std::size_t i = 1; i < vs_random.size(); ++i) {
            const double drop = vs_random[i - 1].mean - vs_random[i].mean;
            if (drop > 0) {
                ++inversions;
                const double noise = 2.0 * std::hypot(vs_random[i - 1].se, vs_random[i].se);
                inversions_in_noise = inversions_in_noise && drop <= noise;
            }
        }
        const bool monotone = inversions == 0 || (inversions == 1 && inversions_in_noise);
        std::size_t peak = 0;
        for (std::size_t i = 1; i < vs_opt.size(); ++i)
            if (vs_opt[i].mean > vs_opt[peak].mean) peak = i;
        const bool interior = peak != 0 && peak + 1 != vs_opt.size();
        pass = pass && monotone && interior;
        std::vector<double> gr, go;
        for (const auto& g : vs_random) gr.push_back(g.mean);
        for (const auto& g : vs_opt) go.push_back(g.mean);
        detail += (detail.empty() ? "" : "; ") + std::string(s.name) + ": gap vs random " + join(gr, "%.0f") + " (" +
                  std::to_string(inversions) + " inversion(s)" + (monotone ? "" : ", beyond noise") +
                  "), gap vs single-opt peaks at x=" + fmt("%.1f", 0.1 * static_cast<double>(peak + 1)) + " [" +
                  join(go, "%.0f") + "]";
    }
    return {pass, detail};
}

// 10 ------------------------------------------------------------------------
Verdict distributed_absorption() {
    const std::size_t k = 9, m = 3;
    int passed = 0;
    const RoundRealization all_on{std::vector<std::uint8_t>(k, 1)};
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng = make_rng(110, seed, Stream::Means);
        const auto mu = uniform_means(rng, k);
        DistributedSystem sys(k, m, 110, seed);
        for (auto& a : sys.agents()) a.state().pin(mu);
        int settled_at = -1;
        for (int t = 0; t < 10'000 && settled_at < 0; ++t)
            if (sys.play(all_on, 0.1).record.collision_events() == 0) settled_at = t;
        if (settled_at < 0) continue;
        bool clean = true;
        for (int t = 0; t < 1000 && clean; ++t) clean = sys.play(all_on, 0.1).record.collision_events() == 0;
        if (clean) ++passed;
    }
    return {passed == 100, std::to_string(passed) + "/100 seeds with no step-1 collision in 1000 rounds after settling"};
}

// 11 ------------------------------------------------------------------------
Verdict adapt_lists_disjoint() {
    int cases = 0, passed = 0;
    for (std::size_t m : {2u, 3u, 4u}) {
        const std::size_t k = 3 * m;
        Rng rng = make_rng(111, m, Stream::Means);
        const auto mu = uniform_means(rng, k);
        for (auto steering : {AssignmentRule::GreedySorted, AssignmentRule::GreedyReverse}) {
            std::vector<std::size_t> ranks(m);
            std::iota(ranks.begin(), ranks.end(), std::size_t{0});
            do {
                DistributedSystem sys(k, m, 111, m, AgentOptions{true, steering});
                const Steps steps = partition_steps(descending_list(mu), m);
                for (std::size_t p = 0; p < m; ++p) {
                    sys.agents()[p].state().pin(mu);
                    sys.agents()[p].set_sticky(0, steps[0][ranks[p]]);
                }
                // nothing available, so every agent senses its whole list
                const auto round = sys.play(RoundRealization{std::vector<std::uint8_t>(k, 0)}, 0.1);
                std::set<Arm> seen;
                std::size_t total = 0;
                for (const auto& l : round.lists) {
                    seen.insert(l.begin(), l.end());
                    total += l.size();
                }
                ++cases;
                if (total == k && seen.size() == k) ++passed;
            } while (std::next_permutation(ranks.begin(), ranks.end()));
        }
    }
    return {passed == cases, std::to_string(passed) + "/" + std::to_string(cases) +
                                 " rank assignments (M=2,3,4; both steering rules) give pairwise disjoint lists"};
}

// 12 ------------------------------------------------------------------------
Verdict monte_carlo_agreement() {
    Rng rng = make_rng(112, 0, Stream::Oracle);
    const std::size_t rounds = 1'000'000;
    int passed = 0;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t k = 1 + uniform_index(rng, 8);
        const auto mu = uniform_means(rng, k);
        const double tau = uniform01(rng) / static_cast<double>(k);
        const std::size_t len = 1 + uniform_index(rng, k);
        auto arms = random_permutation(rng, k);
        arms.resize(len);
        const ObservationList list(arms);
        const double expected = expected_list_reward(list, mu, tau);

        // exact payoff variance of the list
        double second = 0.0, survive = 1.0;
        for (std::size_t j = 0; j < len; ++j) {
            const double pay = 1.0 - static_cast<double>(j + 1) * tau;
            second += pay * pay * survive * mu[arms[j]];
            survive *= 1.0 - mu[arms[j]];
        }
        const double sigma = std::sqrt(std::max(second - expected * expected, 0.0) / static_cast<double>(rounds));

        Rng sim = make_rng(112, i + 1, Stream::Realization);
        double total = 0.0;
        for (std::size_t r = 0; r < rounds; ++r) {
            for (std::size_t j = 0; j < len; ++j) {
                if (uniform01(sim) < mu[arms[j]]) {
                    total += 1.0 - static_cast<double>(j + 1) * tau;
                    break;
                }
            }
        }
        const double z = sigma > 0 ? std::abs(total / static_cast<double>(rounds) - expected) / sigma : 0.0;
        worst = std::max(worst, z);
        if (z <= 4.0) ++passed;
    }
    return {passed >= 99, std::to_string(passed) + "/100 within 4 sigma (need >= 99), max |z| " + fmt("%.2f", worst)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "descending list equals single-player brute force", descending_matches_brute_force},
        {2, "adjacent out-of-order swaps never decrease reward", adjacent_swaps_never_hurt},
        {3, "greedy-reverse optimal when K <= 2M", reverse_optimal_for_two_steps},
        {4, "greedy statistics for M=3, K=9", greedy_statistics},
        {5, "controller never collides", controller_is_collision_free},
        {6, "sublinear regret and bounds", sublinear_regret},
        {7, "single-player table", single_player_table},
        {8, "multi-player table", multi_player_table},
        {9, "mean-range sweep shape", mean_range_shape},
        {10, "distributed absorption", distributed_absorption},
        {11, "steered lists disjoint", adapt_lists_disjoint},
        {12, "Monte Carlo agrees with closed form", monte_carlo_agreement},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        const Verdict v = c.run();
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s  %2d  %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs);
        std::fflush(stdout);
        if (!v.pass) ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
