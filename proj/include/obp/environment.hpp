#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "obp/model.hpp"
#include "obp/rng.hpp"

namespace obp {

enum class CollisionRule { ZeroOnCollision, ShareEqually };

// Independent Bernoulli availabilities.
struct IidBernoulli {
    std::vector<double> means;
};

// Row-by-row replay of a recorded availability matrix. Does not wrap.
struct TraceReplay {
    std::vector<std::vector<std::uint8_t>> rows;
    std::size_t cursor = 0;
};

class RewardSource {
public:
    static RewardSource iid(std::vector<double> means);
    static RewardSource trace(std::vector<std::vector<std::uint8_t>> rows);

    std::size_t num_arms() const noexcept;
    bool is_trace() const noexcept { return std::holds_alternative<TraceReplay>(source_); }
    // Rows remaining for a trace; unbounded sources report SIZE_MAX.
    std::size_t remaining() const noexcept;
    // Empirical column means for a trace (over all rows), true means otherwise.
    std::vector<double> means() const;
    // Widens to `arms` columns with always-unavailable (zero-mean) arms.
    void pad_to(std::size_t arms);

    // iid: draws every arm in index order, one uniform per arm.
    // trace: returns the row at the cursor and advances it; TraceError when exhausted.
    RoundRealization sample(Rng& rng);

private:
    explicit RewardSource(std::variant<IidBernoulli, TraceReplay> s) : source_(std::move(s)) {}
    std::variant<IidBernoulli, TraceReplay> source_;
};

// Plays one round: every player walks its list in order, stops at the first
// available arm and plays it. Lists may overlap; only plays collide.
RoundRecord resolve_round(std::span<const ObservationList> lists, const RoundRealization& realization, double cost,
                          CollisionRule rule = CollisionRule::ZeroOnCollision);

// Trace CSV: header `round,arm_0,...,arm_{K-1}`, one row per round, cells 0/1.
RewardSource load_trace(const std::filesystem::path& path);
RewardSource parse_trace(std::istream& in);
void write_trace(std::ostream& out, std::span<const std::vector<std::uint8_t>> rows);

}  // namespace obp
