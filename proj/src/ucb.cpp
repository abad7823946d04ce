#include "obp/ucb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "obp/errors.hpp"

namespace obp {

UcbState::UcbState(std::size_t arms) : counts_(arms, 0), means_(arms, 0.0) {
    if (arms == 0) throw ParameterError("UCB state needs at least one arm");
}

std::uint64_t UcbState::total_observations() const noexcept {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

bool UcbState::initialized() const noexcept {
    return pinned_ || std::all_of(counts_.begin(), counts_.end(), [](auto n) { return n > 0; });
}

void UcbState::observe(Arm arm, bool available) {
    auto& n = counts_.at(arm);
    ++n;
    means_[arm] += ((available ? 1.0 : 0.0) - means_[arm]) / static_cast<double>(n);
}

void UcbState::update(std::span<const Observation> observations) {
    for (const auto& obs : observations) observe(obs.arm, obs.available);
    ++round_;
}

void UcbState::pin(std::vector<double> indices) {
    if (indices.size() != counts_.size()) throw StructureError("pinned index vector has the wrong length");
    pinned_ = std::move(indices);
}

double ucb_value(double mean, std::uint64_t count, double round) {
    if (count == 0) throw StateError("UCB index of an arm with no observations");
    return mean + std::sqrt(2.0 * std::log(round) / static_cast<double>(count));
}

double ucb_index(const UcbState& state, Arm arm) {
    if (arm >= state.num_arms()) throw StructureError("arm index out of range");
    if (state.count(arm) == 0) throw StateError("arm " + std::to_string(arm) + " has never been observed");
    return ucb_value(state.mean(arm), state.count(arm), static_cast<double>(state.round()));
}

std::vector<double> UcbState::indices() const {
    if (pinned_) return *pinned_;
    std::vector<double> out(num_arms());
    for (Arm k = 0; k < out.size(); ++k) out[k] = ucb_index(*this, k);
    return out;
}

std::vector<double> UcbState::estimates() const {
    std::vector<double> out = pinned_ ? *pinned_ : means_;
    for (auto& v : out) v = std::clamp(v, 0.0, 1.0);
    return out;
}

ObservationList select_list(const UcbState& state) {
    return ObservationList(argsort_descending(state.indices()));
}

namespace {

ObservationList identity_list(std::size_t arms) {
    std::vector<Arm> order(arms);
    std::iota(order.begin(), order.end(), Arm{0});
    return ObservationList(std::move(order));
}

}  // namespace

RoundRecord initialize(UcbState& state, const RoundRealization& realization, double cost) {
    const ObservationList list = identity_list(state.num_arms());
    RoundRecord record = resolve_round(std::span(&list, 1), realization, cost);
    std::vector<Observation> all(state.num_arms());
    for (Arm k = 0; k < all.size(); ++k) all[k] = {k, realization[k]};
    state.update(all);
    return record;
}

ObservationList ObpUcb::next_list() const {
    return started_ ? select_list(state_) : identity_list(state_.num_arms());
}

RoundRecord ObpUcb::play(const RoundRealization& realization, double cost) {
    if (!started_) {
        started_ = true;
        return initialize(state_, realization, cost);
    }
    const ObservationList list = select_list(state_);
    RoundRecord record = resolve_round(std::span(&list, 1), realization, cost);
    state_.update(record.players.front().observed);
    return record;
}

}  // namespace obp
