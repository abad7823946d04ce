#include "obp/environment.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "obp/errors.hpp"

namespace obp {

RewardSource RewardSource::iid(std::vector<double> means) {
    for (double mu : means) {
        if (!(mu >= 0.0 && mu <= 1.0)) throw ParameterError("Bernoulli mean outside [0,1]");
    }
    return RewardSource(IidBernoulli{std::move(means)});
}

RewardSource RewardSource::trace(std::vector<std::vector<std::uint8_t>> rows) {
    if (rows.empty()) throw TraceError("trace has no rows");
    const std::size_t width = rows.front().size();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != width) throw TraceError("ragged trace row " + std::to_string(r));
        for (auto v : rows[r]) {
            if (v > 1) throw TraceError("non-binary trace cell in row " + std::to_string(r));
        }
    }
    return RewardSource(TraceReplay{std::move(rows), 0});
}

std::size_t RewardSource::num_arms() const noexcept {
    if (const auto* iid = std::get_if<IidBernoulli>(&source_)) return iid->means.size();
    return std::get<TraceReplay>(source_).rows.front().size();
}

std::size_t RewardSource::remaining() const noexcept {
    if (const auto* tr = std::get_if<TraceReplay>(&source_)) return tr->rows.size() - tr->cursor;
    return std::numeric_limits<std::size_t>::max();
}

std::vector<double> RewardSource::means() const {
    if (const auto* iid = std::get_if<IidBernoulli>(&source_)) return iid->means;
    const auto& rows = std::get<TraceReplay>(source_).rows;
    std::vector<double> sums(rows.front().size(), 0.0);
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) sums[k] += row[k];
    }
    for (auto& s : sums) s /= static_cast<double>(rows.size());
    return sums;
}

void RewardSource::pad_to(std::size_t arms) {
    if (auto* iid = std::get_if<IidBernoulli>(&source_)) {
        if (iid->means.size() < arms) iid->means.resize(arms, 0.0);
        return;
    }
    for (auto& row : std::get<TraceReplay>(source_).rows) {
        if (row.size() < arms) row.resize(arms, 0);
    }
}

RoundRealization RewardSource::sample(Rng& rng) {
    RoundRealization out;
    if (auto* iid = std::get_if<IidBernoulli>(&source_)) {
        out.available.resize(iid->means.size());
        for (std::size_t k = 0; k < iid->means.size(); ++k) {
            out.available[k] = bernoulli(rng, iid->means[k]) ? 1 : 0;
        }
        return out;
    }
    auto& tr = std::get<TraceReplay>(source_);
    if (tr.cursor >= tr.rows.size()) {
        throw TraceError("trace exhausted after " + std::to_string(tr.rows.size()) + " rounds");
    }
    out.available = tr.rows[tr.cursor++];
    return out;
}

RoundRecord resolve_round(std::span<const ObservationList> lists, const RoundRealization& realization, double cost,
                          CollisionRule rule) {
    const std::size_t arms = realization.num_arms();
    RoundRecord record;
    record.players.resize(lists.size());
    record.collision.assign(arms, 0);
    std::vector<std::size_t> players_on(arms, 0);

    for (std::size_t m = 0; m < lists.size(); ++m) {
        lists[m].validate(arms);
        auto& out = record.players[m];
        for (Arm arm : lists[m]) {
            const bool available = realization[arm];
            out.observed.push_back({arm, available});
            if (available) {
                out.played = arm;
                ++players_on[arm];
                break;
            }
        }
        out.stop_index = out.observed.size();
    }

    for (Arm k = 0; k < arms; ++k) record.collision[k] = players_on[k] >= 2 ? 1 : 0;

    for (auto& out : record.players) {
        if (!out.played) continue;
        const Arm arm = *out.played;
        const double base = 1.0 - static_cast<double>(out.stop_index) * cost;
        if (record.collision[arm]) {
            out.collided = true;
            out.payoff = rule == CollisionRule::ShareEqually ? base / static_cast<double>(players_on[arm]) : 0.0;
        } else {
            out.payoff = base;
        }
        record.total_payoff += out.payoff;
    }
    return record;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace

RewardSource parse_trace(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    std::vector<std::vector<std::uint8_t>> rows;

    auto next_line = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        return true;
    };

    if (!next_line()) throw TraceError("trace file is empty");
    {
        const auto header = split_csv_line(line);
        if (header.size() < 2 || header.front() != "round") {
            throw TraceError("line 1: expected header `round,arm_0,...`");
        }
        width = header.size() - 1;
    }

    while (next_line()) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != width + 1) {
            throw TraceError("line " + std::to_string(line_no) + ": expected " + std::to_string(width + 1) +
                             " cells, found " + std::to_string(cells.size()));
        }
        std::vector<std::uint8_t> row(width);
        for (std::size_t k = 0; k < width; ++k) {
            const auto& c = cells[k + 1];
            if (c == "0") {
                row[k] = 0;
            } else if (c == "1") {
                row[k] = 1;
            } else {
                throw TraceError("line " + std::to_string(line_no) + ": non-binary cell `" + c + "`");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw TraceError("trace has a header but no data rows");
    return RewardSource::trace(std::move(rows));
}

RewardSource load_trace(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TraceError("cannot open trace file " + path.string());
    return parse_trace(in);
}

void write_trace(std::ostream& out, std::span<const std::vector<std::uint8_t>> rows) {
    const std::size_t width = rows.empty() ? 0 : rows.front().size();
    out << "round";
    for (std::size_t k = 0; k < width; ++k) out << ",arm_" << k;
    out << '\n';
    for (std::size_t t = 0; t < rows.size(); ++t) {
        out << t;
        for (auto v : rows[t]) out << ',' << static_cast<int>(v);
        out << '\n';
    }
}

}  // namespace obp
