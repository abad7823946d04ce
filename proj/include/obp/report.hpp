#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "obp/harness.hpp"

namespace obp {

// Config files are JSON objects whose keys mirror ExperimentConfig field names.
// Unknown keys are rejected (ConfigError).
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& doc, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path);

// Build and toolchain identity; contains nothing host- or time-dependent.
nlohmann::json environment_fingerprint();

// `t,mean_cumulative_reward,mean_cumulative_regret,mean_cumulative_collisions,bound`
void write_series_csv(std::ostream& out, const SeriesOutput& series);
nlohmann::json summary_json(const ExperimentConfig& config, const SeriesOutput& series);

void write_sweep_csv(std::ostream& out, const std::string& axis_name, std::span<const SweepRow> rows);
nlohmann::json sweep_json(const ExperimentConfig& config, const std::string& axis_name,
                          std::span<const SweepRow> rows);

nlohmann::json oracle_report_json(const OracleCheckSpec& spec, const OracleCheckReport& report);

}  // namespace obp
