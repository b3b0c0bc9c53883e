#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "depletion/applications.hpp"
#include "depletion/checks.hpp"
#include "depletion/dp.hpp"
#include "depletion/instance.hpp"
#include "depletion/model.hpp"
#include "depletion/simulator.hpp"

namespace depletion {

// JSON forms of instances, tables, reports and traces. Doubles are written in
// shortest round-trip form, so save/load reproduces every bit. Infinite
// budgets are written as the string "inf".

std::string instance_to_json(const Instance& instance, int indent = 2);
Instance instance_from_json(std::string_view text);

/// Reads an instance file; throws ConfigError("instance not found: ...") when absent.
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& instance, const std::filesystem::path& path);

/// Header (fingerprint, capacities, horizon, state indexing) plus values[t][state]
/// and best_activity[t][state] for t < T.
std::string value_table_to_json(const ValueTable& table);
ValueTable value_table_from_json(std::string_view text);

std::string property_report_to_json(const PropertyReport& report);
std::string ratio_report_to_json(const RatioReport& report);
std::string validation_report_to_json(const ValidationReport& report);

/// One compact JSON object (no trailing newline).
std::string episode_trace_to_json(const EpisodeTrace& trace);
std::string eval_summary_to_json(const EvalSummary& summary);

std::string fingerprint_hex(std::uint64_t fingerprint);

// Application parameter files.
QueueingParams queueing_params_from_json(std::string_view text);
BroadcastParams broadcast_params_from_json(std::string_view text);
ProductLineParams product_line_params_from_json(std::string_view text);
AdwordsParams adwords_params_from_json(std::string_view text);
MatroidParams matroid_params_from_json(std::string_view text);
RandomFamilyParams random_family_params_from_json(std::string_view text);

struct SetCoverParams {
  int ground_size = 0;
  std::vector<std::vector<int>> sets;
  int k = 1;
};
SetCoverParams set_cover_params_from_json(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace depletion
