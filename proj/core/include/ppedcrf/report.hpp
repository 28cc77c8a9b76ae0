#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "ppedcrf/benchmark.hpp"

namespace ppedcrf {

/// Four decimals, or "inf"/"-inf"/"nan".
std::string format_metric(double value);

/// Shortest round-trip decimal for parameters echoed into CSV and JSON.
std::string format_parameter(double value);

std::string results_csv(std::span<const ResultRow> rows, const BenchmarkSpec& spec,
                        bool with_std);
std::string frontier_csv(std::span<const FrontierRow> rows, const BenchmarkSpec& spec);
std::string sweep_csv(std::span<const SweepRow> rows, const BenchmarkSpec& spec);

nlohmann::ordered_json to_json(const HardnessReport& report);
nlohmann::ordered_json to_json(const BenchmarkLayout& layout);
nlohmann::ordered_json to_json(const NoiseConfig& config);
nlohmann::ordered_json to_json(const BenchmarkSpec& spec);
nlohmann::ordered_json to_json(const MatchedPoint& point);

/// Writes `text` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ppedcrf
