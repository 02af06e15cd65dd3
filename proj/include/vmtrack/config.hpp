#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "vmtrack/bbox_convert.hpp"
#include "vmtrack/hota.hpp"
#include "vmtrack/sim.hpp"
#include "vmtrack/tracker.hpp"
#include "vmtrack/vm_engine.hpp"

namespace vmtrack {

struct SelectConfig {
  int min_gap = 5;
  int count = 10;  // frames to select (k for k-means)
  std::uint64_t seed = 0;
};

struct EvalConfig {
  double alpha_for_counts = 0.5;
  StdKind std_kind = StdKind::sample;
};

/// Every module's settings as one JSON document:
///
///   { "vm": {...}, "convert": {...}, "tracker": {...}, "select": {...},
///     "sim": {...}, "degrade": {...}, "eval": {...} }
///
/// Missing keys keep their defaults; unknown keys and type mismatches are rejected by name.
struct Config {
  VmConfig vm;
  ConvertOptions convert;
  TrackerConfig tracker;
  SelectConfig select;
  ScenarioConfig sim;
  DegradationConfig degrade;
  EvalConfig eval;

  /// Range checks across all sections; throws ValidationError naming the key.
  void validate() const;
};

[[nodiscard]] Config parse_config(std::string_view json_text, const std::string& source = "<config>");
[[nodiscard]] Config read_config(const std::filesystem::path& path);
/// Canonical form: every key present, sorted, two-space indentation, trailing newline.
[[nodiscard]] std::string format_config(const Config& config);

}  // namespace vmtrack
