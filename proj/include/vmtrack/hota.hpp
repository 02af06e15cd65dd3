#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "vmtrack/geometry.hpp"

namespace vmtrack {

/// One-to-one matching of a single frame at a fixed IoU threshold.
struct FrameMatching {
  struct Pair {
    int gt_id = 0;
    int pred_id = 0;
    double iou = 0.0;
  };

  double alpha = 0.5;
  std::vector<Pair> pairs;
  std::vector<int> fn_ids;
  std::vector<int> fp_ids;
};

inline constexpr std::size_t kAlphaCount = 19;

/// IoU thresholds 0.05, 0.10, ..., 0.95.
[[nodiscard]] std::array<double, kAlphaCount> alpha_grid() noexcept;

/// Matching that maximizes the number of pairs with IoU >= alpha, then their total IoU.
[[nodiscard]] FrameMatching match_frame(std::span<const Detection> gt, std::span<const Detection> pred,
                                        double alpha);

struct AlphaResult {
  double alpha = 0.0;
  double hota = 0.0;  // percentages
  double deta = 0.0;
  double assa = 0.0;
  double loca = 0.0;
  int tp = 0;
  int fn = 0;
  int fp = 0;
};

struct EvalReport {
  std::string sequence;
  double hota = 0.0;  // percentages in [0, 100]
  double deta = 0.0;
  double assa = 0.0;
  double loca = 0.0;
  int fn = 0;  // counts at EvalOptions::alpha_for_counts
  int fp = 0;
  int ids = 0;
  std::vector<AlphaResult> per_alpha;
};

struct EvalOptions {
  double alpha_for_counts = 0.5;
};

/// HOTA, DetA, AssA and LocA averaged over the alpha grid, plus FN/FP/ID switches at one threshold.
/// Throws ValidationError when the frame counts differ.
[[nodiscard]] EvalReport compute_hota(const TrackSet& gt, const TrackSet& pred, const EvalOptions& options = {});

enum class StdKind { sample, population };

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;
};

struct AggregateReport {
  std::size_t sequences = 0;
  MetricSummary hota, deta, assa, loca, fn, fp, ids;
};

/// Mean and standard deviation of every metric across sequences. Throws on an empty list.
[[nodiscard]] AggregateReport aggregate(std::span<const EvalReport> reports, StdKind kind = StdKind::sample);

/// Mean and standard deviation of a plain sample.
[[nodiscard]] MetricSummary summarize(std::span<const double> values, StdKind kind = StdKind::sample);

}  // namespace vmtrack
