#include "vmtrack/hota.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

#include "vmtrack/assignment.hpp"
#include "vmtrack/error.hpp"

namespace vmtrack {

namespace {

Eigen::MatrixXd iou_matrix(std::span<const Detection> gt, std::span<const Detection> pred) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(gt.size()), static_cast<Eigen::Index>(pred.size()));
  for (std::size_t i = 0; i < gt.size(); ++i)
    for (std::size_t j = 0; j < pred.size(); ++j) m(i, j) = iou(gt[i].bbox, pred[j].bbox);
  return m;
}

FrameMatching match_with_table(std::span<const Detection> gt, std::span<const Detection> pred,
                               const Eigen::MatrixXd& ious, double alpha) {
  FrameMatching out;
  out.alpha = alpha;
  // The solver maximizes the number of finite entries first, so negated IoU gives the
  // lexicographic (count, total IoU) optimum.
  Eigen::MatrixXd cost(ious.rows(), ious.cols());
  for (Eigen::Index i = 0; i < ious.rows(); ++i)
    for (Eigen::Index j = 0; j < ious.cols(); ++j)
      cost(i, j) = ious(i, j) >= alpha ? -ious(i, j) : kForbidden<double>;

  const std::vector<int> assignment = solve_assignment(cost);
  std::vector<bool> pred_used(pred.size(), false);
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const int j = assignment[i];
    if (j < 0) {
      out.fn_ids.push_back(gt[i].track_id);
      continue;
    }
    pred_used[static_cast<std::size_t>(j)] = true;
    out.pairs.push_back({gt[i].track_id, pred[static_cast<std::size_t>(j)].track_id, ious(i, j)});
  }
  for (std::size_t j = 0; j < pred.size(); ++j)
    if (!pred_used[j]) out.fp_ids.push_back(pred[j].track_id);
  return out;
}

}  // namespace

std::array<double, kAlphaCount> alpha_grid() noexcept {
  std::array<double, kAlphaCount> grid{};
  for (std::size_t k = 0; k < kAlphaCount; ++k) grid[k] = static_cast<double>(k + 1) / 20.0;
  return grid;
}

FrameMatching match_frame(std::span<const Detection> gt, std::span<const Detection> pred, double alpha) {
  return match_with_table(gt, pred, iou_matrix(gt, pred), alpha);
}

EvalReport compute_hota(const TrackSet& gt, const TrackSet& pred, const EvalOptions& options) {
  if (gt.frame_count != pred.frame_count) {
    throw ValidationError("frame-count mismatch: gt has " + std::to_string(gt.frame_count) + ", pred has " +
                          std::to_string(pred.frame_count));
  }
  validate(gt);
  validate(pred);

  const auto gt_frames = detections_by_frame(gt);
  const auto pred_frames = detections_by_frame(pred);
  std::vector<Eigen::MatrixXd> tables;
  tables.reserve(gt_frames.size());
  for (std::size_t f = 0; f < gt_frames.size(); ++f) tables.push_back(iou_matrix(gt_frames[f], pred_frames[f]));

  std::map<int, int> gt_sizes;
  std::map<int, int> pred_sizes;
  for (const Detection& d : gt.detections) ++gt_sizes[d.track_id];
  for (const Detection& d : pred.detections) ++pred_sizes[d.track_id];
  const int gt_total = static_cast<int>(gt.detections.size());
  const int pred_total = static_cast<int>(pred.detections.size());

  EvalReport report;
  report.sequence = gt.sequence_name;

  double loca_sum = 0.0;
  int loca_n = 0;
  for (double alpha : alpha_grid()) {
    std::map<std::pair<int, int>, int> pair_counts;
    int tp = 0;
    double iou_sum = 0.0;
    for (std::size_t f = 0; f < gt_frames.size(); ++f) {
      const FrameMatching m = match_with_table(gt_frames[f], pred_frames[f], tables[f], alpha);
      for (const auto& p : m.pairs) {
        ++pair_counts[{p.gt_id, p.pred_id}];
        iou_sum += p.iou;
        ++tp;
      }
    }
    AlphaResult r;
    r.alpha = alpha;
    r.tp = tp;
    r.fn = gt_total - tp;
    r.fp = pred_total - tp;
    const int det_den = tp + r.fn + r.fp;
    const double deta = det_den > 0 ? static_cast<double>(tp) / det_den : 0.0;
    double assa = 0.0;
    if (tp > 0) {
      double weighted = 0.0;
      for (const auto& [key, tpa] : pair_counts) {
        const int fna = gt_sizes[key.first] - tpa;
        const int fpa = pred_sizes[key.second] - tpa;
        weighted += static_cast<double>(tpa) * tpa / static_cast<double>(tpa + fna + fpa);
      }
      assa = weighted / tp;
    }
    r.deta = 100.0 * deta;
    r.assa = 100.0 * assa;
    r.hota = 100.0 * std::sqrt(deta * assa);
    r.loca = tp > 0 ? 100.0 * iou_sum / tp : 0.0;
    if (tp > 0) {
      loca_sum += r.loca;
      ++loca_n;
    }
    report.per_alpha.push_back(r);
  }

  const auto mean_of = [&](double AlphaResult::*field) {
    double s = 0.0;
    for (const AlphaResult& r : report.per_alpha) s += r.*field;
    return s / static_cast<double>(report.per_alpha.size());
  };
  report.hota = mean_of(&AlphaResult::hota);
  report.deta = mean_of(&AlphaResult::deta);
  report.assa = mean_of(&AlphaResult::assa);
  report.loca = loca_n > 0 ? loca_sum / loca_n : 0.0;

  // Counts and CLEAR-style switches at a single threshold.
  std::map<int, int> last_match;
  int tp_counts = 0;
  for (std::size_t f = 0; f < gt_frames.size(); ++f) {
    const FrameMatching m = match_with_table(gt_frames[f], pred_frames[f], tables[f], options.alpha_for_counts);
    tp_counts += static_cast<int>(m.pairs.size());
    for (const auto& p : m.pairs) {
      auto it = last_match.find(p.gt_id);
      if (it != last_match.end() && it->second != p.pred_id) ++report.ids;
      last_match[p.gt_id] = p.pred_id;
    }
  }
  report.fn = gt_total - tp_counts;
  report.fp = pred_total - tp_counts;
  return report;
}

MetricSummary summarize(std::span<const double> values, StdKind kind) {
  if (values.empty()) throw ValidationError("cannot summarize an empty sample");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  double var = 0.0;
  if (kind == StdKind::population) {
    var = ss / n;
  } else if (values.size() > 1) {
    var = ss / (n - 1.0);
  }
  return {mean, std::sqrt(var)};
}

AggregateReport aggregate(std::span<const EvalReport> reports, StdKind kind) {
  if (reports.empty()) throw ValidationError("aggregate requires at least one report");
  const auto column = [&](auto getter) {
    std::vector<double> v;
    v.reserve(reports.size());
    for (const EvalReport& r : reports) v.push_back(static_cast<double>(getter(r)));
    return summarize(v, kind);
  };
  AggregateReport out;
  out.sequences = reports.size();
  out.hota = column([](const EvalReport& r) { return r.hota; });
  out.deta = column([](const EvalReport& r) { return r.deta; });
  out.assa = column([](const EvalReport& r) { return r.assa; });
  out.loca = column([](const EvalReport& r) { return r.loca; });
  out.fn = column([](const EvalReport& r) { return r.fn; });
  out.fp = column([](const EvalReport& r) { return r.fp; });
  out.ids = column([](const EvalReport& r) { return r.ids; });
  return out;
}

}  // namespace vmtrack
