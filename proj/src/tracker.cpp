#include "vmtrack/tracker.hpp"

#include <Eigen/Core>
#include <algorithm>

#include "vmtrack/assignment.hpp"

namespace vmtrack {

Association associate(std::span<const BBox> tracks, std::span<const Detection> detections, double iou_min) {
  Association out;
  Eigen::MatrixXd cost(static_cast<Eigen::Index>(tracks.size()), static_cast<Eigen::Index>(detections.size()));
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    for (std::size_t j = 0; j < detections.size(); ++j) {
      const double o = iou(tracks[i], detections[j].bbox);
      cost(i, j) = (o >= iou_min && o > 0.0) ? 1.0 - o : kForbidden<double>;
    }
  }
  const std::vector<int> assignment = solve_assignment(cost);
  std::vector<bool> det_used(detections.size(), false);
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    if (assignment[i] >= 0) {
      out.matches.emplace_back(static_cast<int>(i), assignment[i]);
      det_used[static_cast<std::size_t>(assignment[i])] = true;
    } else {
      out.unmatched_tracks.push_back(static_cast<int>(i));
    }
  }
  for (std::size_t j = 0; j < detections.size(); ++j)
    if (!det_used[j]) out.unmatched_detections.push_back(static_cast<int>(j));
  return out;
}

std::vector<Detection> BaselineTracker::step(int frame_index, std::span<const Detection> detections) {
  for (auto& t : tracks_) t = kalman_predict(t, config_.noise);

  std::vector<BBox> predicted;
  predicted.reserve(tracks_.size());
  for (const auto& t : tracks_) predicted.push_back(t.box());
  const Association assoc = associate(predicted, detections, config_.iou_min);

  std::vector<Detection> emitted;
  for (const auto& [ti, di] : assoc.matches) {
    auto& t = tracks_[static_cast<std::size_t>(ti)];
    const Detection& d = detections[static_cast<std::size_t>(di)];
    t = kalman_update(t, d.bbox, config_.noise);
    ++t.hits;
    t.misses = 0;
    if (t.status == TrackStatus::tentative && t.hits >= config_.confirm_hits) t.status = TrackStatus::confirmed;
    if (t.status == TrackStatus::confirmed) emitted.push_back({frame_index, t.track_id, t.box(), d.confidence});
  }
  for (int ti : assoc.unmatched_tracks) {
    auto& t = tracks_[static_cast<std::size_t>(ti)];
    t.hits = 0;
    ++t.misses;
    if (t.status == TrackStatus::tentative || t.misses > config_.max_misses) t.status = TrackStatus::dead;
  }
  std::erase_if(tracks_, [](const auto& t) { return t.status == TrackStatus::dead; });

  for (int di : assoc.unmatched_detections) {
    const Detection& d = detections[static_cast<std::size_t>(di)];
    if (!d.bbox.valid()) continue;
    auto t = kalman_initiate(d.bbox, next_id_++, config_.noise);
    if (t.hits >= config_.confirm_hits) {
      t.status = TrackStatus::confirmed;
      emitted.push_back({frame_index, t.track_id, t.box(), d.confidence});
    }
    tracks_.push_back(std::move(t));
  }
  std::sort(emitted.begin(), emitted.end(),
            [](const Detection& a, const Detection& b) { return a.track_id < b.track_id; });
  return emitted;
}

TrackSet track(const TrackSet& detections, const TrackerConfig& config) {
  TrackSet out;
  out.sequence_name = detections.sequence_name;
  out.frame_count = detections.frame_count;
  BaselineTracker tracker(config);
  const auto frames = detections_by_frame(detections);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    auto emitted = tracker.step(static_cast<int>(f), frames[f]);
    out.detections.insert(out.detections.end(), emitted.begin(), emitted.end());
  }
  return out;
}

}  // namespace vmtrack
