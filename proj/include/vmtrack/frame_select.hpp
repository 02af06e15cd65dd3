#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "vmtrack/geometry.hpp"
#include "vmtrack/image.hpp"

namespace vmtrack {

inline constexpr int kFeatureSide = 32;

struct FrameFeature {
  int frame_index = 0;
  Eigen::VectorXd feature;
};

/// Grayscale box-filter downsample to side x side, flattened row-major, values in [0, 1].
[[nodiscard]] FrameFeature extract_feature(const Image& image, int frame_index, int side = kFeatureSide);

struct KMeansResult {
  std::vector<int> selected;           // frame indices, ascending
  std::vector<int> labels;             // cluster per input feature
  Eigen::MatrixXd centroids;           // k x D
  std::vector<double> objective;       // within-cluster sum of squares after each assignment step
  int iterations = 0;
};

/// k-means++ seeding, at most max_iterations Lloyd steps, then the member frame nearest each
/// centroid. Deterministic for a given seed. Throws ValidationError when k exceeds the frame count.
[[nodiscard]] KMeansResult kmeans_select(std::span<const FrameFeature> features, int k, std::uint64_t seed,
                                         int max_iterations = 100);

/// Maximum pairwise IoU; 0 with fewer than two boxes.
[[nodiscard]] double occlusion_score(std::span<const BBox> boxes) noexcept;

/// Per-frame occlusion scores of a track set (index = frame).
[[nodiscard]] std::vector<double> occlusion_scores(const TrackSet& tracks);

/// Greedy highest-score-first selection keeping min_gap frames between picks; if the gap rule
/// runs out of candidates the rest are filled by score alone. Ties go to the lower index.
/// Returned in selection order.
[[nodiscard]] std::vector<int> occlusion_prioritized_select(std::span<const double> scores, int n, int min_gap = 5);

}  // namespace vmtrack
