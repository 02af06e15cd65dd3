#include "vmtrack/frame_select.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "vmtrack/error.hpp"
#include "vmtrack/rng.hpp"

namespace vmtrack {

FrameFeature extract_feature(const Image& image, int frame_index, int side) {
  if (image.width() < 1 || image.height() < 1) throw ValidationError("cannot extract features from an empty image");
  FrameFeature out{frame_index, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(side) * side)};
  for (int by = 0; by < side; ++by) {
    const int y0 = by * image.height() / side;
    const int y1 = std::max(y0 + 1, (by + 1) * image.height() / side);
    for (int bx = 0; bx < side; ++bx) {
      const int x0 = bx * image.width() / side;
      const int x1 = std::max(x0 + 1, (bx + 1) * image.width() / side);
      double sum = 0.0;
      int n = 0;
      for (int y = y0; y < y1 && y < image.height(); ++y) {
        for (int x = x0; x < x1 && x < image.width(); ++x) {
          const Rgb c = image.at(x, y);
          sum += 0.299 * c.r + 0.587 * c.g + 0.114 * c.b;
          ++n;
        }
      }
      out.feature(by * side + bx) = n > 0 ? sum / (255.0 * n) : 0.0;
    }
  }
  return out;
}

namespace {

double assign_points(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centroids, std::vector<int>& labels) {
  double objective = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Eigen::Index best = 0;
    const double d = (centroids.rowwise() - x.row(i)).rowwise().squaredNorm().minCoeff(&best);
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
    objective += d;
  }
  return objective;
}

}  // namespace

KMeansResult kmeans_select(std::span<const FrameFeature> features, int k, std::uint64_t seed, int max_iterations) {
  const auto n = static_cast<Eigen::Index>(features.size());
  if (k < 1) throw ValidationError("k must be >= 1");
  if (k > n) {
    throw ValidationError("k = " + std::to_string(k) + " exceeds the number of frames (" + std::to_string(n) + ")");
  }
  const Eigen::Index dim = features.front().feature.size();
  Eigen::MatrixXd x(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (features[static_cast<std::size_t>(i)].feature.size() != dim) {
      throw ValidationError("all frame features must share one dimension");
    }
    x.row(i) = features[static_cast<std::size_t>(i)].feature.transpose();
  }

  // k-means++ seeding.
  Rng rng(seed, 0x6b6d65616e73ULL);
  Eigen::MatrixXd centroids(k, dim);
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  auto first = static_cast<Eigen::Index>(rng.uniform_int(0, n - 1));
  centroids.row(0) = x.row(first);
  chosen[static_cast<std::size_t>(first)] = true;
  Eigen::VectorXd d2 = (x.rowwise() - x.row(first)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index pick = -1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2(i);
        if (d2(i) > 0.0 && acc > target) {
          pick = i;
          break;
        }
      }
      if (pick < 0) {
        for (Eigen::Index i = n - 1; i >= 0; --i)
          if (d2(i) > 0.0) {
            pick = i;
            break;
          }
      }
    } else {
      for (Eigen::Index i = 0; i < n; ++i)
        if (!chosen[static_cast<std::size_t>(i)]) {
          pick = i;
          break;
        }
    }
    centroids.row(c) = x.row(pick);
    chosen[static_cast<std::size_t>(pick)] = true;
    d2 = d2.cwiseMin((x.rowwise() - x.row(pick)).rowwise().squaredNorm());
  }

  KMeansResult result;
  result.labels.assign(static_cast<std::size_t>(n), 0);
  double objective = assign_points(x, centroids, result.labels);
  result.objective.push_back(objective);
  for (int iter = 0; iter < max_iterations; ++iter) {
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, dim);
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(result.labels[static_cast<std::size_t>(i)]) += x.row(i);
      ++counts[static_cast<std::size_t>(result.labels[static_cast<std::size_t>(i)])];
    }
    Eigen::MatrixXd next = centroids;
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        next.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
        continue;
      }
      // Empty cluster: move it onto the worst-fit point of a cluster that can spare one.
      Eigen::Index worst = -1;
      double worst_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const int l = result.labels[static_cast<std::size_t>(i)];
        if (counts[static_cast<std::size_t>(l)] < 2) continue;
        const double d = (x.row(i) - centroids.row(l)).squaredNorm();
        if (d > worst_d) {
          worst_d = d;
          worst = i;
        }
      }
      if (worst >= 0) {
        --counts[static_cast<std::size_t>(result.labels[static_cast<std::size_t>(worst)])];
        result.labels[static_cast<std::size_t>(worst)] = c;
        counts[static_cast<std::size_t>(c)] = 1;
        next.row(c) = x.row(worst);
      }
    }
    centroids = next;
    std::vector<int> labels = result.labels;
    objective = assign_points(x, centroids, labels);
    result.objective.push_back(objective);
    ++result.iterations;
    const bool stable = labels == result.labels;
    result.labels = std::move(labels);
    if (stable) break;
  }
  result.centroids = centroids;

  for (int c = 0; c < k; ++c) {
    Eigen::Index best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (result.labels[static_cast<std::size_t>(i)] != c) continue;
      const double d = (x.row(i) - centroids.row(c)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    if (best >= 0) result.selected.push_back(features[static_cast<std::size_t>(best)].frame_index);
  }
  std::sort(result.selected.begin(), result.selected.end());
  return result;
}

double occlusion_score(std::span<const BBox> boxes) noexcept {
  double worst = 0.0;
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t j = i + 1; j < boxes.size(); ++j) worst = std::max(worst, iou(boxes[i], boxes[j]));
  return worst;
}

std::vector<double> occlusion_scores(const TrackSet& tracks) {
  std::vector<double> scores;
  for (const auto& frame : detections_by_frame(tracks)) {
    std::vector<BBox> boxes;
    for (const Detection& d : frame) boxes.push_back(d.bbox);
    scores.push_back(occlusion_score(boxes));
  }
  return scores;
}

std::vector<int> occlusion_prioritized_select(std::span<const double> scores, int n, int min_gap) {
  if (n < 1) throw ValidationError("selection count must be >= 1");
  if (static_cast<std::size_t>(n) > scores.size()) {
    throw ValidationError("cannot select " + std::to_string(n) + " of " + std::to_string(scores.size()) + " frames");
  }
  if (min_gap < 0) throw ValidationError("min_gap must be >= 0");
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] > scores[b]; });

  std::vector<int> picked;
  std::vector<bool> taken(scores.size(), false);
  for (int idx : order) {
    if (static_cast<int>(picked.size()) == n) break;
    const bool too_close = std::any_of(picked.begin(), picked.end(), [&](int s) { return std::abs(s - idx) < min_gap; });
    if (too_close) continue;
    picked.push_back(idx);
    taken[static_cast<std::size_t>(idx)] = true;
  }
  for (int idx : order) {
    if (static_cast<int>(picked.size()) == n) break;
    if (!taken[static_cast<std::size_t>(idx)]) {
      picked.push_back(idx);
      taken[static_cast<std::size_t>(idx)] = true;
    }
  }
  return picked;
}

}  // namespace vmtrack
