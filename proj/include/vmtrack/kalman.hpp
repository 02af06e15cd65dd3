#pragma once

// Constant-velocity Kalman filter over box state (cx, cy, w, h, vcx, vcy, vw, vh).
// Process and measurement noise scale with the current box height.

#include <Eigen/Dense>
#include <algorithm>

#include "vmtrack/error.hpp"
#include "vmtrack/geometry.hpp"

namespace vmtrack {

enum class TrackStatus { tentative, confirmed, dead };

template <typename Scalar = double>
struct KalmanNoise {
  Scalar weight_position = Scalar(1) / 20;
  Scalar weight_velocity = Scalar(1) / 160;
  Scalar weight_measurement = Scalar(1) / 20;
};

template <typename Scalar = double>
struct KalmanTrackState {
  using Vector = Eigen::Matrix<Scalar, 8, 1>;
  using Matrix = Eigen::Matrix<Scalar, 8, 8>;

  Vector mean = Vector::Zero();
  Matrix covariance = Matrix::Identity();
  int track_id = 0;
  int hits = 0;
  int misses = 0;
  TrackStatus status = TrackStatus::tentative;

  [[nodiscard]] BBox box() const {
    const double w = static_cast<double>(mean(2));
    const double h = static_cast<double>(mean(3));
    return {static_cast<double>(mean(0)) - w / 2, static_cast<double>(mean(1)) - h / 2, w, h};
  }
};

namespace detail {

template <typename Scalar>
Eigen::Matrix<Scalar, 8, 8> transition() {
  Eigen::Matrix<Scalar, 8, 8> f = Eigen::Matrix<Scalar, 8, 8>::Identity();
  f.template topRightCorner<4, 4>().setIdentity();
  return f;
}

template <typename Scalar>
void symmetrize(Eigen::Matrix<Scalar, 8, 8>& m) {
  m = (m + m.transpose()) * Scalar(0.5);
}

}  // namespace detail

/// Track seeded at a measurement, velocity zero, wide velocity uncertainty.
template <typename Scalar = double>
[[nodiscard]] KalmanTrackState<Scalar> kalman_initiate(const BBox& measurement, int track_id,
                                                       const KalmanNoise<Scalar>& noise = {}) {
  if (!measurement.valid()) throw ValidationError("measurement must have positive width and height");
  KalmanTrackState<Scalar> s;
  s.mean << Scalar(measurement.x + measurement.w / 2), Scalar(measurement.y + measurement.h / 2),
      Scalar(measurement.w), Scalar(measurement.h), 0, 0, 0, 0;
  const Scalar h = Scalar(measurement.h);
  Eigen::Matrix<Scalar, 8, 1> stddev;
  const Scalar p = 2 * noise.weight_position * h;
  const Scalar v = 10 * noise.weight_velocity * h;
  stddev << p, p, p, p, v, v, v, v;
  s.covariance = stddev.array().square().matrix().asDiagonal();
  s.track_id = track_id;
  s.hits = 1;
  return s;
}

/// One-frame constant-velocity propagation; covariance grows by the process noise.
template <typename Scalar = double>
[[nodiscard]] KalmanTrackState<Scalar> kalman_predict(const KalmanTrackState<Scalar>& state,
                                                      const KalmanNoise<Scalar>& noise = {}) {
  const auto f = detail::transition<Scalar>();
  const Scalar h = state.mean(3);
  const Scalar p = noise.weight_position * h;
  const Scalar v = noise.weight_velocity * h;
  Eigen::Matrix<Scalar, 8, 1> q;
  q << p * p, p * p, p * p, p * p, v * v, v * v, v * v, v * v;

  KalmanTrackState<Scalar> out = state;
  out.mean = f * state.mean;
  out.covariance = f * state.covariance * f.transpose();
  out.covariance.diagonal() += q;
  detail::symmetrize(out.covariance);
  return out;
}

/// Linear update on the measured (cx, cy, w, h) components, Joseph form.
template <typename Scalar = double>
[[nodiscard]] KalmanTrackState<Scalar> kalman_update(const KalmanTrackState<Scalar>& state, const BBox& measurement,
                                                     const KalmanNoise<Scalar>& noise = {}) {
  if (!measurement.valid()) throw ValidationError("measurement must have positive width and height");
  using Mat84 = Eigen::Matrix<Scalar, 8, 4>;
  using Mat48 = Eigen::Matrix<Scalar, 4, 8>;
  using Mat44 = Eigen::Matrix<Scalar, 4, 4>;

  Mat48 hmat = Mat48::Zero();
  hmat.template leftCols<4>().setIdentity();
  const Scalar r = noise.weight_measurement * state.mean(3);
  const Mat44 rmat = Mat44::Identity() * (r * r);

  Eigen::Matrix<Scalar, 4, 1> z;
  z << Scalar(measurement.x + measurement.w / 2), Scalar(measurement.y + measurement.h / 2), Scalar(measurement.w),
      Scalar(measurement.h);

  const Mat44 s = hmat * state.covariance * hmat.transpose() + rmat;
  const Mat84 gain = (s.ldlt().solve(hmat * state.covariance)).transpose();
  const Eigen::Matrix<Scalar, 4, 1> innovation = z - hmat * state.mean;

  KalmanTrackState<Scalar> out = state;
  out.mean = state.mean + gain * innovation;
  const Eigen::Matrix<Scalar, 8, 8> ikh = Eigen::Matrix<Scalar, 8, 8>::Identity() - gain * hmat;
  out.covariance = ikh * state.covariance * ikh.transpose() + gain * rmat * gain.transpose();
  detail::symmetrize(out.covariance);
  const Scalar min_extent = Scalar(1e-3);
  out.mean(2) = std::max(out.mean(2), min_extent);
  out.mean(3) = std::max(out.mean(3), min_extent);
  return out;
}

}  // namespace vmtrack
