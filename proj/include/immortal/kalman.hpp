// kalman.hpp: constant-velocity 3D Kalman filter over [x, y, z, yaw, l, w, h, vx, vy, vz]

#pragma once

#include <Eigen/Dense>
#include <array>

#include "immortal/geometry.hpp"

namespace immortal
{

constexpr int kStateDim = 10;
constexpr int kObsDim = 7;

using StateVector = Eigen::Matrix<double, kStateDim, 1>;
using StateMatrix = Eigen::Matrix<double, kStateDim, kStateDim>;

/// Diagonal noise magnitudes. Velocities are in meters per frame.
struct KfConfig
{
  std::array<double, kStateDim> p0_diag = {1, 1, 1, 1, 1, 1, 1, 10, 10, 10};
  std::array<double, kStateDim> q_diag = {1, 1, 1, 0.1, 0.01, 0.01, 0.01, 0.1, 0.1, 0.1};
  std::array<double, kObsDim> r_diag = {1, 1, 1, 0.3, 0.1, 0.1, 0.1};

  /// Throws std::invalid_argument unless every entry is finite and positive.
  void validate() const;
};

struct KfState
{
  StateVector mean = StateVector::Zero();
  StateMatrix cov = StateMatrix::Identity();

  /// The first seven components as a box (the tracklet's current estimate).
  Box3D box() const;
  double vx() const { return mean(7); }
  double vy() const { return mean(8); }
  double vz() const { return mean(9); }
};

KfState kf_init(const Box3D& detection, const KfConfig& cfg);

/// One frame of constant-velocity motion: position += velocity, P = F P F' + Q.
KfState kf_predict(const KfState& s, const KfConfig& cfg);

/**
 * @brief Measurement update from an associated detection.
 *
 * The yaw innovation is wrapped into (-pi, pi]; if it still exceeds pi/2 in
 * magnitude the detection heading is flipped by pi first.
 */
KfState kf_update(const KfState& s, const Box3D& detection, const KfConfig& cfg);

/// Unmatched frame: the predicted state is kept as is.
KfState kf_coast(const KfState& s, const KfConfig& cfg);

}  // namespace immortal
