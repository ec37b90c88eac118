#include "immortal/kalman.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace immortal
{

namespace
{

using ObsVector = Eigen::Matrix<double, kObsDim, 1>;
using ObsMatrix = Eigen::Matrix<double, kObsDim, kObsDim>;
using GainMatrix = Eigen::Matrix<double, kStateDim, kObsDim>;

template <std::size_t N>
void check_positive(const std::array<double, N>& values, const char* name)
{
  for (double v : values) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw std::invalid_argument(std::string("KfConfig: ") + name + " entries must be finite and > 0");
    }
  }
}

StateMatrix transition()
{
  StateMatrix f = StateMatrix::Identity();
  f(0, 7) = 1.0;
  f(1, 8) = 1.0;
  f(2, 9) = 1.0;
  return f;
}

void symmetrize(StateMatrix& p)
{
  p = 0.5 * (p + p.transpose()).eval();
}

}  // namespace

void KfConfig::validate() const
{
  check_positive(p0_diag, "p0");
  check_positive(q_diag, "q");
  check_positive(r_diag, "r");
}

Box3D KfState::box() const
{
  constexpr double min_extent = 1e-6;
  return Box3D(mean(0), mean(1), mean(2), mean(3), std::max(mean(4), min_extent),
               std::max(mean(5), min_extent), std::max(mean(6), min_extent));
}

KfState kf_init(const Box3D& detection, const KfConfig& cfg)
{
  KfState s;
  const auto obs = detection.as_array();
  for (int i = 0; i < kObsDim; ++i) {
    s.mean(i) = obs[i];
  }
  s.cov = StateMatrix::Zero();
  for (int i = 0; i < kStateDim; ++i) {
    s.cov(i, i) = cfg.p0_diag[i];
  }
  return s;
}

KfState kf_predict(const KfState& s, const KfConfig& cfg)
{
  static const StateMatrix f = transition();
  KfState out;
  out.mean = f * s.mean;
  out.mean(3) = normalize_angle(out.mean(3));
  out.cov = f * s.cov * f.transpose();
  for (int i = 0; i < kStateDim; ++i) {
    out.cov(i, i) += cfg.q_diag[i];
  }
  symmetrize(out.cov);
  return out;
}

KfState kf_update(const KfState& s, const Box3D& detection, const KfConfig& cfg)
{
  const auto obs = detection.as_array();

  ObsVector innovation;
  for (int i = 0; i < kObsDim; ++i) {
    innovation(i) = obs[i] - s.mean(i);
  }
  // Heading ambiguity: a detector may report the box turned around.
  double dyaw = normalize_angle(obs[3] - s.mean(3));
  if (std::abs(dyaw) > 0.5 * std::numbers::pi) {
    dyaw = normalize_angle(obs[3] + std::numbers::pi - s.mean(3));
  }
  innovation(3) = dyaw;

  // H selects the first seven components, so H P H' and P H' are blocks of P.
  ObsMatrix innov_cov = s.cov.topLeftCorner<kObsDim, kObsDim>();
  for (int i = 0; i < kObsDim; ++i) {
    innov_cov(i, i) += cfg.r_diag[i];
  }
  const GainMatrix pht = s.cov.leftCols<kObsDim>();
  const GainMatrix gain = innov_cov.ldlt().solve(pht.transpose()).transpose();

  KfState out;
  out.mean = s.mean + gain * innovation;
  out.mean(3) = normalize_angle(out.mean(3));

  // Joseph form keeps P positive definite under rounding.
  StateMatrix i_kh = StateMatrix::Identity();
  i_kh.leftCols<kObsDim>() -= gain;
  ObsMatrix r = ObsMatrix::Zero();
  for (int i = 0; i < kObsDim; ++i) {
    r(i, i) = cfg.r_diag[i];
  }
  out.cov = i_kh * s.cov * i_kh.transpose() + gain * r * gain.transpose();
  symmetrize(out.cov);
  return out;
}

KfState kf_coast(const KfState& s, const KfConfig& /*cfg*/)
{
  return s;
}

}  // namespace immortal
