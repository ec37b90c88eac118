// simulate.hpp: seeded synthetic scenarios with occlusions and a noisy box detector

#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "immortal/metrics.hpp"

namespace immortal
{

/**
 * @brief Portable random stream: std::mt19937_64 bits with explicit transforms.
 *
 * The standard library distributions are implementation-defined, so the
 * transforms are spelled out here:
 *   uniform01   = (next() >> 11) * 2^-53                       in [0, 1)
 *   uniform(a,b)= a + (b - a) * uniform01
 *   normal      = sqrt(-2 ln(1 - u1)) * cos(2 pi u2), one value per two draws
 *   index(n)    = min(n - 1, floor(uniform01 * n))
 *   poisson(l)  = Knuth multiplication method on uniform01
 */
class ScenarioRng
{
public:
  static constexpr const char* kAlgorithm = "mt19937_64/u53/box-muller-cos/knuth-poisson";

  explicit ScenarioRng(std::uint64_t seed) : engine_(seed) {}

  double uniform01();
  double uniform(double lo, double hi);
  double normal(double mean, double sigma);
  std::uint64_t index(std::uint64_t n);
  std::uint64_t poisson(double lambda);

private:
  std::mt19937_64 engine_;
};

struct ScenarioConfig
{
  std::uint64_t seed = 7;
  int num_objects = 100;
  int num_frames = 200;
  double extent = 300.0;  ///< initial positions and false positives in [-extent, extent]^2
  double speed_min = 0.5;  ///< m/frame
  double speed_max = 1.5;
  double turn_rate_min = 0.0;  ///< rad/frame
  double turn_rate_max = 0.0;

  double occlusion_prob = 1.0;  ///< chance that an object gets one occlusion window
  int occlusion_min = 10;  ///< frames, inclusive
  int occlusion_max = 30;

  double pos_sigma = 0.1;
  double yaw_sigma = 0.02;
  double size_sigma = 0.05;
  double dropout = 0.05;
  double fp_rate = 0.5;  ///< mean false positives per frame (Poisson)
  double score_true_min = 0.6, score_true_max = 1.0;
  double score_fp_min = 0.3, score_fp_max = 0.7;

  void validate() const;
};

struct Scenario
{
  std::vector<GtBox> gt;  ///< frame-major, object id ascending within a frame
  std::vector<Detection> detections;  ///< frame-major
  /// Source object for each detection, 0 for false positives.
  std::vector<ObjectId> detection_source;
};

/// Deterministic in cfg (including the seed).
Scenario generate(const ScenarioConfig& cfg);

struct FrameGap
{
  FrameIndex first = 0;
  FrameIndex last = 0;  ///< inclusive

  FrameIndex length() const { return last - first + 1; }
  bool operator==(const FrameGap&) const = default;
};

/**
 * @brief Per object, the maximal frame intervals where it is in the ground
 * truth (visible or not) but has no detection.
 *
 * A ground-truth box counts as detected when some detection of the same frame
 * overlaps it with IoU >= min_iou.
 */
std::map<ObjectId, std::vector<FrameGap>> occlusion_report(const std::vector<GtBox>& gt,
                                                           const std::vector<Detection>& dets,
                                                           double min_iou = 0.3);

}  // namespace immortal
