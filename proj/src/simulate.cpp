#include "immortal/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace immortal
{

double ScenarioRng::uniform01()
{
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double ScenarioRng::uniform(double lo, double hi)
{
  return lo + (hi - lo) * uniform01();
}

double ScenarioRng::normal(double mean, double sigma)
{
  const double u1 = uniform01();
  const double u2 = uniform01();
  return mean + sigma * std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t ScenarioRng::index(std::uint64_t n)
{
  if (n == 0) {
    return 0;
  }
  const auto i = static_cast<std::uint64_t>(uniform01() * static_cast<double>(n));
  return std::min(i, n - 1);
}

std::uint64_t ScenarioRng::poisson(double lambda)
{
  if (lambda <= 0.0) {
    return 0;
  }
  const double limit = std::exp(-lambda);
  std::uint64_t k = 0;
  double p = uniform01();
  while (p > limit) {
    ++k;
    p *= uniform01();
  }
  return k;
}

void ScenarioConfig::validate() const
{
  auto prob = [](double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; };
  if (num_objects < 0 || num_frames < 0) {
    throw std::invalid_argument("ScenarioConfig: counts must be >= 0");
  }
  if (!prob(occlusion_prob) || !prob(dropout)) {
    throw std::invalid_argument("ScenarioConfig: probabilities must lie in [0, 1]");
  }
  if (occlusion_min < 1 || occlusion_max < occlusion_min) {
    throw std::invalid_argument("ScenarioConfig: occlusion durations need 1 <= min <= max");
  }
  if (!(extent > 0.0) || speed_min < 0.0 || speed_max < speed_min || turn_rate_max < turn_rate_min) {
    throw std::invalid_argument("ScenarioConfig: bad extent, speed or turn-rate range");
  }
  if (pos_sigma < 0.0 || yaw_sigma < 0.0 || size_sigma < 0.0 || fp_rate < 0.0) {
    throw std::invalid_argument("ScenarioConfig: noise levels and fp_rate must be >= 0");
  }
  if (score_true_max < score_true_min || score_fp_max < score_fp_min || score_true_min < 0.0 ||
      score_true_max > 1.0 || score_fp_min < 0.0 || score_fp_max > 1.0) {
    throw std::invalid_argument("ScenarioConfig: score ranges must lie in [0, 1]");
  }
}

namespace
{

struct ObjectPlan
{
  double x, y, heading, speed, turn;
  double l, w, h;
  FrameIndex occl_first = -1;  ///< -1: never occluded
  FrameIndex occl_last = -1;
};

constexpr double kMinSize = 0.1;

// Vehicle-like extents.
Box3D random_vehicle(ScenarioRng& rng, double x, double y, double yaw)
{
  const double l = rng.uniform(3.5, 5.5);
  const double w = rng.uniform(1.6, 2.2);
  const double h = rng.uniform(1.4, 1.8);
  return Box3D(x, y, 0.5 * h, yaw, l, w, h);
}

}  // namespace

Scenario generate(const ScenarioConfig& cfg)
{
  cfg.validate();
  ScenarioRng rng(cfg.seed);
  Scenario out;

  std::vector<ObjectPlan> plans;
  plans.reserve(static_cast<std::size_t>(cfg.num_objects));
  for (int i = 0; i < cfg.num_objects; ++i) {
    ObjectPlan p{};
    p.x = rng.uniform(-cfg.extent, cfg.extent);
    p.y = rng.uniform(-cfg.extent, cfg.extent);
    p.heading = rng.uniform(-std::numbers::pi, std::numbers::pi);
    p.speed = rng.uniform(cfg.speed_min, cfg.speed_max);
    p.turn = rng.uniform(cfg.turn_rate_min, cfg.turn_rate_max);
    const Box3D shape = random_vehicle(rng, 0.0, 0.0, 0.0);
    p.l = shape.l();
    p.w = shape.w();
    p.h = shape.h();

    const bool occluded = rng.uniform01() < cfg.occlusion_prob;
    const auto span = static_cast<std::uint64_t>(cfg.occlusion_max - cfg.occlusion_min + 1);
    auto duration = static_cast<FrameIndex>(cfg.occlusion_min) + static_cast<FrameIndex>(rng.index(span));
    // The window sits strictly inside the sequence so the object is seen on both sides.
    duration = std::min<FrameIndex>(duration, cfg.num_frames - 2);
    if (occluded && duration >= 1) {
      const auto starts = static_cast<std::uint64_t>(cfg.num_frames - 1 - duration);
      p.occl_first = 1 + static_cast<FrameIndex>(rng.index(starts));
      p.occl_last = p.occl_first + duration - 1;
    }
    plans.push_back(p);
  }

  for (FrameIndex f = 0; f < cfg.num_frames; ++f) {
    for (int i = 0; i < cfg.num_objects; ++i) {
      ObjectPlan& p = plans[static_cast<std::size_t>(i)];
      const ObjectId oid = i + 1;
      const Box3D truth(p.x, p.y, 0.5 * p.h, p.heading, p.l, p.w, p.h);
      const bool hidden = f >= p.occl_first && f <= p.occl_last;
      out.gt.push_back({f, oid, !hidden, truth});

      if (!hidden && rng.uniform01() >= cfg.dropout) {
        const double x = rng.normal(truth.x(), cfg.pos_sigma);
        const double y = rng.normal(truth.y(), cfg.pos_sigma);
        const double z = rng.normal(truth.z(), cfg.pos_sigma);
        const double yaw = rng.normal(truth.yaw(), cfg.yaw_sigma);
        const double l = std::max(kMinSize, rng.normal(truth.l(), cfg.size_sigma));
        const double w = std::max(kMinSize, rng.normal(truth.w(), cfg.size_sigma));
        const double h = std::max(kMinSize, rng.normal(truth.h(), cfg.size_sigma));
        const double score = rng.uniform(cfg.score_true_min, cfg.score_true_max);
        out.detections.push_back({Box3D(x, y, z, yaw, l, w, h), score, f});
        out.detection_source.push_back(oid);
      }

      p.x += p.speed * std::cos(p.heading);
      p.y += p.speed * std::sin(p.heading);
      p.heading = normalize_angle(p.heading + p.turn);
    }

    const std::uint64_t num_fp = rng.poisson(cfg.fp_rate);
    for (std::uint64_t k = 0; k < num_fp; ++k) {
      const double x = rng.uniform(-cfg.extent, cfg.extent);
      const double y = rng.uniform(-cfg.extent, cfg.extent);
      const double yaw = rng.uniform(-std::numbers::pi, std::numbers::pi);
      const Box3D box = random_vehicle(rng, x, y, yaw);
      const double score = rng.uniform(cfg.score_fp_min, cfg.score_fp_max);
      out.detections.push_back({box, score, f});
      out.detection_source.push_back(0);
    }
  }
  return out;
}

std::map<ObjectId, std::vector<FrameGap>> occlusion_report(const std::vector<GtBox>& gt,
                                                           const std::vector<Detection>& dets,
                                                           double min_iou)
{
  std::map<FrameIndex, std::vector<const Detection*>> by_frame;
  for (const auto& d : dets) {
    by_frame[d.frame].push_back(&d);
  }

  // object -> frames (ascending) with their detected flag
  std::map<ObjectId, std::map<FrameIndex, bool>> seen;
  for (const auto& g : gt) {
    bool detected = false;
    if (const auto it = by_frame.find(g.frame); it != by_frame.end()) {
      detected = std::any_of(it->second.begin(), it->second.end(),
                             [&](const Detection* d) { return iou3d(d->box, g.box) >= min_iou; });
    }
    seen[g.object_id][g.frame] = detected;
  }

  std::map<ObjectId, std::vector<FrameGap>> report;
  for (const auto& [oid, frames] : seen) {
    auto& gaps = report[oid];
    for (const auto& [frame, detected] : frames) {
      if (detected) {
        continue;
      }
      if (!gaps.empty() && gaps.back().last == frame - 1) {
        gaps.back().last = frame;
      } else {
        gaps.push_back({frame, frame});
      }
    }
  }
  return report;
}

}  // namespace immortal
