// config.hpp: `key = value` pipeline configuration with [section] headers
//
//   [preprocess]  score_min, nms_iou
//   [association] metric (iou | giou), gate
//   [kalman]      p0, q (10 comma-separated reals), r (7)
//   [tracker]     mode (immortal | baseline), m_hits, a_max
//   [eval]        match_iou
//   [simulate]    seed, num_objects, num_frames, extent, speed_min, speed_max,
//                 turn_rate_min, turn_rate_max, occlusion_prob, occlusion_min,
//                 occlusion_max, pos_sigma, yaw_sigma, size_sigma, dropout,
//                 fp_rate
//
// `section.key = value` is accepted outside any section. '#' starts a comment.
// When association.metric is set and gate is not, the gate takes the metric's
// default (0.1 for iou, -0.5 for giou).

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "immortal/preprocess.hpp"
#include "immortal/simulate.hpp"
#include "immortal/tracker.hpp"

namespace immortal
{

struct PipelineConfig
{
  PreprocessConfig preprocess;
  TrackerConfig tracker;
  double match_iou = 0.5;
  ScenarioConfig scenario;

  void validate() const;
};

/// Throws ParseError naming the line for syntax errors, unknown keys and bad values.
PipelineConfig parse_config(std::istream& in, const std::string& source = "<config>");
PipelineConfig load_config(const std::filesystem::path& path);

/// Sets one `section.key`; throws std::invalid_argument for unknown keys or bad values.
void apply_setting(PipelineConfig& cfg, const std::string& dotted_key, const std::string& value);

/// Keys accepted by `ablate --sweep`.
const std::vector<std::string>& sweep_keys();

/// Applies one sweep value: a_max (also selects baseline mode), m_hits, gate, nms_iou.
void apply_sweep(PipelineConfig& cfg, const std::string& key, double value);

}  // namespace immortal
