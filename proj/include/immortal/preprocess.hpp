// preprocess.hpp: score filtering and 3D NMS on per-frame detections

#pragma once

#include <cstdint>
#include <vector>

#include "immortal/geometry.hpp"

namespace immortal
{

using FrameIndex = std::int64_t;

struct Detection
{
  Box3D box;
  double score = 0.0;
  FrameIndex frame = 0;
};

struct PreprocessConfig
{
  double score_min = 0.5;
  double nms_iou = 0.25;

  void validate() const;
};

/// Keeps detections with score >= score_min, in input order.
std::vector<Detection> score_filter(const std::vector<Detection>& dets, double score_min);

/// Greedy NMS: highest score first (ties by input order); a box is suppressed
/// when its IoU with an already kept box is strictly greater than nms_iou.
/// Output is sorted by descending score.
std::vector<Detection> nms3d(const std::vector<Detection>& dets, double nms_iou);

/// score_filter followed by nms3d, for one frame.
std::vector<Detection> preprocess(const std::vector<Detection>& dets, const PreprocessConfig& cfg);

}  // namespace immortal
