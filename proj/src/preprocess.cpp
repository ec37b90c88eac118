#include "immortal/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace immortal
{

void PreprocessConfig::validate() const
{
  auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  if (!in_unit(score_min) || !in_unit(nms_iou)) {
    throw std::invalid_argument("PreprocessConfig: score_min and nms_iou must lie in [0, 1]");
  }
}

std::vector<Detection> score_filter(const std::vector<Detection>& dets, double score_min)
{
  std::vector<Detection> out;
  std::copy_if(dets.begin(), dets.end(), std::back_inserter(out),
               [&](const Detection& d) { return d.score >= score_min; });
  return out;
}

std::vector<Detection> nms3d(const std::vector<Detection>& dets, double nms_iou)
{
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].score > dets[b].score; });

  std::vector<Detection> kept;
  for (std::size_t idx : order) {
    const Detection& cand = dets[idx];
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
      return iou3d(k.box, cand.box) > nms_iou;
    });
    if (!suppressed) {
      kept.push_back(cand);
    }
  }
  return kept;
}

std::vector<Detection> preprocess(const std::vector<Detection>& dets, const PreprocessConfig& cfg)
{
  return nms3d(score_filter(dets, cfg.score_min), cfg.nms_iou);
}

}  // namespace immortal
