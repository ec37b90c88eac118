#include "immortal/tracker.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "immortal/errors.hpp"

namespace immortal
{

void TrackerConfig::validate() const
{
  if (m_hits < 0) {
    throw std::invalid_argument("TrackerConfig: m_hits must be >= 0");
  }
  if (mode == TrackerMode::Baseline && a_max < 1) {
    throw std::invalid_argument("TrackerConfig: a_max must be >= 1 in baseline mode");
  }
  assoc.validate();
  kf.validate();
}

Tracker::Tracker(TrackerConfig cfg) : cfg_(std::move(cfg))
{
  cfg_.validate();
}

FrameResult Tracker::step(FrameIndex frame, const std::vector<Detection>& dets)
{
  if (last_frame_ && frame <= *last_frame_) {
    throw ConsistencyError("frame " + std::to_string(frame) + " is not after frame " +
                           std::to_string(*last_frame_));
  }
  const FrameIndex advance = last_frame_ ? frame - *last_frame_ : 0;
  last_frame_ = frame;
  ++stats_.frames;

  // Prediction.
  std::vector<Box3D> preds;
  preds.reserve(tracklets_.size());
  for (auto& t : tracklets_) {
    for (FrameIndex k = 0; k < advance; ++k) {
      t.kf = kf_predict(t.kf, cfg_.kf);
    }
    preds.push_back(t.kf.box());
  }

  std::vector<Box3D> det_boxes;
  det_boxes.reserve(dets.size());
  for (const auto& d : dets) {
    det_boxes.push_back(d.box);
  }

  const AssociationResult assoc = associate(det_boxes, preds, cfg_.assoc);

  FrameResult result;
  result.frame = frame;

  for (const auto& [di, ti] : assoc.matched) {
    Tracklet& t = tracklets_[ti];
    t.kf = kf_update(t.kf, dets[di].box, cfg_.kf);
    t.frames_since_match = 0;
    t.last_matched_frame = frame;
    t.latest_score = dets[di].score;
    ++t.hits;
    if (t.status == TrackletStatus::Birth && t.hits >= cfg_.m_hits) {
      t.status = TrackletStatus::Alive;
    }
    if (t.status == TrackletStatus::Alive) {
      result.outputs.push_back({t.id, t.kf.box(), t.latest_score, di});
    }
  }
  stats_.matches += assoc.matched.size();

  for (std::size_t ti : assoc.unmatched_tracklets) {
    Tracklet& t = tracklets_[ti];
    t.kf = kf_coast(t.kf, cfg_.kf);
    t.frames_since_match += static_cast<int>(std::max<FrameIndex>(advance, 1));
  }

  if (cfg_.mode == TrackerMode::Baseline) {
    const auto before = tracklets_.size();
    std::erase_if(tracklets_, [&](const Tracklet& t) { return t.frames_since_match > cfg_.a_max; });
    stats_.terminated += before - tracklets_.size();
  }

  for (std::size_t di : assoc.unmatched_detections) {
    Tracklet t;
    t.id = next_id_++;
    t.kf = kf_init(dets[di].box, cfg_.kf);
    t.hits = 1;
    t.status = t.hits >= cfg_.m_hits ? TrackletStatus::Alive : TrackletStatus::Birth;
    t.born_frame = frame;
    t.last_matched_frame = frame;
    t.latest_score = dets[di].score;
    if (t.status == TrackletStatus::Alive) {
      result.outputs.push_back({t.id, t.kf.box(), t.latest_score, di});
    }
    tracklets_.push_back(std::move(t));
    ++stats_.tracklets_created;
  }

  std::sort(result.outputs.begin(), result.outputs.end(),
            [](const TrackOutput& a, const TrackOutput& b) { return a.id < b.id; });
  return result;
}

std::vector<FrameResult> run_sequence(const std::vector<std::vector<Detection>>& dets_by_frame,
                                      const TrackerConfig& cfg, FrameIndex first_frame,
                                      TrackerStats* stats)
{
  Tracker tracker(cfg);
  std::vector<FrameResult> results;
  results.reserve(dets_by_frame.size());
  for (std::size_t i = 0; i < dets_by_frame.size(); ++i) {
    results.push_back(tracker.step(first_frame + static_cast<FrameIndex>(i), dets_by_frame[i]));
  }
  if (stats != nullptr) {
    *stats = tracker.stats();
  }
  return results;
}

}  // namespace immortal
