// tracker.hpp: tracklet life-cycle engine (predict, associate, update/coast, birth, output)

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "immortal/association.hpp"
#include "immortal/kalman.hpp"
#include "immortal/preprocess.hpp"

namespace immortal
{

using TrackId = std::int64_t;

enum class TrackerMode
{
  Immortal,  ///< tracklets are never removed
  Baseline,  ///< tracklets are removed after a_max consecutive unmatched frames
};

enum class TrackletStatus
{
  Birth,
  Alive,
};

struct Tracklet
{
  TrackId id = 0;
  KfState kf;
  TrackletStatus status = TrackletStatus::Birth;
  int hits = 0;  ///< cumulative associations since birth, counting the birth detection
  int frames_since_match = 0;
  FrameIndex born_frame = 0;
  FrameIndex last_matched_frame = 0;
  double latest_score = 0.0;
};

struct TrackerConfig
{
  TrackerMode mode = TrackerMode::Immortal;
  int m_hits = 1;
  int a_max = 2;
  AssocConfig assoc;
  KfConfig kf;

  void validate() const;
};

struct TrackOutput
{
  TrackId id = 0;
  Box3D box;
  double score = 0.0;
  std::size_t detection_index = 0;  ///< index into the frame's detection list
};

struct FrameResult
{
  FrameIndex frame = 0;
  std::vector<TrackOutput> outputs;  ///< sorted by id
};

struct TrackerStats
{
  std::size_t frames = 0;
  std::size_t tracklets_created = 0;
  std::size_t matches = 0;
  std::size_t terminated = 0;
};

class Tracker
{
public:
  explicit Tracker(TrackerConfig cfg);

  /**
   * @brief Advances every tracklet to `frame` and consumes its detections.
   *
   * Frames must be strictly increasing; a jump of k frames predicts k times.
   * Only Alive tracklets matched (or born) in this frame are emitted.
   * Throws ConsistencyError on a non-increasing frame index.
   */
  FrameResult step(FrameIndex frame, const std::vector<Detection>& dets);

  const std::vector<Tracklet>& tracklets() const { return tracklets_; }
  const TrackerStats& stats() const { return stats_; }
  const TrackerConfig& config() const { return cfg_; }

private:
  TrackerConfig cfg_;
  std::vector<Tracklet> tracklets_;
  std::optional<FrameIndex> last_frame_;
  TrackId next_id_ = 1;
  TrackerStats stats_;
};

/// Runs one tracker over frames first_frame, first_frame + 1, ...
std::vector<FrameResult> run_sequence(const std::vector<std::vector<Detection>>& dets_by_frame,
                                      const TrackerConfig& cfg, FrameIndex first_frame = 0,
                                      TrackerStats* stats = nullptr);

}  // namespace immortal
