// metrics.hpp: CLEAR-MOT evaluation with an identity-switch taxonomy

#pragma once

#include <cstdint>
#include <vector>

#include "immortal/tracker.hpp"

namespace immortal
{

using ObjectId = std::int64_t;

/// One ground-truth box. Invisible boxes (object present but occluded) are
/// kept in files for bookkeeping and ignored by the evaluator.
struct GtBox
{
  FrameIndex frame = 0;
  ObjectId object_id = 0;
  bool visible = true;
  Box3D box;
};

/// One emitted track box, as stored in a track file.
struct TrackBox
{
  FrameIndex frame = 0;
  TrackId track_id = 0;
  double score = 0.0;
  Box3D box;
};

struct Correspondence
{
  FrameIndex frame = 0;
  ObjectId object_id = 0;
  TrackId track_id = 0;
};

struct MismatchEvent
{
  FrameIndex frame = 0;
  ObjectId object_id = 0;
  TrackId from = 0;
  TrackId to = 0;
};

enum class IdsKind
{
  EarlyTermination,  ///< the object's trajectory broke into a fresh id
  WrongAssociation,  ///< the incoming id had belonged to a different object before
};

struct IdsBreakdown
{
  std::size_t early_termination = 0;
  std::size_t wrong_association = 0;
};

struct EvalReport
{
  std::size_t num_gt = 0;
  std::size_t num_hyp = 0;
  std::size_t matches = 0;
  std::size_t fp = 0;
  std::size_t miss = 0;
  std::size_t mismatch = 0;
  double mota = 0.0;
  double fp_pct = 0.0;
  double miss_pct = 0.0;
  double mismatch_pct = 0.0;
  std::size_t ids_early_termination = 0;
  std::size_t ids_wrong_association = 0;

  std::vector<Correspondence> history;  ///< every per-frame match, in frame order
  std::vector<MismatchEvent> events;
};

/**
 * @brief CLEAR-MOT over visible ground truth.
 *
 * Per frame: correspondences from earlier frames are kept while their IoU is
 * still >= match_iou (a correspondence survives gaps in which the object is
 * unseen); the rest are Hungarian-matched on IoU and gated at match_iou.
 * Unmatched hypotheses are false positives, unmatched ground truth are misses,
 * and a ground-truth object whose matched id differs from its last one counts
 * one mismatch. Ratios are normalized by the visible ground-truth count.
 *
 * Throws ConsistencyError if a hypothesis lies outside the ground-truth frame
 * span or a (frame, id) pair repeats.
 */
EvalReport clear_mot(const std::vector<GtBox>& gt, const std::vector<TrackBox>& hyp,
                     double match_iou = 0.5);

/// Wrong Association if the incoming id was matched to a different object in
/// any earlier frame; Early Termination otherwise.
IdsKind classify_mismatch(const std::vector<Correspondence>& history, const MismatchEvent& event);

IdsBreakdown classify_ids(const std::vector<Correspondence>& history,
                          const std::vector<MismatchEvent>& events);

}  // namespace immortal
