#include "immortal/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_map>

#include "immortal/association.hpp"
#include "immortal/errors.hpp"

namespace immortal
{

namespace
{

struct FrameBoxes
{
  std::vector<const GtBox*> gt;
  std::vector<const TrackBox*> hyp;
};

}  // namespace

EvalReport clear_mot(const std::vector<GtBox>& gt, const std::vector<TrackBox>& hyp, double match_iou)
{
  if (gt.empty() && !hyp.empty()) {
    throw ConsistencyError("hypotheses present but ground truth is empty");
  }
  std::map<FrameIndex, FrameBoxes> frames;
  if (!gt.empty()) {
    const auto [lo, hi] = std::minmax_element(gt.begin(), gt.end(), [](const GtBox& a, const GtBox& b) {
      return a.frame < b.frame;
    });
    for (const auto& h : hyp) {
      if (h.frame < lo->frame || h.frame > hi->frame) {
        throw ConsistencyError("track frame " + std::to_string(h.frame) +
                               " outside ground-truth frame range [" + std::to_string(lo->frame) +
                               ", " + std::to_string(hi->frame) + "]");
      }
    }
  }

  std::set<std::pair<FrameIndex, ObjectId>> seen_gt;
  for (const auto& g : gt) {
    if (!seen_gt.emplace(g.frame, g.object_id).second) {
      throw ConsistencyError("duplicate ground-truth object " + std::to_string(g.object_id) +
                             " in frame " + std::to_string(g.frame));
    }
    if (g.visible) {
      frames[g.frame].gt.push_back(&g);
    }
  }
  std::set<std::pair<FrameIndex, TrackId>> seen_hyp;
  for (const auto& h : hyp) {
    if (!seen_hyp.emplace(h.frame, h.track_id).second) {
      throw ConsistencyError("duplicate track id " + std::to_string(h.track_id) + " in frame " +
                             std::to_string(h.frame));
    }
    frames[h.frame].hyp.push_back(&h);
  }

  EvalReport report;
  std::unordered_map<ObjectId, TrackId> last_match;

  for (const auto& [frame, boxes] : frames) {
    const auto& gts = boxes.gt;
    const auto& hyps = boxes.hyp;
    report.num_gt += gts.size();
    report.num_hyp += hyps.size();

    std::vector<int> gt_to_hyp(gts.size(), -1);
    std::vector<bool> hyp_used(hyps.size(), false);

    // Keep still-valid correspondences.
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
      const auto it = last_match.find(gts[gi]->object_id);
      if (it == last_match.end()) {
        continue;
      }
      for (std::size_t hi = 0; hi < hyps.size(); ++hi) {
        if (!hyp_used[hi] && hyps[hi]->track_id == it->second &&
            iou3d(gts[gi]->box, hyps[hi]->box) >= match_iou) {
          gt_to_hyp[gi] = static_cast<int>(hi);
          hyp_used[hi] = true;
          break;
        }
      }
    }

    // Hungarian on whatever is left.
    std::vector<std::size_t> free_gt, free_hyp;
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
      if (gt_to_hyp[gi] < 0) {
        free_gt.push_back(gi);
      }
    }
    for (std::size_t hi = 0; hi < hyps.size(); ++hi) {
      if (!hyp_used[hi]) {
        free_hyp.push_back(hi);
      }
    }
    if (!free_gt.empty() && !free_hyp.empty()) {
      Eigen::MatrixXd sim(free_gt.size(), free_hyp.size());
      for (std::size_t r = 0; r < free_gt.size(); ++r) {
        for (std::size_t c = 0; c < free_hyp.size(); ++c) {
          sim(r, c) = iou3d(gts[free_gt[r]]->box, hyps[free_hyp[c]]->box);
        }
      }
      const AssociationResult res =
          associate_from_similarity(sim, AssocConfig{SimilarityMetric::IoU3D, match_iou});
      for (const auto& [r, c] : res.matched) {
        gt_to_hyp[free_gt[r]] = static_cast<int>(free_hyp[c]);
        hyp_used[free_hyp[c]] = true;
      }
    }

    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
      if (gt_to_hyp[gi] < 0) {
        ++report.miss;
        continue;
      }
      ++report.matches;
      const ObjectId oid = gts[gi]->object_id;
      const TrackId tid = hyps[static_cast<std::size_t>(gt_to_hyp[gi])]->track_id;
      const auto it = last_match.find(oid);
      if (it != last_match.end() && it->second != tid) {
        report.events.push_back({frame, oid, it->second, tid});
      }
      last_match[oid] = tid;
      report.history.push_back({frame, oid, tid});
    }
    report.fp += static_cast<std::size_t>(std::count(hyp_used.begin(), hyp_used.end(), false));
  }

  report.mismatch = report.events.size();
  const double denom = static_cast<double>(std::max<std::size_t>(report.num_gt, 1));
  report.fp_pct = static_cast<double>(report.fp) / denom;
  report.miss_pct = static_cast<double>(report.miss) / denom;
  report.mismatch_pct = static_cast<double>(report.mismatch) / denom;
  report.mota = 1.0 - static_cast<double>(report.fp + report.miss + report.mismatch) / denom;

  const IdsBreakdown ids = classify_ids(report.history, report.events);
  report.ids_early_termination = ids.early_termination;
  report.ids_wrong_association = ids.wrong_association;
  return report;
}

IdsKind classify_mismatch(const std::vector<Correspondence>& history, const MismatchEvent& event)
{
  const bool owned_elsewhere = std::any_of(history.begin(), history.end(), [&](const Correspondence& c) {
    return c.frame < event.frame && c.track_id == event.to && c.object_id != event.object_id;
  });
  return owned_elsewhere ? IdsKind::WrongAssociation : IdsKind::EarlyTermination;
}

IdsBreakdown classify_ids(const std::vector<Correspondence>& history,
                          const std::vector<MismatchEvent>& events)
{
  // track id -> objects it matched, with the first frame of each.
  std::unordered_map<TrackId, std::map<ObjectId, FrameIndex>> owners;
  for (const auto& c : history) {
    auto [it, inserted] = owners[c.track_id].emplace(c.object_id, c.frame);
    if (!inserted) {
      it->second = std::min(it->second, c.frame);
    }
  }

  IdsBreakdown out;
  for (const auto& e : events) {
    bool wrong = false;
    if (const auto it = owners.find(e.to); it != owners.end()) {
      for (const auto& [oid, first] : it->second) {
        if (oid != e.object_id && first < e.frame) {
          wrong = true;
          break;
        }
      }
    }
    if (wrong) {
      ++out.wrong_association;
    } else {
      ++out.early_termination;
    }
  }
  return out;
}

}  // namespace immortal
