#include <gtest/gtest.h>

#include <random>

#include "immortal/errors.hpp"
#include "immortal/metrics.hpp"

using immortal::Box3D;
using immortal::GtBox;
using immortal::TrackBox;

namespace
{

Box3D car(double x, double y = 0.0)
{
  return Box3D(x, y, 0.75, 0.0, 4.0, 2.0, 1.5);
}

// One object moving 1 m/frame over frames 1..10.
std::vector<GtBox> one_object(int frames = 10)
{
  std::vector<GtBox> gt;
  for (int f = 1; f <= frames; ++f) {
    gt.push_back({f, 1, true, car(f)});
  }
  return gt;
}

std::vector<TrackBox> copy_as(const std::vector<GtBox>& gt, auto id_of)
{
  std::vector<TrackBox> hyp;
  for (const auto& g : gt) {
    if (g.visible) {
      hyp.push_back({g.frame, id_of(g), 0.9, g.box});
    }
  }
  return hyp;
}

// Two objects 20 m apart; the hypothesis ids swap at frame 6.
std::vector<GtBox> two_objects()
{
  std::vector<GtBox> gt;
  for (int f = 1; f <= 10; ++f) {
    gt.push_back({f, 1, true, car(f, 0)});
    gt.push_back({f, 2, true, car(f, 20)});
  }
  return gt;
}

}  // namespace

TEST(ClearMotTest, IdentityScoresOne)
{
  const auto gt = one_object();
  const auto r = immortal::clear_mot(gt, copy_as(gt, [](const GtBox& g) { return g.object_id; }));
  EXPECT_EQ(r.num_gt, 10u);
  EXPECT_EQ(r.fp, 0u);
  EXPECT_EQ(r.miss, 0u);
  EXPECT_EQ(r.mismatch, 0u);
  EXPECT_EQ(r.mota, 1.0);
}

TEST(ClearMotTest, SplitIdIsOneEarlyTermination)
{
  const auto gt = one_object();
  const auto r = immortal::clear_mot(gt, copy_as(gt, [](const GtBox& g) { return g.frame <= 5 ? 7 : 8; }));
  EXPECT_EQ(r.mismatch, 1u);
  EXPECT_EQ(r.miss, 0u);
  EXPECT_EQ(r.fp, 0u);
  EXPECT_EQ(r.mota, 0.9);
  EXPECT_EQ(r.mismatch_pct, 0.1);
  EXPECT_EQ(r.ids_early_termination, 1u);
  EXPECT_EQ(r.ids_wrong_association, 0u);
  ASSERT_EQ(r.events.size(), 1u);
  EXPECT_EQ(r.events[0].frame, 6);
  EXPECT_EQ(r.events[0].from, 7);
  EXPECT_EQ(r.events[0].to, 8);
}

TEST(ClearMotTest, EmptyHypothesisMissesEverything)
{
  const auto r = immortal::clear_mot(one_object(), {});
  EXPECT_EQ(r.miss, 10u);
  EXPECT_EQ(r.miss_pct, 1.0);
  EXPECT_EQ(r.mota, 0.0);
}

TEST(ClearMotTest, IdSwapIsTwoWrongAssociations)
{
  const auto gt = two_objects();
  const auto hyp = copy_as(gt, [](const GtBox& g) { return g.frame <= 5 ? g.object_id : 3 - g.object_id; });
  const auto r = immortal::clear_mot(gt, hyp);
  EXPECT_EQ(r.mismatch, 2u);
  EXPECT_EQ(r.ids_early_termination, 0u);
  EXPECT_EQ(r.ids_wrong_association, 2u);
  EXPECT_EQ(r.mota, 1.0 - 2.0 / 20.0);
}

TEST(ClearMotTest, CorrespondencePersistsAcrossInvisibleGap)
{
  auto gt = one_object(20);
  for (auto& g : gt) {
    g.visible = g.frame < 6 || g.frame > 15;
  }
  // Same id after the gap: no mismatch, and the invisible frames are not scored.
  const auto same = immortal::clear_mot(gt, copy_as(gt, [](const GtBox&) { return 4; }));
  EXPECT_EQ(same.num_gt, 10u);
  EXPECT_EQ(same.mismatch, 0u);
  EXPECT_EQ(same.mota, 1.0);
  // A fresh id after the gap is one early termination.
  const auto fresh = immortal::clear_mot(gt, copy_as(gt, [](const GtBox& g) { return g.frame < 10 ? 4 : 5; }));
  EXPECT_EQ(fresh.mismatch, 1u);
  EXPECT_EQ(fresh.ids_early_termination, 1u);
}

TEST(ClearMotTest, OutputOnInvisibleObjectIsFalsePositive)
{
  std::vector<GtBox> gt = {{1, 1, true, car(0)}, {2, 1, false, car(1)}};
  const std::vector<TrackBox> hyp = {{1, 1, 0.9, car(0)}, {2, 1, 0.9, car(1)}};
  const auto r = immortal::clear_mot(gt, hyp);
  EXPECT_EQ(r.num_gt, 1u);
  EXPECT_EQ(r.fp, 1u);
  EXPECT_EQ(r.mota, 0.0);
}

TEST(ClearMotTest, ValidCorrespondenceBeatsBetterOverlap)
{
  const std::vector<GtBox> gt = {{1, 1, true, car(0)}, {2, 1, true, car(0)}};
  // In frame 2 id 2 overlaps perfectly but id 1 still clears the threshold.
  const std::vector<TrackBox> hyp = {{1, 1, 0.9, car(0.2)}, {2, 1, 0.9, car(0.3)}, {2, 2, 0.9, car(0)}};
  const auto r = immortal::clear_mot(gt, hyp, 0.5);
  EXPECT_EQ(r.mismatch, 0u);
  EXPECT_EQ(r.fp, 1u);
  EXPECT_EQ(r.matches, 2u);
}

TEST(ClearMotTest, MatchThresholdIsInclusive)
{
  // Offset 4/3 m along a 4 m car gives IoU exactly 0.5 in exact arithmetic.
  const std::vector<GtBox> gt = {{1, 1, true, car(0)}};
  const Box3D shifted = car(4.0 / 3.0);
  const double iou = immortal::iou3d(gt[0].box, shifted);
  EXPECT_NEAR(iou, 0.5, 1e-12);
  EXPECT_EQ(immortal::clear_mot(gt, {{1, 1, 0.9, shifted}}, iou).matches, 1u);
  EXPECT_EQ(immortal::clear_mot(gt, {{1, 1, 0.9, shifted}}, std::nextafter(iou, 1.0)).matches, 0u);
}

TEST(ClearMotTest, MotaIsNotClamped)
{
  const std::vector<GtBox> gt = {{1, 1, true, car(0)}};
  const std::vector<TrackBox> hyp = {{1, 1, 0.9, car(30)}, {1, 2, 0.9, car(60)}};
  const auto r = immortal::clear_mot(gt, hyp);
  EXPECT_EQ(r.mota, -2.0);
}

TEST(ClearMotTest, RejectsInconsistentInput)
{
  const auto gt = one_object();
  EXPECT_THROW(immortal::clear_mot(gt, {{11, 1, 0.9, car(11)}}), immortal::ConsistencyError);
  EXPECT_THROW(immortal::clear_mot(gt, {{2, 1, 0.9, car(2)}, {2, 1, 0.8, car(9)}}), immortal::ConsistencyError);
  auto dup = gt;
  dup.push_back(gt[0]);
  EXPECT_THROW(immortal::clear_mot(dup, {}), immortal::ConsistencyError);
  EXPECT_THROW(immortal::clear_mot({}, {{1, 1, 0.9, car(0)}}), immortal::ConsistencyError);
  EXPECT_EQ(immortal::clear_mot({}, {}).num_gt, 0u);
}

TEST(ClassifyIdsTest, EarlierOwnershipByAnotherObject)
{
  using immortal::Correspondence;
  using immortal::IdsKind;
  const std::vector<Correspondence> history = {{1, 1, 10}, {2, 2, 10}, {3, 1, 11}};
  // Id 10 once belonged to object 2, so object 1 taking it is a wrong association.
  EXPECT_EQ(immortal::classify_mismatch(history, {4, 1, 11, 10}), IdsKind::WrongAssociation);
  // Object 2 taking the fresh id 12 is an early termination.
  EXPECT_EQ(immortal::classify_mismatch(history, {4, 2, 10, 12}), IdsKind::EarlyTermination);
  // Ownership in the same or a later frame does not count.
  EXPECT_EQ(immortal::classify_mismatch(history, {2, 1, 10, 11}), IdsKind::EarlyTermination);
  const auto split = immortal::classify_ids(history, {{4, 1, 11, 10}, {4, 2, 10, 12}});
  EXPECT_EQ(split.early_termination, 1u);
  EXPECT_EQ(split.wrong_association, 1u);
  const auto none = immortal::classify_ids(history, {});
  EXPECT_EQ(none.early_termination + none.wrong_association, 0u);
}

TEST(ClearMotProperties, CountsPartitionAndIdRelabelingInvariance)
{
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> jitter(-0.6, 0.6);
  std::bernoulli_distribution drop(0.15), switch_id(0.05), clutter(0.2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<GtBox> gt;
    std::vector<TrackBox> hyp;
    std::vector<immortal::TrackId> current = {1, 2, 3, 4, 5};
    immortal::TrackId next = 6;
    for (int f = 0; f < 40; ++f) {
      for (int k = 0; k < 5; ++k) {
        const Box3D box = car(f * 0.9, 6.0 * k);
        gt.push_back({f, k + 1, !drop(rng), box});
        if (switch_id(rng)) {
          current[static_cast<std::size_t>(k)] = next++;
        }
        if (!drop(rng)) {
          hyp.push_back({f, current[static_cast<std::size_t>(k)], 0.8, car(f * 0.9 + jitter(rng), 6.0 * k + jitter(rng))});
        }
      }
      if (clutter(rng)) {
        hyp.push_back({f, next++, 0.5, car(f * 0.9 + 10 * jitter(rng), 6.0 * jitter(rng))});
      }
    }
    const auto r = immortal::clear_mot(gt, hyp);
    EXPECT_EQ(r.fp + r.matches, r.num_hyp);
    EXPECT_EQ(r.miss + r.matches, r.num_gt);
    EXPECT_EQ(r.ids_early_termination + r.ids_wrong_association, r.mismatch);
    EXPECT_DOUBLE_EQ(r.mota, 1.0 - static_cast<double>(r.fp + r.miss + r.mismatch) / static_cast<double>(r.num_gt));

    auto relabeled = hyp;
    for (auto& h : relabeled) {
      h.track_id = 1000 - 3 * h.track_id;
    }
    const auto s = immortal::clear_mot(gt, relabeled);
    EXPECT_EQ(s.fp, r.fp);
    EXPECT_EQ(s.miss, r.miss);
    EXPECT_EQ(s.mismatch, r.mismatch);
    EXPECT_EQ(s.mota, r.mota);
    EXPECT_EQ(s.ids_early_termination, r.ids_early_termination);
    EXPECT_EQ(s.ids_wrong_association, r.ids_wrong_association);
  }
}
