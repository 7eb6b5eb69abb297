// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#include "piou/assignment.hpp"

#include <gtest/gtest.h>

#include <array>

#include "oracles.hpp"
#include "piou/errors.hpp"
#include "piou/ingestion.hpp"
#include "piou/random.hpp"

namespace piou {
namespace {

std::vector<PointSample> grid(const PyramidConfig& cfg) { return generate_points(cfg); }

PyramidConfig single_level(int stride, int w, int h) {
  const std::array strides{stride};
  return PyramidConfig::from_strides(strides, w, h);
}

std::vector<GroundTruth> random_scene(Rng& rng, int w, int h, int count) {
  std::vector<GroundTruth> gts;
  for (int k = 0; k < count; ++k) {
    const double bw = rng.uniform(4, w * 0.7);
    const double bh = rng.uniform(4, h * 0.7);
    const double x0 = rng.uniform(-10, w - bw + 10);
    const double y0 = rng.uniform(-10, h - bh + 10);
    gts.push_back({Box{x0, y0, x0 + bw, y0 + bh}, 1, 0});
  }
  return gts;
}

TEST(AssignTest, NoGroundTruths) {
  const PyramidConfig cfg = PyramidConfig::standard(100, 80);
  const Assignment a = assign(grid(cfg), {}, AssignmentRule::pseudo_iou(0.4), cfg);
  const AssignmentStats s = compute_stats(a, {});
  EXPECT_EQ(s.positive, 0u);
  EXPECT_EQ(s.n_pos, 0u);
  EXPECT_EQ(s.negative, s.total_points);
  for (const PointLabel& pl : a.points) {
    EXPECT_EQ(pl.value, 0.0);
    EXPECT_EQ(pl.gt_index, kNoMatch);
  }
}

TEST(AssignTest, CornerThresholdAdmitsEveryInteriorPoint) {
  const PyramidConfig cfg = single_level(8, 160, 160);
  const std::vector<GroundTruth> gts{{Box::from_center(80, 80, 80, 80), 1, 0}};
  const Assignment a = assign(grid(cfg), gts, AssignmentRule::pseudo_iou(1.0 / 7.0), cfg);
  std::size_t inside = 0;
  for (const PointLabel& pl : a.points) {
    const bool in = gts[0].box.contains(pl.sample.image_point);
    inside += in;
    EXPECT_EQ(pl.positive, in);
  }
  EXPECT_EQ(inside, 100u);  // grid columns/rows 44..116
  EXPECT_EQ(compute_stats(a, gts).positive, 100u);
}

TEST(AssignTest, HighThresholdKeepsOnlyCentralPoints) {
  const PyramidConfig cfg = single_level(8, 160, 160);
  const std::vector<GroundTruth> gts{{Box::from_center(80, 80, 80, 80), 1, 0}};
  for (double t : {0.99, 0.8, 0.6}) {
    std::size_t brute = 0;
    for (const PointSample& s : grid(cfg)) {
      const Point& p = s.image_point;
      if (!gts[0].box.contains(p)) continue;
      brute += testing::closed_form_pseudo_iou(p.x - 40, 120 - p.x, p.y - 40, 120 - p.y) >= t;
    }
    const Assignment a = assign(grid(cfg), gts, AssignmentRule::pseudo_iou(t), cfg);
    const AssignmentStats st = compute_stats(a, gts);
    EXPECT_EQ(st.positive, brute) << "T=" << t;
    if (t == 0.99) {
      EXPECT_EQ(st.positive, 0u);
      EXPECT_EQ(st.zero_positive_gt, 1u);
    }
    if (t == 0.8) {
      // the four points at (76|84, 76|84) reach 0.9025/1.0975
      EXPECT_EQ(st.positive, 4u);
      for (const PointLabel& pl : a.points) {
        if (!pl.positive) continue;
        EXPECT_LE(std::abs(pl.sample.image_point.x - 80), 4.0);
        EXPECT_LE(std::abs(pl.sample.image_point.y - 80), 4.0);
      }
    }
  }
}

TEST(AssignTest, SmallBoxAtHighThresholdHasNoPositives) {
  const PyramidConfig cfg = single_level(8, 64, 64);
  const std::vector<GroundTruth> gts{{Box{0, 0, 16, 16}, 1, 0}};
  const std::array thresholds{0.3, 0.7};
  const auto stats = sweep_thresholds(grid(cfg), gts, Metric::kPseudoIou, thresholds, cfg);
  // interior grid points sit at 4 and 12: v = 0.5625 / 1.4375
  EXPECT_EQ(stats[0].positive, 4u);
  EXPECT_EQ(stats[1].positive, 0u);
  EXPECT_EQ(stats[0].zero_positive_gt, 0u);
  EXPECT_EQ(stats[1].zero_positive_gt, 1u);
}

TEST(AssignTest, BaselineEquivalences) {
  Rng rng(101);
  for (int scene = 0; scene < 30; ++scene) {
    const int w = rng.uniform_int(40, 300);
    const int h = rng.uniform_int(40, 300);
    const PyramidConfig cfg = PyramidConfig::standard(w, h);
    const auto gts = random_scene(rng, w, h, rng.uniform_int(1, 6));
    const auto points = grid(cfg);
    const Assignment p = assign(points, gts, AssignmentRule::pseudo_iou(1.0 / 7.0), cfg);
    const Assignment p0 = assign(points, gts, AssignmentRule::pseudo_iou(0.0), cfg);
    const Assignment c = assign(points, gts, AssignmentRule::centerness(0.0), cfg);
    const Assignment s = assign(points, gts, AssignmentRule::scaled_box(1.0), cfg);
    for (std::size_t n = 0; n < points.size(); ++n) {
      bool inside = false;
      bool strictly_inside = false;
      for (const GroundTruth& gt : gts) {
        const auto b = clip_to_image(gt.box, w, h);
        if (!b) continue;
        const Point& q = points[n].image_point;
        inside |= b->contains(q);
        strictly_inside |= q.x > b->x_min && q.x < b->x_max && q.y > b->y_min && q.y < b->y_max;
      }
      ASSERT_EQ(p.points[n].positive, inside);
      ASSERT_EQ(p0.points[n].positive, inside);
      ASSERT_EQ(c.points[n].positive, inside);
      ASSERT_EQ(s.points[n].positive, strictly_inside);
    }
  }
}

TEST(AssignTest, PositiveSetsShrinkWithThreshold) {
  Rng rng(202);
  for (int scene = 0; scene < 20; ++scene) {
    const PyramidConfig cfg = PyramidConfig::standard(256, 192);
    const auto gts = random_scene(rng, 256, 192, 4);
    const auto points = grid(cfg);
    for (Metric metric : {Metric::kPseudoIou, Metric::kCenterness}) {
      Assignment prev = assign(points, gts, {metric, 0.0}, cfg);
      for (double t = 0.1; t <= 1.0; t += 0.1) {
        const Assignment cur = assign(points, gts, {metric, t}, cfg);
        for (std::size_t n = 0; n < points.size(); ++n) {
          if (cur.points[n].positive) {
            ASSERT_TRUE(prev.points[n].positive);
            ASSERT_EQ(cur.points[n].gt_index, prev.points[n].gt_index);
          }
        }
        prev = cur;
      }
    }
  }
}

TEST(AssignTest, OverlapTieBreaks) {
  const PyramidConfig cfg = single_level(8, 64, 64);
  const std::vector<PointSample> points{{3, 0, 0, {16, 16}}, {3, 1, 0, {20, 20}}};
  // nested boxes with a common centre: both give v = 1 at (16, 16)
  const std::vector<GroundTruth> nested{{Box{0, 0, 32, 32}, 1, 0}, {Box{8, 8, 24, 24}, 2, 0}};
  const Assignment a = assign(points, nested, AssignmentRule::pseudo_iou(0.5), cfg);
  EXPECT_EQ(a.points[0].gt_index, 1);
  EXPECT_EQ(a.points[0].value, 1.0);
  // identical boxes: lower index
  const std::vector<GroundTruth> twins{{Box{8, 8, 24, 24}, 1, 0}, {Box{8, 8, 24, 24}, 2, 0}};
  EXPECT_EQ(assign(points, twins, AssignmentRule::pseudo_iou(0.1), cfg).points[1].gt_index, 0);
  // otherwise the higher value wins regardless of size
  const std::vector<GroundTruth> shifted{{Box{8, 8, 24, 24}, 1, 0}, {Box{4, 4, 36, 36}, 2, 0}};
  const Assignment b = assign(points, shifted, AssignmentRule::pseudo_iou(0.1), cfg);
  EXPECT_EQ(b.points[1].gt_index, 1);
  EXPECT_DOUBLE_EQ(b.points[1].value, 1.0);
  // scaled-box: smallest containing box
  const Assignment s = assign(points, shifted, AssignmentRule::scaled_box(1.0), cfg);
  EXPECT_EQ(s.points[0].gt_index, 0);
}

TEST(AssignTest, ClippingAndDropping) {
  const PyramidConfig cfg = single_level(8, 64, 64);
  const std::vector<GroundTruth> gts{{Box{48, 48, 96, 96}, 1, 0},   // clipped to (48,48,64,64)
                                     {Box{100, 100, 120, 130}, 1, 0}}; // outside
  const Assignment a = assign(grid(cfg), gts, AssignmentRule::pseudo_iou(0.0), cfg);
  ASSERT_TRUE(a.clipped_boxes[0].has_value());
  EXPECT_EQ(*a.clipped_boxes[0], (Box{48, 48, 64, 64}));
  EXPECT_FALSE(a.clipped_boxes[1].has_value());
  const AssignmentStats s = compute_stats(a, gts);
  EXPECT_EQ(s.dropped_gt, 1u);
  EXPECT_EQ(s.per_gt_positive[0], 4u);  // (52|60, 52|60)
  EXPECT_EQ(s.per_gt_positive[1], 0u);
  EXPECT_EQ(s.zero_positive_gt, 0u);
  EXPECT_EQ(s.retained_gt(), 1u);
}

TEST(AssignTest, LevelRangesRestrictBoxes) {
  PyramidConfig cfg = PyramidConfig::standard(256, 256);
  cfg.levels[0].regression_range = SizeRange{0, 64};
  cfg.levels[1].regression_range = SizeRange{64, 1e9};
  const std::vector<GroundTruth> gts{{Box{0, 0, 128, 128}, 1, 0}};
  const Assignment a = assign(grid(cfg), gts, AssignmentRule::pseudo_iou(0.0), cfg);
  for (const PointLabel& pl : a.points) {
    if (pl.sample.level_index == 3) EXPECT_FALSE(pl.positive);
  }
  EXPECT_GT(compute_stats(a, gts).positive, 0u);
}

TEST(AssignTest, Errors) {
  const PyramidConfig cfg = single_level(8, 64, 64);
  const std::vector<GroundTruth> gts{{Box{0, 0, 16, 16}, 1, 0}};
  auto code = [&](AssignmentRule rule) {
    try {
      assign(grid(cfg), gts, rule, cfg);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  EXPECT_EQ(code(AssignmentRule::pseudo_iou(1.5)), ErrorCode::kInvalidParameter);
  EXPECT_EQ(code(AssignmentRule::centerness(-0.1)), ErrorCode::kInvalidParameter);
  EXPECT_EQ(code(AssignmentRule::scaled_box(0.0)), ErrorCode::kInvalidParameter);

  const Assignment a = assign(grid(cfg), gts, AssignmentRule::pseudo_iou(0.3), cfg);
  const std::vector<GroundTruth> other{gts[0], gts[0]};
  try {
    compute_stats(a, other);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConsistency);
  }
  const std::vector<GroundTruth> moved{{Box{40, 40, 56, 56}, 1, 0}};
  EXPECT_THROW(compute_stats(a, std::span<const GroundTruth>(moved)), Error);
}

TEST(SweepTest, Errors) {
  const PyramidConfig cfg = single_level(8, 64, 64);
  const auto points = grid(cfg);
  const std::array<double, 0> none{};
  EXPECT_THROW(sweep_thresholds(points, {}, Metric::kPseudoIou, none, cfg), Error);
  const std::array unsorted{0.5, 0.3};
  EXPECT_THROW(sweep_thresholds(points, {}, Metric::kPseudoIou, unsorted, cfg), Error);
  const std::array bad{0.5, 1.3};
  EXPECT_THROW(sweep_thresholds(points, {}, Metric::kCenterness, bad, cfg), Error);
  const std::array ok{0.5};
  EXPECT_THROW(sweep_thresholds(points, {}, Metric::kScaledBox, ok, cfg), Error);
  EXPECT_EQ(sweep_thresholds(points, {}, Metric::kPseudoIou, ok, cfg).size(), 1u);
}

TEST(SweepTest, MatchesIndividualAssignments) {
  Rng rng(303);
  const PyramidConfig cfg = PyramidConfig::standard(320, 240);
  const auto gts = random_scene(rng, 320, 240, 5);
  const auto points = grid(cfg);
  const std::array thresholds{0.1, 0.4, 0.7};
  const auto stats = sweep_thresholds(points, gts, Metric::kPseudoIou, thresholds, cfg);
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    EXPECT_EQ(stats[k],
              compute_stats(assign(points, gts, AssignmentRule::pseudo_iou(thresholds[k]), cfg), gts));
  }
  EXPECT_GE(stats[0].positive, stats[1].positive);
  EXPECT_GE(stats[1].positive, stats[2].positive);
}

TEST(StatsTest, SimpleHistograms) {
  const PyramidConfig cfg = single_level(8, 64, 64);
  const auto points = grid(cfg);
  const std::vector<GroundTruth> gts{{Box{0, 0, 8, 8}, 1, 0}, {Box{32, 32, 40, 40}, 1, 0}};
  const AssignmentStats s = compute_stats(assign(points, gts, AssignmentRule::pseudo_iou(0.5), cfg), gts);
  EXPECT_EQ(s.per_gt_positive, (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(s.positive + s.negative, s.total_points);
  EXPECT_EQ(s.n_pos, 2u);

  const AssignmentStats none = compute_stats(assign(points, gts, AssignmentRule::pseudo_iou(1.0), cfg), gts);
  EXPECT_EQ(none.n_pos, 2u);  // cell centres coincide with the box centres
  const std::vector<GroundTruth> off{{Box{0, 0, 6, 6}, 1, 0}};
  const AssignmentStats empty =
      compute_stats(assign(points, off, AssignmentRule::pseudo_iou(1.0), cfg), off);
  EXPECT_EQ(empty.n_pos, 0u);
  EXPECT_EQ(empty.zero_positive_gt, off.size());
}

// Counts frozen from tests/scripts/enumerate_assignment.py (exact rational
// arithmetic, independent of this library).
TEST(StatsTest, CocoFixtureGolden) {
  const SceneSet scenes = load_coco(PIOU_TEST_DATA_DIR "/coco_fixture.json");
  const std::vector<std::vector<std::size_t>> expected_04{{12, 97, 33}, {23}, {}};
  const std::vector<std::vector<std::size_t>> expected_07{{1, 17, 6}, {4}, {}};
  const std::vector<std::size_t> expected_points{1606, 863, 257};
  for (std::size_t k = 0; k < scenes.images.size(); ++k) {
    const ImageInfo& img = scenes.images[k];
    const PyramidConfig cfg = PyramidConfig::standard(img.width, img.height);
    const auto points = grid(cfg);
    const auto s04 = compute_stats(assign(points, img.objects, AssignmentRule::pseudo_iou(0.4), cfg),
                                   img.objects);
    const auto s07 = compute_stats(assign(points, img.objects, AssignmentRule::pseudo_iou(0.7), cfg),
                                   img.objects);
    EXPECT_EQ(s04.total_points, expected_points[k]);
    EXPECT_EQ(s04.per_gt_positive, expected_04[k]);
    EXPECT_EQ(s07.per_gt_positive, expected_07[k]);
  }
}

TEST(AssignTest, Deterministic) {
  Rng rng(404);
  const PyramidConfig cfg = PyramidConfig::standard(300, 200);
  const auto gts = random_scene(rng, 300, 200, 6);
  const auto points = grid(cfg);
  EXPECT_EQ(assign(points, gts, AssignmentRule::centerness(0.3), cfg),
            assign(points, gts, AssignmentRule::centerness(0.3), cfg));
}

TEST(MetricTest, Names) {
  for (Metric m : {Metric::kPseudoIou, Metric::kCenterness, Metric::kScaledBox}) {
    EXPECT_EQ(parse_metric(metric_name(m)), m);
  }
  EXPECT_THROW(parse_metric("iou"), Error);
}

}  // namespace
}  // namespace piou
