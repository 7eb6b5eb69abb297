// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#include "piou/oracle.hpp"

#include <gtest/gtest.h>

#include "piou/errors.hpp"

namespace piou::oracle {
namespace {

TEST(RasterTest, SimpleOverlaps) {
  EXPECT_DOUBLE_EQ(raster_iou(Box{0, 0, 4, 4}, Box{0, 0, 4, 4}, 64), 1.0);
  EXPECT_DOUBLE_EQ(raster_iou(Box{0, 0, 1, 1}, Box{2, 0, 3, 1}, 60), 0.0);
  // half-overlapping squares: exact IoU 1/3
  EXPECT_NEAR(raster_iou(Box{0, 0, 2, 2}, Box{1, 0, 3, 2}, 1024), 1.0 / 3.0, tolerance(1024));
}

TEST(RasterTest, CenterPointIsExact) {
  const Box b{-3, 5, 17, 12};
  for (int res : {16, 256, 1024}) {
    EXPECT_LE(1.0 - raster_pseudo_iou(b.center(), b, res), 1.0 / res);
  }
}

TEST(RasterTest, ToleranceScalesInversely) {
  EXPECT_DOUBLE_EQ(tolerance(1024), 2e-3);
  EXPECT_DOUBLE_EQ(tolerance(16), 2e-3 * 64);
  EXPECT_THROW(raster_iou(Box{0, 0, 1, 1}, Box{0, 0, 1, 1}, 4), Error);
}

TEST(CheckTest, DeterministicAndPassing) {
  const CheckReport a = run_check(100, 512, 3);
  const CheckReport b = run_check(100, 512, 3);
  EXPECT_TRUE(a.passed);
  EXPECT_EQ(a.max_deviation, b.max_deviation);
  EXPECT_EQ(a.worst_box, b.worst_box);
  EXPECT_LE(a.max_deviation, a.tolerance);
  EXPECT_THROW(run_check(0, 1024, 1), Error);
}

}  // namespace
}  // namespace piou::oracle
