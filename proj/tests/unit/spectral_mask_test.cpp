#include <gtest/gtest.h>

#include "pslforge/errors.hpp"
#include "pslforge/spectral_mask.hpp"

using namespace pslforge;

TEST(SpectralMask, InclusiveGridHitsBothEndpoints) {
  const auto m = SpectralMask::uniform({{0.2, 0.3}}, 11, 0.5);
  ASSERT_EQ(m.grid_size(), 11);
  EXPECT_DOUBLE_EQ(m.grid().front(), 0.2);
  EXPECT_NEAR(m.grid().back(), 0.3, 1e-15);
  EXPECT_NEAR(m.grid()[5], 0.25, 1e-15);
  for (double c : m.caps()) EXPECT_EQ(c, 0.5);
}

TEST(SpectralMask, HalfOpenGridExcludesRightEndpoint) {
  const auto m = SpectralMask::uniform({{0.2, 0.3}}, 10, 0.5, GridRule::HalfOpen);
  EXPECT_DOUBLE_EQ(m.grid().front(), 0.2);
  EXPECT_NEAR(m.grid().back(), 0.29, 1e-15);
}

TEST(SpectralMask, AllocatesProportionally) {
  const auto counts = allocate_grid_points({{0.0, 0.1}, {0.5, 0.8}}, 10);
  EXPECT_EQ(counts[0] + counts[1], 10);
  EXPECT_EQ(counts[1], 8);
}

TEST(SpectralMask, WidthsAndMembership) {
  const auto m = SpectralMask::uniform({{0.1, 0.2}, {0.6, 0.65}}, 0, 1.0);
  EXPECT_TRUE(m.empty());
  EXPECT_NEAR(m.stop_width(), 0.15, 1e-15);
  EXPECT_NEAR(m.pass_width(), 0.85, 1e-15);
  EXPECT_TRUE(m.in_stopband(0.62));
  EXPECT_FALSE(m.in_stopband(0.4));
}

TEST(SpectralMask, RejectsBadInput) {
  EXPECT_THROW(SpectralMask::uniform({{0.3, 0.2}}, 4, 1.0), InvalidInput);
  EXPECT_THROW(SpectralMask::uniform({{0.1, 0.3}, {0.2, 0.4}}, 4, 1.0), InvalidInput);
  EXPECT_THROW(SpectralMask::uniform({{0.1, 0.3}}, 4, 0.0), InvalidInput);
  EXPECT_THROW(SpectralMask::uniform({}, 4, 1.0), InvalidInput);
  EXPECT_THROW(SpectralMask::with_caps({{0.1, 0.3}}, 3, {1.0, 1.0}), InvalidInput);
}
