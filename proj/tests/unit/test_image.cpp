#include <gtest/gtest.h>

#include "ppedcrf/image.hpp"

namespace ppedcrf {
namespace {

TEST(Frame, StoresInterleavedRgb) {
  Frame f(2, 1);
  f.at(1, 0, 2) = 7;
  EXPECT_EQ(f.data().size(), 6u);
  EXPECT_EQ(f.data()[5], 7);
  EXPECT_EQ(f.pixel_count(), 2u);
}

TEST(Frame, RejectsBadDimensions) {
  EXPECT_THROW(Frame(0, 3), Error);
  EXPECT_THROW(Frame(2, 2, std::vector<std::uint8_t>(5)), Error);
}

TEST(Luma, UsesRec601Weights) {
  Frame f(1, 1);
  f.at(0, 0, 0) = 100;
  f.at(0, 0, 1) = 50;
  f.at(0, 0, 2) = 200;
  EXPECT_DOUBLE_EQ(luma(f)[0], 0.299 * 100 + 0.587 * 50 + 0.114 * 200);
}

TEST(Sequence, MiddleIndexIsFloorHalf) {
  for (std::size_t n : {1u, 2u, 3u, 4u, 7u}) {
    Sequence s("a", std::vector<Frame>(n, Frame(2, 2)));
    EXPECT_EQ(s.middle_index(), n / 2);
  }
}

TEST(Sequence, RejectsEmptyAndMixedShapes) {
  EXPECT_THROW(Sequence("a", {}), Error);
  EXPECT_THROW(Sequence("a", {Frame(2, 2), Frame(3, 2)}), Error);
}

TEST(Sequence, CenteredWindowKeepsMiddleFrame) {
  std::vector<Frame> frames;
  for (int i = 0; i < 7; ++i) frames.emplace_back(2, 2, static_cast<std::uint8_t>(i));
  const Sequence s("a", frames);
  const Sequence w = s.centered_window(5);
  ASSERT_EQ(w.size(), 5u);
  EXPECT_EQ(w.middle(), s.middle());
  EXPECT_EQ(w.frames().front().at(0, 0, 0), 1);
  EXPECT_EQ(w.id(), "a");
  EXPECT_EQ(s.centered_window(99).size(), 7u);
  EXPECT_EQ(s.centered_window(1).middle(), s.middle());
}

TEST(Field, ChecksValueCount) {
  EXPECT_THROW(MaskMap(2, 2, std::vector<double>(3)), Error);
  MaskMap m(3, 2, 0.25);
  m(2, 1) = 1.0;
  EXPECT_EQ(m[5], 1.0);
  EXPECT_TRUE(m.same_shape(Frame(3, 2)));
}

}  // namespace
}  // namespace ppedcrf
