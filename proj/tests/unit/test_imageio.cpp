#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "oracles.hpp"
#include "ppedcrf/imageio.hpp"
#include "ppedcrf/metrics.hpp"
#include "ppedcrf/sanitize.hpp"
#include "ppedcrf/synthetic.hpp"

namespace ppedcrf {
namespace {

using testing::TempDir;

TEST(FrameName, ParsesConvention) {
  const auto n = parse_frame_name("street_cam_frame0012.PNG");
  ASSERT_TRUE(n);
  EXPECT_EQ(n->clip_id, "street_cam");
  EXPECT_EQ(n->number, 12u);
  EXPECT_EQ(n->extension, "png");
  EXPECT_FALSE(parse_frame_name("a_frame.png"));
  EXPECT_FALSE(parse_frame_name("a_frame1.bmp"));
  EXPECT_FALSE(parse_frame_name("a1.png"));
  EXPECT_EQ(parse_frame_name("x_frame2_frame3.jpg")->clip_id, "x_frame2");
  EXPECT_EQ(format_frame_name("a", 3), "a_frame3.png");
}

TEST(LoadSequence, ThreeFramesMiddleOne) {
  TempDir dir("load3");
  for (int i = 1; i <= 3; ++i) write_frame(Frame(4, 3, static_cast<std::uint8_t>(i)), dir.path() / format_frame_name("a", i));
  const Sequence s = load_sequence(dir.path(), "a");
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.middle_index(), 1u);
}

TEST(LoadSequence, NumericNotLexicographicOrder) {
  TempDir dir("numeric");
  write_frame(Frame(4, 3, 10), dir.path() / "a_frame10.png");
  write_frame(Frame(4, 3, 2), dir.path() / "a_frame2.png");
  write_frame(Frame(4, 3, 99), dir.path() / "b_frame1.png");
  const Sequence s = load_sequence(dir.path(), "a");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.frames()[0].at(0, 0, 0), 2);
  EXPECT_EQ(s.frames()[1].at(0, 0, 0), 10);
  EXPECT_EQ(frame_numbers(dir.path(), "a"), (std::vector<std::uint64_t>{2, 10}));
  EXPECT_EQ(discover_clips(dir.path()), (std::vector<std::string>{"a", "b"}));
}

TEST(LoadSequence, Errors) {
  TempDir dir("errors");
  try {
    load_sequence(dir.path(), "a");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::empty_input);
    EXPECT_NE(std::string(e.what()).find("empty sequence"), std::string::npos);
  }
  EXPECT_THROW(load_sequence(dir.path() / "missing", "a"), Error);
  write_frame(Frame(4, 3), dir.path() / "a_frame1.png");
  write_frame(Frame(5, 3), dir.path() / "a_frame2.png");
  EXPECT_THROW(load_sequence(dir.path(), "a"), Error);
  write_frame(Frame(4, 3), dir.path() / "c_frame1.png");
  write_frame(Frame(4, 3), dir.path() / "c_frame01.png");
  EXPECT_THROW(load_sequence(dir.path(), "c"), Error);
  std::ofstream(dir.path() / "d_frame1.png") << "not an image";
  EXPECT_THROW(load_sequence(dir.path(), "d"), Error);
}

TEST(WriteFrame, LosslessRoundTrip) {
  TempDir dir("png");
  std::mt19937_64 gen(5);
  const Frame f = testing::random_frame(gen, 17, 9);
  write_frame(f, dir.path() / "x.png");
  EXPECT_EQ(read_frame(dir.path() / "x.png"), f);
  const Frame c(8, 8, 77);
  write_frame(c, dir.path() / "c.png");
  EXPECT_EQ(read_frame(dir.path() / "c.png"), c);
}

TEST(WriteFrame, JpegIsReadableAndClose) {
  TempDir dir("jpeg");
  const Frame f = synthetic_frame(3, {64, 48});
  write_frame(f, dir.path() / "x.jpg");
  const Frame back = read_frame(dir.path() / "x.jpg");
  ASSERT_TRUE(back.same_shape(f));
  EXPECT_GT(psnr(f, back), 30.0);
}

TEST(WriteFrame, UnwritablePathIsIoError) {
  try {
    write_frame(Frame(2, 2), "/nonexistent_dir_for_test/x.png");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::io);
  }
}

TEST(WriteFrame, SanitizedRoundTripKeepsPsnr) {
  TempDir dir("psnr");
  const Frame f = synthetic_frame(11);
  Rng rng(1234);
  const Frame noisy = global_gaussian(f, 8.0, rng).frame;
  write_frame(noisy, dir.path() / "n.png");
  EXPECT_EQ(psnr(f, read_frame(dir.path() / "n.png")), psnr(f, noisy));
}

TEST(ResizeBilinear, HandComputedUpsample) {
  Frame f(2, 1);
  for (int c = 0; c < 3; ++c) f.at(1, 0, c) = 255;
  const Frame r = resize_bilinear(f, 4, 1);
  const int expected[] = {0, 64, 191, 255};
  for (int x = 0; x < 4; ++x) EXPECT_EQ(r.at(x, 0, 0), expected[x]) << x;
}

TEST(ResizeBilinear, ConstantAndIdentity) {
  const Frame c(13, 7, 100);
  EXPECT_EQ(resize_bilinear(c, 31, 5), Frame(31, 5, 100));
  std::mt19937_64 gen(2);
  const Frame f = testing::random_frame(gen, 12, 8);
  EXPECT_EQ(resize_bilinear(f, 12, 8), f);
}

TEST(ResizeBilinear, UpDownRoundTripIsBounded) {
  const Frame f = synthetic_frame(4, {40, 24});
  const Frame back = resize_bilinear(resize_bilinear(f, 80, 48), 40, 24);
  ASSERT_TRUE(back.same_shape(f));
  EXPECT_LT(mean_abs_difference(f, back), 8.0);
}

TEST(WriteSequence, OneBasedNames) {
  TempDir dir("seq");
  const Sequence s("clip", {Frame(3, 3, 1), Frame(3, 3, 2)});
  write_sequence(s, dir.path());
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "clip_frame1.png"));
  EXPECT_EQ(load_sequence(dir.path(), "clip").frames(), s.frames());
}

}  // namespace
}  // namespace ppedcrf
