#include "test_util.hpp"

#include "texseg/features.hpp"

#include <gtest/gtest.h>

using namespace texseg;

namespace {

CoefficientStack two_band_stack(const Image& band)
{
  CoefficientStack s;
  s.bands = {Image(band.width(), band.height(), 1.0), band};
  s.band_meta = {"lowpass", "detail"};
  s.lowpass_index = 0;
  return s;
}

// mirror index with x[-1] = x[0]
std::size_t mirror(long i, std::size_t n)
{
  const long period = 2 * static_cast<long>(n);
  long m = ((i % period) + period) % period;
  return static_cast<std::size_t>(m < static_cast<long>(n) ? m : period - 1 - m);
}

}  // namespace

TEST(LocalMean, ConstantAndIdentity)
{
  const Image c(9, 7, 0.3);
  for (int w : {1, 3, 5, 19}) {
    const Image m = local_mean(c, w);
    for (double v : m.pixels())
      EXPECT_NEAR(v, 0.3, 1e-15);
  }
  const Image r = test::random_image(11, 1);
  EXPECT_EQ(local_mean(r, 1), r);
}

TEST(LocalMean, ImpulseWindow3)
{
  Image img(7, 7);
  img(3, 3) = 1.0;
  const Image m = local_mean(img, 3);
  for (std::size_t y = 0; y < 7; ++y)
    for (std::size_t x = 0; x < 7; ++x) {
      const bool near = x >= 2 && x <= 4 && y >= 2 && y <= 4;
      EXPECT_NEAR(m(x, y), near ? 1.0 / 9.0 : 0.0, 1e-15);
    }
}

TEST(LocalMean, MatchesDirectMirrorSum)
{
  const Image img = test::random_image(10, 2);
  const int w = 7;
  const Image m = local_mean(img, w);
  for (std::size_t y = 0; y < 10; ++y)
    for (std::size_t x = 0; x < 10; ++x) {
      double s = 0;
      for (long dy = -3; dy <= 3; ++dy)
        for (long dx = -3; dx <= 3; ++dx)
          s += img(mirror(static_cast<long>(x) + dx, 10), mirror(static_cast<long>(y) + dy, 10));
      EXPECT_NEAR(m(x, y), s / 49.0, 1e-13);
    }
}

TEST(LocalMean, WindowValidation)
{
  const Image img(8, 8);
  EXPECT_THROW(local_mean(img, 4), std::invalid_argument);
  EXPECT_THROW(local_mean(img, 0), std::invalid_argument);
  EXPECT_THROW(local_mean(img, -3), std::invalid_argument);
}

TEST(Energy, SquaresAndDropsLowpass)
{
  Image band(5, 5);
  band(2, 2) = -0.5;
  const FeatureField f = post_energy(two_band_stack(band), {PostMode::energy, 1, true});
  EXPECT_EQ(f.dim, 1u);
  EXPECT_DOUBLE_EQ(f.at(2 * 5 + 2)[0], 0.25);
  EXPECT_EQ(f.at(0)[0], 0.0);
  const FeatureField all = post_energy(two_band_stack(band), {PostMode::energy, 1, false});
  EXPECT_EQ(all.dim, 2u);
  EXPECT_EQ(all.at(0)[0], 1.0);
}

TEST(Energy, OnlyLowpassIsAnError)
{
  CoefficientStack s;
  s.bands = {Image(8, 8, 1.0)};
  s.band_meta = {"lowpass"};
  EXPECT_THROW(post_energy(s, {PostMode::energy, 3, true}), std::runtime_error);
}

TEST(Entropy, ReferenceValues)
{
  // scaled values 0, 1 and 1/e
  Image band(3, 1);
  band(0, 0) = -2.0;
  band(1, 0) = 2.0;
  band(2, 0) = -2.0 + 4.0 * std::exp(-1.0);
  const FeatureField f = post_entropy(two_band_stack(band), {PostMode::entropy, 1, true});
  EXPECT_EQ(f.at(0)[0], 0.0);
  EXPECT_NEAR(f.at(1)[0], 0.0, 1e-15);
  EXPECT_NEAR(f.at(2)[0], std::exp(-1.0), 1e-15);
  const FeatureField c = post_entropy(two_band_stack(Image(4, 4, 0.7)), {PostMode::entropy, 3, true});
  for (double v : c.data)
    EXPECT_EQ(v, 0.0);
}

TEST(Lbp, ConstantBandIsAllOnes)
{
  const FeatureField f = post_lbp(two_band_stack(Image(6, 6, 0.2)), {PostMode::lbp, 3, true});
  for (double v : f.data)
    EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(Lbp, StrictMaximumIsZero)
{
  Image band(3, 3);
  band(1, 1) = 5.0;
  EXPECT_EQ(lbp_codes(band)(1, 1), 0.0);
}

TEST(Lbp, RasterPatchCode)
{
  Image band(3, 3);
  for (std::size_t i = 0; i < 9; ++i)
    band.pixels()[i] = static_cast<double>(i + 1);
  // neighbours clockwise from the top-left, top-left is the MSB
  const int order[8][2] = {{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}};
  int code = 0;
  for (const auto& o : order)
    code = (code << 1) | (band(o[0], o[1]) >= band(1, 1) ? 1 : 0);
  EXPECT_EQ(code, 0b00011110);
  EXPECT_EQ(lbp_codes(band)(1, 1), static_cast<double>(code));
}

TEST(PostConfig, Validation)
{
  EXPECT_THROW((PostProcessConfig{PostMode::energy, 4, true}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((PostProcessConfig{PostMode::energy, 1, true}.validate()));
  EXPECT_EQ(PostProcessConfig::lbp().window, 35);
  EXPECT_EQ(parse_post_mode("entropy"), PostMode::entropy);
  EXPECT_THROW(parse_post_mode("variance"), std::invalid_argument);
}

TEST(FeatureFile, RoundTrip)
{
  FeatureField f{3, 2, 2, {}};
  for (int i = 0; i < 12; ++i)
    f.data.push_back(0.1 * i - 0.3);
  const auto p = std::filesystem::temp_directory_path() / "texseg_features.bin";
  save_feature_field(f, p);
  EXPECT_EQ(std::filesystem::file_size(p), 12u + 12u * 8u);
  const FeatureField g = load_feature_field(p);
  EXPECT_EQ(g.width, 3u);
  EXPECT_EQ(g.height, 2u);
  EXPECT_EQ(g.dim, 2u);
  EXPECT_EQ(g.data, f.data);
}
