#include "test_util.hpp"

#include "texseg/partition.hpp"

#include <gtest/gtest.h>
#include <png.h>

#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace texseg;
using texseg::test::pi;

namespace {

std::filesystem::path tmp_path(const std::string& name)
{
  auto dir = std::filesystem::temp_directory_path() / "texseg_test_image";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_rgb_png(const std::filesystem::path& p)
{
  FILE* fp = std::fopen(p.c_str(), "wb");
  ASSERT_NE(fp, nullptr);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_init_io(png, fp);
  png_set_IHDR(png, info, 2, 2, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  unsigned char row[6] = {255, 0, 0, 0, 255, 0};
  png_write_row(png, row);
  png_write_row(png, row);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

}  // namespace

TEST(Image, LoadPgmNormalizes)
{
  const auto p = tmp_path("tiny.pgm");
  {
    std::ofstream os(p, std::ios::binary);
    os << "P5\n2 2\n255\n";
    const unsigned char bytes[4] = {0, 255, 128, 64};
    os.write(reinterpret_cast<const char*>(bytes), 4);
  }
  const Image img = load_image(p);
  ASSERT_EQ(img.width(), 2u);
  ASSERT_EQ(img.height(), 2u);
  EXPECT_EQ(img(0, 0), 0.0);
  EXPECT_EQ(img(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(img(0, 1), 128.0 / 255.0);
  EXPECT_DOUBLE_EQ(img(1, 1), 64.0 / 255.0);
}

TEST(Image, ColorPngRejected)
{
  const auto p = tmp_path("rgb.png");
  write_rgb_png(p);
  EXPECT_THROW(load_image(p), std::runtime_error);
}

TEST(Image, PgmAndPngRoundTrip)
{
  const Image q = quantize_8bit(test::random_image(16, 3));
  for (const char* name : {"rt.pgm", "rt.png"}) {
    save_image(q, tmp_path(name));
    EXPECT_EQ(load_image(tmp_path(name)), q) << name;
  }
}

TEST(Image, LabelMapRoundTrip16Bit)
{
  std::vector<int> labels(64);
  for (std::size_t i = 0; i < labels.size(); ++i)
    labels[i] = static_cast<int>(i % 4) * 300;
  const Partition p(8, 8, labels);
  save_partition(p, tmp_path("labels.pgm"));
  const Partition back = load_partition(tmp_path("labels.pgm"));
  EXPECT_EQ(back, p.compacted());
  EXPECT_EQ(back.region_count(), 4u);
}

TEST(Spectrum, ConstantImageHasOnlyDc)
{
  const std::size_t n = 32;
  const double c = 0.37;
  const Spectrum s = forward_spectrum(Image(n, n, c));
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t u = 0; u < n; ++u) {
      if (u == s.dc_u() && v == s.dc_v())
        EXPECT_NEAR(std::abs(s(u, v)), c * n * n, 1e-9);
      else
        EXPECT_LT(std::abs(s(u, v)), 1e-9);
    }
}

TEST(Spectrum, CosineGivesTwoSymmetricBins)
{
  const std::size_t n = 64;
  Image img(n, n);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x)
      img(x, y) = std::cos(2 * pi * 8 * static_cast<double>(x) / n);
  const Spectrum s = forward_spectrum(img);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t u = 0; u < n; ++u) {
      const bool peak = v == n / 2 && (u == n / 2 + 8 || u == n / 2 - 8);
      if (peak)
        EXPECT_NEAR(std::abs(s(u, v)), n * n / 2.0, 1e-8);
      else
        EXPECT_LT(std::abs(s(u, v)), 1e-8);
    }
  EXPECT_NEAR(bin_frequency(n / 2 + 8, n), 2 * pi * 8 / n, 1e-15);
}

TEST(Spectrum, RoundTrip)
{
  const Image img = test::random_image(48, 11);
  const Image back = inverse_spectrum(forward_spectrum(img));
  for (std::size_t i = 0; i < img.size(); ++i)
    EXPECT_LT(std::abs(img.pixels()[i] - back.pixels()[i]), 1e-10);
}

TEST(Spectrum, Dft1dMatchesDirectSum)
{
  Rng rng(5);
  std::vector<std::complex<double>> x(12);
  for (auto& v : x)
    v = {rng.uniform(), rng.uniform()};
  const auto X = dft_1d(x);
  for (std::size_t k = 0; k < x.size(); ++k) {
    std::complex<double> s = 0;
    for (std::size_t t = 0; t < x.size(); ++t)
      s += x[t] * std::polar(1.0, -2 * pi * static_cast<double>(k * t) / 12.0);
    EXPECT_LT(std::abs(s - X[k]), 1e-12);
  }
  const auto back = dft_1d(X, true);
  for (std::size_t t = 0; t < x.size(); ++t)
    EXPECT_LT(std::abs(back[t] - x[t]), 1e-12);
}

TEST(Polar, RingPeaksAtNearestRadius)
{
  const std::size_t n = 128;
  const double r0 = 0.43 * pi;
  Spectrum s(n, n);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t u = 0; u < n; ++u) {
      const double r = std::hypot(bin_frequency(u, n), bin_frequency(v, n));
      s(u, v) = std::exp(-(r - r0) * (r - r0) / (2 * 0.15 * 0.15));
    }
  const PolarSpectrum p = polar_resample(s);
  // oracle: nearest radius sample to r0
  std::size_t nearest = 0;
  for (std::size_t i = 0; i < p.n_radii; ++i)
    if (std::abs(p.radius_of(i) - r0) < std::abs(p.radius_of(nearest) - r0))
      nearest = i;
  for (std::size_t j = 0; j < p.n_angles; ++j) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < p.n_radii; ++i)
      if (p.at(i, j) > p.at(best, j))
        best = i;
    EXPECT_EQ(best, nearest) << "angle column " << j;
  }
}

TEST(Polar, DcOnlySpectrum)
{
  // radius step of 2 bins: no sample beyond radius 0 reaches the DC bin
  const std::size_t n = 128;
  Spectrum s(n, n);
  s(n / 2, n / 2) = 5.0;
  const PolarSpectrum p = polar_resample(s, 32, 360);
  for (std::size_t j = 0; j < p.n_angles; ++j) {
    EXPECT_DOUBLE_EQ(p.at(0, j), 5.0);
    for (std::size_t i = 1; i < p.n_radii; ++i)
      EXPECT_EQ(p.at(i, j), 0.0);
  }
}

TEST(Polar, HorizontalCosinePeaksAtAngleZero)
{
  const std::size_t n = 128;
  Image img(n, n);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x)
      img(x, y) = std::cos(2 * pi * 20 * static_cast<double>(x) / n);
  const PolarSpectrum p = polar_resample(forward_spectrum(img));
  // radius marginal per angle, then argmax over angle
  std::size_t best = 0;
  double best_v = -1;
  for (std::size_t j = 0; j < p.n_angles; ++j) {
    double m = 0;
    for (std::size_t i = 0; i < p.n_radii; ++i)
      m += p.at(i, j);
    if (m > best_v) {
      best_v = m;
      best = j;
    }
  }
  EXPECT_NEAR(p.angle_of(best), 0.0, 1e-12);
}

TEST(Partition, InventoryAndCompaction)
{
  const Partition p(4, 1, {7, 7, 2, 9});
  EXPECT_EQ(p.region_count(), 3u);
  const Partition c = p.compacted();
  EXPECT_EQ(c.labels(), (std::vector<int>{0, 0, 1, 2}));
  EXPECT_EQ(c.k(), 3);
}

TEST(Image, PipelineImageRequirements)
{
  EXPECT_THROW(require_pipeline_image(Image(4, 4), "t"), std::invalid_argument);
  EXPECT_THROW(require_pipeline_image(Image(16, 8), "t"), std::invalid_argument);
  Image bad(16, 16);
  bad(3, 3) = std::nan("");
  EXPECT_THROW(require_pipeline_image(bad, "t"), std::invalid_argument);
  EXPECT_NO_THROW(require_pipeline_image(Image(16, 16), "t"));
}
