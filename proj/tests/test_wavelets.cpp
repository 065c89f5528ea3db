#include "test_util.hpp"

#include "texseg/wavelets.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace texseg;
using test::pi;

namespace {

// zero-upsampled filter: taps f[n] at positions n * dilation
std::vector<double> upsampled(const std::vector<double>& f, std::size_t dilation)
{
  std::vector<double> out((f.size() - 1) * dilation + 1, 0.0);
  for (std::size_t n = 0; n < f.size(); ++n)
    out[n * dilation] = f[n];
  return out;
}

// direct 2D circular correlation with the separable kernel ky[j] * kx[i]
Image correlate2d(const Image& a, const std::vector<double>& kx, const std::vector<double>& ky)
{
  const std::size_t w = a.width(), h = a.height();
  Image out(w, h);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      double s = 0;
      for (std::size_t j = 0; j < ky.size(); ++j)
        for (std::size_t i = 0; i < kx.size(); ++i)
          s += ky[j] * kx[i] * a((x + i) % w, (y + j) % h);
      out(x, y) = s;
    }
  return out;
}

std::vector<double> scaled(std::vector<double> f, double c)
{
  for (double& v : f)
    v *= c;
  return f;
}

double packet_area(const PacketNode& root)
{
  double a = 0;
  for (const PacketNode* leaf : leaves(root))
    a += std::pow(0.25, static_cast<double>(leaf->path.size()));
  return a;
}

}  // namespace

TEST(OrthoFilters, Orthonormality)
{
  for (auto f : kWaveletFamilies) {
    const auto p = ortho_filters(f);
    const double sum = std::accumulate(p.h.begin(), p.h.end(), 0.0);
    EXPECT_NEAR(sum, std::sqrt(2.0), 1e-10) << to_string(f);
    for (std::size_t shift = 0; shift < p.h.size(); shift += 2) {
      double hh = 0, hg = 0, gg = 0;
      for (std::size_t n = 0; n + shift < p.h.size(); ++n) {
        hh += p.h[n] * p.h[n + shift];
        gg += p.g[n] * p.g[n + shift];
        hg += p.h[n] * p.g[n + shift];
      }
      EXPECT_NEAR(hh, shift == 0 ? 1.0 : 0.0, 1e-10) << to_string(f) << " shift " << shift;
      EXPECT_NEAR(gg, shift == 0 ? 1.0 : 0.0, 1e-10) << to_string(f) << " shift " << shift;
    }
    double hg0 = 0;
    for (std::size_t n = 0; n < p.h.size(); ++n)
      hg0 += p.h[n] * p.g[n];
    EXPECT_NEAR(hg0, 0.0, 1e-12);
  }
  EXPECT_EQ(ortho_filters(WaveletFamily::Daub4).h.size(), 4u);
  EXPECT_EQ(ortho_filters(WaveletFamily::Sym5).h.size(), 10u);
  EXPECT_EQ(ortho_filters(WaveletFamily::Coif2).h.size(), 12u);
}

TEST(Decimated, RampMatchesDirectConvolution)
{
  std::vector<double> ramp(32);
  for (std::size_t i = 0; i < ramp.size(); ++i)
    ramp[i] = 0.1 * static_cast<double>(i);
  const auto p = ortho_filters(WaveletFamily::Daub4);
  for (const auto* f : {&p.h, &p.g}) {
    const auto y = analyze_decimate(ramp, *f);
    ASSERT_EQ(y.size(), 16u);
    // full circular correlation, then keep the even samples
    std::vector<double> full(32, 0.0);
    for (std::size_t t = 0; t < 32; ++t)
      for (std::size_t n = 0; n < f->size(); ++n)
        full[t] += (*f)[n] * ramp[(t + n) % 32];
    for (std::size_t k = 0; k < 16; ++k)
      EXPECT_NEAR(y[k], full[2 * k], 1e-12);
  }
  // interior highpass outputs vanish on a ramp (two vanishing moments)
  const auto d = analyze_decimate(ramp, p.g);
  for (std::size_t k = 0; k + 2 < 16; ++k)
    EXPECT_NEAR(d[k], 0.0, 1e-12);
}

TEST(Decimated, ConstantImage)
{
  for (auto f : kWaveletFamilies) {
    const CoefficientStack s = dwt_decimated(Image(64, 64, 0.3), f, 3);
    ASSERT_EQ(s.size(), 10u);
    EXPECT_EQ(s.lowpass_index, 0u);
    const double a0 = s.bands[0](0, 0);
    EXPECT_NEAR(a0, 0.3 * 8.0, 1e-10);  // (sqrt 2)^2 gain per level
    for (double v : s.bands[0].pixels())
      EXPECT_NEAR(v, a0, 1e-10);
    for (std::size_t b = 1; b < s.size(); ++b)
      for (double v : s.bands[b].pixels())
        EXPECT_NEAR(v, 0.0, 1e-10) << to_string(f) << " band " << b;
  }
}

TEST(Decimated, EnergyConservation)
{
  const Image img = test::random_image(64, 4);
  for (auto f : kWaveletFamilies) {
    const DecimatedDwt d = dwt2d(img, f, 3);
    double e = test::sum_squares(d.approximation);
    for (const auto& lvl : d.details)
      for (const auto& b : lvl)
        e += test::sum_squares(b);
    EXPECT_NEAR(e / test::sum_squares(img), 1.0, 1e-10) << to_string(f);
  }
}

TEST(Decimated, LevelChecks)
{
  EXPECT_THROW(dwt_decimated(Image(64, 64), WaveletFamily::Daub4, 0), std::invalid_argument);
  EXPECT_THROW(dwt_decimated(Image(40, 40), WaveletFamily::Daub4, 4), std::invalid_argument);
  EXPECT_THROW(parse_wavelet_family("Haar"), std::invalid_argument);
  EXPECT_EQ(parse_wavelet_family("Sym4"), WaveletFamily::Sym4);
}

TEST(Undecimated, ShiftEquivariance)
{
  const Image img = test::random_image(32, 9);
  const CoefficientStack a = dwt_undecimated(img, WaveletFamily::Sym4, 3);
  const CoefficientStack b = dwt_undecimated(circular_shift(img, 5, -3), WaveletFamily::Sym4, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    const Image shifted = circular_shift(a.bands[k], 5, -3);
    for (std::size_t i = 0; i < shifted.size(); ++i)
      EXPECT_NEAR(shifted.pixels()[i], b.bands[k].pixels()[i], 1e-13);
  }
}

TEST(Undecimated, ConstantAndParseval)
{
  const CoefficientStack c = dwt_undecimated(Image(32, 32, 0.6), WaveletFamily::Coif1, 2);
  for (std::size_t b = 1; b < c.size(); ++b)
    for (double v : c.bands[b].pixels())
      EXPECT_NEAR(v, 0.0, 1e-12);
  const Image img = test::random_image(32, 10);
  const CoefficientStack s = dwt_undecimated(img, WaveletFamily::Daub6, 3);
  double e = 0;
  for (const auto& b : s.bands)
    e += test::sum_squares(b);
  EXPECT_NEAR(e / test::sum_squares(img), 1.0, 1e-10);
}

TEST(Undecimated, LevelTwoMatchesUpsampledFilterOracle)
{
  const Image img = test::random_image(32, 12);
  const auto p = ortho_filters(WaveletFamily::Daub4);
  const auto h = scaled(p.h, 1 / std::sqrt(2.0)), g = scaled(p.g, 1 / std::sqrt(2.0));
  const Image a1 = correlate2d(img, h, h);
  const Image lh2 = correlate2d(a1, upsampled(h, 2), upsampled(g, 2));
  const Image hl2 = correlate2d(a1, upsampled(g, 2), upsampled(h, 2));
  const Image hh2 = correlate2d(a1, upsampled(g, 2), upsampled(g, 2));
  const CoefficientStack s = dwt_undecimated(img, WaveletFamily::Daub4, 2);
  // bands: approximation, level-1 LH HL HH, level-2 LH HL HH
  ASSERT_EQ(s.size(), 7u);
  for (std::size_t i = 0; i < img.size(); ++i) {
    EXPECT_NEAR(s.bands[4].pixels()[i], lh2.pixels()[i], 1e-12);
    EXPECT_NEAR(s.bands[5].pixels()[i], hl2.pixels()[i], 1e-12);
    EXPECT_NEAR(s.bands[6].pixels()[i], hh2.pixels()[i], 1e-12);
  }
}

TEST(Packets, ToneSplitLowersCost)
{
  const std::size_t n = 64;
  Image img(n, n);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x)
      img(x, y) = std::cos(0.85 * pi * x) * std::cos(0.85 * pi * y);
  const double energy = test::sum_squares(img);
  // independent split cost from one analysis step
  const DwtSubbands sb = dwt2d_step(img, ortho_filters(WaveletFamily::Sym5));
  const double split = shannon_cost(sb.ll, energy) + shannon_cost(sb.lh, energy) + shannon_cost(sb.hl, energy)
                       + shannon_cost(sb.hh, energy);
  const double merged = shannon_cost(img, energy);
  ASSERT_LT(split, merged);
  const PacketNode root = packet_tree(img, WaveletFamily::Sym5, 2);
  EXPECT_FALSE(root.is_leaf());
  EXPECT_NEAR(root.entropy_cost, merged, 1e-9);
  EXPECT_LE(root.best_cost, split + 1e-9);
  EXPECT_NEAR(packet_area(root), 1.0, 1e-15);
  // the HH child carries the tone
  double best = 0;
  std::uint8_t best_path = 0;
  for (const auto& c : root.children) {
    const double e = test::sum_squares(c.coeffs);
    if (e > best) {
      best = e;
      best_path = c.path.back();
    }
  }
  EXPECT_EQ(best_path, 3);
  EXPECT_GE(best / energy, 0.9);
}

TEST(Packets, WhiteNoiseTilesPlane)
{
  const Image img = test::random_image(64, 13);
  const PacketNode root = packet_tree(img, WaveletFamily::Daub4, 3);
  EXPECT_NEAR(packet_area(root), 1.0, 1e-15);
  EXPECT_LE(root.best_cost, root.entropy_cost);
  EXPECT_LE(root.best_cost, fixed_depth_cost(img, WaveletFamily::Daub4, 3) + 1e-9);
  const CoefficientStack s = packet_best_basis(img, WaveletFamily::Daub4, 3);
  EXPECT_GE(s.size(), 4u);
  for (const auto& b : s.bands) {
    EXPECT_EQ(b.width(), 64u);
    EXPECT_TRUE(b.all_finite());
  }
}

TEST(Gabor, WaveSelectsMatchingFilter)
{
  const std::size_t n = 128;
  Image img(n, n, 0.5);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x)
      img(x, y) += 0.2 * std::cos(0.5 * pi * x);  // (pi/2, 0): scale 0, orientation 0
  const CoefficientStack s = gabor_bank(img, 4, 6);
  ASSERT_EQ(s.size(), 25u);
  std::vector<double> e;
  for (std::size_t b = 1; b < s.size(); ++b)
    e.push_back(test::sum_squares(s.bands[b]));
  const auto best = std::max_element(e.begin(), e.end()) - e.begin();
  EXPECT_EQ(s.band_meta[best + 1], "scale0 orientation0");
}

TEST(Meyer, ConstantAndRingLocalization)
{
  const CoefficientStack c = meyer_lp(Image(64, 64, 0.2), 2);
  ASSERT_EQ(c.size(), 3u);
  for (double v : c.bands[0].pixels())
    EXPECT_NEAR(v, 0.2, 1e-12);
  for (std::size_t b = 1; b < c.size(); ++b)
    for (double v : c.bands[b].pixels())
      EXPECT_NEAR(v, 0.0, 1e-12);

  const std::size_t n = 128;
  Rng rng(3);
  Image img(n, n, 0.5);
  for (int a = 0; a < 16; ++a) {
    const double th = pi * a / 16.0, ph = 2 * pi * rng.uniform();
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t x = 0; x < n; ++x)
        img(x, y) += 0.02 * std::cos(pi / 3 * (x * std::cos(th) + y * std::sin(th)) + ph);
  }
  const FilterBank bank = meyer_filters(n, 2);
  EXPECT_LE(tightness_error(bank), 1e-10);
  const auto frac = test::band_energy_fractions(meyer_lp(img, 2), img);
  // bands: lowpass [0, pi/4], ring (pi/4, pi/2), ring (pi/2, pi)
  EXPECT_GE(frac[1], 0.9);
}

TEST(PrescribedCurvelet, OrientedWaveSector)
{
  const std::size_t n = 128;
  const double th = 40.0 * pi / 180.0;
  Image img(n, n, 0.5);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x)
      img(x, y) += 0.2 * std::cos(0.7 * pi * (x * std::cos(th) + y * std::sin(th)));
  const FilterBank bank = prescribed_curvelet_filters(n, 3, 8);
  EXPECT_LE(tightness_error(bank), 1e-10);
  const CoefficientStack s = prescribed_curvelet(img, 3, 8);
  ASSERT_EQ(s.size(), 25u);
  const auto frac = test::band_energy_fractions(s, img);
  const auto best = static_cast<std::size_t>(std::max_element(frac.begin() + 1, frac.end()) - frac.begin());
  const FourierPartition p = prescribed_curvelet_partition(3, 8);
  const auto& sectors = p.angular[0];
  std::size_t sector = 0;
  for (std::size_t k = 0; k < sectors.count(); ++k)
    if (sectors.window(k, th) > sectors.window(sector, th))
      sector = k;
  std::size_t m = 1;
  while (p.radial[0].omega[m + 1] < 0.7 * pi)
    ++m;
  EXPECT_EQ(best, 1 + (m - 1) * sectors.count() + sector);
  EXPECT_GE(frac[best], 0.5);
}
