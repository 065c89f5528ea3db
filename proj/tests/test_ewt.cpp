#include "test_util.hpp"

#include "texseg/ewt.hpp"
#include "texseg/littlewood_paley.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace texseg;
using test::pi;

namespace {

// |DFT| of a 1D signal on [0, pi]
std::vector<double> magnitude(const std::vector<double>& x) { return half_magnitude_spectrum(x); }

double sample_freq(std::size_t i, std::size_t len) { return pi * static_cast<double>(i) / static_cast<double>(len - 1); }

}  // namespace

TEST(Beta, FixedPoints)
{
  EXPECT_EQ(beta(0.0), 0.0);
  EXPECT_EQ(beta(1.0), 1.0);
  EXPECT_DOUBLE_EQ(beta(0.5), 0.5);
  EXPECT_EQ(beta(-3.0), 0.0);
  EXPECT_EQ(beta(4.0), 1.0);
  for (double x = 0; x <= 1.0; x += 0.01)
    EXPECT_NEAR(beta(x) + beta(1 - x), 1.0, 1e-14);
}

TEST(Boundaries, ConstantSequenceIsOneMode)
{
  const std::vector<double> flat(100, 3.0);
  const BoundarySet b = detect_boundaries_1d(flat);
  EXPECT_EQ(b.omega, (std::vector<double>{0.0, pi}));
  EXPECT_EQ(b.modes(), 1u);
  const std::vector<double> zero(100, 0.0);
  EXPECT_EQ(detect_boundaries_1d(zero).modes(), 1u);
}

TEST(Boundaries, RejectsShortOrNonFinite)
{
  EXPECT_THROW(detect_boundaries_1d(std::vector<double>(8, 1.0)), std::invalid_argument);
  std::vector<double> bad(64, 1.0);
  bad[5] = std::nan("");
  EXPECT_THROW(detect_boundaries_1d(bad), std::invalid_argument);
}

TEST(Boundaries, TwoTonesGiveOneBoundaryBetweenThem)
{
  std::vector<double> x(512);
  for (std::size_t t = 0; t < x.size(); ++t)
    x[t] = std::cos(0.3 * pi * t) + std::cos(0.7 * pi * t);
  const auto mag = magnitude(x);
  const BoundarySet b = detect_boundaries_1d(mag);
  const auto in = b.interior();
  ASSERT_EQ(in.size(), 1u);
  EXPECT_GT(in[0], 0.3 * pi);
  EXPECT_LT(in[0], 0.7 * pi);
  // the boundary sits on a sample where the spectrum is at its minimum
  // between the two peaks (brute force)
  std::size_t p1 = 0, p2 = 0;
  for (std::size_t i = 0; i < mag.size(); ++i) {
    if (sample_freq(i, mag.size()) < 0.5 * pi && mag[i] > mag[p1])
      p1 = i;
    if (sample_freq(i, mag.size()) >= 0.5 * pi && mag[i] > mag[p2])
      p2 = i;
  }
  const double lo = *std::min_element(mag.begin() + p1, mag.begin() + p2);
  const std::size_t at = static_cast<std::size_t>(std::lround(in[0] / pi * (mag.size() - 1)));
  EXPECT_LE(mag[at], lo + 1e-9 * mag[p1]);
}

TEST(Boundaries, ThreeBumpsGiveOneBoundaryPerGap)
{
  const std::size_t len = 400;
  std::vector<double> mag(len);
  for (std::size_t i = 0; i < len; ++i) {
    const double w = sample_freq(i, len);
    for (double c : {0.2 * pi, 0.5 * pi, 0.8 * pi})
      mag[i] += std::exp(-(w - c) * (w - c) / (2 * 0.05 * 0.05));
  }
  const auto in = detect_boundaries_1d(mag).interior();
  ASSERT_EQ(in.size(), 2u);
  // oracle: global minimum of each gap
  const double gaps[2][2] = {{0.2 * pi, 0.5 * pi}, {0.5 * pi, 0.8 * pi}};
  for (int g = 0; g < 2; ++g) {
    std::size_t best = len;
    for (std::size_t i = 0; i < len; ++i) {
      const double w = sample_freq(i, len);
      if (w > gaps[g][0] && w < gaps[g][1] && (best == len || mag[i] < mag[best]))
        best = i;
    }
    EXPECT_GT(in[g], gaps[g][0]);
    EXPECT_LT(in[g], gaps[g][1]);
    EXPECT_NEAR(in[g], sample_freq(best, len), 1.01 * pi / (len - 1));
  }
}

TEST(Boundaries, PersistentMinimaIgnoresNoise)
{
  // two deep valleys plus a ripple that dies in the scale space
  std::vector<double> s(200);
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = 2 + std::cos(2 * pi * i / 100.0) + 0.01 * std::cos(2 * pi * i / 4.0);
  const auto m = persistent_minima(s, true);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_NEAR(m[0], 50, 2);
  EXPECT_NEAR(m[1], 150, 2);
}

TEST(Boundaries, TransitionRatioRule)
{
  const BoundarySet b = make_boundary_set({1.0, 2.0});
  // gamma = 0.99 min{(2-1)/(2+1), (pi-2)/(pi+2)}
  const double gamma = 0.99 * std::min(1.0 / 3.0, (pi - 2) / (pi + 2));
  EXPECT_NEAR(b.tau[1], gamma * 1.0, 1e-15);
  EXPECT_NEAR(b.tau[2], gamma * 2.0, 1e-15);
  EXPECT_EQ(b.tau.front(), 0.0);
  EXPECT_EQ(b.tau.back(), 0.0);
  EXPECT_NO_THROW(b.validate());
}

TEST(FilterBank1D, PassbandAndBoundaryValues)
{
  const BoundarySet b = make_boundary_set({0.8, 1.9});
  const FilterSet1D f = build_filter_bank_1d(b);
  ASSERT_EQ(f.size(), 3u);
  // flat passband of mode 1 between omega_1 + tau_1 and omega_2 - tau_2
  const double mid = 0.5 * ((0.8 + b.tau[1]) + (1.9 - b.tau[2]));
  EXPECT_EQ(f.value(1, mid), 1.0);
  EXPECT_EQ(f.value(0, mid), 0.0);
  EXPECT_EQ(f.value(2, mid), 0.0);
  // exactly at omega_1
  EXPECT_NEAR(f.value(0, 0.8), std::cos(pi / 4), 1e-15);
  EXPECT_NEAR(f.value(1, 0.8), std::sin(pi / 4), 1e-15);
  for (double w = 0; w <= pi; w += 0.001) {
    double s = 0;
    for (std::size_t m = 0; m < f.size(); ++m)
      s += f.value(m, w) * f.value(m, w);
    EXPECT_NEAR(s, 1.0, 1e-12) << w;
  }
}

TEST(FilterBank1D, SingleModeIsAllPass)
{
  const FilterSet1D f = build_filter_bank_1d(make_boundary_set({}));
  ASSERT_EQ(f.size(), 1u);
  for (double w = 0; w <= pi; w += 0.1)
    EXPECT_EQ(f.value(0, w), 1.0);
}

TEST(FilterBank1D, OverlappingTransitionsRejected)
{
  BoundarySet b;
  b.omega = {0.0, 1.0, 1.2, pi};
  b.tau = {0.0, 0.3, 0.3, 0.0};
  EXPECT_THROW(build_filter_bank_1d(b), std::invalid_argument);
}

TEST(Ewt1D, TightAndInvertible)
{
  Rng rng(2);
  std::vector<double> x(256);
  for (std::size_t t = 0; t < x.size(); ++t)
    x[t] = std::cos(0.2 * pi * t) + 0.5 * std::cos(0.6 * pi * t) + 0.1 * rng.normal();
  const Ewt1D t = ewt1d(x);
  EXPECT_GE(t.filters.size(), 2u);
  EXPECT_LE(tightness_error(t), 1e-10);
  const auto back = ewt1d_reconstruct(t);
  double err = 0, nrm = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    err += (back[i] - x[i]) * (back[i] - x[i]);
    nrm += x[i] * x[i];
  }
  EXPECT_LT(std::sqrt(err / nrm), 1e-10);
}

TEST(Ewt2D, TensorIsolatesSeparableTone)
{
  const std::size_t n = 160;  // 0.2 pi and 0.6 pi fall on bins 16 and 48
  Image img(n, n);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x)
      img(x, y) = std::cos(0.2 * pi * x) * std::cos(0.6 * pi * y);
  const EwtTransform t = ewt2d_tensor(img);
  EXPECT_LE(tightness_error(t.bank), 1e-10);
  const auto frac = test::band_energy_fractions(t.stack, img);
  const auto best = std::max_element(frac.begin(), frac.end());
  EXPECT_GE(*best, 0.99);
  // the winning cell spans 0.2 pi along x and 0.6 pi along y
  const auto& p = t.partition();
  ASSERT_EQ(p.radial.size(), 2u);
  const std::size_t k = static_cast<std::size_t>(best - frac.begin());
  const std::size_t cols = p.radial[1].modes();
  const std::size_t ix = k / cols, iy = k % cols;
  EXPECT_LT(p.radial[0].omega[ix], 0.2 * pi);
  EXPECT_GT(p.radial[0].omega[ix + 1], 0.2 * pi);
  EXPECT_LT(p.radial[1].omega[iy], 0.6 * pi);
  EXPECT_GT(p.radial[1].omega[iy + 1], 0.6 * pi);
}

TEST(Ewt2D, ConstantImageGivesSingleBand)
{
  const Image c(64, 64, 0.4);
  for (const EwtTransform& t : {ewt2d_tensor(c), ewt2d_lp(c), ewt2d_curvelet(c, 1), ewt2d_curvelet(c, 2),
                                ewt2d_curvelet(c, 3)}) {
    ASSERT_EQ(t.stack.size(), 1u);
    for (double v : t.stack.bands[0].pixels())
      EXPECT_NEAR(v, 0.4, 1e-12);
  }
}

TEST(Ewt2D, LittlewoodPaleyRingTexture)
{
  const std::size_t n = 128;
  const double r0 = 0.45 * pi;
  Rng rng(8);
  Image img(n, n, 0.5);
  for (int a = 0; a < 24; ++a) {
    const double th = pi * a / 24.0, ph = 2 * pi * rng.uniform();
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t x = 0; x < n; ++x)
        img(x, y) += 0.02 * std::cos(r0 * (x * std::cos(th) + y * std::sin(th)) + ph);
  }
  const EwtTransform t = ewt2d_lp(img);
  EXPECT_LE(tightness_error(t.bank), 1e-10);
  const auto frac = test::band_energy_fractions(t.stack, img);
  EXPECT_GE(*std::max_element(frac.begin() + 1, frac.end()), 0.95);
  const auto radii = lp_radii(img);
  ASSERT_FALSE(radii.empty());
  EXPECT_EQ(radii.front(), t.partition().first_radius());
  EXPECT_LT(radii.front(), r0);
}

TEST(Ewt2D, CurveletOrientedWave)
{
  const std::size_t n = 128;
  const double th = pi / 6;
  Image img(n, n, 0.5);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x)
      img(x, y) += 0.25 * std::cos(0.5 * pi * (x * std::cos(th) + y * std::sin(th)));
  for (int option = 1; option <= 3; ++option) {
    const EwtTransform t = ewt2d_curvelet(img, option);
    EXPECT_LE(tightness_error(t.bank), 1e-10);
    const auto frac = test::band_energy_fractions(t.stack, img);
    const auto best = std::max_element(frac.begin() + 1, frac.end());
    EXPECT_GE(*best, 0.95) << "option " << option;
    if (option != 1)
      continue;
    // the winning cell is the ring holding 0.5 pi crossed with the sector
    // whose flat part contains 30 degrees
    const auto& p = t.partition();
    const auto& sectors = p.angular[0];
    std::size_t s = sectors.count();
    for (std::size_t k = 0; k < sectors.count(); ++k)
      if (sectors.window(k, th) == 1.0)
        s = k;
    ASSERT_LT(s, sectors.count());
    std::size_t m = 1;
    while (p.radial[0].omega[m + 1] < 0.5 * pi)
      ++m;
    EXPECT_EQ(static_cast<std::size_t>(best - frac.begin()), 1 + (m - 1) * sectors.count() + s);
  }
}

TEST(Ewt2D, CurveletPartitionShapes)
{
  // two oriented waves at two radii
  const std::size_t n = 128;
  Image img(n, n, 0.5);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x) {
      img(x, y) += 0.2 * std::cos(0.3 * pi * x);
      img(x, y) += 0.2 * std::cos(0.7 * pi * (0.5 * x + 0.866 * y));
    }
  const auto spec = forward_spectrum(img);
  const auto p1 = detect_curvelet_partition(spec, 1);
  const auto p2 = detect_curvelet_partition(spec, 2);
  const auto p3 = detect_curvelet_partition(spec, 3);
  EXPECT_EQ(p1.kind, PartitionKind::curvelet1);
  EXPECT_EQ(p1.radial.size(), 1u);
  EXPECT_EQ(p1.angular.size(), 1u);
  EXPECT_EQ(p2.kind, PartitionKind::curvelet2);
  EXPECT_EQ(p2.angular.size(), p2.radial[0].modes() - 1);
  EXPECT_EQ(p3.kind, PartitionKind::curvelet3);
  EXPECT_EQ(p3.radial.size(), p3.angular[0].count());
  for (const auto& r : p3.radial)
    EXPECT_EQ(r.omega[1], p3.radial[0].omega[1]);
}

TEST(Ewt2D, MasksAreEvenAndRoundTripExact)
{
  const Image img = test::random_image(128, 21);
  const EwtTransform t = ewt2d_lp(img);
  const std::size_t n = 128;
  for (const auto& m : t.bank.masks)
    for (std::size_t v = 1; v < n; ++v)
      for (std::size_t u = 1; u < n; ++u)
        EXPECT_EQ(m[v * n + u], m[(n - v) * n + (n - u)]);
  EXPECT_LT(test::relative_error(reconstruct(t.stack, t.bank), img), 1e-8);
  const Image c(64, 64, 0.7);
  const EwtTransform tc = ewt2d_lp(c);
  const Image back = reconstruct(tc.stack, tc.bank);
  for (double v : back.pixels())
    EXPECT_NEAR(v, 0.7, 1e-12);
}

TEST(Ewt2D, RequiresEvenSquare)
{
  EXPECT_THROW(ewt2d_lp(Image(64, 32)), std::invalid_argument);
  EXPECT_THROW(ewt2d_curvelet(Image(63, 63), 1), std::invalid_argument);
  EXPECT_THROW(ewt2d_curvelet(Image(64, 64), 4), std::invalid_argument);
}

TEST(AngularSectors, WindowsPartitionUnity)
{
  const AngularSectors s({-1.0, 0.2, 0.9});
  ASSERT_EQ(s.count(), 3u);
  for (double th = -4; th < 4; th += 0.01) {
    double sum = 0;
    for (std::size_t k = 0; k < s.count(); ++k)
      sum += s.window(k, th) * s.window(k, th);
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  EXPECT_EQ(s.window(1, 0.55), 1.0);
  EXPECT_NEAR(s.upper(2), -1.0 + pi, 1e-15);
}
