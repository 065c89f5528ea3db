#include "test_util.hpp"

#include "texseg/decomposition.hpp"
#include "texseg/diagnostics.hpp"

#include <gtest/gtest.h>

using namespace texseg;
using test::pi;

namespace {

Image step_image(std::size_t n)
{
  Image img(n, n, 0.2);
  for (std::size_t y = n / 4; y < 3 * n / 4; ++y)
    for (std::size_t x = n / 4; x < 3 * n / 4; ++x)
      img(x, y) = 0.8;
  return img;
}

double correlation(const Image& a, const Image& b)
{
  const double ma = a.mean(), mb = b.mean();
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a.pixels()[i] - ma, db = b.pixels()[i] - mb;
    ab += da * db;
    aa += da * da;
    bb += db * db;
  }
  return ab / std::sqrt(aa * bb);
}

}  // namespace

TEST(DefaultParams, DefaultRules)
{
  const Image img = test::random_image(512, 1);
  const std::vector<double> radii{pi / 4, 2.0};
  const DecompositionConfig c = default_params(img, radii);
  EXPECT_EQ(c.mu, 256.0);
  EXPECT_DOUBLE_EQ(c.lambda, pi / 8);
}

TEST(DefaultParams, ConstantImageFallsBackWithWarning)
{
  std::vector<std::string> seen;
  auto old = set_warning_sink([&](const std::string& m) { seen.push_back(m); });
  const DecompositionConfig c = default_params(Image(64, 64, 0.5));
  set_warning_sink(old);
  EXPECT_DOUBLE_EQ(c.lambda, pi / 8);
  EXPECT_EQ(c.mu, 32.0);
  EXPECT_FALSE(seen.empty());
}

TEST(DefaultParams, ConfigValidation)
{
  DecompositionConfig c{32.0, 0.4};
  EXPECT_NO_THROW(c.validate());
  c.mu = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.mu = 1;
  c.lambda = -1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.lambda = 1;
  c.tol = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Decompose, StepImageHasLittleTexture)
{
  const Image img = step_image(128);
  const DecompositionResult r = decompose(img, default_params(img));
  EXPECT_LE(r.texture.norm() / img.norm(), 0.1);
}

TEST(Decompose, SinusoidGoesToTexture)
{
  const std::size_t n = 128;
  Image wave(n, n), img(n, n);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x) {
      wave(x, y) = 0.2 * std::cos(0.6 * pi * x + 0.3 * pi * y);
      img(x, y) = 0.5 + wave(x, y);
    }
  const DecompositionResult r = decompose(img, default_params(img));
  EXPECT_GE(correlation(r.texture, wave), 0.9);
  for (std::size_t y = 8; y < n - 8; ++y)
    for (std::size_t x = 8; x < n - 8; ++x)
      EXPECT_NEAR(r.cartoon(x, y), 0.5, 0.05);
}

TEST(Decompose, ResidualAndObjective)
{
  const Image img = test::random_image(64, 5);
  DecompositionConfig cfg = default_params(img);
  const DecompositionResult r = decompose(img, cfg);
  // I = u + v + r
  Image res = img;
  for (std::size_t i = 0; i < img.size(); ++i)
    res.pixels()[i] -= r.cartoon.pixels()[i] + r.texture.pixels()[i];
  EXPECT_NEAR(res.norm(), r.residual_norm, 1e-9);
  ASSERT_EQ(r.objective.size(), static_cast<std::size_t>(r.iterations_used) + 1);
  for (std::size_t i = 1; i < r.objective.size(); ++i)
    EXPECT_LE(r.objective[i], r.objective[i - 1] + 1e-12 * std::abs(r.objective[i - 1])) << "iteration " << i;
  EXPECT_NEAR(r.objective.back(), decomposition_objective(img, r.cartoon, r.texture, cfg.lambda), 1e-9);
  EXPECT_NEAR(r.texture.mean(), 0.0, 1e-12);
}

TEST(Decompose, ResidualShrinksAsLambdaGrows)
{
  const Image img = step_image(64);
  DecompositionConfig cfg = default_params(img);
  double prev = std::numeric_limits<double>::infinity();
  for (double lambda : {0.5, 2.0, 8.0, 32.0}) {
    cfg.lambda = lambda;
    const double r = decompose(img, cfg).residual_norm;
    EXPECT_LE(r, prev) << "lambda " << lambda;
    prev = r;
  }
  EXPECT_LT(prev, 0.05 * img.norm());
}

TEST(Decompose, RejectsBadInput)
{
  Image img(32, 32, 0.5);
  img(1, 1) = std::nan("");
  EXPECT_THROW(decompose(img, DecompositionConfig{16, 0.4}), std::invalid_argument);
  EXPECT_THROW(decompose(Image(32, 16), DecompositionConfig{16, 0.4}), std::invalid_argument);
}

TEST(TotalVariation, Oracle)
{
  // anisotropic, forward differences, periodic
  Image u(4, 4);
  u(1, 1) = 1.0;
  EXPECT_DOUBLE_EQ(total_variation(u), 4.0);
  EXPECT_EQ(total_variation(Image(8, 8, 3.0)), 0.0);
}
