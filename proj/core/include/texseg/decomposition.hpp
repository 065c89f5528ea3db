#pragma once

#include "texseg/image.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace texseg {

/// Parameters of the TV-G model
///   min_u,v  TV(u) + J*(v / mu) + (lambda/2) ||I - u - v||^2.
/// The G-ball {v = div xi, |xi_x|, |xi_y| <= mu / N} uses a dual-field radius
/// of mu / N, so mu = N/2 gives the same radius 1/2 at every resolution.
struct DecompositionConfig {
  double mu = 0.0;
  double lambda = 0.0;
  int max_outer_iters = 200;
  double tol = 1e-4;
  int projection_iters = 30;  // dual projected-gradient steps per v-update
  int bregman_iters = 2;      // split-Bregman sweeps per u-update

  void validate() const;
};

struct DecompositionResult {
  Image cartoon;   // u
  Image texture;   // v, zero mean
  double residual_norm = 0.0;  // ||I - u - v||
  int iterations_used = 0;
  std::vector<double> objective;  // after each outer iteration; [0] is the start
};

/// mu = N/2 and lambda = omega_1 / 2 from the EWT2DLP radii of the image.
/// Without radii (a flat spectrum) lambda falls back to pi/8 with a warning.
DecompositionConfig default_params(const Image& img, std::span<const double> lp_radii);
DecompositionConfig default_params(const Image& img);

/// Anisotropic TV with forward differences and periodic boundary.
double total_variation(const Image& u);

/// TV(u) + (lambda/2) ||I - u - v||^2 (the G term is 0 inside the ball).
double decomposition_objective(const Image& img, const Image& u, const Image& v, double lambda);

DecompositionResult decompose(const Image& img, const DecompositionConfig& cfg);

}  // namespace texseg
