#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace texseg {

/// Transition polynomial beta(x) = x^4 (35 - 84x + 70x^2 - 20x^3), clamped to
/// 0 below 0 and 1 above 1. Satisfies beta(x) + beta(1-x) = 1.
double beta(double x);

/// Ordered Fourier boundaries 0 = omega_0 < ... < omega_N = pi with
/// transition half-widths tau_n. tau_0 = tau_N = 0: the lowpass has no
/// transition at DC and the last mode stays flat through pi (and beyond,
/// for the corners of a 2D spectrum).
struct BoundarySet {
  std::vector<double> omega;
  std::vector<double> tau;

  std::size_t modes() const { return omega.empty() ? 0 : omega.size() - 1; }
  std::vector<double> interior() const;

  /// Throws std::invalid_argument when the ordering or the disjointness of
  /// transition zones is violated.
  void validate() const;
};

/// Largest admissible gamma for the rule tau_n = gamma * omega_n:
/// min_n (omega_{n+1} - omega_n) / (omega_{n+1} + omega_n), over the set
/// including the final pi. Returns 1 when there are no interior boundaries.
double max_transition_ratio(std::span<const double> interior);

/// Fraction of the admissible gamma actually used, so transitions stay
/// strictly disjoint.
inline constexpr double kTransitionSafety = 0.99;

/// Builds {0, interior..., pi} with tau_n = gamma * omega_n. When gamma is
/// negative, kTransitionSafety * max_transition_ratio(interior) is used.
BoundarySet make_boundary_set(std::vector<double> interior, double gamma = -1.0);

/// Littlewood-Paley filters of a BoundarySet: mode 0 is the lowpass Phi
/// (support |w| <= omega_1 + tau_1), mode n >= 1 the bandpass Psi_n between
/// omega_n and omega_{n+1}. The squares sum to one at every frequency.
class FilterSet1D {
public:
  explicit FilterSet1D(BoundarySet boundaries);

  std::size_t size() const { return boundaries_.modes(); }
  const BoundarySet& boundaries() const { return boundaries_; }

  /// Filter value at |omega| (the filters are even).
  double value(std::size_t mode, double omega) const;

  /// Samples every filter on the n-point DFT grid (natural order, bin k at
  /// frequency 2*pi*k/n wrapped into [-pi, pi)).
  std::vector<std::vector<double>> sample(std::size_t n) const;

private:
  BoundarySet boundaries_;
};

/// Validates the set and returns its filter family.
FilterSet1D build_filter_bank_1d(const BoundarySet& boundaries);

/// Rising and falling halves of a Meyer-type transition centered at `center`
/// with half-width `tau`; rise^2 + fall^2 = 1.
double transition_rise(double x, double center, double tau);
double transition_fall(double x, double center, double tau);

/// Angular sectors of the half plane [-pi/2, pi/2), periodic with period pi.
/// Fewer than two boundaries means a single sector covering every direction.
class AngularSectors {
public:
  AngularSectors() = default;
  explicit AngularSectors(std::vector<double> boundaries);

  std::size_t count() const { return boundaries_.size() < 2 ? 1 : boundaries_.size(); }
  const std::vector<double>& boundaries() const { return boundaries_; }
  double tau() const { return tau_; }

  /// Lower and upper edge of sector s; the last sector wraps past pi/2.
  double lower(std::size_t s) const;
  double upper(std::size_t s) const;

  /// Window of sector s at direction theta (any real; folded mod pi).
  double window(std::size_t s, double theta) const;

private:
  std::vector<double> boundaries_;
  double tau_ = 0.0;
};

/// Folds an angle into [-pi/2, pi/2).
double fold_half_plane(double theta);

}  // namespace texseg
