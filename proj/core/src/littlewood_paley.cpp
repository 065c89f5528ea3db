#include "texseg/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace texseg {

namespace {
constexpr double kPi = std::numbers::pi;
}

double beta(double x)
{
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double x2 = x * x;
  return x2 * x2 * (35.0 - 84.0 * x + 70.0 * x2 - 20.0 * x2 * x);
}

double transition_rise(double x, double center, double tau)
{
  if (tau <= 0.0) return x >= center ? 1.0 : 0.0;
  if (x <= center - tau) return 0.0;
  if (x >= center + tau) return 1.0;
  return std::sin(0.5 * kPi * beta((x - center + tau) / (2.0 * tau)));
}

double transition_fall(double x, double center, double tau)
{
  if (tau <= 0.0) return x >= center ? 0.0 : 1.0;
  if (x <= center - tau) return 1.0;
  if (x >= center + tau) return 0.0;
  return std::cos(0.5 * kPi * beta((x - center + tau) / (2.0 * tau)));
}

std::vector<double> BoundarySet::interior() const
{
  if (omega.size() < 2) return {};
  return {omega.begin() + 1, omega.end() - 1};
}

void BoundarySet::validate() const
{
  if (omega.size() < 2 || omega.size() != tau.size())
    throw std::invalid_argument("BoundarySet: needs at least {0, pi} and one tau per boundary");
  if (omega.front() != 0.0 || std::abs(omega.back() - kPi) > 1e-12)
    throw std::invalid_argument("BoundarySet: must start at 0 and end at pi");
  if (tau.front() != 0.0 || tau.back() != 0.0)
    throw std::invalid_argument("BoundarySet: tau at 0 and pi must be 0");
  for (std::size_t n = 1; n < omega.size(); ++n) {
    if (!(omega[n] > omega[n - 1]))
      throw std::invalid_argument("BoundarySet: boundaries not strictly increasing");
    if (tau[n] < 0.0) throw std::invalid_argument("BoundarySet: negative tau");
    if (!(omega[n] - tau[n] > omega[n - 1] + tau[n - 1])) {
      std::ostringstream os;
      os << "BoundarySet: transition zones overlap between boundaries " << n - 1 << " and " << n;
      throw std::invalid_argument(os.str());
    }
  }
}

double max_transition_ratio(std::span<const double> interior)
{
  double r = 1.0;
  for (std::size_t n = 0; n < interior.size(); ++n) {
    const double lo = interior[n];
    const double hi = n + 1 < interior.size() ? interior[n + 1] : kPi;
    r = std::min(r, (hi - lo) / (hi + lo));
  }
  return r;
}

BoundarySet make_boundary_set(std::vector<double> interior, double gamma)
{
  std::sort(interior.begin(), interior.end());
  for (double w : interior)
    if (!(w > 0.0 && w < kPi)) throw std::invalid_argument("make_boundary_set: boundary outside (0, pi)");
  if (gamma < 0.0) gamma = kTransitionSafety * max_transition_ratio(interior);
  BoundarySet b;
  b.omega.push_back(0.0);
  b.tau.push_back(0.0);
  for (double w : interior) {
    b.omega.push_back(w);
    b.tau.push_back(gamma * w);
  }
  b.omega.push_back(kPi);
  b.tau.push_back(0.0);
  b.validate();
  return b;
}

FilterSet1D::FilterSet1D(BoundarySet boundaries) : boundaries_(std::move(boundaries))
{
  boundaries_.validate();
}

double FilterSet1D::value(std::size_t mode, double omega) const
{
  const auto& w = boundaries_.omega;
  const auto& t = boundaries_.tau;
  const std::size_t last = boundaries_.modes() - 1;
  if (mode > last) throw std::out_of_range("FilterSet1D: mode index");
  const double a = std::abs(omega);
  double v = 1.0;
  if (mode > 0) v *= transition_rise(a, w[mode], t[mode]);
  if (mode < last) v *= transition_fall(a, w[mode + 1], t[mode + 1]);
  return v;
}

std::vector<std::vector<double>> FilterSet1D::sample(std::size_t n) const
{
  std::vector<std::vector<double>> out(size(), std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    long kk = static_cast<long>(k);
    if (2 * k >= n) kk -= static_cast<long>(n);
    const double omega = 2.0 * kPi * static_cast<double>(kk) / static_cast<double>(n);
    for (std::size_t m = 0; m < size(); ++m) out[m][k] = value(m, omega);
  }
  return out;
}

FilterSet1D build_filter_bank_1d(const BoundarySet& boundaries)
{
  return FilterSet1D(boundaries);
}

double fold_half_plane(double theta)
{
  double t = std::fmod(theta + 0.5 * kPi, kPi);
  if (t < 0.0) t += kPi;
  if (t >= kPi) t -= kPi;
  return t - 0.5 * kPi;
}

AngularSectors::AngularSectors(std::vector<double> boundaries) : boundaries_(std::move(boundaries))
{
  for (double& b : boundaries_) b = fold_half_plane(b);
  std::sort(boundaries_.begin(), boundaries_.end());
  boundaries_.erase(std::unique(boundaries_.begin(), boundaries_.end()), boundaries_.end());
  if (boundaries_.size() < 2) {
    boundaries_.clear();
    return;
  }
  double min_width = kPi;
  for (std::size_t s = 0; s < boundaries_.size(); ++s) min_width = std::min(min_width, upper(s) - lower(s));
  tau_ = 0.25 * min_width;
}

double AngularSectors::lower(std::size_t s) const
{
  if (boundaries_.empty()) return -0.5 * kPi;
  return boundaries_.at(s);
}

double AngularSectors::upper(std::size_t s) const
{
  if (boundaries_.empty()) return 0.5 * kPi;
  if (s + 1 < boundaries_.size()) return boundaries_[s + 1];
  return boundaries_.front() + kPi;
}

double AngularSectors::window(std::size_t s, double theta) const
{
  if (boundaries_.empty()) return 1.0;
  const double lo = lower(s);
  const double hi = upper(s);
  // place theta in the period starting just below this sector's lower transition
  const double start = lo - tau_;
  double t = std::fmod(theta - start, kPi);
  if (t < 0.0) t += kPi;
  t += start;
  return transition_rise(t, lo, tau_) * transition_fall(t, hi, tau_);
}

}  // namespace texseg
