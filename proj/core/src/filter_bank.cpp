#include "texseg/filter_bank.hpp"

#include <cmath>
#include <fmt/format.h>
#include <ostream>
#include <stdexcept>

namespace texseg {

const char* to_string(PartitionKind kind)
{
  switch (kind) {
    case PartitionKind::tensor: return "tensor";
    case PartitionKind::littlewood_paley: return "littlewood_paley";
    case PartitionKind::curvelet1: return "curvelet1";
    case PartitionKind::curvelet2: return "curvelet2";
    case PartitionKind::curvelet3: return "curvelet3";
    case PartitionKind::meyer: return "meyer";
    case PartitionKind::prescribed_curvelet: return "prescribed_curvelet";
    case PartitionKind::gabor: return "gabor";
    case PartitionKind::spatial: return "spatial";
  }
  return "unknown";
}

double FourierPartition::first_radius() const
{
  if (radial.empty() || radial.front().omega.size() < 3) return 0.0;
  return radial.front().omega[1];
}

void write_partition_csv(const FourierPartition& p, std::ostream& os)
{
  os << "set,index,kind,value,tau\n";
  for (std::size_t i = 0; i < p.radial.size(); ++i) {
    const auto& b = p.radial[i];
    for (std::size_t n = 0; n < b.omega.size(); ++n)
      os << fmt::format("radial,{},{},{:.10g},{:.10g}\n", i, to_string(p.kind), b.omega[n], b.tau[n]);
  }
  for (std::size_t i = 0; i < p.angular.size(); ++i) {
    const auto& a = p.angular[i];
    for (double th : a.boundaries())
      os << fmt::format("angular,{},{},{:.10g},{:.10g}\n", i, to_string(p.kind), th, a.tau());
  }
}

double tightness_error(const FilterBank& bank)
{
  const std::size_t n = bank.width * bank.height;
  double worst = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    double s = 0.0;
    for (const auto& m : bank.masks) s += m[b] * m[b];
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

void renormalize(FilterBank& bank)
{
  const std::size_t n = bank.width * bank.height;
  for (std::size_t b = 0; b < n; ++b) {
    double s = 0.0;
    for (const auto& m : bank.masks) s += m[b] * m[b];
    if (s <= 1e-300) {
      for (auto& m : bank.masks) m[b] = 0.0;
      bank.masks[bank.lowpass_index][b] = 1.0;
      continue;
    }
    const double inv = 1.0 / std::sqrt(s);
    for (auto& m : bank.masks) m[b] *= inv;
  }
}

namespace {

std::size_t partner_index(std::size_t u, std::size_t n)
{
  const long half = static_cast<long>(n / 2);
  const long f = static_cast<long>(u) - half;
  long pf = -f;
  if (pf >= static_cast<long>(n) - half) pf -= static_cast<long>(n);
  return static_cast<std::size_t>(pf + half);
}

void check_bank_size(const FilterBank& bank, std::size_t w, std::size_t h)
{
  if (bank.width != w || bank.height != h)
    throw std::invalid_argument(
        fmt::format("filter bank is {}x{} but data is {}x{}", bank.width, bank.height, w, h));
}

}  // namespace

void symmetrize(FilterBank& bank)
{
  const std::size_t w = bank.width, h = bank.height;
  for (std::size_t v = 0; v < h; ++v) {
    const std::size_t pv = partner_index(v, h);
    for (std::size_t u = 0; u < w; ++u) {
      const std::size_t pu = partner_index(u, w);
      const std::size_t b = v * w + u, p = pv * w + pu;
      if (b < p)
        for (auto& m : bank.masks) m[p] = m[b];
    }
  }
}

CoefficientStack apply_filter_bank(const Spectrum& spec, const FilterBank& bank)
{
  check_bank_size(bank, spec.width(), spec.height());
  CoefficientStack out;
  out.bands.reserve(bank.size());
  for (const auto& m : bank.masks) out.bands.push_back(filter_spectrum(spec, m));
  out.band_meta = bank.band_meta;
  out.lowpass_index = bank.lowpass_index;
  return out;
}

CoefficientStack apply_filter_bank(const Image& img, const FilterBank& bank)
{
  return apply_filter_bank(forward_spectrum(img), bank);
}

Image reconstruct(const CoefficientStack& stack, const FilterBank& bank)
{
  if (stack.size() != bank.size())
    throw std::invalid_argument(fmt::format("reconstruct: {} bands for {} filters", stack.size(), bank.size()));
  if (stack.bands.empty()) throw std::invalid_argument("reconstruct: empty stack");
  const auto& first = stack.bands.front();
  check_bank_size(bank, first.width(), first.height());
  Spectrum acc(first.width(), first.height());
  for (std::size_t k = 0; k < stack.size(); ++k) {
    const auto& band = stack.bands[k];
    check_bank_size(bank, band.width(), band.height());
    const Spectrum s = forward_spectrum(band);
    const auto& m = bank.masks[k];
    auto dst = acc.bins();
    auto src = s.bins();
    for (std::size_t b = 0; b < dst.size(); ++b) dst[b] += m[b] * src[b];
  }
  return inverse_spectrum(acc);
}

namespace {

std::string interval(double a, double b)
{
  return fmt::format("[{:.4f},{:.4f}]", a, b);
}

std::string ring_label(const BoundarySet& b, std::size_t n)
{
  return fmt::format("ring{}{}", n, interval(b.omega[n], b.omega[n + 1]));
}

std::string sector_label(const AngularSectors& a, std::size_t s)
{
  return fmt::format("sector{}{}", s, interval(a.lower(s), a.upper(s)));
}

}  // namespace

FilterBank tensor_bank(std::size_t width, std::size_t height, const BoundarySet& rows, const BoundarySet& cols)
{
  const FilterSet1D fr(rows), fc(cols);
  FilterBank bank;
  bank.width = width;
  bank.height = height;
  bank.partition.kind = PartitionKind::tensor;
  bank.partition.radial = {rows, cols};
  std::vector<std::vector<double>> rx(fr.size(), std::vector<double>(width));
  std::vector<std::vector<double>> cy(fc.size(), std::vector<double>(height));
  for (std::size_t n = 0; n < fr.size(); ++n)
    for (std::size_t u = 0; u < width; ++u) rx[n][u] = fr.value(n, bin_frequency(u, width));
  for (std::size_t m = 0; m < fc.size(); ++m)
    for (std::size_t v = 0; v < height; ++v) cy[m][v] = fc.value(m, bin_frequency(v, height));
  for (std::size_t n = 0; n < fr.size(); ++n) {
    for (std::size_t m = 0; m < fc.size(); ++m) {
      std::vector<double> mask(width * height);
      for (std::size_t v = 0; v < height; ++v)
        for (std::size_t u = 0; u < width; ++u) mask[v * width + u] = rx[n][u] * cy[m][v];
      bank.masks.push_back(std::move(mask));
      bank.band_meta.push_back(fmt::format("x{}{} y{}{}", n, interval(rows.omega[n], rows.omega[n + 1]), m,
                                           interval(cols.omega[m], cols.omega[m + 1])));
    }
  }
  bank.lowpass_index = 0;
  renormalize(bank);
  symmetrize(bank);
  return bank;
}

FilterBank ring_bank(std::size_t n, const BoundarySet& rings, PartitionKind kind)
{
  const FilterSet1D f(rings);
  FilterBank bank;
  bank.width = bank.height = n;
  bank.partition.kind = kind;
  bank.partition.radial = {rings};
  bank.masks.assign(f.size(), std::vector<double>(n * n));
  for (std::size_t v = 0; v < n; ++v) {
    const double wy = bin_frequency(v, n);
    for (std::size_t u = 0; u < n; ++u) {
      const double r = std::hypot(bin_frequency(u, n), wy);
      for (std::size_t m = 0; m < f.size(); ++m) bank.masks[m][v * n + u] = f.value(m, r);
    }
  }
  for (std::size_t m = 0; m < f.size(); ++m) bank.band_meta.push_back(m == 0 ? "lowpass" : ring_label(rings, m));
  bank.band_meta.front() = fmt::format("lowpass{}", interval(0.0, rings.omega[1]));
  bank.lowpass_index = 0;
  renormalize(bank);
  symmetrize(bank);
  return bank;
}

FilterBank polar_bank(std::size_t n, const FourierPartition& p)
{
  if (p.radial.empty()) throw std::invalid_argument("polar_bank: partition has no radial set");
  const bool per_sector = p.kind == PartitionKind::curvelet3;
  const bool per_ring = p.kind == PartitionKind::curvelet2;
  if (p.angular.empty() && !per_ring) throw std::invalid_argument("polar_bank: partition has no angular set");
  if (per_sector && p.radial.size() != p.angular.front().count())
    throw std::invalid_argument("polar_bank: curvelet3 needs one radial set per sector");

  // one cell = (radial set, mode, angular set, sector)
  struct Cell {
    std::size_t rset, mode, aset, sector;
  };
  std::vector<Cell> cells;
  std::vector<FilterSet1D> radial;
  for (const auto& b : p.radial) radial.emplace_back(b);
  cells.push_back({0, 0, 0, 0});
  FilterBank bank;
  bank.band_meta.push_back(fmt::format("lowpass{}", interval(0.0, p.radial[0].omega[1])));
  if (per_sector) {
    const auto& sectors = p.angular.front();
    for (std::size_t s = 0; s < sectors.count(); ++s)
      for (std::size_t m = 1; m < radial[s].size(); ++m) {
        cells.push_back({s, m, 0, s});
        bank.band_meta.push_back(ring_label(p.radial[s], m) + " " + sector_label(sectors, s));
      }
  } else {
    const std::size_t rings = radial[0].size();
    if (per_ring && p.angular.size() != rings - 1)
      throw std::invalid_argument("polar_bank: curvelet2 needs one angular set per ring");
    for (std::size_t m = 1; m < rings; ++m) {
      const std::size_t a = per_ring ? m - 1 : 0;
      for (std::size_t s = 0; s < p.angular[a].count(); ++s) {
        cells.push_back({0, m, a, s});
        bank.band_meta.push_back(ring_label(p.radial[0], m) + " " + sector_label(p.angular[a], s));
      }
    }
  }

  bank.width = bank.height = n;
  bank.partition = p;
  bank.lowpass_index = 0;
  bank.masks.assign(cells.size(), std::vector<double>(n * n));
  for (std::size_t v = 0; v < n; ++v) {
    const double wy = bin_frequency(v, n);
    for (std::size_t u = 0; u < n; ++u) {
      const double wx = bin_frequency(u, n);
      const double r = std::hypot(wx, wy);
      const double th = std::atan2(wy, wx);
      const std::size_t b = v * n + u;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const Cell& cell = cells[c];
        double val = radial[cell.rset].value(cell.mode, r);
        if (c > 0 && val != 0.0) val *= p.angular[cell.aset].window(cell.sector, th);
        bank.masks[c][b] = val;
      }
    }
  }
  renormalize(bank);
  symmetrize(bank);
  return bank;
}

}  // namespace texseg
