#include "texseg/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace texseg {
namespace {

double clamp_percent(double v)
{
  return std::clamp(v, 0.0, 100.0);
}

double total_d(const ContingencyTable& t)
{
  return static_cast<double>(t.total);
}

}  // namespace

ContingencyTable ContingencyTable::transposed() const
{
  ContingencyTable t;
  t.rows = cols;
  t.cols = rows;
  t.counts.resize(counts.size());
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      t.counts[c * rows + r] = counts[r * cols + c];
  t.row_sums = col_sums;
  t.col_sums = row_sums;
  t.total = total;
  return t;
}

ContingencyTable table_from_counts(std::size_t rows, std::size_t cols, std::vector<std::uint64_t> counts)
{
  if (counts.size() != rows * cols)
    throw std::invalid_argument("table_from_counts: size mismatch");
  ContingencyTable t;
  t.rows = rows;
  t.cols = cols;
  t.counts = std::move(counts);
  t.row_sums.assign(rows, 0);
  t.col_sums.assign(cols, 0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      t.row_sums[r] += t.counts[r * cols + c];
      t.col_sums[c] += t.counts[r * cols + c];
      t.total += t.counts[r * cols + c];
    }
  return t;
}

ContingencyTable contingency(const Partition& ps, const Partition& pg)
{
  if (ps.width() != pg.width() || ps.height() != pg.height())
    throw std::invalid_argument(fmt::format("contingency: partitions are {}x{} and {}x{}", ps.width(), ps.height(),
                                            pg.width(), pg.height()));
  std::map<int, std::size_t> rs, cs;
  for (int l : ps.labels())
    rs.emplace(l, 0);
  for (int l : pg.labels())
    cs.emplace(l, 0);
  std::size_t i = 0;
  for (auto& [l, idx] : rs)
    idx = i++;
  i = 0;
  for (auto& [l, idx] : cs)
    idx = i++;
  std::vector<std::uint64_t> counts(rs.size() * cs.size(), 0);
  const auto& a = ps.labels();
  const auto& b = pg.labels();
  for (std::size_t p = 0; p < a.size(); ++p)
    ++counts[rs[a[p]] * cs.size() + cs[b[p]]];
  return table_from_counts(rs.size(), cs.size(), std::move(counts));
}

std::uint64_t directional_hamming(const ContingencyTable& t)
{
  std::uint64_t kept = 0;
  for (std::size_t c = 0; c < t.cols; ++c) {
    std::uint64_t best = 0;
    for (std::size_t r = 0; r < t.rows; ++r)
      best = std::max(best, t(r, c));
    kept += best;
  }
  return t.total - kept;
}

double nvoi(const ContingencyTable& t)
{
  const std::size_t ncl = std::max(t.rows, t.cols);
  if (ncl <= 1)
    return 100.0;
  // VoI = H(S|G) + H(G|S); every term is >= 0 and exactly 0 for a
  // perfect match
  const double n = total_d(t);
  double voi = 0.0;
  for (std::size_t r = 0; r < t.rows; ++r)
    for (std::size_t c = 0; c < t.cols; ++c) {
      const auto k = t(r, c);
      if (k == 0)
        continue;
      const double kd = static_cast<double>(k);
      voi += kd / n *
             (std::log(static_cast<double>(t.row_sums[r]) / kd) + std::log(static_cast<double>(t.col_sums[c]) / kd));
    }
  return clamp_percent(100.0 * std::max(0.0, 1.0 - voi / std::log(static_cast<double>(ncl))));
}

double sdhd(const ContingencyTable& t)
{
  return clamp_percent(100.0 * (1.0 - static_cast<double>(directional_hamming(t.transposed())) / total_d(t)));
}

double vd(const ContingencyTable& t)
{
  const double sum = static_cast<double>(directional_hamming(t) + directional_hamming(t.transposed()));
  return clamp_percent(100.0 * (1.0 - sum / (2.0 * total_d(t))));
}

double ssc(const ContingencyTable& t)
{
  double acc = 0.0;
  for (std::size_t c = 0; c < t.cols; ++c) {
    double best = 0.0;
    for (std::size_t r = 0; r < t.rows; ++r) {
      const double inter = static_cast<double>(t(r, c));
      const double uni = static_cast<double>(t.row_sums[r] + t.col_sums[c]) - inter;
      if (uni > 0.0)
        best = std::max(best, inter / uni);
    }
    acc += static_cast<double>(t.col_sums[c]) * best;
  }
  return clamp_percent(100.0 * acc / total_d(t));
}

double max_weight_matching(const std::vector<double>& weights, std::size_t rows, std::size_t cols)
{
  if (weights.size() != rows * cols)
    throw std::invalid_argument("max_weight_matching: size mismatch");
  const std::size_t n = std::max(rows, cols);
  if (n == 0)
    return 0.0;
  double wmax = 0.0;
  for (double w : weights)
    wmax = std::max(wmax, w);
  // minimization on cost = wmax - w over the zero-padded square matrix
  auto cost = [&](std::size_t i, std::size_t j) {
    const double w = (i < rows && j < cols) ? weights[i * cols + j] : 0.0;
    return wmax - w;
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j])
          continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t i = p[j] - 1;
    if (i < rows && j - 1 < cols)
      total += weights[i * cols + (j - 1)];
  }
  return total;
}

double bgm(const ContingencyTable& t)
{
  std::vector<double> w(t.counts.begin(), t.counts.end());
  return clamp_percent(100.0 * max_weight_matching(w, t.rows, t.cols) / total_d(t));
}

double bce(const ContingencyTable& t)
{
  double acc = 0.0;
  for (std::size_t r = 0; r < t.rows; ++r)
    for (std::size_t c = 0; c < t.cols; ++c) {
      const double k = static_cast<double>(t(r, c));
      if (k == 0.0)
        continue;
      acc += k * std::min(k / static_cast<double>(t.row_sums[r]), k / static_cast<double>(t.col_sums[c]));
    }
  return clamp_percent(100.0 * acc / total_d(t));
}

MetricReport report(const ContingencyTable& t)
{
  if (t.total == 0)
    throw std::invalid_argument("report: empty contingency table");
  MetricReport m;
  m.nvoi = nvoi(t);
  m.sdhd = sdhd(t);
  m.vd = vd(t);
  m.ssc = ssc(t);
  m.bgm = bgm(t);
  m.bce = bce(t);
  m.mean = (m.nvoi + m.sdhd + m.vd + m.ssc + m.bgm + m.bce) / 6.0;
  return m;
}

MetricReport report(const Partition& ps, const Partition& pg)
{
  return report(contingency(ps, pg));
}

}  // namespace texseg
