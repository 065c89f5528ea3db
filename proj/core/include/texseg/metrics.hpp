#pragma once

#include "texseg/partition.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace texseg {

/// Overlap counts between the regions of a segmentation (rows) and of a
/// ground truth (columns). Only labels that own pixels get a row/column.
struct ContingencyTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint64_t> counts;  // rows x cols, row-major
  std::vector<std::uint64_t> row_sums;
  std::vector<std::uint64_t> col_sums;
  std::uint64_t total = 0;

  std::uint64_t operator()(std::size_t r, std::size_t c) const { return counts[r * cols + c]; }
  ContingencyTable transposed() const;
};

ContingencyTable contingency(const Partition& ps, const Partition& pg);
/// Builds a table directly from counts (rows = segmentation regions).
ContingencyTable table_from_counts(std::size_t rows, std::size_t cols, std::vector<std::uint64_t> counts);

/// D_H(S => G) = total - sum over G regions of the best overlap in S.
std::uint64_t directional_hamming(const ContingencyTable& t);

double nvoi(const ContingencyTable& t);
double sdhd(const ContingencyTable& t);
double vd(const ContingencyTable& t);
double ssc(const ContingencyTable& t);
double bgm(const ContingencyTable& t);
double bce(const ContingencyTable& t);

/// Maximum-weight one-to-one matching of a rectangular weight matrix
/// (zero-padded to square); returns the optimal total weight.
double max_weight_matching(const std::vector<double>& weights, std::size_t rows, std::size_t cols);

struct MetricReport {
  double nvoi = 0, sdhd = 0, vd = 0, ssc = 0, bgm = 0, bce = 0, mean = 0;
};

MetricReport report(const ContingencyTable& t);
MetricReport report(const Partition& ps, const Partition& pg);

}  // namespace texseg
