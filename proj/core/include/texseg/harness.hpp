#pragma once

#include "texseg/clustering.hpp"
#include "texseg/decomposition.hpp"
#include "texseg/features.hpp"
#include "texseg/filter_bank.hpp"
#include "texseg/image.hpp"
#include "texseg/metrics.hpp"
#include "texseg/partition.hpp"
#include "texseg/wavelets.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace texseg {

// ---- ground-truth masks -------------------------------------------------

/// Names of the eight built-in layouts (2 to 5 regions each). They are
/// approximate reproductions of classic mosaic ground truths.
const std::vector<std::string>& mask_names();
Partition make_mask(std::string_view name, std::size_t n);

// ---- synthetic textures -------------------------------------------------

/// 0.5 + amplitude * cos(frequency * (x cos t + y sin t) + phase).
Image oriented_sinusoid(std::size_t n, double frequency, double orientation, double amplitude = 0.25,
                        double phase = 0.0);

/// White noise shaped by a Gaussian spectral bump centered at `frequency`
/// along `orientation` (plus its mirror), rescaled to mean 0.5 and standard
/// deviation `stddev`, clipped to [0, 1].
Image filtered_noise(std::size_t n, double frequency, double orientation, double bandwidth, double stddev,
                     std::uint64_t seed);

// ---- mosaics --------------------------------------------------------------

struct MosaicSpec {
  Partition mask;
  std::vector<std::filesystem::path> texture_paths;  // one per label
  std::uint64_t seed = 0;  // picks crop offsets in larger textures
};

/// Pixel x takes texture[label(x)](x); the result is quantized to 8 bits.
std::pair<Image, Partition> compose_mosaic(const Partition& mask, const std::vector<Image>& textures);
std::pair<Image, Partition> compose_mosaic(const MosaicSpec& spec);

struct DatasetItem {
  std::string name;
  Image image;
  Partition truth;
};

/// `<name>.pgm` or `<name>.png` with its `<name>_gt.pgm`, sorted by name.
std::vector<DatasetItem> load_dataset(const std::filesystem::path& dir);
void save_dataset(const std::vector<DatasetItem>& items, const std::filesystem::path& dir);

/// Two-region mosaics of equal-power oriented sinusoids 30 degrees apart.
std::vector<DatasetItem> two_sinusoid_dataset(std::size_t count, std::size_t n, std::uint64_t seed);
/// Mosaics over all built-in masks with mixed sinusoid / filtered-noise
/// textures.
std::vector<DatasetItem> synthetic_dataset(std::size_t count, std::size_t n, std::uint64_t seed);

// ---- wavelet identifiers ------------------------------------------------

enum class WaveletKind {
  ewt_tensor,
  ewt_lp,
  ewt_curvelet,
  gabor,
  meyer,
  curvelet,
  decimated,
  undecimated,
  packet,
};

struct WaveletSpec {
  WaveletKind kind = WaveletKind::ewt_curvelet;
  int option = 1;      // curvelet option, Meyer scales or DWT levels
  WaveletFamily family = WaveletFamily::Daub4;
  std::string id;      // canonical identifier
};

/// Accepts EWT2DT, EWT2DLP, EWT2DC1..3 (and the short forms EWTT, EWTLP,
/// EWTC1..3), Gabor, Curvelet, Meyer_<s>, <Family>_<L> (decimated),
/// Undecimated_<Family>_<L> and Packet_<Family>_<L>.
WaveletSpec parse_wavelet(std::string_view id);
/// Identifiers of every family in the comparison grid.
std::vector<std::string> standard_wavelet_ids();

CoefficientStack run_transform(const Image& img, const WaveletSpec& spec);

// ---- pipeline -------------------------------------------------------------

/// Error raised by run_pipeline, tagged with the failing stage.
class PipelineError : public std::runtime_error {
public:
  PipelineError(std::string stage, const std::string& what);
  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

struct RunConfig {
  std::string wavelet = "EWT2DC1";
  PostProcessConfig post;
  ClusterConfig cluster;
  bool decompose_first = true;
  std::optional<DecompositionConfig> decomposition;  // default_params when empty
};

struct PipelineResult {
  Partition segmentation;
  MetricReport report;
};

/// Texture part of the image (or the image itself without decomposition).
Image pipeline_input(const Image& img, const RunConfig& cfg);

/// Transform, drop lowpass, post-process, cluster with k = the number of
/// ground-truth regions, evaluate. `input` is the output of pipeline_input.
PipelineResult segment_input(const Image& input, const Partition& truth, const RunConfig& cfg);
PipelineResult segment_stack(const CoefficientStack& stack, const Partition& truth, const RunConfig& cfg);

PipelineResult run_pipeline(const Image& img, const Partition& truth, const RunConfig& cfg);

// ---- benchmark -----------------------------------------------------------

struct BenchGrid {
  std::vector<std::string> wavelets{"EWT2DC1"};
  std::vector<PostMode> posts{PostMode::energy};
  std::vector<int> windows{19};
  std::vector<ClusterMethod> clusterers{ClusterMethod::kmeans};
  std::vector<Distance> distances{Distance::cityblock};
  bool decompose_first = true;
  std::uint64_t master_seed = 0;
  int threads = 1;
  std::string dataset_label = "dataset";

  std::size_t cell_count() const;
};

struct BenchCell {
  std::string wavelet;
  PostMode post = PostMode::energy;
  int window = 19;
  ClusterMethod cluster = ClusterMethod::kmeans;
  Distance distance = Distance::cityblock;

  std::string label() const;  // post/window/cluster/distance
};

struct BenchImageResult {
  std::size_t cell = 0;
  std::size_t image = 0;
  bool ok = true;
  std::string error;
  MetricReport report;
};

struct BenchResult {
  std::vector<BenchCell> cells;
  std::vector<std::string> images;
  std::vector<BenchImageResult> per_image;  // cell-major, image-minor
  std::vector<double> cell_mean;            // of MetricReport.mean over images
  std::vector<double> cell_std;             // population std
  std::vector<std::size_t> cell_ok;
  std::vector<double> cell_seconds;         // summed over images
  double wall_seconds = 0.0;
};

BenchResult run_benchmark(const std::vector<DatasetItem>& dataset, const BenchGrid& grid);
BenchResult run_benchmark(const std::filesystem::path& dataset_dir, const BenchGrid& grid);

/// "mean(std)" with two decimals, e.g. 87.24(7.94).
std::string format_mean_std(double mean, double stddev);

/// Writes results.csv (one row per cell), per_image.csv, table.csv,
/// table_window.csv, summary.csv and manifest.txt. Only manifest.txt holds
/// timings, so the CSVs are byte-identical across runs with equal seeds.
void write_bench_outputs(const BenchResult& r, const BenchGrid& grid, const std::filesystem::path& out_dir);

/// Summary table layout: header `wavelet,<dataset_label>`, one row per wavelet
/// with the mean(std) of the first option combination.
void write_summary_table(const BenchResult& r, const BenchGrid& grid, std::ostream& os);

/// Score-versus-window curves (one per wavelet) read from table_window.csv.
void write_window_plot_svg(const std::filesystem::path& table_window_csv, const std::filesystem::path& svg);

}  // namespace texseg
