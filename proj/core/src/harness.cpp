#include "texseg/harness.hpp"

#include "texseg/ewt.hpp"
#include "texseg/fourier.hpp"
#include "texseg/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#ifndef TEXSEG_VERSION
#define TEXSEG_VERSION "unknown"
#endif

namespace texseg {
namespace {

constexpr double kPi = std::numbers::pi;

std::string csv_safe(std::string s)
{
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r' || c == '"')
      c = c == ',' ? ';' : ' ';
  return s;
}

std::ofstream open_out(const std::filesystem::path& p)
{
  std::ofstream os(p, std::ios::binary);
  if (!os)
    throw std::runtime_error(fmt::format("cannot write '{}'", p.string()));
  return os;
}

bool ends_with(std::string_view s, std::string_view suffix)
{
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

// ---- textures ---------------------------------------------------------

Image oriented_sinusoid(std::size_t n, double frequency, double orientation, double amplitude, double phase)
{
  Image img(n, n);
  const double c = std::cos(orientation), s = std::sin(orientation);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x)
      img(x, y) = 0.5 + amplitude * std::cos(frequency * (static_cast<double>(x) * c + static_cast<double>(y) * s) + phase);
  return img;
}

Image filtered_noise(std::size_t n, double frequency, double orientation, double bandwidth, double stddev,
                     std::uint64_t seed)
{
  if (!(bandwidth > 0.0))
    throw std::invalid_argument("filtered_noise: bandwidth must be > 0");
  Rng rng(seed);
  Image noise(n, n);
  for (double& v : noise.pixels())
    v = rng.normal();
  Spectrum spec = forward_spectrum(noise);
  const double cx = frequency * std::cos(orientation), cy = frequency * std::sin(orientation);
  const double inv = 1.0 / (2.0 * bandwidth * bandwidth);
  for (std::size_t v = 0; v < n; ++v) {
    const double wy = bin_frequency(v, n);
    for (std::size_t u = 0; u < n; ++u) {
      const double wx = bin_frequency(u, n);
      const double a = (wx - cx) * (wx - cx) + (wy - cy) * (wy - cy);
      const double b = (wx + cx) * (wx + cx) + (wy + cy) * (wy + cy);
      spec(u, v) *= std::exp(-a * inv) + std::exp(-b * inv);
    }
  }
  Image img = inverse_spectrum(spec);
  const double mean = img.mean();
  double var = 0.0;
  for (double v : img.pixels())
    var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(img.size()));
  const double scale = sd > 0.0 ? stddev / sd : 0.0;
  for (double& v : img.pixels())
    v = std::clamp(0.5 + (v - mean) * scale, 0.0, 1.0);
  return img;
}

// ---- mosaics ------------------------------------------------------------

std::pair<Image, Partition> compose_mosaic(const Partition& mask, const std::vector<Image>& textures)
{
  const int k = mask.k();
  if (static_cast<int>(textures.size()) != k)
    throw std::invalid_argument(fmt::format("compose_mosaic: {} textures for {} labels", textures.size(), k));
  for (std::size_t t = 0; t < textures.size(); ++t)
    if (textures[t].width() < mask.width() || textures[t].height() < mask.height())
      throw std::invalid_argument(fmt::format("compose_mosaic: texture {} is {}x{}, smaller than the {}x{} mask", t,
                                              textures[t].width(), textures[t].height(), mask.width(), mask.height()));
  Image img(mask.width(), mask.height());
  for (std::size_t y = 0; y < mask.height(); ++y)
    for (std::size_t x = 0; x < mask.width(); ++x)
      img(x, y) = textures[static_cast<std::size_t>(mask(x, y))](x, y);
  return {quantize_8bit(img), mask};
}

std::pair<Image, Partition> compose_mosaic(const MosaicSpec& spec)
{
  Rng rng(spec.seed);
  std::vector<Image> textures;
  for (const auto& p : spec.texture_paths) {
    const Image t = load_image(p);
    if (t.width() < spec.mask.width() || t.height() < spec.mask.height())
      throw std::invalid_argument(fmt::format("compose_mosaic: texture '{}' is {}x{}, smaller than the {}x{} mask",
                                              p.string(), t.width(), t.height(), spec.mask.width(), spec.mask.height()));
    const std::size_t ox = rng.index(t.width() - spec.mask.width() + 1);
    const std::size_t oy = rng.index(t.height() - spec.mask.height() + 1);
    Image crop(spec.mask.width(), spec.mask.height());
    for (std::size_t y = 0; y < crop.height(); ++y)
      for (std::size_t x = 0; x < crop.width(); ++x)
        crop(x, y) = t(x + ox, y + oy);
    textures.push_back(std::move(crop));
  }
  return compose_mosaic(spec.mask, textures);
}

std::vector<DatasetItem> load_dataset(const std::filesystem::path& dir)
{
  if (!std::filesystem::is_directory(dir))
    throw std::invalid_argument(fmt::format("dataset directory '{}' does not exist", dir.string()));
  std::vector<std::filesystem::path> images;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (!e.is_regular_file())
      continue;
    const auto p = e.path();
    const auto ext = p.extension().string();
    if ((ext == ".pgm" || ext == ".png") && !ends_with(p.stem().string(), "_gt"))
      images.push_back(p);
  }
  std::sort(images.begin(), images.end());
  std::vector<DatasetItem> out;
  for (const auto& p : images) {
    const auto gt = dir / (p.stem().string() + "_gt.pgm");
    if (!std::filesystem::exists(gt))
      continue;
    DatasetItem item{p.stem().string(), load_image(p), load_partition(gt)};
    if (item.truth.width() != item.image.width() || item.truth.height() != item.image.height())
      throw std::invalid_argument(fmt::format("dataset: '{}' and its ground truth differ in size", p.string()));
    out.push_back(std::move(item));
  }
  if (out.empty())
    throw std::invalid_argument(fmt::format("empty dataset: no image with a _gt.pgm ground truth in '{}'", dir.string()));
  return out;
}

void save_dataset(const std::vector<DatasetItem>& items, const std::filesystem::path& dir)
{
  std::filesystem::create_directories(dir);
  for (const auto& it : items) {
    save_pgm(it.image, dir / (it.name + ".pgm"));
    save_partition(it.truth, dir / (it.name + "_gt.pgm"));
  }
}

std::vector<DatasetItem> two_sinusoid_dataset(std::size_t count, std::size_t n, std::uint64_t seed)
{
  std::vector<DatasetItem> out;
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, 0x7357, i));
    const Partition mask = make_mask(i % 2 == 0 ? "halves" : "disk", n);
    const double theta = rng.uniform() * kPi;
    const double freq = (0.35 + 0.25 * rng.uniform()) * kPi;
    std::vector<Image> tex;
    for (int r = 0; r < 2; ++r)
      tex.push_back(oriented_sinusoid(n, freq, theta + r * kPi / 6.0, 0.2, 2.0 * kPi * rng.uniform()));
    auto [img, gt] = compose_mosaic(mask, tex);
    out.push_back({fmt::format("twosin_{:03d}", i), std::move(img), std::move(gt)});
  }
  return out;
}

std::vector<DatasetItem> synthetic_dataset(std::size_t count, std::size_t n, std::uint64_t seed)
{
  std::vector<DatasetItem> out;
  const auto& names = mask_names();
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, 0x5e7, i));
    const Partition mask = make_mask(names[i % names.size()], n);
    const int k = mask.k();
    const double base = rng.uniform() * kPi;
    std::vector<Image> tex;
    for (int r = 0; r < k; ++r) {
      const double theta = base + r * kPi / k;
      const double freq = (0.3 + 0.4 * rng.uniform()) * kPi;
      if ((r + static_cast<int>(i)) % 3 == 2)
        tex.push_back(filtered_noise(n, freq, theta, 0.08 * kPi, 0.12, rng.next()));
      else
        tex.push_back(oriented_sinusoid(n, freq, theta, 0.2, 2.0 * kPi * rng.uniform()));
    }
    auto [img, gt] = compose_mosaic(mask, tex);
    out.push_back({fmt::format("synth_{:03d}_{}", i, names[i % names.size()]), std::move(img), std::move(gt)});
  }
  return out;
}

// ---- wavelet identifiers ------------------------------------------------

namespace {

int parse_level(std::string_view s, std::string_view id)
{
  if (s.empty() || s.size() > 2 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw std::invalid_argument(fmt::format("unknown wavelet '{}': bad level '{}'", id, s));
  return std::stoi(std::string(s));
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

WaveletSpec parse_wavelet(std::string_view id)
{
  WaveletSpec w;
  w.id = std::string(id);
  if (id == "EWT2DT" || id == "EWTT") {
    w.kind = WaveletKind::ewt_tensor;
    return w;
  }
  if (id == "EWT2DLP" || id == "EWTLP") {
    w.kind = WaveletKind::ewt_lp;
    return w;
  }
  for (int opt = 1; opt <= 3; ++opt) {
    if (id == fmt::format("EWT2DC{}", opt) || id == fmt::format("EWTC{}", opt)) {
      w.kind = WaveletKind::ewt_curvelet;
      w.option = opt;
      return w;
    }
  }
  if (id == "Gabor") {
    w.kind = WaveletKind::gabor;
    return w;
  }
  if (id == "Curvelet") {
    w.kind = WaveletKind::curvelet;
    return w;
  }
  const auto parts = split(id, '_');
  if (parts.size() == 2 && parts[0] == "Meyer") {
    w.kind = WaveletKind::meyer;
    w.option = parse_level(parts[1], id);
    if (w.option < 1 || w.option > 8)
      throw std::invalid_argument(fmt::format("unknown wavelet '{}': Meyer scales must be in [1, 8]", id));
    return w;
  }
  try {
    if (parts.size() == 2) {
      w.kind = WaveletKind::decimated;
      w.family = parse_wavelet_family(parts[0]);
      w.option = parse_level(parts[1], id);
    } else if (parts.size() == 3 && (parts[0] == "Undecimated" || parts[0] == "Packet")) {
      w.kind = parts[0] == "Packet" ? WaveletKind::packet : WaveletKind::undecimated;
      w.family = parse_wavelet_family(parts[1]);
      w.option = parse_level(parts[2], id);
    } else {
      throw std::invalid_argument("unrecognized form");
    }
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(fmt::format("unknown wavelet '{}' ({})", id, e.what()));
  }
  if (w.option < 1 || w.option > 6)
    throw std::invalid_argument(fmt::format("unknown wavelet '{}': levels must be in [1, 6]", id));
  return w;
}

std::vector<std::string> standard_wavelet_ids()
{
  std::vector<std::string> ids{"EWT2DT", "EWT2DLP", "EWT2DC1", "EWT2DC2", "EWT2DC3",
                               "Gabor",  "Curvelet", "Meyer_2", "Meyer_3", "Meyer_4"};
  for (auto f : kWaveletFamilies)
    for (int l = 2; l <= 4; ++l)
      ids.push_back(fmt::format("{}_{}", to_string(f), l));
  return ids;
}

CoefficientStack run_transform(const Image& img, const WaveletSpec& spec)
{
  switch (spec.kind) {
    case WaveletKind::ewt_tensor: return ewt2d_tensor(img).stack;
    case WaveletKind::ewt_lp: return ewt2d_lp(img).stack;
    case WaveletKind::ewt_curvelet: return ewt2d_curvelet(img, spec.option).stack;
    case WaveletKind::gabor: return gabor_bank(img);
    case WaveletKind::meyer: return meyer_lp(img, spec.option);
    case WaveletKind::curvelet: return prescribed_curvelet(img);
    case WaveletKind::decimated: return dwt_decimated(img, spec.family, spec.option);
    case WaveletKind::undecimated: return dwt_undecimated(img, spec.family, spec.option);
    case WaveletKind::packet: return packet_best_basis(img, spec.family, spec.option);
  }
  throw std::invalid_argument("run_transform: unknown wavelet kind");
}

// ---- pipeline -------------------------------------------------------------

PipelineError::PipelineError(std::string stage, const std::string& what)
    : std::runtime_error(fmt::format("{} stage: {}", stage, what)), stage_(std::move(stage))
{
}

namespace {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f())
{
  try {
    return f();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(name, e.what());
  }
}

}  // namespace

Image pipeline_input(const Image& img, const RunConfig& cfg)
{
  if (!cfg.decompose_first)
    return img;
  return stage("decompose", [&] {
    const DecompositionConfig dc = cfg.decomposition ? *cfg.decomposition : default_params(img);
    return decompose(img, dc).texture;
  });
}

PipelineResult segment_stack(const CoefficientStack& stack, const Partition& truth, const RunConfig& cfg)
{
  const FeatureField features = stage("features", [&] {
    if (stack.size() < 2)
      throw std::runtime_error("the transform produced only the lowpass band");
    return post_process(stack, cfg.post);
  });
  PipelineResult out;
  out.segmentation = stage("cluster", [&] {
    ClusterConfig c = cfg.cluster;
    c.k = static_cast<int>(truth.region_count());
    return cluster(features, c);
  });
  out.report = stage("evaluate", [&] { return report(out.segmentation, truth); });
  return out;
}

PipelineResult segment_input(const Image& input, const Partition& truth, const RunConfig& cfg)
{
  const CoefficientStack stack = stage("transform", [&] { return run_transform(input, parse_wavelet(cfg.wavelet)); });
  return segment_stack(stack, truth, cfg);
}

PipelineResult run_pipeline(const Image& img, const Partition& truth, const RunConfig& cfg)
{
  stage("input", [&] {
    require_pipeline_image(img, "run_pipeline");
    if (truth.width() != img.width() || truth.height() != img.height())
      throw std::invalid_argument("ground truth and image differ in size");
    cfg.post.validate();
    parse_wavelet(cfg.wavelet);
    return 0;
  });
  return segment_input(pipeline_input(img, cfg), truth, cfg);
}

// ---- benchmark -----------------------------------------------------------

std::size_t BenchGrid::cell_count() const
{
  return wavelets.size() * posts.size() * windows.size() * clusterers.size() * distances.size();
}

std::string BenchCell::label() const
{
  return fmt::format("{}/{}/{}/{}", to_string(post), window, to_string(cluster), to_string(distance));
}

std::string format_mean_std(double mean, double stddev)
{
  return fmt::format("{:.2f}({:.2f})", mean, stddev);
}

BenchResult run_benchmark(const std::vector<DatasetItem>& dataset, const BenchGrid& grid)
{
  if (dataset.empty())
    throw std::invalid_argument("run_benchmark: empty dataset");
  if (grid.cell_count() == 0)
    throw std::invalid_argument("run_benchmark: every option list needs at least one value");
  for (const auto& w : grid.wavelets)
    parse_wavelet(w);
  for (int win : grid.windows)
    PostProcessConfig{PostMode::energy, win, true}.validate();

  BenchResult r;
  for (const auto& w : grid.wavelets)
    for (auto p : grid.posts)
      for (int win : grid.windows)
        for (auto c : grid.clusterers)
          for (auto d : grid.distances)
            r.cells.push_back({w, p, win, c, d});
  for (const auto& item : dataset)
    r.images.push_back(item.name);
  const std::size_t nc = r.cells.size(), ni = dataset.size();
  r.per_image.resize(nc * ni);
  r.cell_seconds.assign(nc, 0.0);

  std::mutex mu;
  std::exception_ptr fatal;
  std::atomic<std::size_t> next{0};
  const auto t0 = std::chrono::steady_clock::now();

  auto job = [&](std::size_t i) {
    const auto& item = dataset[i];
    std::vector<double> seconds(nc, 0.0);
    auto record_error = [&](std::size_t c, const std::string& msg) {
      auto& res = r.per_image[c * ni + i];
      res = {c, i, false, msg, {}};
    };
    RunConfig base;
    base.decompose_first = grid.decompose_first;
    std::optional<Image> input;
    std::string input_error;
    const auto td = std::chrono::steady_clock::now();
    try {
      input = pipeline_input(item.image, base);
    } catch (const std::exception& e) {
      input_error = e.what();
    }
    const double decomp_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - td).count();

    std::size_t c = 0;
    for (std::size_t wi = 0; wi < grid.wavelets.size(); ++wi) {
      const std::size_t per_wavelet = nc / grid.wavelets.size();
      const std::size_t first = wi * per_wavelet;
      std::optional<CoefficientStack> stack;
      std::string stack_error = input_error;
      const auto tt = std::chrono::steady_clock::now();
      if (input) {
        try {
          RunConfig rc = base;
          rc.wavelet = grid.wavelets[wi];
          stack = stage("transform", [&] { return run_transform(*input, parse_wavelet(rc.wavelet)); });
        } catch (const std::exception& e) {
          stack_error = e.what();
        }
      }
      const double transform_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - tt).count();
      for (c = first; c < first + per_wavelet; ++c) {
        const BenchCell& cell = r.cells[c];
        seconds[c] += (decomp_s + transform_s) / static_cast<double>(per_wavelet);
        if (!stack) {
          record_error(c, stack_error);
          continue;
        }
        const auto tc = std::chrono::steady_clock::now();
        try {
          RunConfig rc = base;
          rc.wavelet = cell.wavelet;
          rc.post = {cell.post, cell.window, true};
          rc.cluster.method = cell.cluster;
          rc.cluster.distance = cell.distance;
          rc.cluster.seed = derive_seed(grid.master_seed, c, i);
          const PipelineResult pr = segment_stack(*stack, item.truth, rc);
          r.per_image[c * ni + i] = {c, i, true, {}, pr.report};
        } catch (const std::exception& e) {
          record_error(c, e.what());
        }
        seconds[c] += std::chrono::duration<double>(std::chrono::steady_clock::now() - tc).count();
      }
    }
    std::lock_guard lock(mu);
    for (std::size_t k = 0; k < nc; ++k)
      r.cell_seconds[k] += seconds[k];
  };

  const std::size_t nthreads = std::clamp<std::size_t>(grid.threads < 1 ? 1 : static_cast<std::size_t>(grid.threads), 1, ni);
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= ni)
        return;
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!fatal)
          fatal = std::current_exception();
      }
    }
  };
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t)
      pool.emplace_back(worker);
    for (auto& t : pool)
      t.join();
  }
  if (fatal)
    std::rethrow_exception(fatal);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  r.cell_mean.assign(nc, 0.0);
  r.cell_std.assign(nc, 0.0);
  r.cell_ok.assign(nc, 0);
  for (std::size_t c = 0; c < nc; ++c) {
    double s = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < ni; ++i) {
      const auto& res = r.per_image[c * ni + i];
      if (res.ok) {
        s += res.report.mean;
        ++k;
      }
    }
    r.cell_ok[c] = k;
    if (k == 0) {
      r.cell_mean[c] = std::nan("");
      r.cell_std[c] = std::nan("");
      continue;
    }
    const double mean = s / static_cast<double>(k);
    double v = 0.0;
    for (std::size_t i = 0; i < ni; ++i) {
      const auto& res = r.per_image[c * ni + i];
      if (res.ok)
        v += (res.report.mean - mean) * (res.report.mean - mean);
    }
    r.cell_mean[c] = mean;
    r.cell_std[c] = std::sqrt(v / static_cast<double>(k));
  }
  return r;
}

BenchResult run_benchmark(const std::filesystem::path& dataset_dir, const BenchGrid& grid)
{
  return run_benchmark(load_dataset(dataset_dir), grid);
}

namespace {

std::string cell_text(double mean, double sd)
{
  if (std::isnan(mean))
    return "NA";
  return format_mean_std(mean, sd);
}

// cells of the first wavelet define the column order of table.csv
std::vector<std::string> option_labels(const BenchResult& r, std::size_t n_wavelets)
{
  std::vector<std::string> labels;
  const std::size_t per = r.cells.size() / n_wavelets;
  for (std::size_t c = 0; c < per; ++c)
    labels.push_back(r.cells[c].label());
  return labels;
}

}  // namespace

void write_summary_table(const BenchResult& r, const BenchGrid& grid, std::ostream& os)
{
  const std::size_t per = r.cells.size() / grid.wavelets.size();
  os << "wavelet," << csv_safe(grid.dataset_label) << "\n";
  for (std::size_t w = 0; w < grid.wavelets.size(); ++w) {
    const std::size_t c = w * per;
    os << csv_safe(grid.wavelets[w]) << "," << cell_text(r.cell_mean[c], r.cell_std[c]) << "\n";
  }
}

void write_bench_outputs(const BenchResult& r, const BenchGrid& grid, const std::filesystem::path& out_dir)
{
  std::filesystem::create_directories(out_dir);
  const std::size_t nc = r.cells.size(), ni = r.images.size();
  {
    auto os = open_out(out_dir / "results.csv");
    os << "wavelet,post,window,cluster,distance,images,ok,mean,std\n";
    for (std::size_t c = 0; c < nc; ++c) {
      const auto& cell = r.cells[c];
      os << fmt::format("{},{},{},{},{},{},{},{:.4f},{:.4f}\n", csv_safe(cell.wavelet), to_string(cell.post),
                        cell.window, to_string(cell.cluster), to_string(cell.distance), ni, r.cell_ok[c],
                        r.cell_mean[c], r.cell_std[c]);
    }
  }
  {
    auto os = open_out(out_dir / "per_image.csv");
    os << "image,wavelet,post,window,cluster,distance,status,nvoi,sdhd,vd,ssc,bgm,bce,mean\n";
    for (std::size_t c = 0; c < nc; ++c)
      for (std::size_t i = 0; i < ni; ++i) {
        const auto& cell = r.cells[c];
        const auto& res = r.per_image[c * ni + i];
        const auto& m = res.report;
        os << fmt::format("{},{},{},{},{},{},{},", csv_safe(r.images[i]), csv_safe(cell.wavelet), to_string(cell.post),
                          cell.window, to_string(cell.cluster), to_string(cell.distance),
                          res.ok ? std::string("ok") : csv_safe("error: " + res.error));
        if (res.ok)
          os << fmt::format("{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f}\n", m.nvoi, m.sdhd, m.vd, m.ssc, m.bgm,
                            m.bce, m.mean);
        else
          os << "NA,NA,NA,NA,NA,NA,NA\n";
      }
  }
  const std::size_t nw = grid.wavelets.size();
  const std::size_t per = nc / nw;
  {
    auto os = open_out(out_dir / "table.csv");
    os << "wavelet";
    for (const auto& l : option_labels(r, nw))
      os << "," << l;
    os << "\n";
    for (std::size_t w = 0; w < nw; ++w) {
      os << csv_safe(grid.wavelets[w]);
      for (std::size_t c = w * per; c < (w + 1) * per; ++c)
        os << "," << cell_text(r.cell_mean[c], r.cell_std[c]);
      os << "\n";
    }
  }
  {
    auto os = open_out(out_dir / "table_window.csv");
    os << "wavelet";
    for (int win : grid.windows)
      os << "," << win;
    os << "\n";
    for (std::size_t w = 0; w < nw; ++w) {
      os << csv_safe(grid.wavelets[w]);
      for (int win : grid.windows) {
        double s = 0.0;
        std::size_t k = 0;
        for (std::size_t c = w * per; c < (w + 1) * per; ++c)
          if (r.cells[c].window == win && !std::isnan(r.cell_mean[c])) {
            s += r.cell_mean[c];
            ++k;
          }
        os << "," << (k ? fmt::format("{:.2f}", s / static_cast<double>(k)) : std::string("NA"));
      }
      os << "\n";
    }
  }
  {
    auto os = open_out(out_dir / "summary.csv");
    write_summary_table(r, grid, os);
  }
  {
    auto os = open_out(out_dir / "manifest.txt");
    os << "texseg " << TEXSEG_VERSION << "\n";
    os << "dataset: " << grid.dataset_label << " (" << ni << " images)\n";
    os << "master_seed: " << grid.master_seed << "\n";
    os << "threads: " << grid.threads << "\n";
    os << "decompose_first: " << (grid.decompose_first ? "true" : "false") << "\n";
    os << "cells: " << nc << "\n";
    os << "wall_seconds: " << fmt::format("{:.3f}", r.wall_seconds) << "\n";
    os << "note: built-in ground-truth masks are approximate reproductions of the classic mosaic layouts\n";
    os << "cell timings (seconds summed over images):\n";
    for (std::size_t c = 0; c < nc; ++c)
      os << fmt::format("  {} {} {:.3f}\n", r.cells[c].wavelet, r.cells[c].label(), r.cell_seconds[c]);
    std::size_t failures = 0;
    for (const auto& res : r.per_image)
      failures += res.ok ? 0 : 1;
    os << "failures: " << failures << "\n";
    for (const auto& res : r.per_image)
      if (!res.ok)
        os << "  " << r.images[res.image] << " " << r.cells[res.cell].wavelet << " " << r.cells[res.cell].label()
           << ": " << res.error << "\n";
  }
}

void write_window_plot_svg(const std::filesystem::path& table_window_csv, const std::filesystem::path& svg)
{
  std::ifstream is(table_window_csv);
  if (!is)
    throw std::runtime_error(fmt::format("cannot read '{}'", table_window_csv.string()));
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("plot: empty table");
  std::vector<double> windows;
  {
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    while (std::getline(ss, cell, ','))
      windows.push_back(std::stod(cell));
  }
  if (windows.empty())
    throw std::runtime_error("plot: table has no window columns");
  struct Series {
    std::string name;
    std::vector<double> y;
  };
  std::vector<Series> series;
  double lo = 100.0, hi = 0.0;
  while (std::getline(is, line)) {
    if (line.empty())
      continue;
    std::stringstream ss(line);
    Series s;
    std::getline(ss, s.name, ',');
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const double v = cell == "NA" ? std::nan("") : std::stod(cell);
      s.y.push_back(v);
      if (!std::isnan(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    series.push_back(std::move(s));
  }
  if (hi < lo) {
    lo = 0.0;
    hi = 100.0;
  }
  lo = std::floor(lo / 5.0) * 5.0;
  hi = std::min(100.0, std::ceil(hi / 5.0) * 5.0);
  if (hi <= lo)
    hi = lo + 5.0;
  const double W = 640, H = 400, ml = 60, mr = 150, mt = 20, mb = 50;
  const double xmin = windows.front(), xmax = windows.back() > windows.front() ? windows.back() : windows.front() + 1;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - lo) / (hi - lo) * (H - mt - mb); };
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  auto os = open_out(svg);
  os << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" font-size=\"12\">\n", W, H);
  os << fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", W, H);
  os << fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", ml, H - mb, W - mr, H - mb);
  os << fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", ml, mt, ml, H - mb);
  for (double x : windows)
    os << fmt::format("<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", px(x), H - mb + 16, x);
  for (double y = lo; y <= hi + 1e-9; y += 5.0)
    os << fmt::format("<text x=\"{}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n", ml - 6, py(y) + 4, y);
  os << fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">window size</text>\n", (ml + W - mr) / 2, H - 12);
  os << fmt::format("<text x=\"14\" y=\"{}\" transform=\"rotate(-90 14 {})\" text-anchor=\"middle\">mean score</text>\n",
                    (mt + H - mb) / 2, (mt + H - mb) / 2);
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* col = colors[s % 10];
    std::string pts;
    for (std::size_t j = 0; j < series[s].y.size() && j < windows.size(); ++j)
      if (!std::isnan(series[s].y[j]))
        pts += fmt::format("{:.1f},{:.1f} ", px(windows[j]), py(series[s].y[j]));
    os << fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", col, pts);
    os << fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", W - mr + 10, mt + 16 * (s + 1), col,
                      series[s].name);
  }
  os << "</svg>\n";
}

}  // namespace texseg
