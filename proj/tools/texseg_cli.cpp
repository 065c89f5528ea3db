// texseg command line: mosaic, decompose, transform, segment, evaluate,
// bench, plot.
#include "texseg/ewt.hpp"
#include "texseg/harness.hpp"
#include "texseg/rng.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace texseg;

namespace {

struct Global {
  std::uint64_t seed = 0;
  int threads = 1;
  fs::path out = ".";
};

std::ofstream open_text(const fs::path& p)
{
  std::ofstream os(p);
  if (!os)
    throw std::runtime_error(fmt::format("cannot write '{}'", p.string()));
  return os;
}

void print_report_csv(const MetricReport& m, std::ostream& os)
{
  os << "nvoi,sdhd,vd,ssc,bgm,bce,mean\n";
  os << fmt::format("{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f}\n", m.nvoi, m.sdhd, m.vd, m.ssc, m.bgm, m.bce,
                    m.mean);
}

std::optional<FourierPartition> ewt_partition(const Image& img, const WaveletSpec& w)
{
  switch (w.kind) {
    case WaveletKind::ewt_tensor: return ewt2d_tensor(img).partition();
    case WaveletKind::ewt_lp: return ewt2d_lp(img).partition();
    case WaveletKind::ewt_curvelet: return ewt2d_curvelet(img, w.option).partition();
    default: return std::nullopt;
  }
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Texture segmentation with empirical and classic wavelets"};
  app.set_version_flag("--version", std::string(TEXSEG_VERSION));
  app.set_config("--config", "", "flat key=value file mirroring the command line flags");
  app.require_subcommand(1);

  Global g;
  app.add_option("--seed", g.seed, "master seed")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads for bench")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--out", g.out, "output directory")->capture_default_str();

  // mosaic
  auto* mosaic = app.add_subcommand("mosaic", "compose a mosaic or a synthetic dataset");
  std::string mask_name = "halves";
  fs::path mask_file;
  std::vector<fs::path> textures;
  std::size_t size = 512;
  std::string dataset_kind;
  std::size_t count = 20;
  mosaic->add_option("--mask", mask_name, "built-in mask: " + fmt::format("{}", fmt::join(mask_names(), ", ")))
      ->capture_default_str();
  mosaic->add_option("--mask-file", mask_file, "label map (PGM) instead of a built-in mask");
  mosaic->add_option("--texture", textures, "one texture image per region");
  mosaic->add_option("--size", size, "mosaic side for built-in masks")->capture_default_str();
  mosaic->add_option("--dataset", dataset_kind, "generate a dataset instead: two_sinusoid or synthetic")
      ->check(CLI::IsMember({"two_sinusoid", "synthetic"}));
  mosaic->add_option("--count", count, "dataset image count")->capture_default_str();

  // decompose
  auto* dec = app.add_subcommand("decompose", "cartoon + texture decomposition");
  fs::path dec_in;
  double mu = 0.0, lambda = 0.0, tol = 1e-4;
  int iters = 200;
  dec->add_option("image", dec_in)->required()->check(CLI::ExistingFile);
  dec->add_option("--mu", mu, "G-norm weight (default N/2)");
  dec->add_option("--lambda", lambda, "fidelity weight (default from the first detected radius)");
  dec->add_option("--iters", iters, "outer iterations")->capture_default_str();
  dec->add_option("--tol", tol, "relative change stopping tolerance")->capture_default_str();

  // transform
  auto* tr = app.add_subcommand("transform", "wavelet transform, one image per band");
  fs::path tr_in;
  std::string tr_wavelet = "EWT2DC1";
  tr->add_option("image", tr_in)->required()->check(CLI::ExistingFile);
  tr->add_option("--wavelet", tr_wavelet, "wavelet id")->capture_default_str();

  // segment
  auto* seg = app.add_subcommand("segment", "full pipeline on one image");
  fs::path seg_in, seg_gt;
  int seg_k = 0;
  RunConfig rc;
  std::string post = "energy", cl = "kmeans", dist = "cityblock";
  bool no_decompose = false;
  seg->add_option("image", seg_in)->required()->check(CLI::ExistingFile);
  seg->add_option("--gt", seg_gt, "ground truth label map; gives k and enables scoring")->check(CLI::ExistingFile);
  seg->add_option("--k", seg_k, "class count when no ground truth is given");
  seg->add_option("--wavelet", rc.wavelet, "wavelet id")->capture_default_str();
  seg->add_option("--post", post, "energy, entropy or lbp")->capture_default_str();
  seg->add_option("--window", rc.post.window, "local window (odd)")->capture_default_str();
  seg->add_option("--cluster", cl, "kmeans or nystrom")->capture_default_str();
  seg->add_option("--distance", dist, "sqeuclidean, cityblock, cosine or correlation")->capture_default_str();
  seg->add_flag("--no-decompose", no_decompose, "segment the image itself instead of its texture part");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "score a segmentation against a ground truth");
  fs::path ev_seg, ev_gt;
  ev->add_option("segmentation", ev_seg)->required()->check(CLI::ExistingFile);
  ev->add_option("truth", ev_gt)->required()->check(CLI::ExistingFile);

  // bench
  auto* bench = app.add_subcommand("bench", "option-grid sweep over a dataset");
  fs::path bench_dir;
  std::string generate;
  std::size_t gen_count = 20, gen_size = 256;
  BenchGrid grid;
  std::vector<std::string> posts{"energy"}, clusterers{"kmeans"}, distances{"cityblock"};
  bool bench_no_decompose = false, all_wavelets = false;
  bench->add_option("--dataset", bench_dir, "directory of <name>.pgm + <name>_gt.pgm");
  bench->add_option("--generate", generate, "use a generated set: two_sinusoid or synthetic")
      ->check(CLI::IsMember({"two_sinusoid", "synthetic"}));
  bench->add_option("--count", gen_count, "generated image count")->capture_default_str();
  bench->add_option("--size", gen_size, "generated image side")->capture_default_str();
  bench->add_option("--wavelets", grid.wavelets, "wavelet ids")->delimiter(',')->capture_default_str();
  bench->add_flag("--all-wavelets", all_wavelets, "sweep every standard wavelet id");
  bench->add_option("--posts", posts, "post-processing modes")->delimiter(',')->capture_default_str();
  bench->add_option("--windows", grid.windows, "window sizes")->delimiter(',')->capture_default_str();
  bench->add_option("--clusterers", clusterers, "clustering methods")->delimiter(',')->capture_default_str();
  bench->add_option("--distances", distances, "distances")->delimiter(',')->capture_default_str();
  bench->add_option("--label", grid.dataset_label, "dataset column name in summary.csv")->capture_default_str();
  bench->add_flag("--no-decompose", bench_no_decompose, "skip the cartoon + texture step");

  // plot
  auto* plot = app.add_subcommand("plot", "score-versus-window SVG from table_window.csv");
  fs::path plot_in, plot_svg;
  plot->add_option("table", plot_in)->required()->check(CLI::ExistingFile);
  plot->add_option("--svg", plot_svg, "output file (default <out>/window_plot.svg)");

  CLI11_PARSE(app, argc, argv);


  try {
    fs::create_directories(g.out);

    if (*mosaic) {
      if (!dataset_kind.empty()) {
        const auto items = dataset_kind == "two_sinusoid" ? two_sinusoid_dataset(count, size, g.seed)
                                                          : synthetic_dataset(count, size, g.seed);
        save_dataset(items, g.out);
        std::cout << fmt::format("wrote {} mosaics to {}\n", items.size(), g.out.string());
        return 0;
      }
      const Partition mask = mask_file.empty() ? make_mask(mask_name, size) : load_partition(mask_file);
      std::pair<Image, Partition> result;
      if (textures.empty()) {
        // synthetic textures, one orientation per region
        Rng rng(g.seed);
        const double base = rng.uniform() * 3.141592653589793;
        std::vector<Image> tex;
        for (int r = 0; r < mask.k(); ++r)
          tex.push_back(oriented_sinusoid(mask.width(), (0.3 + 0.4 * rng.uniform()) * 3.141592653589793,
                                          base + r * 3.141592653589793 / mask.k(), 0.2, rng.uniform() * 6.283185307179586));
        if (!mask.width() || mask.width() != mask.height())
          throw std::invalid_argument("synthetic textures need a square mask");
        result = compose_mosaic(mask, tex);
      } else {
        result = compose_mosaic(MosaicSpec{mask, textures, g.seed});
      }
      save_pgm(result.first, g.out / "mosaic.pgm");
      save_partition(result.second, g.out / "mosaic_gt.pgm");
      std::cout << fmt::format("wrote {} and {} ({} regions)\n", (g.out / "mosaic.pgm").string(),
                               (g.out / "mosaic_gt.pgm").string(), result.second.region_count());
      return 0;
    }

    if (*dec) {
      const Image img = load_image(dec_in);
      DecompositionConfig cfg = default_params(img);
      if (mu > 0)
        cfg.mu = mu;
      if (lambda > 0)
        cfg.lambda = lambda;
      cfg.max_outer_iters = iters;
      cfg.tol = tol;
      const DecompositionResult r = decompose(img, cfg);
      const DisplayMap du = display_map(r.cartoon), dv = display_map(r.texture);
      save_pgm(apply_display_map(r.cartoon, du), g.out / "u.pgm");
      save_pgm(apply_display_map(r.texture, dv), g.out / "v.pgm");
      auto os = open_text(g.out / "decomposition.txt");
      os << fmt::format("mu={}\nlambda={}\niterations={}\nresidual_norm={}\n", cfg.mu, cfg.lambda, r.iterations_used,
                        r.residual_norm);
      os << fmt::format("u_display_offset={}\nu_display_scale={}\n", du.offset, du.scale);
      os << fmt::format("v_display_offset={}\nv_display_scale={}\n", dv.offset, dv.scale);
      for (std::size_t i = 0; i < r.objective.size(); ++i)
        os << fmt::format("objective[{}]={}\n", i, r.objective[i]);
      std::cout << fmt::format("{} iterations, v display = (v - {:.6g}) * {:.6g}\n", r.iterations_used, dv.offset,
                               dv.scale);
      return 0;
    }

    if (*tr) {
      const Image img = load_image(tr_in);
      const WaveletSpec w = parse_wavelet(tr_wavelet);
      const CoefficientStack stack = run_transform(img, w);
      auto os = open_text(g.out / "bands.csv");
      os << "band,file,lowpass,display_offset,display_scale\n";
      for (std::size_t b = 0; b < stack.size(); ++b) {
        const auto name = fmt::format("band_{:03d}.pgm", b);
        const DisplayMap m = display_map(stack.bands[b]);
        save_pgm(apply_display_map(stack.bands[b], m), g.out / name);
        os << fmt::format("{},{},{},{},{}\n", b, name, static_cast<int>(b) == stack.lowpass_index ? 1 : 0, m.offset,
                          m.scale);
      }
      if (auto p = ewt_partition(img, w)) {
        auto ps = open_text(g.out / "partition.csv");
        write_partition_csv(*p, ps);
      }
      std::cout << fmt::format("{}: {} bands written to {}\n", w.id, stack.size(), g.out.string());
      return 0;
    }

    if (*seg) {
      const Image img = load_image(seg_in);
      rc.post.mode = parse_post_mode(post);
      rc.cluster.method = parse_cluster_method(cl);
      rc.cluster.distance = parse_distance(dist);
      rc.cluster.seed = g.seed;
      rc.decompose_first = !no_decompose;
      if (!seg_gt.empty()) {
        const Partition truth = load_partition(seg_gt);
        const PipelineResult r = run_pipeline(img, truth, rc);
        save_partition(r.segmentation, g.out / "segmentation.pgm");
        print_report_csv(r.report, std::cout);
        return 0;
      }
      if (seg_k < 2)
        throw std::invalid_argument("segment: give --gt or --k >= 2");
      const Image input = pipeline_input(img, rc);
      const CoefficientStack stack = run_transform(input, parse_wavelet(rc.wavelet));
      if (stack.size() < 2)
        throw std::runtime_error("the transform produced only the lowpass band");
      rc.cluster.k = seg_k;
      const Partition s = cluster(post_process(stack, rc.post), rc.cluster);
      save_partition(s, g.out / "segmentation.pgm");
      std::cout << fmt::format("wrote {}\n", (g.out / "segmentation.pgm").string());
      return 0;
    }

    if (*ev) {
      print_report_csv(report(load_partition(ev_seg), load_partition(ev_gt)), std::cout);
      return 0;
    }

    if (*bench) {
      grid.master_seed = g.seed;
      grid.threads = g.threads;
      grid.decompose_first = !bench_no_decompose;
      if (all_wavelets)
        grid.wavelets = standard_wavelet_ids();
      grid.posts.clear();
      for (const auto& p : posts)
        grid.posts.push_back(parse_post_mode(p));
      grid.clusterers.clear();
      for (const auto& c : clusterers)
        grid.clusterers.push_back(parse_cluster_method(c));
      grid.distances.clear();
      for (const auto& d : distances)
        grid.distances.push_back(parse_distance(d));
      std::vector<DatasetItem> data;
      if (!generate.empty())
        data = generate == "two_sinusoid" ? two_sinusoid_dataset(gen_count, gen_size, g.seed)
                                          : synthetic_dataset(gen_count, gen_size, g.seed);
      else if (!bench_dir.empty())
        data = load_dataset(bench_dir);
      else
        throw std::invalid_argument("bench: give --dataset or --generate");
      const BenchResult r = run_benchmark(data, grid);
      write_bench_outputs(r, grid, g.out);
      write_summary_table(r, grid, std::cout);
      return 0;
    }

    if (*plot) {
      const fs::path svg = plot_svg.empty() ? g.out / "window_plot.svg" : plot_svg;
      write_window_plot_svg(plot_in, svg);
      std::cout << fmt::format("wrote {}\n", svg.string());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
