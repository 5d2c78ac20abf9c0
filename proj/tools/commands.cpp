#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "slsc/metrics.hpp"
#include "slsc/synthdata.hpp"

namespace slsc::cli {
namespace {

using nlohmann::json;

std::string format_number(double v) {
  std::ostringstream ss;
  ss << std::setprecision(10) << v;
  return ss.str();
}

double baseline_ratio(double t, int radius) {
  return radius > 0 ? std::abs(t) / radius : std::numeric_limits<double>::infinity();
}

json ratio_json(double alpha) { return std::isfinite(alpha) ? json(alpha) : json(nullptr); }

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kMissingFile, "cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Image as_rgb(const Image& image) {
  if (image.channels() == 3) return image;
  Image out(image.width(), image.height(), 3);
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x)
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = image.at(x, y, 0);
  return out;
}

void save_rendering(const Rendering& r, const fs::path& dir, const std::string& stem) {
  save_image(clamped(r.image), dir / (stem + ".png"));
  save_mask(r.mask, dir / (stem + "_mask.png"));
}

}  // namespace

std::string target_tag(double t) {
  if (t == std::floor(t) && std::abs(t) < 1e9) return std::to_string(static_cast<long long>(t));
  return format_number(t);
}

void cmd_synth(const SynthArgs& args) {
  SceneSpec spec;
  if (args.random) {
    std::mt19937_64 rng(args.seed);
    spec = random_scene(rng);
  } else {
    spec = load_scene(args.scene);
  }
  const Dataset dataset = generate_lightfield(spec, args.radius);
  write_dataset(dataset, args.out_dir, args.bit_depth);
  write_text(args.out_dir / "scene.json", scene_to_json(spec) + "\n");
  for (double t : args.gt_views) {
    const OracleView gt = oracle_render(spec, t);
    save_image(gt.image, args.out_dir / ("gt_" + target_tag(t) + ".png"), args.bit_depth);
    save_mask(gt.mask, args.out_dir / ("gt_mask_" + target_tag(t) + ".png"));
  }
}

void cmd_render(const RenderArgs& args) {
  const int radius = detect_radius(args.dataset);
  if (radius < 0) {
    throw Error(ErrorCode::kMissingView, "no view_{v}.png files in " + args.dataset.string());
  }
  const Dataset dataset = load_dataset(args.dataset, radius);
  const PipelineResult r = render_target(dataset, args.target, args.pipeline);
  const fs::path& out = args.out_dir;
  fs::create_directories(out);

  save_rendering(r.vd, out, "vd");
  save_rendering(r.granularities[0].rendering, out, "vsp1");
  save_rendering(r.granularities[1].rendering, out, "vsp2");
  write_disparity(r.target_disparity.disparity, out / "target_disparity.pfm");
  save_mask(r.target_disparity.mask, out / "target_disparity_mask.png");
  save_labels(r.labels, out / "labels.png");
  save_labels(r.filled_labels.labels, out / "labels_filled.png");
  save_labels(r.filled_labels.labels, out / "labels_filled_vis.png", 255 / r.labels.layer_count);
  save_mask(r.features.gap_mask, out / "gap_mask.png");
  save_image(clamped(r.completed), out / "completed.png");
  write_tensor(to_tensor(r.features.channels), out / "features.lft");
  write_tensor(to_tensor(r.features.base), out / "vd.lft");
  if (args.debug_superpixels) {
    save_id_map(r.granularities[0].superpixels.labels, out / "sp1_ids.png");
    save_id_map(r.granularities[1].superpixels.labels, out / "sp2_ids.png");
  }

  const std::string scene = args.scene.empty()
                                ? fs::weakly_canonical(args.dataset).filename().string()
                                : args.scene;
  const double alpha = baseline_ratio(args.target, radius);

  std::optional<Image> ground_truth;
  const fs::path gt_path = args.dataset / ("gt_" + target_tag(args.target) + ".png");
  if (fs::exists(gt_path)) {
    ground_truth = as_rgb(load_image(gt_path));
    save_image(*ground_truth, out / "ground_truth.png");
    write_tensor(to_tensor(*ground_truth), out / "ground_truth.lft");
    const fs::path gt_mask = args.dataset / ("gt_mask_" + target_tag(args.target) + ".png");
    if (fs::exists(gt_mask)) save_mask(load_mask(gt_mask), out / "ground_truth_mask.png");
  }

  auto entry = [&](const std::string& tensor, const json& gt, const std::string& vd) {
    return json{{"tensor", tensor}, {"ground_truth", gt}, {"vd", vd},
                {"scene", scene}, {"t", args.target}, {"alpha", ratio_json(alpha)}};
  };
  json entries = json::array();
  entries.push_back(entry("features.lft", ground_truth ? json("ground_truth.lft") : json(nullptr), "vd.lft"));

  if (args.patch_size > 0) {
    if (!ground_truth) {
      throw Error(ErrorCode::kMissingFile, "patch export needs " + gt_path.string());
    }
    const auto patches = extract_patches(r.features, *ground_truth, args.patch_size, args.stride);
    for (const auto& p : patches) {
      const std::string stem = "patches/p_" + std::to_string(p.y) + "_" + std::to_string(p.x);
      write_tensor(to_tensor(p.features), out / (stem + ".lft"));
      write_tensor(to_tensor(p.ground_truth), out / (stem + "_gt.lft"));
      write_tensor(to_tensor(p.base), out / (stem + "_vd.lft"));
      entries.push_back(entry(stem + ".lft", stem + "_gt.lft", stem + "_vd.lft"));
    }
  }

  const json manifest{
      {"scene", scene},
      {"t", args.target},
      {"alpha", ratio_json(alpha)},
      {"radius", radius},
      {"layers", args.pipeline.layer_count},
      {"sp_sizes", args.pipeline.sp_sizes},
      {"avg_mode", args.pipeline.average_mode == AverageMode::kPaper ? "paper" : "masked"},
      {"labels_converged", r.filled_labels.converged},
      {"entries", entries},
  };
  write_text(out / "manifest.json", manifest.dump(2) + "\n");
}

std::string cmd_eval(const EvalArgs& args) {
  struct Row {
    std::string scene;
    double t;
    double alpha;
    std::string method;
    double psnr_db;
    double ssim;
  };
  static const std::vector<std::string> kMethods{"completed", "vd", "vsp1", "vsp2", "pcoc"};

  std::vector<Row> rows;
  for (const auto& dir : args.rendered) {
    json manifest;
    try {
      manifest = json::parse(read_text(dir / "manifest.json"));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kUnsupportedFormat, (dir / "manifest.json").string() + ": " + e.what());
    }
    const std::string scene = manifest.at("scene").get<std::string>();
    const double t = manifest.at("t").get<double>();
    const double alpha = manifest.at("alpha").is_null() ? std::numeric_limits<double>::infinity()
                                                        : manifest.at("alpha").get<double>();

    const fs::path gt_path = args.ground_truth.value_or(dir / "ground_truth.png");
    const Image gt = as_rgb(load_image(gt_path));
    std::optional<Mask> mask;
    if (args.ground_truth_mask) {
      mask = load_mask(*args.ground_truth_mask);
    } else if (!args.ground_truth && fs::exists(dir / "ground_truth_mask.png")) {
      mask = load_mask(dir / "ground_truth_mask.png");
    }

    for (const auto& method : kMethods) {
      const fs::path p = dir / (method + ".png");
      if (!fs::exists(p)) continue;
      const Image img = as_rgb(load_image(p));
      if (!img.same_size(gt)) throw Error(ErrorCode::kDimensionMismatch, p.string() + " vs ground truth");
      rows.push_back(Row{scene, t, alpha, method, psnr(img, gt, mask ? &*mask : nullptr), ssim(img, gt)});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.scene, a.alpha, a.t, a.method) < std::tie(b.scene, b.alpha, b.t, b.method);
  });

  std::ostringstream csv;
  csv << "scene,t,alpha,method,psnr_db,ssim\n";
  for (const auto& r : rows) {
    csv << r.scene << ',' << format_number(r.t) << ',' << format_number(r.alpha) << ',' << r.method << ','
        << std::fixed << std::setprecision(4) << r.psnr_db << ',' << std::setprecision(6) << r.ssim
        << std::defaultfloat << '\n';
  }
  if (args.out) write_text(*args.out, csv.str());
  return csv.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stratified light-field view extrapolation"};
  app.set_config("--config", "", "TOML/INI file with default flag values (flags take precedence)");
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic layered-plane light field");
  // With --random the only positional is the output directory.
  synth_cmd->add_option("scene", synth.scene, "Scene description (JSON); omit with --random");
  synth_cmd->add_option("out_dir", synth.out_dir, "Output dataset directory");
  synth_cmd->add_option("-M,--radius", synth.radius, "Baseline radius M (2M+1 views)")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--bit-depth", synth.bit_depth, "PNG bit depth")
      ->capture_default_str()->check(CLI::IsMember({8, 16}));
  synth_cmd->add_flag("--random", synth.random, "Draw a random scene instead of reading one");
  synth_cmd->add_option("--seed", synth.seed, "Random scene seed")->capture_default_str();
  synth_cmd->add_option("--gt-views", synth.gt_views, "Target offsets to write ground truth for, comma separated")
      ->delimiter(',')->allow_extra_args(false);

  RenderArgs render;
  std::string avg_mode = "masked";
  auto* render_cmd = app.add_subcommand("render", "Synthesize target view t from a dataset");
  render_cmd->add_option("dataset", render.dataset, "Dataset directory (view_v.png, disp_v.pfm, conf_v.pfm)")
      ->required()->check(CLI::ExistingDirectory);
  render_cmd->add_option("out_dir", render.out_dir, "Output directory")->required();
  render_cmd->add_option("-t,--target", render.target, "Target angular offset t")->required();
  render_cmd->add_option("--layers", render.pipeline.layer_count, "Disparity layers L")
      ->capture_default_str()->check(CLI::PositiveNumber);
  render_cmd->add_option("--sp-sizes", render.pipeline.sp_sizes, "Pixels per superpixel, fine,coarse")
      ->delimiter(',')->expected(2)->capture_default_str();
  render_cmd->add_option("--avg-mode", avg_mode, "Multi-reference averaging")
      ->capture_default_str()->check(CLI::IsMember({"paper", "masked"}));
  render_cmd->add_option("--window", render.pipeline.dilation_window, "Label dilation window")
      ->capture_default_str();
  render_cmd->add_option("--conf-threshold", render.pipeline.conf_threshold,
                         "Confidence needed for superpixel medians")->capture_default_str();
  render_cmd->add_option("--scene", render.scene, "Scene name for the manifest");
  render_cmd->add_option("--patch-size", render.patch_size, "Also export patches of this size (0 = off)")
      ->capture_default_str();
  render_cmd->add_option("--stride", render.stride, "Patch stride")->capture_default_str();
  render_cmd->add_flag("--debug-sp", render.debug_superpixels, "Write superpixel id maps");

  EvalArgs eval;
  std::string gt;
  std::string gt_mask;
  std::string csv_out;
  auto* eval_cmd = app.add_subcommand("eval", "PSNR/SSIM of rendered outputs against ground truth");
  eval_cmd->add_option("rendered", eval.rendered, "Render output directories")->required();
  eval_cmd->add_option("--gt", gt, "Ground truth PNG (default: <rendered>/ground_truth.png)");
  eval_cmd->add_option("--gt-mask", gt_mask, "Pixels to score (default: <rendered>/ground_truth_mask.png)");
  eval_cmd->add_option("-o,--out", csv_out, "Write CSV here as well as stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) {
      if (synth.random && synth.out_dir.empty()) std::swap(synth.scene, synth.out_dir);
      if (synth.out_dir.empty() || synth.random == !synth.scene.empty()) {
        err << "synth: expected <scene.json> <out_dir> or --random <out_dir>\n";
        return kExitUsage;
      }
      cmd_synth(synth);
    } else if (render_cmd->parsed()) {
      render.pipeline.average_mode = avg_mode == "paper" ? AverageMode::kPaper : AverageMode::kMasked;
      cmd_render(render);
    } else if (eval_cmd->parsed()) {
      if (!gt.empty()) eval.ground_truth = gt;
      if (!gt_mask.empty()) eval.ground_truth_mask = gt_mask;
      if (!csv_out.empty()) eval.out = csv_out;
      out << cmd_eval(eval);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace slsc::cli
