#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "json.hpp"
#include "slsc/io.hpp"
#include "test_support.hpp"

using namespace slsc;
using slsc::testing::scratch_dir;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "slsc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kScene = R"({
  "width": 48, "height": 32,
  "planes": [
    {"disparity": 0, "region": "full", "texture": {"type": "checker", "period": 4, "colors": [[0.1,0.2,0.3],[0.8,0.7,0.6]]}},
    {"disparity": 2, "region": {"x": 14, "y": 8, "w": 14, "h": 14}, "texture": {"type": "noise", "seed": 3}}
  ]})";

fs::path make_dataset(const std::string& name, std::vector<std::string> extra = {}) {
  const auto dir = scratch_dir(name);
  std::ofstream(dir / "scene.in.json") << kScene;
  std::vector<std::string> args{"synth", (dir / "scene.in.json").string(), (dir / "ds").string(), "-M", "4"};
  args.insert(args.end(), extra.begin(), extra.end());
  REQUIRE(run_cli(args).code == 0);
  return dir / "ds";
}

int count_zero_labels(const fs::path& p) {
  const LabelMap l = load_labels(p, 16);
  return static_cast<int>(std::count(l.labels.values().begin(), l.labels.values().end(), 0));
}

}  // namespace

TEST_CASE("target_tag") {
  CHECK(cli::target_tag(20.0) == "20");
  CHECK(cli::target_tag(-3.0) == "-3");
  CHECK(cli::target_tag(7.5) == "7.5");
}

TEST_CASE("synth writes the full dataset") {
  const fs::path ds = make_dataset("cli_synth");
  for (int v = -4; v <= 4; ++v) {
    CHECK(fs::exists(view_path(ds, v)));
    CHECK(fs::exists(disparity_path(ds, v)));
    CHECK(fs::exists(confidence_path(ds, v)));
  }
  CHECK_FALSE(fs::exists(view_path(ds, 5)));
  CHECK(fs::exists(ds / "scene.json"));
  CHECK(load_dataset(ds, 4).lightfield.width() == 48);
}

TEST_CASE("synth is deterministic") {
  const auto dir = scratch_dir("cli_det");
  for (const char* sub : {"a", "b"}) {
    REQUIRE(run_cli({"synth", "--random", "--seed", "11", "-M", "2", (dir / sub).string()}).code == 0);
  }
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    CHECK(slurp(entry.path()) == slurp(dir / "b" / entry.path().filename()));
  }
}

TEST_CASE("usage and data errors") {
  const auto dir = scratch_dir("cli_err");
  std::ofstream(dir / "bad.json") << "{ \"planes\": [ ";
  CHECK(run_cli({"synth", (dir / "bad.json").string(), (dir / "out").string()}).code == cli::kExitData);
  CHECK(run_cli({"synth", (dir / "missing.json").string(), (dir / "out").string()}).code == cli::kExitData);
  CHECK(run_cli({"synth", (dir / "out").string()}).code == cli::kExitUsage);
  CHECK(run_cli({}).code == cli::kExitUsage);
  CHECK(run_cli({"render", dir.string(), (dir / "r").string()}).code == cli::kExitUsage);
  CHECK(run_cli({"render", dir.string(), (dir / "r").string(), "-t", "2", "--avg-mode", "median"}).code ==
        cli::kExitUsage);
  CHECK(run_cli({"render", dir.string(), (dir / "r").string(), "-t", "2"}).code == cli::kExitData);
  CHECK(run_cli({"--help"}).code == cli::kExitOk);
}

TEST_CASE("render at the reference view reproduces it") {
  const fs::path ds = make_dataset("cli_t0");
  const fs::path out = ds.parent_path() / "r0";
  REQUIRE(run_cli({"render", ds.string(), out.string(), "-t", "0"}).code == 0);
  const Image completed = load_image(out / "completed.png");
  const Image center = load_image(view_path(ds, 0));
  CHECK(slsc::testing::max_abs_diff(completed, center) <= 1.0 / 255 + 1e-12);
  CHECK(count_zero_labels(out / "labels.png") == 0);
}

TEST_CASE("render outputs, manifest and eval") {
  const fs::path ds = make_dataset("cli_render", {"--gt-views", "20,40"});
  const fs::path root = ds.parent_path();
  REQUIRE(run_cli({"render", ds.string(), (root / "r20").string(), "-t", "20", "--scene", "demo",
                   "--patch-size", "16", "--stride", "16"})
              .code == 0);
  REQUIRE(run_cli({"render", ds.string(), (root / "r40").string(), "-t", "40", "--scene", "demo"}).code == 0);

  for (const char* f : {"vd.png", "vd_mask.png", "vsp1.png", "vsp2_mask.png", "target_disparity.pfm",
                        "labels.png", "labels_filled.png", "gap_mask.png", "completed.png", "features.lft",
                        "vd.lft", "ground_truth.lft", "ground_truth_mask.png", "manifest.json"}) {
    CHECK_MESSAGE(fs::exists(root / "r20" / f), f);
  }

  const auto manifest = nlohmann::json::parse(slurp(root / "r20" / "manifest.json"));
  CHECK(manifest["scene"] == "demo");
  CHECK(manifest["t"] == 20.0);
  CHECK(manifest["alpha"] == 5.0);
  CHECK(manifest["layers"] == 16);
  CHECK(manifest["labels_converged"] == true);
  CHECK(manifest["entries"].size() == 1 + 3 * 2);
  for (const auto& e : manifest["entries"]) {
    const Tensor t = read_tensor(root / "r20" / e["tensor"].get<std::string>());
    const Tensor gt = read_tensor(root / "r20" / e["ground_truth"].get<std::string>());
    CHECK(t.dims[2] == 7);
    CHECK(gt.dims[2] == 3);
    CHECK(t.dims[0] == gt.dims[0]);
  }

  // Wider baselines leave at least as much of the target ambiguous.
  CHECK(count_zero_labels(root / "r20" / "labels.png") <= count_zero_labels(root / "r40" / "labels.png"));
  CHECK(load_labels(root / "r40" / "labels_filled.png", 16).labels.values().front() > 0);

  const Outcome eval = run_cli({"eval", (root / "r40").string(), (root / "r20").string(), "-o",
                                (root / "scores.csv").string()});
  REQUIRE(eval.code == 0);
  std::istringstream lines(eval.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "scene,t,alpha,method,psnr_db,ssim");
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 8);
  CHECK(rows[0].rfind("demo,20,5,completed,", 0) == 0);
  CHECK(rows[3].rfind("demo,20,5,vsp2,", 0) == 0);
  CHECK(rows[4].rfind("demo,40,10,completed,", 0) == 0);
  CHECK(slurp(root / "scores.csv") == eval.out);
}

TEST_CASE("eval of a perfect rendering") {
  const auto dir = scratch_dir("cli_eval");
  std::mt19937_64 rng(4);
  const Image img = slsc::testing::random_image(rng, 16, 16, 3);
  save_image(img, dir / "completed.png");
  save_image(img, dir / "ground_truth.png");
  std::ofstream(dir / "manifest.json") << R"({"scene": "s", "t": 3, "alpha": 0.75})";
  const Outcome r = run_cli({"eval", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out == "scene,t,alpha,method,psnr_db,ssim\ns,3,0.75,completed,99.0000,1.000000\n");
}

TEST_CASE("render is deterministic and honours config files") {
  const fs::path ds = make_dataset("cli_cfg");
  const fs::path root = ds.parent_path();
  std::ofstream(root / "cfg.ini") << "[render]\nlayers = 4\navg-mode = paper\n";
  REQUIRE(run_cli({"--config", (root / "cfg.ini").string(), "render", ds.string(), (root / "a").string(), "-t",
                   "6"})
              .code == 0);
  REQUIRE(run_cli({"--config", (root / "cfg.ini").string(), "render", ds.string(), (root / "b").string(), "-t",
                   "6", "--layers", "8"})
              .code == 0);
  const auto a = nlohmann::json::parse(slurp(root / "a" / "manifest.json"));
  const auto b = nlohmann::json::parse(slurp(root / "b" / "manifest.json"));
  CHECK(a["layers"] == 4);
  CHECK(a["avg_mode"] == "paper");
  CHECK(b["layers"] == 8);

  REQUIRE(run_cli({"--config", (root / "cfg.ini").string(), "render", ds.string(), (root / "c").string(), "-t",
                   "6"})
              .code == 0);
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    CHECK(slurp(entry.path()) == slurp(root / "c" / entry.path().filename()));
  }
}
