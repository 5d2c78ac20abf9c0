#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "slsc/pipeline.hpp"

namespace slsc::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

struct SynthArgs {
  fs::path scene;  // empty with `random`
  fs::path out_dir;
  int radius = 4;
  int bit_depth = 8;
  bool random = false;
  std::uint64_t seed = 0;
  /// Target offsets for which ground truth views are also written.
  std::vector<double> gt_views;
};

struct RenderArgs {
  fs::path dataset;
  fs::path out_dir;
  double target = 0.0;
  PipelineOptions pipeline;
  std::string scene;  // defaults to the dataset directory name
  int patch_size = 0;
  int stride = 64;
  bool debug_superpixels = false;
};

struct EvalArgs {
  std::vector<fs::path> rendered;
  std::optional<fs::path> ground_truth;
  std::optional<fs::path> ground_truth_mask;
  std::optional<fs::path> out;
};

/// File-name tag for a target offset: integers print without a fraction.
std::string target_tag(double t);

void cmd_synth(const SynthArgs& args);
void cmd_render(const RenderArgs& args);
/// Returns the CSV text (header plus rows).
std::string cmd_eval(const EvalArgs& args);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace slsc::cli
