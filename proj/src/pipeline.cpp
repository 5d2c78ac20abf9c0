#include "slsc/pipeline.hpp"

namespace slsc {

std::vector<Rendering> per_view_predictions(const Dataset& dataset, double target, int layer_count) {
  std::vector<Rendering> out;
  for (const auto& view : dataset.lightfield.views()) {
    out.push_back(sdr_render(view.image, dataset.disparity(view.index), target - view.index, layer_count));
  }
  return out;
}

PipelineResult render_target(const Dataset& dataset, double target, const PipelineOptions& options) {
  if (options.sp_sizes.size() != 2) {
    throw Error(ErrorCode::kInvalidArgument, "exactly two superpixel sizes are required");
  }
  PipelineResult r;
  r.target = target;

  const auto predictions = per_view_predictions(dataset, target, options.layer_count);
  r.vd = average_predictions(predictions, options.average_mode);
  r.vd_masked = options.average_mode == AverageMode::kMasked
                    ? r.vd
                    : average_predictions(predictions, AverageMode::kMasked);

  const Image& center = dataset.lightfield.center();
  const DisparityMap& d0 = dataset.disparity(0);
  for (int size : options.sp_sizes) {
    Granularity g;
    g.superpixels = segment(center, size, options.slic);
    g.disparity = sp_disparity(d0, dataset.confidence(0), g.superpixels, options.conf_threshold,
                               options.layer_count);
    g.rendering = sp_render(center, g.disparity, target, options.layer_count);
    r.granularities.push_back(std::move(g));
  }

  r.target_disparity = render_target_disparity(d0, target, options.layer_count);
  r.labels = quantize_labels(r.target_disparity.disparity, r.target_disparity.mask, options.layer_count);
  r.filled_labels = dilate_fill(r.labels, options.dilation_window);
  r.completed = surface_fill_rgb(r.vd_masked.image, r.vd_masked.mask, r.filled_labels.labels);
  r.features = assemble(r.vd, r.granularities[0].rendering, r.granularities[1].rendering,
                        r.filled_labels.labels);
  return r;
}

}  // namespace slsc
