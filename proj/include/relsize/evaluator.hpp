#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "relsize/alignment.hpp"
#include "relsize/dataset.hpp"
#include "relsize/depth_io.hpp"
#include "relsize/metrics.hpp"
#include "relsize/renderer.hpp"

namespace relsize {

enum class AlignMode { scale_shift, none };
enum class Aggregation { macro, pooled };

struct EvaluationOptions {
  BalanceMode balance = BalanceMode::resample;
  AlignMode alignment = AlignMode::scale_shift;
  double clamp_eps = 1e-6;
  /// Nearest-neighbour resize of predictions whose size differs from the ground truth.
  bool resample_prediction = false;
};

struct EvaluationRecord {
  std::string method;
  std::string scene_id;
  AlignmentResult alignment;
  MetricSet plain;     ///< every object pixel counts once
  MetricSet balanced;  ///< objects equalized before the metrics
  bool degenerate = false;
  int clamped_pixels = 0;
};

/// mask -> align -> plain metrics -> balanced metrics for one image.
///
/// Throws DataError for a shape mismatch (unless resample_prediction is set), non-finite
/// prediction values, an empty mask, or an id from object_ids that is absent from the mask.
EvaluationRecord evaluate_pair(const DepthMap& gt, const LabelMap& mask, const Raster<double>& prediction,
                               DepthSpace space, const EvaluationOptions& options, std::span<const int> object_ids = {});

inline EvaluationRecord evaluate_pair(const FrameBundle& bundle, const Raster<double>& prediction, DepthSpace space,
                                      const EvaluationOptions& options) {
  return evaluate_pair(bundle.depth, bundle.mask, prediction, space, options);
}

Raster<double> to_double(const DepthMap& map);
Raster<double> resize_nearest(const Raster<double>& src, int width, int height);

struct DatasetEvaluation {
  std::vector<EvaluationRecord> records;  ///< manifest order
  std::vector<std::string> missing;       ///< manifest scene ids without a prediction
};

/// Evaluates one prediction sidecar against a generated dataset; limit = 0 means all scenes.
DatasetEvaluation evaluate_dataset(const fs::path& dataset_dir, const Manifest& manifest,
                                   const PredictionSidecar& sidecar, const EvaluationOptions& options, int jobs = 0,
                                   std::size_t limit = 0);

struct MethodSummary {
  std::string method;
  MetricSet plain;
  MetricSet balanced;
  std::size_t images = 0;
  std::size_t degenerate = 0;
};

/// Per-method summaries sorted by method name. macro averages per-image metrics; pooled
/// weights each image by its n_eff, which equals pooling all samples.
std::vector<MethodSummary> aggregate(std::span<const EvaluationRecord> records,
                                     Aggregation aggregation = Aggregation::macro);

nlohmann::json to_json(const MetricSet& m);
MetricSet metric_set_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EvaluationRecord& r);
EvaluationRecord evaluation_record_from_json(const nlohmann::json& j);

void write_records(std::span<const EvaluationRecord> records, const fs::path& path);
std::vector<EvaluationRecord> load_records(const fs::path& path);

}  // namespace relsize
