#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "relsize/scene.hpp"

namespace relsize {

namespace fs = std::filesystem;

enum class PairPolicy {
  ordered_distinct,  ///< "ordered-pairs-without-equal": ordered tuples of distinct grid values
  all_ordered,       ///< "all-pairs": every ordered tuple, repeats allowed
  singletons,        ///< one object per scene, one scene per grid value
};

/// Distances of object centers along the optical axis. `values`, when set, wins over the range.
struct DistanceGrid {
  double start = 2.0;
  double stop = 15.9;
  int count = 140;
  std::vector<double> values;

  std::vector<double> resolve() const;
};

struct SweepConfig {
  int objects_per_scene = 2;
  double radius = 0.5;
  double height = 2.0;
  DistanceGrid distance_grid;
  PairPolicy pair_policy = PairPolicy::ordered_distinct;
  /// Maximum horizontal shift of the whole arrangement, in pixels; drawn per scene from hash(seed, index).
  double lateral_jitter_px = 0.0;
  Camera camera;
  int supersample = 4;
  std::uint64_t seed = 0;
  std::optional<std::size_t> limit;
};

nlohmann::json to_json(const SweepConfig& config);
/// Missing keys keep their defaults; unknown keys and bad values raise ConfigError.
SweepConfig sweep_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Scene& scene);
Scene scene_from_json(const nlohmann::json& j);

/// Deterministic scene list. Objects are laid out left to right in tuple order with equal gaps
/// (edges included), ids 1..k. Throws ConfigError naming the first scene whose placement breaks
/// a scene invariant.
std::vector<Scene> enumerate_scenes(const SweepConfig& config);

struct SceneRecord {
  Scene scene;
  std::string rgb, depth, mask;  ///< paths relative to the dataset root
  std::string rgb_digest, depth_digest, mask_digest;
};

struct Manifest {
  std::string dataset_id;
  nlohmann::json config;
  std::vector<SceneRecord> scenes;
};

inline constexpr const char* kManifestName = "manifest.jsonl";

/// Renders every enumerated scene and writes
///   out_dir/rgb/<id>.png, out_dir/depth/<id>.pfm, out_dir/mask/<id>.png, out_dir/manifest.jsonl.
/// The manifest is removed first and written last, so an interrupted run leaves no manifest.
Manifest generate_dataset(const SweepConfig& config, const fs::path& out_dir, int jobs = 0);

void write_manifest(const Manifest& manifest, const fs::path& path);
Manifest load_manifest(const fs::path& path);

/// Problems found when checking every referenced file against its digest; empty when intact.
std::vector<std::string> verify_dataset(const fs::path& dataset_dir);

}  // namespace relsize
