#include "relsize/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "relsize/depth_io.hpp"
#include "relsize/error.hpp"
#include "relsize/parallel.hpp"
#include "relsize/renderer.hpp"

namespace relsize {

using nlohmann::json;

namespace {

constexpr const char* kPolicyNames[] = {"ordered-pairs-without-equal", "all-pairs", "singletons"};

std::string policy_name(PairPolicy p) { return kPolicyNames[static_cast<int>(p)]; }

PairPolicy parse_policy(const std::string& s) {
  for (int i = 0; i < 3; ++i)
    if (s == kPolicyNames[i]) return static_cast<PairPolicy>(i);
  throw ConfigError(fmt::format("unknown pair_policy '{}'", s));
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* where) {
  if (!j.is_object()) throw ConfigError(fmt::format("{} must be a JSON object", where));
  for (const auto& [key, _] : j.items())
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
      throw ConfigError(fmt::format("unknown key '{}' in {}", key, where));
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(fmt::format("bad value for '{}': {}", key, j.at(key).dump()));
  }
}

json camera_json(const Camera& c) {
  return {{"width", c.width}, {"height", c.height}, {"focal", c.focal}, {"cx", c.cx}, {"cy", c.cy}};
}

Camera camera_from_json(const json& j) {
  reject_unknown(j, {"width", "height", "focal", "cx", "cy"}, "camera");
  Camera c;
  read_if(j, "width", c.width);
  read_if(j, "height", c.height);
  read_if(j, "focal", c.focal);
  // The principal point follows the image center unless given explicitly.
  c.cx = 0.5 * c.width;
  c.cy = 0.5 * c.height;
  read_if(j, "cx", c.cx);
  read_if(j, "cy", c.cy);
  return c;
}

// SplitMix64 finalizer; per-scene randomness is a pure function of (seed, index).
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double unit_interval(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t h = mix64(seed ^ mix64(index));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// x such that the cylinder's silhouette box starts at image column `left`.
double solve_center_x(const Camera& cam, Cylinder cyl, double left) {
  const double z = cyl.center.z();
  double lo = -100.0 * z, hi = 100.0 * z;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * z; ++it) {
    cyl.center.x() = 0.5 * (lo + hi);
    (silhouette_bbox(cam, cyl).u_min < left ? lo : hi) = cyl.center.x();
  }
  return 0.5 * (lo + hi);
}

std::string scene_name(std::size_t index) { return fmt::format("s{:06d}", index); }

std::string describe(const std::vector<double>& depths) {
  return fmt::format("z = {}", fmt::join(depths, ", "));
}

Scene place_objects(const SweepConfig& cfg, const std::vector<double>& depths, std::size_t index) {
  Scene scene;
  scene.scene_id = scene_name(index);
  scene.camera = cfg.camera;
  const std::size_t k = depths.size();
  for (std::size_t i = 0; i < k; ++i)
    scene.objects.push_back({Vec3(0.0, 0.0, depths[i]), cfg.radius, cfg.height, static_cast<int>(i) + 1});

  const double jitter_unit = cfg.lateral_jitter_px > 0.0 ? 2.0 * unit_interval(cfg.seed, index) - 1.0 : 0.0;
  std::vector<double> widths(k);
  for (std::size_t i = 0; i < k; ++i) {
    const PixelBox b = silhouette_bbox(cfg.camera, scene.objects[i]);
    widths[i] = b.u_max - b.u_min;
  }
  // Widths grow off-axis, so iterate layout and re-measure until the gaps settle.
  for (int pass = 0; pass < 8; ++pass) {
    double total = 0.0;
    for (double w : widths) total += w;
    const double gap = (cfg.camera.width - total) / static_cast<double>(k + 1);
    if (gap < 0.0) break;  // validation below reports the overlap or framing failure
    double left = gap + jitter_unit * std::min(cfg.lateral_jitter_px, 0.5 * gap);
    for (std::size_t i = 0; i < k; ++i) {
      Cylinder& c = scene.objects[i];
      c.center.x() = solve_center_x(cfg.camera, c, left);
      const PixelBox b = silhouette_bbox(cfg.camera, c);
      widths[i] = b.u_max - b.u_min;
      left = b.u_max + gap;
    }
  }
  return scene;
}

void validate_config(const SweepConfig& cfg) {
  try {
    cfg.camera.validate();
  } catch (const ContractError& e) {
    throw ConfigError(e.what());
  }
  if (cfg.objects_per_scene < 1) throw ConfigError("objects_per_scene must be >= 1");
  if (cfg.pair_policy == PairPolicy::singletons && cfg.objects_per_scene != 1)
    throw ConfigError("pair_policy 'singletons' requires objects_per_scene = 1");
  if (!(cfg.radius > 0.0) || !(cfg.height > 0.0)) throw ConfigError("radius and height must be positive");
  if (cfg.supersample < 1) throw ConfigError("supersample must be >= 1");
  if (cfg.lateral_jitter_px < 0.0) throw ConfigError("lateral_jitter_px must be >= 0");
  const auto grid = cfg.distance_grid.resolve();
  if (grid.empty()) throw ConfigError("distance grid is empty");
  for (double z : grid)
    if (!(z > cfg.radius)) throw ConfigError(fmt::format("distance {} does not exceed the radius", z));
  if (cfg.pair_policy == PairPolicy::ordered_distinct &&
      static_cast<std::size_t>(cfg.objects_per_scene) > std::set<double>(grid.begin(), grid.end()).size())
    throw ConfigError("not enough distinct distances for objects_per_scene");
}

}  // namespace

std::vector<double> DistanceGrid::resolve() const {
  if (!values.empty()) return values;
  if (count < 1) throw ConfigError("distance_grid.count must be >= 1");
  if (count == 1) return {start};
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[i] = start + (stop - start) * i / (count - 1);
  return out;
}

json to_json(const SweepConfig& c) {
  json grid = c.distance_grid.values.empty()
                  ? json{{"start", c.distance_grid.start}, {"stop", c.distance_grid.stop}, {"count", c.distance_grid.count}}
                  : json(c.distance_grid.values);
  return {{"objects_per_scene", c.objects_per_scene},
          {"radius", c.radius},
          {"height", c.height},
          {"distance_grid", grid},
          {"pair_policy", policy_name(c.pair_policy)},
          {"lateral_jitter_px", c.lateral_jitter_px},
          {"camera", camera_json(c.camera)},
          {"supersample", c.supersample},
          {"seed", c.seed},
          {"limit", c.limit ? json(*c.limit) : json(nullptr)}};
}

SweepConfig sweep_config_from_json(const json& j) {
  reject_unknown(j,
                 {"objects_per_scene", "radius", "height", "distance_grid", "pair_policy", "lateral_jitter_px", "camera",
                  "supersample", "seed", "limit"},
                 "sweep config");
  SweepConfig c;
  read_if(j, "objects_per_scene", c.objects_per_scene);
  read_if(j, "radius", c.radius);
  read_if(j, "height", c.height);
  if (j.contains("distance_grid")) {
    const json& g = j.at("distance_grid");
    if (g.is_array()) {
      read_if(j, "distance_grid", c.distance_grid.values);
    } else {
      reject_unknown(g, {"start", "stop", "count"}, "distance_grid");
      read_if(g, "start", c.distance_grid.start);
      read_if(g, "stop", c.distance_grid.stop);
      read_if(g, "count", c.distance_grid.count);
    }
  }
  if (j.contains("pair_policy")) {
    std::string p;
    read_if(j, "pair_policy", p);
    c.pair_policy = parse_policy(p);
  }
  read_if(j, "lateral_jitter_px", c.lateral_jitter_px);
  if (j.contains("camera")) c.camera = camera_from_json(j.at("camera"));
  read_if(j, "supersample", c.supersample);
  read_if(j, "seed", c.seed);
  if (j.contains("limit") && !j.at("limit").is_null()) {
    std::size_t limit = 0;
    read_if(j, "limit", limit);
    c.limit = limit;
  }
  return c;
}

json to_json(const Scene& s) {
  json objects = json::array();
  for (const Cylinder& c : s.objects)
    objects.push_back({{"object_id", c.object_id},
                       {"center", {c.center.x(), c.center.y(), c.center.z()}},
                       {"radius", c.radius},
                       {"height", c.height}});
  return {{"scene_id", s.scene_id}, {"camera", camera_json(s.camera)}, {"objects", objects}};
}

Scene scene_from_json(const json& j) {
  try {
    Scene s;
    s.scene_id = j.at("scene_id").get<std::string>();
    s.camera = camera_from_json(j.at("camera"));
    for (const json& o : j.at("objects")) {
      const auto center = o.at("center").get<std::vector<double>>();
      if (center.size() != 3) throw FormatError("object center must have 3 components");
      s.objects.push_back({Vec3(center[0], center[1], center[2]), o.at("radius").get<double>(),
                           o.at("height").get<double>(), o.at("object_id").get<int>()});
    }
    return s;
  } catch (const json::exception& e) {
    throw FormatError(fmt::format("malformed scene record: {}", e.what()));
  }
}

std::vector<Scene> enumerate_scenes(const SweepConfig& cfg) {
  validate_config(cfg);
  const auto grid = cfg.distance_grid.resolve();
  const std::size_t k = static_cast<std::size_t>(cfg.objects_per_scene);
  const std::size_t limit = cfg.limit.value_or(std::numeric_limits<std::size_t>::max());

  std::vector<Scene> scenes;
  std::vector<std::size_t> pick(k, 0);
  std::vector<double> depths(k);

  // Lexicographic walk over index tuples; the first slot varies slowest.
  const auto emit = [&] {
    for (std::size_t i = 0; i < k; ++i) depths[i] = grid[pick[i]];
    Scene scene = place_objects(cfg, depths, scenes.size());
    try {
      validate_scene(scene);
    } catch (const ContractError& e) {
      throw ConfigError(fmt::format("placement failed for scene {} ({}): {}", scene.scene_id, describe(depths), e.what()));
    }
    scenes.push_back(std::move(scene));
  };
  const auto usable = [&](std::size_t slot) {
    if (cfg.pair_policy != PairPolicy::ordered_distinct) return true;
    for (std::size_t i = 0; i < slot; ++i)
      if (grid[pick[i]] == grid[pick[slot]]) return false;
    return true;
  };

  const std::function<void(std::size_t)> walk = [&](std::size_t slot) {
    if (scenes.size() >= limit) return;
    if (slot == k) {
      emit();
      return;
    }
    for (std::size_t g = 0; g < grid.size() && scenes.size() < limit; ++g) {
      pick[slot] = g;
      if (usable(slot)) walk(slot + 1);
    }
  };
  walk(0);
  return scenes;
}

namespace {

json manifest_header(const Manifest& m) {
  return {{"format", "relsize-manifest"}, {"version", 1}, {"dataset_id", m.dataset_id},
          {"config", m.config},           {"scene_count", m.scenes.size()}};
}

json record_json(const SceneRecord& r) {
  json j = to_json(r.scene);
  j["files"] = {{"rgb", r.rgb}, {"depth", r.depth}, {"mask", r.mask}};
  j["digests"] = {{"rgb", r.rgb_digest}, {"depth", r.depth_digest}, {"mask", r.mask_digest}};
  return j;
}

std::string dataset_id_for(const json& config) {
  // Short content hash of the canonical config dump.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : config.dump()) h = (h ^ ch) * 0x100000001b3ull;
  return fmt::format("relsize-{:016x}", h);
}

}  // namespace

void write_manifest(const Manifest& manifest, const fs::path& path) {
  const fs::path tmp = fs::path(path).concat(".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing", tmp.string());
    out << manifest_header(manifest).dump() << '\n';
    for (const auto& r : manifest.scenes) out << record_json(r).dump() << '\n';
    if (!out) throw IoError("manifest write failed", tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move manifest into place", path.string());
}

Manifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingFileError(path.string());
  Manifest m;
  std::string line;
  std::size_t line_no = 0;
  std::size_t declared = 0;
  std::set<std::string> ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
      if (line_no == 1) {
        if (j.value("format", "") != "relsize-manifest") throw FormatError("not a relsize manifest");
        m.dataset_id = j.at("dataset_id").get<std::string>();
        m.config = j.at("config");
        declared = j.at("scene_count").get<std::size_t>();
        continue;
      }
      SceneRecord r;
      r.scene = scene_from_json(j);
      const json& files = j.at("files");
      const json& digests = j.at("digests");
      r.rgb = files.at("rgb").get<std::string>();
      r.depth = files.at("depth").get<std::string>();
      r.mask = files.at("mask").get<std::string>();
      r.rgb_digest = digests.at("rgb").get<std::string>();
      r.depth_digest = digests.at("depth").get<std::string>();
      r.mask_digest = digests.at("mask").get<std::string>();
      if (!ids.insert(r.scene.scene_id).second) throw FormatError("duplicate scene_id " + r.scene.scene_id);
      m.scenes.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw FormatError(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    } catch (const FormatError& e) {
      throw FormatError(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
  }
  if (line_no == 0) throw FormatError(path.string() + ": empty manifest");
  if (m.scenes.size() != declared)
    throw FormatError(fmt::format("{}: header declares {} scenes, found {}", path.string(), declared, m.scenes.size()));
  return m;
}

Manifest generate_dataset(const SweepConfig& config, const fs::path& out_dir, int jobs) {
  const std::vector<Scene> scenes = enumerate_scenes(config);

  std::error_code ec;
  for (const char* sub : {"rgb", "depth", "mask"}) {
    fs::create_directories(out_dir / sub, ec);
    if (ec) throw IoError("cannot create directory", (out_dir / sub).string());
  }
  const fs::path manifest_path = out_dir / kManifestName;
  fs::remove(manifest_path, ec);
  if (ec) throw IoError("cannot remove stale manifest", manifest_path.string());

  Manifest manifest;
  manifest.config = to_json(config);
  manifest.dataset_id = dataset_id_for(manifest.config);
  manifest.scenes.resize(scenes.size());

  parallel_for(scenes.size(), jobs, [&](std::size_t i) {
    const Scene& scene = scenes[i];
    FrameBundle frame;
    try {
      frame = render_scene(scene, config.supersample);
    } catch (const ContractError& e) {
      throw ConfigError(fmt::format("scene {} rejected: {}", scene.scene_id, e.what()));
    }
    SceneRecord& r = manifest.scenes[i];
    r.scene = scene;
    r.rgb = "rgb/" + scene.scene_id + ".png";
    r.depth = "depth/" + scene.scene_id + ".pfm";
    r.mask = "mask/" + scene.scene_id + ".png";
    write_rgb_png(frame.rgb, out_dir / r.rgb);
    write_pfm(frame.depth, out_dir / r.depth);
    write_mask_png(frame.mask, out_dir / r.mask);
    r.rgb_digest = file_digest(out_dir / r.rgb);
    r.depth_digest = file_digest(out_dir / r.depth);
    r.mask_digest = file_digest(out_dir / r.mask);
  });

  write_manifest(manifest, manifest_path);
  return manifest;
}

std::vector<std::string> verify_dataset(const fs::path& dataset_dir) {
  std::vector<std::string> problems;
  Manifest m;
  try {
    m = load_manifest(dataset_dir / kManifestName);
  } catch (const DataError& e) {
    return {e.what()};
  }
  for (const auto& r : m.scenes) {
    for (const auto& [rel, digest] : {std::pair{r.rgb, r.rgb_digest}, {r.depth, r.depth_digest}, {r.mask, r.mask_digest}}) {
      const fs::path p = dataset_dir / rel;
      if (!fs::exists(p)) {
        problems.push_back("missing " + p.string());
      } else if (file_digest(p) != digest) {
        problems.push_back("digest mismatch " + p.string());
      }
    }
  }
  return problems;
}

}  // namespace relsize
