#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "relsize/raster.hpp"

namespace relsize {

namespace fs = std::filesystem;

/// Grayscale PFM: "Pf\n<W> <H>\n-1.0\n", little-endian float32, rows stored bottom-up.
/// Rejects NaN, Inf and negative values.
void write_pfm(const DepthMap& map, const fs::path& path);

/// Throws MissingFileError, PfmHeaderError, PfmByteOrderError or PfmPayloadError.
DepthMap read_pfm(const fs::path& path);

/// 8-bit single-channel PNG. Throws ContractError for labels outside [0, 255].
void write_mask_png(const LabelMap& mask, const fs::path& path);

/// Throws PngFormatError unless the file is 8-bit grayscale.
LabelMap read_mask_png(const fs::path& path);

void write_rgb_png(const RgbImage& image, const fs::path& path);
RgbImage read_rgb_png(const fs::path& path);

enum class DepthSpace { depth, inverse_depth };

std::string_view to_string(DepthSpace space);
/// Throws DataError for anything but "depth" or "inverse_depth".
DepthSpace parse_depth_space(std::string_view text);

struct PredictionRecord {
  std::string method_name;
  std::string scene_id;
  DepthSpace space = DepthSpace::depth;
  fs::path file;
};

struct Prediction {
  DepthMap map;
  DepthSpace space = DepthSpace::depth;
};

/// Loads the PFM named by the record. No resampling; dimensions are checked by the evaluator.
Prediction read_prediction(const PredictionRecord& record);

/// One method run: {"method": ..., "space": ..., "files": {scene_id: path}}.
/// Relative paths are resolved against the sidecar's directory when loading.
struct PredictionSidecar {
  std::string method;
  DepthSpace space = DepthSpace::depth;
  std::vector<PredictionRecord> records;  ///< sorted by scene_id
};

PredictionSidecar load_sidecar(const fs::path& path);
void write_sidecar(const PredictionSidecar& sidecar, const fs::path& path);

/// Lower-case hex SHA-256 of a file's bytes, prefixed with "sha256:".
std::string file_digest(const fs::path& path);

}  // namespace relsize
