#pragma once

#include <cstdint>
#include <vector>

#include "relsize/error.hpp"

namespace relsize {

/// Row-major image, row 0 at the top.
template <typename T>
struct Raster {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Raster() = default;
  Raster(int w, int h, T fill = T{}) : width(w), height(h), data(checked_size(w, h), fill) {}

  T& operator()(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  const T& operator()(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

  std::size_t size() const { return data.size(); }
  bool same_shape(int w, int h) const { return width == w && height == h; }
  template <typename U>
  bool same_shape(const Raster<U>& o) const { return same_shape(o.width, o.height); }

  bool operator==(const Raster&) const = default;

 private:
  static std::size_t checked_size(int w, int h) {
    if (w < 0 || h < 0) throw ContractError("raster dimensions must be non-negative");
    return static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  }
};

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

using DepthMap = Raster<float>;
using LabelMap = Raster<std::int32_t>;
using RgbImage = Raster<Rgb>;

}  // namespace relsize
