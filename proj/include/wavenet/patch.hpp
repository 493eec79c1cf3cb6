#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace wavenet {

inline constexpr int kCloudLabel = 0;
inline constexpr int kWaveLabel = 1;
inline constexpr std::size_t kPatchSide = 128;

/// Square grayscale patch, row-major, intensities in [0, 1].
struct LabeledPatch {
  std::size_t side = 0;
  std::vector<double> pixels;
  int label = kCloudLabel;
  std::string source_id;

  double at(std::size_t row, std::size_t col) const { return pixels[row * side + col]; }
};

}  // namespace wavenet
