#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wavenet/dataset.hpp"
#include "wavenet/patch.hpp"
#include "wavenet/pgm.hpp"
#include "wavenet/random.hpp"

namespace wavenet {

// Slices are read as signals sampled at this rate, so a 128-px slice spans 1 s.
inline constexpr double kSliceSampleRate = 128.0;

/// Loads an 8-bit P5 patch (maxval 255, side x side) and divides by 255.
LabeledPatch load_patch(const std::filesystem::path& path, int label, std::size_t side = kPatchSide);

/// Quantizes [0, 1] intensities to 0..255 (rounded).
GrayImage to_gray(const LabeledPatch& patch);

/// Rows top-to-bottom, then columns left-to-right: 2 * side slices.
std::vector<std::vector<double>> slice_patch(const LabeledPatch& patch);

struct SliceRecord {
  std::string patch_id;
  char orientation = 'h';  // 'h' = row, 'v' = column
  std::size_t index = 0;
};

struct SliceDataset {
  Dataset data;
  std::vector<SliceRecord> manifest;  // one record per retained slice, same order
};

/// Pools every slice, shuffles, then keeps the first min-class-count slices of
/// each class so both classes end up equally represented.
SliceDataset build_slice_dataset(const std::vector<LabeledPatch>& patches, Rng& rng,
                                 double sample_rate = kSliceSampleRate);

}  // namespace wavenet
