#include "wavenet/imagery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wavenet/error.hpp"

namespace wavenet {

LabeledPatch load_patch(const std::filesystem::path& path, int label, std::size_t side) {
  const GrayImage img = read_pgm(path);
  if (img.maxval != 255) throw FormatError("PGM: maxval must be 255 for a patch, got " + std::to_string(img.maxval));
  if (img.width != side) throw FormatError("PGM: width must be " + std::to_string(side) + ", got " + std::to_string(img.width));
  if (img.height != side) throw FormatError("PGM: height must be " + std::to_string(side) + ", got " + std::to_string(img.height));
  if (label != kWaveLabel && label != kCloudLabel) throw ContractError("patch label must be 0 (cloud) or 1 (wave)");
  LabeledPatch p;
  p.side = side;
  p.label = label;
  p.source_id = path.string();
  p.pixels.resize(img.pixels.size());
  for (std::size_t i = 0; i < img.pixels.size(); ++i) p.pixels[i] = img.pixels[i] / 255.0;
  return p;
}

GrayImage to_gray(const LabeledPatch& patch) {
  GrayImage img;
  img.width = img.height = patch.side;
  img.maxval = 255;
  img.pixels.resize(patch.pixels.size());
  for (std::size_t i = 0; i < patch.pixels.size(); ++i)
    img.pixels[i] = static_cast<std::uint8_t>(std::lround(std::clamp(patch.pixels[i], 0.0, 1.0) * 255.0));
  return img;
}

std::vector<std::vector<double>> slice_patch(const LabeledPatch& patch) {
  const std::size_t n = patch.side;
  if (n == 0 || patch.pixels.size() != n * n) throw ContractError("slice_patch: patch is not square");
  std::vector<std::vector<double>> slices(2 * n, std::vector<double>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      slices[r][c] = patch.at(r, c);
      slices[n + c][r] = patch.at(r, c);
    }
  return slices;
}

SliceDataset build_slice_dataset(const std::vector<LabeledPatch>& patches, Rng& rng, double sample_rate) {
  struct Pending {
    std::vector<double> values;
    int label;
    SliceRecord record;
  };
  std::vector<Pending> pool;
  std::size_t side = 0;
  for (std::size_t pi = 0; pi < patches.size(); ++pi) {
    const auto& p = patches[pi];
    if (side == 0) side = p.side;
    if (p.side != side) throw ContractError("build_slice_dataset: patches differ in size");
    const std::string id = p.source_id.empty() ? "patch" + std::to_string(pi) : p.source_id;
    auto slices = slice_patch(p);
    for (std::size_t i = 0; i < slices.size(); ++i) {
      const bool row = i < side;
      pool.push_back({std::move(slices[i]), p.label, {id, row ? 'h' : 'v', row ? i : i - side}});
    }
  }
  const auto waves = static_cast<std::size_t>(std::count_if(pool.begin(), pool.end(), [](const Pending& s) { return s.label == kWaveLabel; }));
  const std::size_t clouds = pool.size() - waves;
  if (waves == 0 || clouds == 0) throw DomainError("build_slice_dataset: both classes need at least one patch");

  std::shuffle(pool.begin(), pool.end(), rng);
  const std::size_t keep = std::min(waves, clouds);
  std::size_t kept_wave = 0;
  std::size_t kept_cloud = 0;

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  SliceDataset out;
  for (auto& s : pool) {
    auto& kept = s.label == kWaveLabel ? kept_wave : kept_cloud;
    if (kept == keep) continue;
    ++kept;
    rows.push_back(std::move(s.values));
    labels.push_back(s.label);
    out.manifest.push_back(std::move(s.record));
  }
  out.data = make_dataset_from_rows(rows, std::move(labels), sample_rate);
  return out;
}

}  // namespace wavenet
