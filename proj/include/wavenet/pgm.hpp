#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace wavenet {

/// 8-bit binary PGM (P5) raster.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  int maxval = 255;
  std::vector<std::uint8_t> pixels;  // row-major
};

/// Parses P5 with '#' comments in the header. Throws FormatError naming the
/// offending field (magic, width, height, maxval, pixel data).
GrayImage read_pgm(const std::filesystem::path& path);
GrayImage parse_pgm(const std::vector<std::uint8_t>& bytes);

void write_pgm(const std::filesystem::path& path, const GrayImage& image);

}  // namespace wavenet
