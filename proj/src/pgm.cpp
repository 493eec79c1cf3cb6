#include "wavenet/pgm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "wavenet/error.hpp"

namespace wavenet {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::string token(const char* field) {
    skip_space_and_comments();
    std::string out;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#')
      out.push_back(static_cast<char>(bytes_[pos_++]));
    if (out.empty()) throw FormatError(std::string("PGM: missing ") + field);
    return out;
  }

  long number(const char* field) {
    const std::string t = token(field);
    for (char ch : t)
      if (!std::isdigit(static_cast<unsigned char>(ch)))
        throw FormatError(std::string("PGM: ") + field + " is not a number ('" + t + "')");
    try {
      return std::stol(t);
    } catch (const std::exception&) {
      throw FormatError(std::string("PGM: ") + field + " out of range ('" + t + "')");
    }
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_start(const char* field) {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
      throw FormatError(std::string("PGM: expected whitespace after ") + field);
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage parse_pgm(const std::vector<std::uint8_t>& bytes) {
  HeaderReader in(bytes);
  if (in.token("magic") != "P5") throw FormatError("PGM: bad magic (expected P5)");
  GrayImage img;
  const long w = in.number("width");
  const long h = in.number("height");
  const long maxval = in.number("maxval");
  if (w <= 0) throw FormatError("PGM: width must be positive");
  if (h <= 0) throw FormatError("PGM: height must be positive");
  if (maxval <= 0 || maxval > 255) throw FormatError("PGM: maxval must be in 1..255 (8-bit only)");
  const std::size_t start = in.raster_start("maxval");
  img.width = static_cast<std::size_t>(w);
  img.height = static_cast<std::size_t>(h);
  img.maxval = static_cast<int>(maxval);
  const std::size_t count = img.width * img.height;
  if (bytes.size() < start + count) throw FormatError("PGM: pixel data truncated");
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(start),
                    bytes.begin() + static_cast<std::ptrdiff_t>(start + count));
  return img;
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("PGM: cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return parse_pgm(bytes);
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  if (image.pixels.size() != image.width * image.height) throw ContractError("write_pgm: pixel count mismatch");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("PGM: cannot write " + path.string());
  f << "P5\n" << image.width << ' ' << image.height << '\n' << image.maxval << '\n';
  f.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
}

}  // namespace wavenet
