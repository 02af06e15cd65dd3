#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace vmtrack {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 8-bit RGB raster, row-major.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = {});

  [[nodiscard]] int width() const noexcept { return width_; }
  [[nodiscard]] int height() const noexcept { return height_; }
  [[nodiscard]] bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  [[nodiscard]] Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);

  [[nodiscard]] const std::vector<std::uint8_t>& bytes() const noexcept { return data_; }
  [[nodiscard]] std::vector<std::uint8_t>& bytes() noexcept { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Reads an 8-bit PNG; gray, palette and alpha variants are converted to RGB.
[[nodiscard]] Image read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const Image& image);

/// "frame_%06d.png"
[[nodiscard]] std::string frame_file_name(int frame_index);

}  // namespace vmtrack
