#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "door/core/types.hpp"

namespace door::vision {

// Foreground threshold is mean + kSigmaCoefficient * stddev.
inline constexpr double kSigmaCoefficient = 0.5;
inline constexpr int kMinDetectSide = 4;
inline constexpr int kGridSide = 16;

using Grid16 = std::array<double, kGridSide * kGridSide>;

// Binary (P5) and plain (P2) PGM, maxval <= 255.
GrayImage decode_pgm(std::span<const std::uint8_t> bytes);
GrayImage decode_pgm(std::string_view bytes);
// Always binary P5 with maxval 255.
std::string encode_pgm(const GrayImage& image);

GrayImage read_pgm_file(const std::string& path);
void write_pgm_file(const std::string& path, const GrayImage& image);

// (width+1) x (height+1) summed-area table; entry (x, y) is the sum of all
// pixels with column < x and row < y.
class IntegralImage {
 public:
  IntegralImage(int width, int height, std::vector<std::uint64_t> table);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::uint64_t at(int x, int y) const { return table_[static_cast<std::size_t>(y) * (width_ + 1) + x]; }
  std::uint64_t rect_sum(int left, int top, int w, int h) const;
  std::uint64_t total() const { return at(width_, height_); }
  std::span<const std::uint64_t> table() const noexcept { return table_; }

 private:
  int width_;
  int height_;
  std::vector<std::uint64_t> table_;
};

IntegralImage integral(const GrayImage& image);
// Same table over squared intensities.
IntegralImage integral_squared(const GrayImage& image);

// Largest 4-connected component of pixels strictly brighter than mean + 0.5 sigma.
// Throws InvalidImage below 4x4, NoFaceFound for an empty mask or a component under the area floor.
FaceBox detect_face(const GrayImage& image, double min_area_fraction);

// Throws InvalidBox when the box does not fit the image.
GrayImage crop(const GrayImage& image, const FaceBox& box);

// Area-average resampling onto a 16x16 grid, row-major.
Grid16 resize_16(const GrayImage& image);

FaceDescriptor extract_descriptor(const GrayImage& crop);

}  // namespace door::vision
