#pragma once

#include "door/vision/kernels.hpp"

namespace door::vision::kernels::detail {

// Weighted sum of the source pixels under grid cell (row, col); exact in integers.
inline std::uint64_t cell_numerator(const GrayImage& image, int row, int col) {
  const int w = image.width();
  const int h = image.height();
  const int x0 = static_cast<int>((static_cast<std::int64_t>(col) * w) / 16);
  const int x1 = static_cast<int>((static_cast<std::int64_t>(col + 1) * w + 15) / 16);
  const int y0 = static_cast<int>((static_cast<std::int64_t>(row) * h) / 16);
  const int y1 = static_cast<int>((static_cast<std::int64_t>(row + 1) * h + 15) / 16);
  std::uint64_t num = 0;
  for (int y = y0; y < y1; ++y) {
    const auto oy = static_cast<std::uint64_t>(axis_overlap(y, row, h));
    if (oy == 0) continue;
    std::uint64_t row_sum = 0;
    for (int x = x0; x < x1; ++x) {
      row_sum += static_cast<std::uint64_t>(axis_overlap(x, col, w)) * image.at(x, y);
    }
    num += oy * row_sum;
  }
  return num;
}

inline double cell_value(const GrayImage& image, int row, int col) {
  const double area = static_cast<double>(image.width()) * static_cast<double>(image.height());
  return static_cast<double>(cell_numerator(image, row, col)) / area;
}

inline std::uint64_t pixel_value(std::uint8_t p, bool squared) {
  return squared ? static_cast<std::uint64_t>(p) * p : p;
}

}  // namespace door::vision::kernels::detail
