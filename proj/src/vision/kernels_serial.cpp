#include "door/vision/kernels.hpp"
#include "kernels_common.hpp"

namespace door::vision::kernels {

bool above_threshold(std::uint8_t value, const Moments& m) noexcept {
  using i128 = __int128;
  const i128 n = static_cast<i128>(m.count);
  const i128 s = static_cast<i128>(m.sum);
  // value > s/n + sqrt(n*q - s^2) / (2n)  <=>  2(n*value - s) > sqrt(n*q - s^2)
  const i128 lhs = 2 * (n * value - s);
  if (lhs <= 0) return false;
  const i128 spread = n * static_cast<i128>(m.sum_sq) - s * s;
  return lhs * lhs > spread;
}

namespace serial {

std::vector<std::uint64_t> integral_table(const GrayImage& image, bool squared) {
  const int w = image.width();
  const int h = image.height();
  const std::size_t stride = static_cast<std::size_t>(w) + 1;
  std::vector<std::uint64_t> table(stride * (static_cast<std::size_t>(h) + 1), 0);
  for (int y = 0; y < h; ++y) {
    std::uint64_t row_sum = 0;
    for (int x = 0; x < w; ++x) {
      row_sum += detail::pixel_value(image.at(x, y), squared);
      table[(y + 1) * stride + x + 1] = table[y * stride + x + 1] + row_sum;
    }
  }
  return table;
}

std::vector<std::uint8_t> foreground_mask(const GrayImage& image, const Moments& m) {
  const auto px = image.pixels();
  std::vector<std::uint8_t> mask(px.size(), 0);
  for (std::size_t i = 0; i < px.size(); ++i) mask[i] = above_threshold(px[i], m) ? 1 : 0;
  return mask;
}

Grid16 resize_16(const GrayImage& image) {
  Grid16 grid{};
  for (int row = 0; row < kGridSide; ++row) {
    for (int col = 0; col < kGridSide; ++col) grid[row * kGridSide + col] = detail::cell_value(image, row, col);
  }
  return grid;
}

}  // namespace serial
}  // namespace door::vision::kernels
