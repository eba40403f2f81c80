#include <omp.h>

#include "door/vision/kernels.hpp"
#include "kernels_common.hpp"

namespace door::vision::kernels::omp {

std::vector<std::uint64_t> integral_table(const GrayImage& image, bool squared) {
  const int w = image.width();
  const int h = image.height();
  const std::size_t stride = static_cast<std::size_t>(w) + 1;
  std::vector<std::uint64_t> table(stride * (static_cast<std::size_t>(h) + 1), 0);
  const bool parallel = image.size() >= kParallelMinPixels;

  // Row prefix sums are independent; then columns accumulate independently.
#pragma omp parallel for schedule(static) if (parallel)
  for (int y = 0; y < h; ++y) {
    std::uint64_t row_sum = 0;
    std::uint64_t* out = table.data() + (y + 1) * stride;
    for (int x = 0; x < w; ++x) {
      row_sum += detail::pixel_value(image.at(x, y), squared);
      out[x + 1] = row_sum;
    }
  }
#pragma omp parallel for schedule(static) if (parallel)
  for (int x = 1; x <= w; ++x) {
    for (int y = 1; y <= h; ++y) table[y * stride + x] += table[(y - 1) * stride + x];
  }
  return table;
}

std::vector<std::uint8_t> foreground_mask(const GrayImage& image, const Moments& m) {
  const auto px = image.pixels();
  const auto n = static_cast<std::int64_t>(px.size());
  std::vector<std::uint8_t> mask(px.size(), 0);
#pragma omp parallel for schedule(static) if (px.size() >= kParallelMinPixels)
  for (std::int64_t i = 0; i < n; ++i) mask[i] = above_threshold(px[i], m) ? 1 : 0;
  return mask;
}

Grid16 resize_16(const GrayImage& image) {
  Grid16 grid{};
#pragma omp parallel for schedule(static) if (image.size() >= kParallelMinPixels)
  for (int cell = 0; cell < kGridSide * kGridSide; ++cell) {
    grid[cell] = detail::cell_value(image, cell / kGridSide, cell % kGridSide);
  }
  return grid;
}

}  // namespace door::vision::kernels::omp
