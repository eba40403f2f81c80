#include "door/vision/vision.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "door/core/error.hpp"
#include "door/vision/kernels.hpp"

namespace door::vision {

IntegralImage::IntegralImage(int width, int height, std::vector<std::uint64_t> table)
    : width_(width), height_(height), table_(std::move(table)) {}

std::uint64_t IntegralImage::rect_sum(int left, int top, int w, int h) const {
  return at(left + w, top + h) + at(left, top) - at(left + w, top) - at(left, top + h);
}

IntegralImage integral(const GrayImage& image) {
  return IntegralImage(image.width(), image.height(), kernels::omp::integral_table(image, false));
}

IntegralImage integral_squared(const GrayImage& image) {
  return IntegralImage(image.width(), image.height(), kernels::omp::integral_table(image, true));
}

namespace {

struct Component {
  std::uint64_t count = 0;
  int min_x = std::numeric_limits<int>::max();
  int min_y = std::numeric_limits<int>::max();
  int max_x = -1;
  int max_y = -1;
  std::size_t first_index = 0;  // raster index of the seed pixel

  FaceBox box() const { return FaceBox{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1}; }
};

// Ordering among equally large components: smaller top, then smaller left,
// then earlier seed in raster order.
bool better(const Component& a, const Component& b) {
  if (a.count != b.count) return a.count > b.count;
  if (a.min_y != b.min_y) return a.min_y < b.min_y;
  if (a.min_x != b.min_x) return a.min_x < b.min_x;
  return a.first_index < b.first_index;
}

std::optional<Component> largest_component(std::vector<std::uint8_t> mask, int width, int height) {
  std::optional<Component> best;
  std::vector<std::size_t> stack;
  for (std::size_t seed = 0; seed < mask.size(); ++seed) {
    if (!mask[seed]) continue;
    Component c;
    c.first_index = seed;
    mask[seed] = 0;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(i % width);
      const int y = static_cast<int>(i / width);
      ++c.count;
      c.min_x = std::min(c.min_x, x);
      c.max_x = std::max(c.max_x, x);
      c.min_y = std::min(c.min_y, y);
      c.max_y = std::max(c.max_y, y);
      auto visit = [&](std::size_t j) {
        if (mask[j]) {
          mask[j] = 0;
          stack.push_back(j);
        }
      };
      if (x > 0) visit(i - 1);
      if (x + 1 < width) visit(i + 1);
      if (y > 0) visit(i - width);
      if (y + 1 < height) visit(i + width);
    }
    if (!best || better(c, *best)) best = c;
  }
  return best;
}

}  // namespace

FaceBox detect_face(const GrayImage& image, double min_area_fraction) {
  if (image.width() < kMinDetectSide || image.height() < kMinDetectSide) {
    throw Error(ErrorCode::InvalidImage, "InvalidImage: detection needs at least 4x4 pixels");
  }
  const auto sums = integral(image);
  const auto squares = integral_squared(image);
  const kernels::Moments moments{image.size(), sums.total(), squares.total()};

  const auto best = largest_component(kernels::omp::foreground_mask(image, moments), image.width(), image.height());
  if (!best) throw Error(ErrorCode::NoFaceFound, "NoFaceFound: no pixel above the foreground threshold");
  if (static_cast<double>(best->count) < min_area_fraction * static_cast<double>(image.size())) {
    throw Error(ErrorCode::NoFaceFound, "NoFaceFound: largest region is below the area floor");
  }
  return best->box();
}

GrayImage crop(const GrayImage& image, const FaceBox& box) {
  if (!box.fits(image.width(), image.height())) throw Error(ErrorCode::InvalidBox, "InvalidBox: box outside image");
  std::vector<std::uint8_t> pixels;
  pixels.reserve(static_cast<std::size_t>(box.width) * box.height);
  for (int y = box.top; y < box.top + box.height; ++y) {
    const auto row = image.pixels().subspan(static_cast<std::size_t>(y) * image.width() + box.left, box.width);
    pixels.insert(pixels.end(), row.begin(), row.end());
  }
  return GrayImage(box.width, box.height, std::move(pixels));
}

Grid16 resize_16(const GrayImage& image) { return kernels::omp::resize_16(image); }

FaceDescriptor extract_descriptor(const GrayImage& crop_image) {
  const Grid16 grid = resize_16(crop_image);
  const double mean = std::accumulate(grid.begin(), grid.end(), 0.0) / static_cast<double>(grid.size());
  FaceDescriptor d;
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    d.values[i] = grid[i] - mean;
    norm_sq += d.values[i] * d.values[i];
  }
  const double norm = std::sqrt(norm_sq);
  if (norm < 1e-12) return FaceDescriptor{};
  for (double& v : d.values) v /= norm;
  return d;
}

}  // namespace door::vision
