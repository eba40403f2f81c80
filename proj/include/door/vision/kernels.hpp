#pragma once

// Data-parallel inner loops of the vision pipeline. `serial` is the reference
// the tests hold the OpenMP variants to; both must agree bit-for-bit.

#include <cstdint>
#include <span>
#include <vector>

#include "door/core/types.hpp"
#include "door/vision/vision.hpp"

namespace door::vision::kernels {

// Images smaller than this run the OpenMP kernels on one thread.
inline constexpr std::size_t kParallelMinPixels = 64 * 64;

struct Moments {
  std::uint64_t count = 0;
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
};

// True when `value` is strictly above mean + 0.5 * population stddev, decided
// in exact integer arithmetic.
bool above_threshold(std::uint8_t value, const Moments& m) noexcept;

namespace serial {
std::vector<std::uint64_t> integral_table(const GrayImage& image, bool squared);
std::vector<std::uint8_t> foreground_mask(const GrayImage& image, const Moments& m);
Grid16 resize_16(const GrayImage& image);
}  // namespace serial

namespace omp {
std::vector<std::uint64_t> integral_table(const GrayImage& image, bool squared);
std::vector<std::uint8_t> foreground_mask(const GrayImage& image, const Moments& m);
Grid16 resize_16(const GrayImage& image);
}  // namespace omp

// Overlap, in 1/16-pixel units, of source pixel `p` with grid cell `cell` along an axis of `extent` pixels.
inline std::int64_t axis_overlap(int p, int cell, int extent) noexcept {
  const std::int64_t lo = std::max<std::int64_t>(16LL * p, static_cast<std::int64_t>(cell) * extent);
  const std::int64_t hi = std::min<std::int64_t>(16LL * p + 16, static_cast<std::int64_t>(cell + 1) * extent);
  return hi > lo ? hi - lo : 0;
}

}  // namespace door::vision::kernels
