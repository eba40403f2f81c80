#include "synthetic.hpp"

#include <algorithm>
#include <cmath>

namespace door::testing {

GrayImage block_image(int width, int height, std::uint8_t background, const std::vector<Block>& blocks) {
  GrayImage img(width, height, background);
  for (const auto& b : blocks) {
    for (int y = b.top; y < b.top + b.height; ++y) {
      for (int x = b.left; x < b.left + b.width; ++x) img.at(x, y) = b.value;
    }
  }
  return img;
}

GrayImage face_patch(int seed) {
  constexpr int kW = 24;
  constexpr int kH = 28;
  std::mt19937 rng(static_cast<std::uint32_t>(seed) * 7919u + 17u);
  GrayImage img(kW, kH, std::uint8_t{0});
  for (int y = 0; y < kH; ++y) {
    for (int x = 0; x < kW; ++x) img.at(x, y) = static_cast<std::uint8_t>(150 + (x + 2 * y) % 9);
  }
  // Bright cross: a vertical bar through the middle plus seed-specific arms,
  // each arm touching the bar so the bright set is one component.
  auto bright = [&](int x, int y) { return static_cast<std::uint8_t>(220 + (x * 3 + y * 5 + seed) % 30); };
  const int bar_left = 9 + static_cast<int>(rng() % 4);
  for (int y = 2; y < kH - 2; ++y) {
    for (int x = bar_left; x < bar_left + 4; ++x) img.at(x, y) = bright(x, y);
  }
  const int arms = 2 + static_cast<int>(rng() % 3);
  for (int a = 0; a < arms; ++a) {
    const int top = 2 + static_cast<int>(rng() % (kH - 7));
    const int h = 2 + static_cast<int>(rng() % 3);
    const bool left_side = rng() % 2 == 0;
    const int len = 3 + static_cast<int>(rng() % 6);
    const int x0 = left_side ? bar_left - len : bar_left + 4;
    for (int y = top; y < top + h; ++y) {
      for (int x = x0; x < x0 + len; ++x) img.at(x, y) = bright(x, y);
    }
  }
  return img;
}

GrayImage face_frame(int seed, int left, int top, int width, int height) {
  GrayImage frame(width, height, std::uint8_t{12});
  const GrayImage patch = face_patch(seed);
  for (int y = 0; y < patch.height(); ++y) {
    for (int x = 0; x < patch.width(); ++x) frame.at(left + x, top + y) = patch.at(x, y);
  }
  return frame;
}

GrayImage uniform_frame(std::uint8_t value, int width, int height) { return GrayImage(width, height, value); }

GrayImage random_detect_image(std::mt19937_64& rng, int width, int height) {
  std::uniform_int_distribution<int> pct(0, 99);
  const int kind = pct(rng);
  if (kind < 5) return GrayImage(width, height, static_cast<std::uint8_t>(rng() % 256));

  GrayImage img(width, height, std::uint8_t{0});
  const int noise = kind < 50 ? static_cast<int>(rng() % 40) : static_cast<int>(rng() % 256);
  for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(noise == 0 ? 0 : rng() % (noise + 1));
  const int blocks = static_cast<int>(rng() % 6);
  for (int b = 0; b < blocks; ++b) {
    const int w = 1 + static_cast<int>(rng() % std::min(10, width));
    const int h = 1 + static_cast<int>(rng() % std::min(10, height));
    const int left = static_cast<int>(rng() % (width - w + 1));
    const int top = static_cast<int>(rng() % (height - h + 1));
    const auto value = static_cast<std::uint8_t>(128 + rng() % 128);
    for (int y = top; y < top + h; ++y) {
      for (int x = left; x < left + w; ++x) img.at(x, y) = value;
    }
  }
  return img;
}

GrayImage random_crop(std::mt19937_64& rng, int max_side) {
  const int w = 2 + static_cast<int>(rng() % (max_side - 1));
  const int h = 1 + static_cast<int>(rng() % max_side);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h);
  for (auto& p : px) p = static_cast<std::uint8_t>(rng() % 256);
  if (px[0] == px[1]) px[1] = static_cast<std::uint8_t>(px[0] ^ 0x80);
  return GrayImage(w, h, std::move(px));
}

FaceDescriptor random_unit_descriptor(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  FaceDescriptor d;
  double norm = 0.0;
  for (auto& v : d.values) {
    v = n(rng);
    norm += v * v;
  }
  norm = std::sqrt(norm);
  for (auto& v : d.values) v /= norm;
  return d;
}

FaceDescriptor orthogonal_unit(const FaceDescriptor& to, std::mt19937_64& rng) {
  auto d = random_unit_descriptor(rng);
  const double along = d.dot(to);
  for (std::size_t i = 0; i < kDescriptorSize; ++i) d.values[i] -= along * to.values[i];
  const double norm = d.norm();
  for (auto& v : d.values) v /= norm;
  return d;
}

FaceDescriptor blend(double a, const FaceDescriptor& x, double b, const FaceDescriptor& y) {
  FaceDescriptor out;
  for (std::size_t i = 0; i < kDescriptorSize; ++i) out.values[i] = a * x.values[i] + b * y.values[i];
  const double norm = out.norm();
  for (auto& v : out.values) v /= norm;
  return out;
}

SystemConfig test_config() {
  return validate_config(nlohmann::json{{"admin_token", "admin-secret"},
                                        {"api_key", "api-secret"},
                                        {"recognition_endpoint", "http://127.0.0.1:1"},
                                        {"person_group_id", "home"}});
}

}  // namespace door::testing
