#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "door/core/clock.hpp"

namespace door {

// 8-bit grayscale raster, row-major.
class GrayImage {
 public:
  GrayImage() = default;
  // Throws InvalidImage when a dimension is zero or the pixel count is wrong.
  GrayImage(int width, int height, std::vector<std::uint8_t> pixels);
  // width x height image filled with `value`.
  GrayImage(int width, int height, std::uint8_t value);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  std::uint8_t at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  std::uint8_t& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

struct FaceBox {
  int left = 0;
  int top = 0;
  int width = 0;
  int height = 0;

  bool fits(int image_width, int image_height) const noexcept {
    return left >= 0 && top >= 0 && width > 0 && height > 0 && left + width <= image_width &&
           top + height <= image_height;
  }

  friend bool operator==(const FaceBox&, const FaceBox&) = default;
};

inline constexpr std::size_t kDescriptorSize = 256;

// Unit vector summarizing a face crop, or all zeros for a uniform crop.
struct FaceDescriptor {
  std::array<double, kDescriptorSize> values{};

  double norm() const noexcept;
  bool is_degenerate() const noexcept;
  // Unit norm within 1e-9, or exactly zero.
  bool is_valid() const noexcept;
  double dot(const FaceDescriptor& other) const noexcept;

  friend bool operator==(const FaceDescriptor&, const FaceDescriptor&) = default;
};

enum class Role { Resident, Guest, Blacklisted };

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view text);

struct PersonRecord {
  std::string person_id;
  std::string name;
  Role role = Role::Resident;
  std::vector<FaceDescriptor> descriptors;
  TimestampMs enrolled_at = 0;
  std::optional<TimestampMs> guest_expires_at;

  friend bool operator==(const PersonRecord&, const PersonRecord&) = default;
};

// Throws RoleExpiryMismatch unless (role == Guest) == expiry.has_value().
void check_role_expiry(Role role, const std::optional<TimestampMs>& expiry);

}  // namespace door
