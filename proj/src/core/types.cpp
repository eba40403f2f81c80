#include "door/core/types.hpp"

#include <cmath>

#include "door/core/error.hpp"

namespace door {

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width <= 0 || height <= 0) throw Error(ErrorCode::InvalidImage, "zero dimensions");
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::InvalidImage, "pixel count does not match dimensions");
  }
}

GrayImage::GrayImage(int width, int height, std::uint8_t value)
    : GrayImage(width, height,
                std::vector<std::uint8_t>(width > 0 && height > 0
                                              ? static_cast<std::size_t>(width) * static_cast<std::size_t>(height)
                                              : 0,
                                          value)) {}

double FaceDescriptor::norm() const noexcept { return std::sqrt(dot(*this)); }

bool FaceDescriptor::is_degenerate() const noexcept {
  for (double v : values) {
    if (v != 0.0) return false;
  }
  return true;
}

bool FaceDescriptor::is_valid() const noexcept {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return is_degenerate() || std::abs(norm() - 1.0) <= 1e-9;
}

double FaceDescriptor::dot(const FaceDescriptor& other) const noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < kDescriptorSize; ++i) sum += values[i] * other.values[i];
  return sum;
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Resident: return "resident";
    case Role::Guest: return "guest";
    case Role::Blacklisted: return "blacklisted";
  }
  return "resident";
}

std::optional<Role> parse_role(std::string_view text) {
  if (text == "resident") return Role::Resident;
  if (text == "guest") return Role::Guest;
  if (text == "blacklisted") return Role::Blacklisted;
  return std::nullopt;
}

void check_role_expiry(Role role, const std::optional<TimestampMs>& expiry) {
  if ((role == Role::Guest) != expiry.has_value()) {
    throw Error(ErrorCode::RoleExpiryMismatch,
                role == Role::Guest ? "guest requires guest_expires_at"
                                    : "guest_expires_at is only allowed for guests");
  }
}

}  // namespace door
