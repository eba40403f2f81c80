#pragma once

#include <cstdint>

namespace door {

using TimestampMs = std::int64_t;
using DurationMs = std::int64_t;

class Clock {
 public:
  virtual ~Clock() = default;
  virtual TimestampMs now_ms() const = 0;
};

}  // namespace door
