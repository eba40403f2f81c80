#include "oracles.hpp"

#include <algorithm>
#include <map>

namespace door::testing {

std::optional<FaceBox> naive_detect(const GrayImage& image, double min_area_fraction) {
  const int w = image.width();
  const int h = image.height();
  const auto n = static_cast<std::int64_t>(w) * h;
  std::int64_t sum = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) sum += image.at(x, y);
  }
  // M2 = sum_i (n*p_i - S)^2 = n^3 sigma^2. p > mu + sigma/2  <=>  np - S > 0 and 4n(np - S)^2 > M2.
  __int128 m2 = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const __int128 d = static_cast<__int128>(n) * image.at(x, y) - sum;
      m2 += d * d;
    }
  }
  std::vector<std::int64_t> label(static_cast<std::size_t>(n), -1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const __int128 d = static_cast<__int128>(n) * image.at(x, y) - sum;
      if (d > 0 && 4 * static_cast<__int128>(n) * d * d > m2) label[y * w + x] = y * w + x;
    }
  }
  // Propagate the minimum label across 4-neighbours until nothing changes.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        auto& l = label[y * w + x];
        if (l < 0) continue;
        const int nx[4] = {x - 1, x + 1, x, x};
        const int ny[4] = {y, y, y - 1, y + 1};
        for (int k = 0; k < 4; ++k) {
          if (nx[k] < 0 || ny[k] < 0 || nx[k] >= w || ny[k] >= h) continue;
          const auto other = label[ny[k] * w + nx[k]];
          if (other >= 0 && other < l) {
            l = other;
            changed = true;
          }
        }
      }
    }
  }
  struct Stats {
    std::int64_t count = 0;
    int min_x = 1 << 30, min_y = 1 << 30, max_x = -1, max_y = -1;
  };
  std::map<std::int64_t, Stats> comps;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto l = label[y * w + x];
      if (l < 0) continue;
      auto& s = comps[l];
      ++s.count;
      s.min_x = std::min(s.min_x, x);
      s.min_y = std::min(s.min_y, y);
      s.max_x = std::max(s.max_x, x);
      s.max_y = std::max(s.max_y, y);
    }
  }
  if (comps.empty()) return std::nullopt;
  // The label is the component's first pixel in raster order.
  const Stats* best = nullptr;
  for (const auto& [l, s] : comps) {
    if (!best || s.count > best->count ||
        (s.count == best->count && (s.min_y < best->min_y || (s.min_y == best->min_y && s.min_x < best->min_x)))) {
      best = &s;
    }
  }
  if (static_cast<double>(best->count) < min_area_fraction * static_cast<double>(n)) return std::nullopt;
  return FaceBox{best->min_x, best->min_y, best->max_x - best->min_x + 1, best->max_y - best->min_y + 1};
}

std::uint64_t naive_rect_sum(const GrayImage& image, int left, int top, int w, int h) {
  std::uint64_t s = 0;
  for (int y = top; y < top + h; ++y) {
    for (int x = left; x < left + w; ++x) s += image.at(x, y);
  }
  return s;
}

double naive_dot(const FaceDescriptor& a, const FaceDescriptor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
  return s;
}

std::vector<store::IdentifyCandidate> brute_identify(const std::vector<PersonRecord>& persons,
                                                     const FaceDescriptor& query, double threshold,
                                                     int max_candidates) {
  std::vector<store::IdentifyCandidate> all;
  for (const auto& p : persons) {
    double best = -2.0;
    for (const auto& d : p.descriptors) best = std::max(best, naive_dot(d, query));
    const double c = std::min(1.0, std::max(0.0, best));
    if (c >= threshold) all.push_back({p.person_id, c});
  }
  // Insertion sort keeps enrollment order among equal confidences.
  for (std::size_t i = 1; i < all.size(); ++i) {
    for (std::size_t j = i; j > 0 && all[j].confidence > all[j - 1].confidence; --j) std::swap(all[j], all[j - 1]);
  }
  if (all.size() > static_cast<std::size_t>(max_candidates)) all.resize(static_cast<std::size_t>(max_candidates));
  return all;
}

}  // namespace door::testing
