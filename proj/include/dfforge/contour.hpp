#pragma once

// Isocontours of a sampled field by marching squares.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "dfforge/error.hpp"

namespace dfforge {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Polyline {
  std::vector<Point2> points;
  bool closed = false;
};

struct ContourSet {
  double level = 0.0;
  std::vector<Polyline> lines;
};

/// Values on a rectilinear grid; value(i, j) at (xs[i], ys[j]).
struct SampledField {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> values;  // row-major in i

  double value(std::size_t i, std::size_t j) const { return values[i * ys.size() + j]; }

  double max() const {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : values) m = std::max(m, v);
    return m;
  }
};

/// top * ratio^k for k = 1 .. count.
inline std::vector<double> geometric_levels(double top, double ratio = 0.4, int count = 12) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigurationError("contour level ratio must lie in (0, 1)");
  std::vector<double> out;
  double v = top;
  for (int k = 1; k <= count; ++k) {
    v *= ratio;
    out.push_back(v);
  }
  return out;
}

/// Symmetric grid lo .. hi with hi = -lo reproduced exactly: y_j = h (2j - (N-1)) / (N-1).
inline std::vector<double> symmetric_axis(double half_width, int n) {
  std::vector<double> ys(n);
  for (int j = 0; j < n; ++j) ys[j] = n == 1 ? 0.0 : half_width * (2 * j - (n - 1)) / (n - 1);
  return ys;
}

namespace detail {

// Crossing on the edge between grid nodes a and b, interpolated from the node
// nearer the y axis origin so that mirrored edges give mirrored points.
inline Point2 edge_crossing(Point2 a, double fa, Point2 b, double fb, double level) {
  const bool swap = std::abs(b.y) < std::abs(a.y) || (std::abs(b.y) == std::abs(a.y) && b.x < a.x);
  if (swap) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  const double t = (level - fa) / (fb - fa);
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

// Edge identifiers: horizontal edges (i,j)-(i+1,j) and vertical edges (i,j)-(i,j+1).
inline std::uint64_t edge_key(std::size_t i, std::size_t j, bool vertical) {
  return (static_cast<std::uint64_t>(i) << 33) | (static_cast<std::uint64_t>(j) << 1) | (vertical ? 1u : 0u);
}

}  // namespace detail

inline std::vector<Polyline> marching_squares(const SampledField& f, double level) {
  const std::size_t nx = f.xs.size();
  const std::size_t ny = f.ys.size();
  if (f.values.size() != nx * ny) throw ConfigurationError("marching_squares: value count mismatch");
  if (nx < 2 || ny < 2) return {};

  std::map<std::uint64_t, Point2> crossing;
  auto node = [&](std::size_t i, std::size_t j) { return Point2{f.xs[i], f.ys[j]}; };
  auto above = [&](std::size_t i, std::size_t j) { return f.value(i, j) >= level; };
  auto get = [&](std::size_t i, std::size_t j, bool vertical) {
    const auto key = detail::edge_key(i, j, vertical);
    auto it = crossing.find(key);
    if (it == crossing.end()) {
      const std::size_t i2 = vertical ? i : i + 1;
      const std::size_t j2 = vertical ? j + 1 : j;
      it = crossing
               .emplace(key, detail::edge_crossing(node(i, j), f.value(i, j), node(i2, j2),
                                                   f.value(i2, j2), level))
               .first;
    }
    return key;
  };

  std::vector<std::pair<std::uint64_t, std::uint64_t>> segments;
  for (std::size_t i = 0; i + 1 < nx; ++i) {
    for (std::size_t j = 0; j + 1 < ny; ++j) {
      const bool a = above(i, j), b = above(i + 1, j), c = above(i + 1, j + 1), d = above(i, j + 1);
      const int code = (a ? 1 : 0) | (b ? 2 : 0) | (c ? 4 : 0) | (d ? 8 : 0);
      if (code == 0 || code == 15) continue;
      // Cell edges: bottom (i,j)-(i+1,j), right (i+1,j)-(i+1,j+1),
      // top (i,j+1)-(i+1,j+1), left (i,j)-(i,j+1).
      auto bottom = [&] { return get(i, j, false); };
      auto right = [&] { return get(i + 1, j, true); };
      auto top = [&] { return get(i, j + 1, false); };
      auto left = [&] { return get(i, j, true); };
      const double centre =
          0.25 * ((f.value(i, j) + f.value(i + 1, j + 1)) + (f.value(i + 1, j) + f.value(i, j + 1)));
      switch (code) {
        case 1: case 14: segments.emplace_back(left(), bottom()); break;
        case 2: case 13: segments.emplace_back(bottom(), right()); break;
        case 3: case 12: segments.emplace_back(left(), right()); break;
        case 4: case 11: segments.emplace_back(right(), top()); break;
        case 6: case 9: segments.emplace_back(bottom(), top()); break;
        case 7: case 8: segments.emplace_back(left(), top()); break;
        case 5:
          if (centre >= level) {
            segments.emplace_back(left(), top());
            segments.emplace_back(bottom(), right());
          } else {
            segments.emplace_back(left(), bottom());
            segments.emplace_back(right(), top());
          }
          break;
        case 10:
          if (centre >= level) {
            segments.emplace_back(left(), bottom());
            segments.emplace_back(right(), top());
          } else {
            segments.emplace_back(left(), top());
            segments.emplace_back(bottom(), right());
          }
          break;
        default: break;
      }
    }
  }

  // Chain segments through shared edge crossings.
  std::multimap<std::uint64_t, std::size_t> at;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    at.emplace(segments[s].first, s);
    at.emplace(segments[s].second, s);
  }
  std::vector<bool> used(segments.size(), false);
  auto next_segment = [&](std::uint64_t key) -> std::ptrdiff_t {
    auto [lo, hi] = at.equal_range(key);
    for (auto it = lo; it != hi; ++it)
      if (!used[it->second]) return static_cast<std::ptrdiff_t>(it->second);
    return -1;
  };
  std::vector<Polyline> lines;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    used[s] = true;
    std::vector<std::uint64_t> keys{segments[s].first, segments[s].second};
    for (int dir = 0; dir < 2; ++dir) {
      for (;;) {
        const std::uint64_t end = keys.back();
        const auto n = next_segment(end);
        if (n < 0) break;
        used[n] = true;
        keys.push_back(segments[n].first == end ? segments[n].second : segments[n].first);
      }
      std::reverse(keys.begin(), keys.end());
    }
    Polyline pl;
    pl.closed = keys.size() > 2 && keys.front() == keys.back();
    if (pl.closed) keys.pop_back();
    for (auto k : keys) pl.points.push_back(crossing.at(k));
    lines.push_back(std::move(pl));
  }
  return lines;
}

inline std::vector<ContourSet> contour_levels(const SampledField& f, const std::vector<double>& levels) {
  std::vector<ContourSet> out;
  for (double l : levels) out.push_back({l, marching_squares(f, l)});
  return out;
}

}  // namespace dfforge
