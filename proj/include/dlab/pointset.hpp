#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dlab/dyadic.hpp"

namespace dlab {

struct Point {
  Dyadic x, y;
  bool operator==(const Point& o) const { return x == o.x && y == o.y; }
};

/// Dyadic interval [index * 2^-level, (index+1) * 2^-level).
struct DyadicInterval {
  int level = 0;
  uint64_t index = 0;

  DyadicInterval() = default;
  DyadicInterval(int level_, uint64_t index_);

  Dyadic lower() const { return Dyadic(static_cast<int128>(index), level); }
  Dyadic upper() const { return Dyadic(static_cast<int128>(index) + 1, level); }
  Dyadic length() const { return Dyadic(1, level); }
  bool contains(const Dyadic& v) const;
};

struct DyadicRectangle {
  DyadicInterval rx, ry;

  DyadicRectangle() = default;
  DyadicRectangle(DyadicInterval rx_, DyadicInterval ry_) : rx(rx_), ry(ry_) {}
  DyadicRectangle(int k, uint64_t i, int l, uint64_t j)
      : rx(k, i), ry(l, j) {}

  Dyadic volume() const { return Dyadic(1, rx.level + ry.level); }
  bool contains(const Point& p) const { return rx.contains(p.x) && ry.contains(p.y); }
};

enum class PointSetKind { vdc, vdc_truncated, external };

class PointSet {
 public:
  PointSetKind kind = PointSetKind::external;
  std::optional<int> n;
  std::optional<DigitString> sigma;
  std::vector<Point> points;

  int64_t size() const { return int64_t(points.size()); }
};

/// The sigma-digit scrambled van der Corput set: 2^n points
/// (tau/2^n, rev_n(tau/2^n xor sigma)) + (2^-n-1, 2^-n-1), in tau order.
PointSet generate_vdc(int n, const DigitString& sigma);

/// First N+1 points of generate_vdc(n, sigma); requires 2^{n-1} < N < 2^n.
PointSet general_n_set(int n, const DigitString& sigma, int64_t N);

std::vector<Point> points_in_rectangle(const PointSet& ps, const DyadicRectangle& r);

void save_points(const PointSet& ps, std::ostream& out);
void save_points(const PointSet& ps, const std::string& path);
PointSet load_points(std::istream& in);
PointSet load_points_file(const std::string& path);

/// External point set from explicit coordinates (validates the invariants).
PointSet make_external(std::vector<Point> points);

}  // namespace dlab
