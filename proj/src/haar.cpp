#include "dlab/haar.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <ostream>
#include <random>
#include <stdexcept>

namespace dlab {

namespace {

// x * 2^k for k >= 0.
Dyadic scale_pow2(const Dyadic& x, int k) {
  if (x.exp() >= k) return Dyadic(x.num(), x.exp() - k);
  return Dyadic(x.num() << (k - x.exp()), 0);
}

Dyadic phi_scaled(const Dyadic& x, int k) { return phi(scale_pow2(x, k)); }

// floor(v * 2^level) for v in [0,1).
uint64_t cell_index(const Dyadic& v, int level) {
  if (v.exp() <= level) return uint64_t(v.num()) << (level - v.exp());
  return uint64_t(v.num() >> (v.exp() - level));
}

// One-dimensional Haar value on I: -1 on the left half, +1 on the right.
int haar1(const DyadicInterval& I, const Dyadic& v) {
  if (!I.contains(v)) return 0;
  return digit(v, I.level + 1) ? 1 : -1;
}

void require_full(const DyadicInterval& I, const char* axis) {
  if (I.level != 0 || I.index != 0)
    throw std::invalid_argument(std::string("haar_coeff: type requires the full interval on the ") +
                                axis + " axis");
}

}  // namespace

int haar_eval(const DyadicRectangle& rect, HaarType t, const Point& x) {
  int vx = t.ex ? (rect.rx.contains(x.x) ? 1 : 0) : haar1(rect.rx, x.x);
  if (vx == 0) return 0;
  int vy = t.ey ? (rect.ry.contains(x.y) ? 1 : 0) : haar1(rect.ry, x.y);
  return vx * vy;
}

CoeffRecord haar_coeff(const PointSet& ps, const DyadicRectangle& rect, HaarType t) {
  const int64_t N = ps.size();
  const int k = rect.rx.level, l = rect.ry.level;
  CoeffRecord rec;
  rec.rect = rect;
  rec.type = t;
  if (t.ex == 0 && t.ey == 0) {
    rec.linear = Dyadic(N, 2 * (k + l) + 4);  // N|R|^2/16
    Dyadic s;
    for (const Point& p : points_in_rectangle(ps, rect))
      s += phi_scaled(p.x, k) * phi_scaled(p.y, l);
    rec.counting = Dyadic(1, k + l) * s;
  } else if (t.ex == 0 && t.ey == 1) {
    require_full(rect.ry, "y");
    rec.linear = Dyadic(N, 2 * k + 3);  // N|I|^2/8
    Dyadic s;
    for (const Point& p : points_in_rectangle(ps, rect))
      s += phi_scaled(p.x, k) * (Dyadic(1, 0) - p.y);
    rec.counting = Dyadic(1, k) * s;
  } else if (t.ex == 1 && t.ey == 0) {
    require_full(rect.rx, "x");
    rec.linear = Dyadic(N, 2 * l + 3);
    Dyadic s;
    for (const Point& p : points_in_rectangle(ps, rect))
      s += (Dyadic(1, 0) - p.x) * phi_scaled(p.y, l);
    rec.counting = Dyadic(1, l) * s;
  } else {
    require_full(rect.rx, "x");
    require_full(rect.ry, "y");
    rec.linear = Dyadic(N, 2);  // N/4
    Dyadic s;
    for (const Point& p : ps.points) s += (Dyadic(1, 0) - p.x) * (Dyadic(1, 0) - p.y);
    rec.counting = s;
  }
  rec.total = rec.counting - rec.linear;
  return rec;
}

Dyadic ShapeCoeffs::total(uint64_t key) const {
  auto it = phi_sums.find(key);
  if (it == phi_sums.end()) return empty_total;
  return Dyadic(1, k + l) * it->second - linear;
}

ShapeCoeffs bucket_shape(const PointSet& ps, int k, int l) {
  if (k < 0 || l < 0 || k + l > 62)
    throw std::invalid_argument("bucket_shape: shape out of range");
  ShapeCoeffs sc;
  sc.k = k;
  sc.l = l;
  sc.npoints = ps.size();
  sc.linear = Dyadic(ps.size(), 2 * (k + l) + 4);
  sc.empty_total = -sc.linear;
  for (const Point& p : ps.points) {
    Dyadic fx = phi_scaled(p.x, k);
    if (fx.is_zero()) continue;
    Dyadic fy = phi_scaled(p.y, l);
    if (fy.is_zero()) continue;
    uint64_t key = (cell_index(p.x, k) << l) | cell_index(p.y, l);
    sc.phi_sums[key] += fx * fy;
  }
  return sc;
}

namespace {

struct Shape {
  int k, l;
};

std::vector<Shape> selector_shapes(const ScanSelector& sel) {
  std::vector<Shape> shapes;
  for (int d = sel.exact_level ? sel.max_depth : 0; d <= sel.max_depth; ++d)
    for (int k = 0; k <= d; ++k) shapes.push_back({k, d - k});
  return shapes;
}

void aggregate_record(ScanAggregate& agg, const Dyadic& total, int64_t N, int k, uint64_t i,
                      int l, uint64_t j) {
  Dyadic a = total.abs();
  if (!agg.argmax || agg.max_abs_total < a) {
    agg.max_abs_total = a;
    agg.argmax = DyadicRectangle(k, i, l, j);
    agg.scaled_max = double(N) * a.to_double();
  }
  double scaled = double(N) * a.to_double();
  size_t bin = std::min<size_t>(32, size_t(scaled * 8.0));
  agg.histogram[bin]++;
}

void emit_csv(std::ostream& out, int k, uint64_t i, int l, uint64_t j, const Dyadic& linear,
              const Dyadic& counting, const Dyadic& total) {
  out << k << ',' << i << ',' << l << ',' << j << ",0,0," << linear.str() << ','
      << counting.str() << ',' << total.str() << '\n';
}

}  // namespace

ScanAggregate scan_coeffs(const PointSet& ps, const ScanSelector& sel, const ScanMode& mode,
                          std::ostream* csv_out, uint64_t rect_budget) {
  const int64_t N = ps.size();
  ScanAggregate agg;
  std::vector<Shape> shapes = selector_shapes(sel);
  if (shapes.empty()) return agg;

  uint64_t total_rects = 0;
  for (const Shape& s : shapes) total_rects += uint64_t(1) << (s.k + s.l);

  if (csv_out) *csv_out << "k,i,l,j,eps_x,eps_y,linear,counting,total\n";

  if (mode.sampled) {
    if (mode.sample_count > rect_budget)
      throw BudgetError("scan_coeffs: sample count exceeds the work budget");
    std::vector<uint64_t> cum(shapes.size());
    uint64_t acc = 0;
    for (size_t s = 0; s < shapes.size(); ++s) {
      acc += uint64_t(1) << (shapes[s].k + shapes[s].l);
      cum[s] = acc;
    }
    std::map<std::pair<int, int>, ShapeCoeffs> cache;
    std::mt19937_64 rng(mode.seed);
    std::uniform_int_distribution<uint64_t> dist(0, total_rects - 1);
    for (uint64_t draw = 0; draw < mode.sample_count; ++draw) {
      uint64_t u = dist(rng);
      size_t s = size_t(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
      uint64_t base = s == 0 ? 0 : cum[s - 1];
      uint64_t key = u - base;
      const Shape& sh = shapes[s];
      auto [it, fresh] = cache.try_emplace({sh.k, sh.l});
      if (fresh) it->second = bucket_shape(ps, sh.k, sh.l);
      const ShapeCoeffs& sc = it->second;
      Dyadic total = sc.total(key);
      uint64_t i = key >> sh.l, j = key & ((uint64_t(1) << sh.l) - 1);
      if (csv_out) emit_csv(*csv_out, sh.k, i, sh.l, j, sc.linear, total + sc.linear, total);
      aggregate_record(agg, total, N, sh.k, i, sh.l, j);
      agg.rects_scanned++;
    }
    return agg;
  }

  if (total_rects > rect_budget)
    throw BudgetError("scan_coeffs: exhaustive scan exceeds the work budget; use sampled mode");

  std::map<std::pair<int, int>, ShapeCoeffs> buckets;
  for (const Shape& s : shapes) buckets.try_emplace({s.k, s.l}, bucket_shape(ps, s.k, s.l));

  if (csv_out) {
    // Lexicographic in the emitted (k, i, l, j) column order.
    int max_k = 0;
    for (const Shape& s : shapes) max_k = std::max(max_k, s.k);
    for (int k = 0; k <= max_k; ++k) {
      std::vector<const ShapeCoeffs*> row;
      for (const auto& [kl, sc] : buckets)
        if (kl.first == k) row.push_back(&sc);
      if (row.empty()) continue;
      for (uint64_t i = 0; i < (uint64_t(1) << k); ++i)
        for (const ShapeCoeffs* sc : row)
          for (uint64_t j = 0; j < (uint64_t(1) << sc->l); ++j) {
            Dyadic total = sc->total((i << sc->l) | j);
            emit_csv(*csv_out, k, i, sc->l, j, sc->linear, total + sc->linear, total);
            aggregate_record(agg, total, N, k, i, sc->l, j);
            agg.rects_scanned++;
          }
    }
    return agg;
  }

  // Aggregate-only fast path: empty rectangles of a shape share one value.
  for (const auto& [kl, sc] : buckets) {
    auto [k, l] = kl;
    uint64_t rects = sc.rect_count();
    std::vector<uint64_t> keys;
    keys.reserve(sc.phi_sums.size());
    for (const auto& [key, s] : sc.phi_sums) keys.push_back(key);
    std::sort(keys.begin(), keys.end());
    for (uint64_t key : keys)
      aggregate_record(agg, sc.total(key), N, k, key >> l, l, key & ((uint64_t(1) << l) - 1));
    uint64_t empties = rects - keys.size();
    if (empties > 0) {
      uint64_t first_empty = 0;
      for (uint64_t key : keys) {
        if (key != first_empty) break;
        ++first_empty;
      }
      aggregate_record(agg, sc.empty_total, N, k, first_empty >> l, l,
                       first_empty & ((uint64_t(1) << l) - 1));
      double scaled = double(N) * sc.linear.to_double();
      size_t bin = std::min<size_t>(32, size_t(scaled * 8.0));
      agg.histogram[bin] += empties - 1;
    }
    agg.rects_scanned += rects;
  }
  return agg;
}

std::vector<Dyadic> quadruple_residual(const PointSet& ps, const DyadicRectangle& rect) {
  if (ps.kind != PointSetKind::vdc || !ps.n)
    throw std::invalid_argument("quadruple_residual: requires a full vdc point set");
  const int n = *ps.n;
  const int k = rect.rx.level, l = rect.ry.level;
  if (k + l > n - 2)
    throw std::invalid_argument("quadruple_residual: rectangle volume below 4/N");

  // Partners differ in x-digits k+1 and n-l; clearing those digits keys the quadruple.
  const int128 mask =
      ~((int128(1) << (n - k)) | (int128(1) << (l + 1)));
  struct Group {
    Dyadic phi_sum;
    int count = 0;
  };
  std::map<int128, Group> groups;
  for (const Point& p : points_in_rectangle(ps, rect)) {
    Group& g = groups[p.x.scaled_num(n + 1) & mask];
    g.phi_sum += phi_scaled(p.x, k) * phi_scaled(p.y, l);
    g.count++;
  }
  const uint64_t expected = uint64_t(1) << (n - k - l - 2);
  if (groups.size() != expected)
    throw std::logic_error("quadruple_residual: quadruple count mismatch");
  std::vector<Dyadic> residuals;
  residuals.reserve(groups.size());
  const Dyadic target = Dyadic(1, k + l + 2);  // |R|/4
  for (const auto& [key, g] : groups) {
    if (g.count != 4) throw std::logic_error("quadruple_residual: group is not a quadruple");
    residuals.push_back((Dyadic(1, k + l) * g.phi_sum - target).abs());
  }
  return residuals;
}

int RFunction::eval(const Point& x) const {
  int sx = digit(x.x, r1 + 1) ? 1 : -1;
  int sy = digit(x.y, r2 + 1) ? 1 : -1;
  return sign(cell_index(x.x, r1), cell_index(x.y, r2)) * sx * sy;
}

RFunction build_r_function(const PointSet& ps, int r1, int r2) {
  ShapeCoeffs sc = bucket_shape(ps, r1, r2);
  RFunction f;
  f.r1 = r1;
  f.r2 = r2;
  f.signs.assign(size_t(1) << (r1 + r2), 1);
  for (const auto& [key, s] : sc.phi_sums)
    if (sc.total(key).is_negative()) f.signs[key] = -1;
  if (sc.empty_total.is_negative())
    for (uint64_t key = 0; key < f.signs.size(); ++key)
      if (!sc.phi_sums.count(key)) f.signs[key] = -1;
  return f;
}

Dyadic r_inner(const PointSet& ps, const RFunction& f) {
  ShapeCoeffs sc = bucket_shape(ps, f.r1, f.r2);
  Dyadic acc;
  int64_t sign_total = 0;
  for (int8_t s : f.signs) sign_total += s;
  int64_t sign_nonempty = 0;
  for (const auto& [key, s] : sc.phi_sums) {
    acc += int64_t(f.signs[key]) * sc.total(key);
    sign_nonempty += f.signs[key];
  }
  acc += (sign_total - sign_nonempty) * sc.empty_total;
  return acc;
}

RFunction product_r(const std::vector<RFunction>& fs) {
  if (fs.empty()) throw std::invalid_argument("product_r: empty factor list");
  const int index = fs[0].index();
  std::map<std::pair<int, int>, int> mult;
  for (const RFunction& f : fs) {
    if (f.index() != index)
      throw std::invalid_argument("product_r: factors must share a common index");
    mult[{f.r1, f.r2}]++;
  }
  int s1 = -1, s2 = -1;
  bool any_odd = false;
  for (const auto& [r, m] : mult)
    if (m % 2) {
      any_odd = true;
      s1 = std::max(s1, r.first);
      s2 = std::max(s2, r.second);
    }
  if (!any_odd)
    throw std::invalid_argument("product_r: every parameter vector occurs an even number of times");

  const int a = s1 + 1, b = s2 + 1;
  if (a + b > 26) throw BudgetError("product_r: verification grid exceeds the work budget");
  RFunction prod;
  prod.r1 = s1;
  prod.r2 = s2;
  prod.signs.assign(size_t(1) << (s1 + s2), 0);
  std::vector<int> vals(size_t(1) << (a + b));
  for (uint64_t u = 0; u < (uint64_t(1) << a); ++u)
    for (uint64_t v = 0; v < (uint64_t(1) << b); ++v) {
      Point x{Dyadic(int128(2 * u + 1), a + 1), Dyadic(int128(2 * v + 1), b + 1)};
      int val = 1;
      for (const RFunction& f : fs) val *= f.eval(x);
      vals[(u << b) | v] = val;
    }
  for (uint64_t i = 0; i < (uint64_t(1) << s1); ++i)
    for (uint64_t j = 0; j < (uint64_t(1) << s2); ++j) {
      int e = vals[((2 * i) << b) | (2 * j)];
      if (vals[((2 * i) << b) | (2 * j + 1)] != -e || vals[((2 * i + 1) << b) | (2 * j)] != -e ||
          vals[((2 * i + 1) << b) | (2 * j + 1)] != e)
        throw std::logic_error("product_r: product failed the pointwise r-function check");
      prod.signs[(i << s2) | j] = int8_t(e);
    }
  return prod;
}

int64_t count_products(int n, int s1, int s2, int v) {
  if (v < 2 || v > n || s1 < 0 || s1 > n || s2 < 0 || s2 > n || s1 + s2 < n + v - 1)
    throw std::out_of_range("count_products: arguments out of range");
  if (n > 24) throw BudgetError("count_products: enumeration exceeds the work budget");
  int64_t count = 0;
  for (uint32_t mask = 0; mask < (uint32_t(1) << (n + 1)); ++mask) {
    if (std::popcount(mask) != v) continue;
    int lo = std::countr_zero(mask);
    int hi = 31 - std::countl_zero(mask);
    if (hi == s1 && n - lo == s2) ++count;
  }
  return count;
}

HaarExpansion HaarExpansion::from_r_function(const RFunction& f) {
  HaarExpansion e;
  Block b;
  b.r1 = f.r1;
  b.r2 = f.r2;
  b.coeffs.reserve(f.signs.size());
  for (int8_t s : f.signs) b.coeffs.push_back(Dyadic(s, 0));
  e.blocks.push_back(std::move(b));
  return e;
}

int HaarExpansion::max_r1() const {
  int m = 0;
  for (const Block& b : blocks) m = std::max(m, b.r1);
  return m;
}

int HaarExpansion::max_r2() const {
  int m = 0;
  for (const Block& b : blocks) m = std::max(m, b.r2);
  return m;
}

Dyadic HaarExpansion::eval(const Point& x) const {
  Dyadic acc;
  for (const Block& b : blocks) {
    int sx = digit(x.x, b.r1 + 1) ? 1 : -1;
    int sy = digit(x.y, b.r2 + 1) ? 1 : -1;
    const Dyadic& c = b.coeffs[(cell_index(x.x, b.r1) << b.r2) | cell_index(x.y, b.r2)];
    acc += int64_t(sx * sy) * c;
  }
  return acc;
}

Dyadic square_function_sq(const HaarExpansion& f, const Point& x) {
  Dyadic acc;
  for (const auto& b : f.blocks) {
    const Dyadic& c = b.coeffs[(cell_index(x.x, b.r1) << b.r2) | cell_index(x.y, b.r2)];
    acc += c * c;
  }
  return acc;
}

Dyadic sup_square_sq(const HaarExpansion& f) {
  const int A = f.max_r1(), B = f.max_r2();
  if (A + B > 26) throw BudgetError("sup_square_sq: grid exceeds the work budget");
  Dyadic best;
  for (uint64_t i = 0; i < (uint64_t(1) << A); ++i)
    for (uint64_t j = 0; j < (uint64_t(1) << B); ++j) {
      Dyadic acc;
      for (const auto& b : f.blocks) {
        const Dyadic& c = b.coeffs[((i >> (A - b.r1)) << b.r2) | (j >> (B - b.r2))];
        acc += c * c;
      }
      if (best < acc) best = acc;
    }
  return best;
}

}  // namespace dlab
