#include "dlab/bmo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"

#include "dlab/bigdyadic.hpp"
#include "dlab/errors.hpp"

namespace dlab {

namespace mp = boost::multiprecision;

// ---------------------------------------------------------------------------
// CellUnion

CellUnion CellUnion::full(int level) {
  CellUnion u;
  u.level = level;
  u.cells.assign(size_t(1) << (2 * level), 1);
  return u;
}

CellUnion CellUnion::from_rectangle(const DyadicRectangle& r, int level) {
  if (r.rx.level > level || r.ry.level > level)
    throw std::invalid_argument("cell union resolution coarser than rectangle");
  CellUnion u;
  u.level = level;
  u.cells.assign(size_t(1) << (2 * level), 0);
  uint64_t x0 = r.rx.index << (level - r.rx.level);
  uint64_t y0 = r.ry.index << (level - r.ry.level);
  for (uint64_t ix = 0; ix < uint64_t(1) << (level - r.rx.level); ++ix)
    for (uint64_t iy = 0; iy < uint64_t(1) << (level - r.ry.level); ++iy)
      u.cells[((x0 + ix) << level) | (y0 + iy)] = 1;
  return u;
}

size_t CellUnion::cell_count() const {
  return size_t(std::accumulate(cells.begin(), cells.end(), uint64_t(0)));
}

std::string CellUnion::bitmap_str() const {
  std::string s;
  uint64_t side = uint64_t(1) << level;
  for (uint64_t iy = side; iy-- > 0;) {
    for (uint64_t ix = 0; ix < side; ++ix) s += cell(ix, iy) ? '#' : '.';
    s += '\n';
  }
  return s;
}

std::string family_name(BmoFamily f) {
  switch (f) {
    case BmoFamily::dyadic_squares: return "dyadic-squares";
    case BmoFamily::dyadic_rectangles: return "dyadic-rectangles";
    case BmoFamily::greedy_unions: return "greedy-unions";
  }
  return "?";
}

std::string BmoReport::to_json() const {
  nlohmann::json j;
  j["global_sum"] = global_sum.str();
  j["global_sum_approx"] = global_sum.to_double();
  j["best_U"] = best_u;
  j["estimate"] = estimate.str();
  j["estimate_approx"] = estimate.to_double();
  j["depth"] = depth;
  j["family"] = family;
  return j.dump(2);
}

namespace {

// Containment tables for one cell union: in(a,b) marks every dyadic rectangle
// of shape (a,b), a,b <= mu, that lies inside U.
struct Pyramid {
  int mu;
  std::vector<std::vector<uint8_t>> in;   // (a*(mu+1)+b) -> bitmap 2^{a+b}
  std::vector<std::vector<uint64_t>> cnt;  // set-entry counts

  explicit Pyramid(const CellUnion& u) : mu(u.level) {
    in.resize(size_t(mu + 1) * (mu + 1));
    cnt.assign(mu + 1, std::vector<uint64_t>(mu + 1, 0));
    at(mu, mu) = u.cells;
    for (int b = mu; b-- > 0;) {
      const auto& fine = at(mu, b + 1);
      auto& coarse = at(mu, b);
      coarse.resize(size_t(1) << (mu + b));
      for (uint64_t i = 0; i < uint64_t(1) << mu; ++i)
        for (uint64_t j = 0; j < uint64_t(1) << b; ++j)
          coarse[(i << b) | j] =
              fine[(i << (b + 1)) | (2 * j)] & fine[(i << (b + 1)) | (2 * j + 1)];
    }
    for (int b = 0; b <= mu; ++b)
      for (int a = mu; a-- > 0;) {
        const auto& fine = at(a + 1, b);
        auto& coarse = at(a, b);
        coarse.resize(size_t(1) << (a + b));
        for (uint64_t i = 0; i < uint64_t(1) << a; ++i)
          for (uint64_t j = 0; j < uint64_t(1) << b; ++j)
            coarse[(i << b) | j] =
                fine[((2 * i) << b) | j] & fine[((2 * i + 1) << b) | j];
      }
    for (int a = 0; a <= mu; ++a)
      for (int b = 0; b <= mu; ++b)
        cnt[a][b] = uint64_t(
            std::accumulate(at(a, b).begin(), at(a, b).end(), uint64_t(0)));
  }

  std::vector<uint8_t>& at(int a, int b) { return in[size_t(a) * (mu + 1) + b]; }
  const std::vector<uint8_t>& at(int a, int b) const {
    return in[size_t(a) * (mu + 1) + b];
  }

  bool contains(int k, uint64_t i, int l, uint64_t j) const {
    int a = std::min(k, mu), b = std::min(l, mu);
    return at(a, b)[((i >> (k - a)) << b) | (j >> (l - b))] != 0;
  }
  // Number of shape-(k,l) rectangles inside U.
  BigInt shape_count(int k, int l) const {
    int a = std::min(k, mu), b = std::min(l, mu);
    return BigInt(cnt[a][b]) << ((k - a) + (l - b));
  }
};

// Precomputed per-shape energies <D,h_R>^2 / |R| so that many candidate sets
// can be scored against one point set.
struct ShapeTerm {
  uint64_t i, j;
  BigDyadic energy;
};
struct ShapeData {
  int k, l;
  std::vector<ShapeTerm> nonempty;
  BigDyadic empty_energy;
};
struct Context {
  int n = 0, depth = 0;
  int64_t npoints = 0;
  std::vector<ShapeData> shallow;

  BigDyadic eval_sum(const Pyramid& pyr) const;
};

// d^2 * 2^s as a BigDyadic with a nonnegative exponent.
BigDyadic square_scaled(const Dyadic& d, int s) {
  BigInt num = BigInt(d.num()) * BigInt(d.num());
  long e = 2L * d.exp() - s;
  if (e < 0) {
    num <<= -e;
    e = 0;
  }
  return BigDyadic(num, e);
}

BigDyadic rect_energy(const Dyadic& total, int k, int l) {
  return square_scaled(total, k + l);
}

Context build_context(const PointSet& ps, int depth) {
  if (depth < 0 || depth > 2 * kMaxDepth)
    throw BudgetError("square-sum depth exceeds budget");
  Context ctx;
  // Finest level carrying point mass: phi(2^k x) vanishes once 2^k x is an
  // integer, so shapes beyond the coordinate resolution are pure linear part.
  int res = 0;
  for (const Point& p : ps.points)
    res = std::max({res, p.x.exp(), p.y.exp()});
  ctx.n = res - 1;
  ctx.depth = depth;
  ctx.npoints = int64_t(ps.size());
  for (int k = 0; k <= std::min(ctx.n, depth); ++k)
    for (int l = 0; l <= std::min(ctx.n, depth - k); ++l) {
      ShapeCoeffs sc = bucket_shape(ps, k, l);
      ShapeData sd;
      sd.k = k;
      sd.l = l;
      sd.nonempty.reserve(sc.phi_sums.size());
      for (const auto& [key, phi] : sc.phi_sums) {
        (void)phi;
        sd.nonempty.push_back(
            {key >> l, key & ((uint64_t(1) << l) - 1), rect_energy(sc.total(key), k, l)});
      }
      sd.empty_energy = rect_energy(sc.empty_total, k, l);
      ctx.shallow.push_back(std::move(sd));
    }
  return ctx;
}

BigDyadic Context::eval_sum(const Pyramid& pyr) const {
  BigDyadic acc;
  for (const ShapeData& sd : shallow) {
    BigInt count_in = pyr.shape_count(sd.k, sd.l);
    int64_t nonempty_in = 0;
    BigDyadic shape_acc;
    for (const ShapeTerm& t : sd.nonempty)
      if (pyr.contains(sd.k, t.i, sd.l, t.j)) {
        shape_acc += t.energy;
        ++nonempty_in;
      }
    acc += shape_acc;
    acc += BigDyadic(count_in - nonempty_in, 0) * sd.empty_energy;
  }
  // Shapes finer than the point resolution: every coefficient is the bare
  // linear part -N|R|^2/16, so the shape contributes count * N^2 / 2^{3(k+l)+8}.
  BigInt nsq = BigInt(npoints) * npoints;
  for (int k = 0; k <= depth; ++k)
    for (int l = 0; l + k <= depth; ++l) {
      if (k <= n && l <= n) continue;
      acc += BigDyadic(pyr.shape_count(k, l) * nsq, 3L * (k + l) + 8);
    }
  return acc;
}

Rational finish(const BigDyadic& sum, const CellUnion& u) {
  // divide by |U| = cells / 2^{2*level}
  mp::cpp_rational v(sum.num(), BigInt(1) << std::max<long>(0, sum.exp()));
  if (sum.exp() < 0) v *= BigInt(1) << -sum.exp();
  v = v * (BigInt(1) << (2 * u.level)) / BigInt(u.cell_count());
  return Rational{mp::numerator(v), mp::denominator(v)};
}

}  // namespace

Rational square_sum_over(const PointSet& ps, const CellUnion& u, int depth) {
  if (u.empty()) throw std::invalid_argument("square_sum_over: empty cell union");
  Context ctx = build_context(ps, depth);
  Pyramid pyr(u);
  return finish(ctx.eval_sum(pyr), u);
}

Rational square_sum_over(const HaarExpansion& f, const CellUnion& u, int depth) {
  if (u.empty()) throw std::invalid_argument("square_sum_over: empty cell union");
  Pyramid pyr(u);
  BigDyadic acc;
  for (const auto& blk : f.blocks) {
    if (blk.r1 + blk.r2 > depth) continue;
    for (uint64_t i = 0; i < uint64_t(1) << blk.r1; ++i)
      for (uint64_t j = 0; j < uint64_t(1) << blk.r2; ++j) {
        const Dyadic& c = blk.coeffs[(i << blk.r2) | j];
        if (c.is_zero() || !pyr.contains(blk.r1, i, blk.r2, j)) continue;
        // <f, h_R> = c |R|, so the energy is c^2 |R|.
        acc += square_scaled(c, -(blk.r1 + blk.r2));
      }
  }
  return finish(acc, u);
}

namespace {

// Heuristic per-cell energy density at resolution mu used to order the greedy
// growth: each rectangle's energy is spread uniformly over the cells it meets.
std::vector<double> cell_densities(const Context& ctx, int mu) {
  size_t ncells = size_t(1) << (2 * mu);
  std::vector<double> density(ncells, 0.0);
  std::vector<uint32_t> touched(ncells);
  for (const ShapeData& sd : ctx.shallow) {
    int k = sd.k, l = sd.l;
    uint64_t spanx = uint64_t(1) << std::max(0, mu - k);
    uint64_t spany = uint64_t(1) << std::max(0, mu - l);
    double share = 1.0 / double(spanx * spany);
    std::fill(touched.begin(), touched.end(), 0);
    for (const ShapeTerm& t : sd.nonempty) {
      uint64_t x0 = k <= mu ? t.i << (mu - k) : t.i >> (k - mu);
      uint64_t y0 = l <= mu ? t.j << (mu - l) : t.j >> (l - mu);
      double e = t.energy.to_double() * share;
      for (uint64_t ix = 0; ix < spanx; ++ix)
        for (uint64_t iy = 0; iy < spany; ++iy) {
          size_t c = ((x0 + ix) << mu) | (y0 + iy);
          density[c] += e;
          touched[c]++;
        }
    }
    // Empty rectangles of the shape: per cell, the number of shape rectangles
    // meeting the cell minus the nonempty ones already counted.
    double per_rect = sd.empty_energy.to_double() * share;
    double rects_per_cell =
        std::ldexp(1.0, std::max(0, k - mu) + std::max(0, l - mu));
    for (size_t c = 0; c < ncells; ++c)
      density[c] += (rects_per_cell - double(touched[c])) * per_rect;
  }
  return density;
}

}  // namespace

BmoReport bmo_estimate(const PointSet& ps, BmoFamily family, int depth,
                       size_t budget) {
  Context ctx = build_context(ps, depth);
  CellUnion full0 = CellUnion::full(0);
  BmoReport rep;
  rep.depth = depth;
  rep.family = family_name(family);
  rep.global_sum = finish(ctx.eval_sum(Pyramid(full0)), full0);

  std::vector<std::pair<std::string, CellUnion>> candidates;
  candidates.emplace_back("[0,1]^2", full0);
  if (family == BmoFamily::dyadic_squares) {
    for (int k = 1; k <= 3; ++k)
      for (uint64_t i = 0; i < uint64_t(1) << k; ++i)
        for (uint64_t j = 0; j < uint64_t(1) << k; ++j) {
          std::ostringstream name;
          name << "square(" << k << "," << i << "," << k << "," << j << ")";
          candidates.emplace_back(
              name.str(), CellUnion::from_rectangle(DyadicRectangle(k, i, k, j), k));
        }
  } else if (family == BmoFamily::dyadic_rectangles) {
    for (int k = 0; k <= 4; ++k)
      for (int l = 0; k + l <= 4; ++l) {
        if (k == 0 && l == 0) continue;
        for (uint64_t i = 0; i < uint64_t(1) << k; ++i)
          for (uint64_t j = 0; j < uint64_t(1) << l; ++j) {
            std::ostringstream name;
            name << "rect(" << k << "," << i << "," << l << "," << j << ")";
            candidates.emplace_back(
                name.str(),
                CellUnion::from_rectangle(DyadicRectangle(k, i, l, j), std::max(k, l)));
          }
      }
  } else {
    const int mu = 6;
    size_t ncells = size_t(1) << (2 * mu);
    std::vector<double> density = cell_densities(ctx, mu);
    std::vector<size_t> order(ncells);
    std::iota(order.begin(), order.end(), size_t(0));
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return density[a] > density[b];
    });
    size_t cap = std::min(budget, ncells);
    CellUnion u;
    u.level = mu;
    u.cells.assign(ncells, 0);
    size_t filled = 0;
    for (size_t sz = 1; sz <= cap; sz *= 2) {
      while (filled < sz) u.cells[order[filled++]] = 1;
      std::ostringstream name;
      name << "greedy-union(" << sz << " cells @ 2^-" << mu << ")";
      candidates.emplace_back(name.str(), u);
    }
  }

  bool first = true;
  mp::cpp_rational best;
  for (const auto& [name, u] : candidates) {
    Rational val = finish(ctx.eval_sum(Pyramid(u)), u);
    mp::cpp_rational v(val.num, val.den);
    if (first || v > best) {
      first = false;
      best = v;
      rep.estimate = val;
      rep.best_u = name;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// One-parameter square sum

namespace {

double bmo1_from_levels(const std::vector<std::vector<double>>& energy,
                        const std::vector<double>& leaf_tail) {
  // energy[k][i] = coeff(I_{k,i})^2 * 2^k; bottom-up interval tree maximizing
  // |J|^{-1} sum_{I subset J} energy.
  int kmax = int(energy.size()) - 1;
  std::vector<double> s(size_t(1) << kmax);
  for (size_t i = 0; i < s.size(); ++i)
    s[i] = energy[kmax][i] + (leaf_tail.empty() ? 0.0 : leaf_tail[i]);
  double best = 0.0;
  for (size_t i = 0; i < s.size(); ++i)
    best = std::max(best, s[i] * std::ldexp(1.0, kmax));
  for (int k = kmax; k-- > 0;) {
    for (size_t i = 0; i < size_t(1) << k; ++i) {
      s[i] = s[2 * i] + s[2 * i + 1] + energy[k][i];
      best = std::max(best, s[i] * std::ldexp(1.0, k));
    }
    s.resize(size_t(1) << k);
  }
  return best;
}

}  // namespace

double bmo1_norm(const PointSet& ps, int depth) {
  if (depth < 0 || depth > 2 * kMaxDepth)
    throw BudgetError("square-sum depth exceeds budget");
  int res = 0;
  for (const Point& p : ps.points) res = std::max(res, p.x.exp());
  int neff = res - 1;  // beyond this every phi term vanishes
  int kmax = std::max(0, std::min(depth, neff));
  std::vector<std::vector<double>> energy(kmax + 1);
  DyadicInterval unit(0, 0);
  for (int k = 0; k <= kmax; ++k) {
    energy[k].resize(size_t(1) << k);
    for (uint64_t i = 0; i < uint64_t(1) << k; ++i) {
      CoeffRecord rec =
          haar_coeff(ps, DyadicRectangle(DyadicInterval(k, i), unit), HaarType{0, 1});
      double c = rec.total.to_double();
      energy[k][i] = c * c * std::ldexp(1.0, k);
    }
  }
  // Levels k > n: the coefficient is exactly -N|I|^2/8, giving a geometric
  // tail sum_{k=n+1}^{depth} 2^{k-kmax} N^2 2^{-3k} / 64 under each leaf.
  double tail = 0.0;
  double nsq = double(ps.size()) * double(ps.size());
  for (int k = neff + 1; k <= depth; ++k)
    tail += std::ldexp(nsq / 64.0, k - kmax - 3 * k);
  std::vector<double> leaf_tail(size_t(1) << kmax, tail);
  return bmo1_from_levels(energy, leaf_tail);
}

double bmo1_norm(const std::vector<std::tuple<int, uint64_t, Dyadic>>& coeffs,
                 int depth) {
  int kmax = 0;
  for (const auto& [k, i, c] : coeffs) {
    (void)i;
    (void)c;
    if (k > depth) continue;
    kmax = std::max(kmax, k);
  }
  std::vector<std::vector<double>> energy(kmax + 1);
  for (int k = 0; k <= kmax; ++k) energy[k].assign(size_t(1) << k, 0.0);
  for (const auto& [k, i, c] : coeffs) {
    if (k > depth) continue;
    double v = c.to_double();
    energy[k][i] += v * v * std::ldexp(1.0, k);
  }
  return bmo1_from_levels(energy, {});
}

}  // namespace dlab
