#include "dlab/norms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace dlab {

namespace mp = boost::multiprecision;

double Rational::to_double() const {
  return mp::cpp_rational(num, den).convert_to<double>();
}

std::string Rational::str() const { return num.str() + "/" + den.str(); }

Dyadic linf_norm(const PointSet& ps, size_t cell_budget) {
  CellGrid g = CellGrid::build(ps, cell_budget);
  const int M = g.x_exponent() + g.y_exponent();
  const int64_t N = g.nscale();
  const auto& X = g.x_nums();
  const auto& Y = g.y_nums();
  int64_t best = 0;
  g.sweep([&](size_t i, const std::vector<uint32_t>& cnt) {
    for (size_t j = 0; j < g.y_cells(); ++j) {
      // D = count - N*x*y is decreasing in x and y on the cell;
      // |D| peaks at one of the two monotone corners.
      int64_t c = int64_t(cnt[j]) << M;
      int64_t lo = c - N * X[i] * Y[j];
      int64_t hi = N * X[i + 1] * Y[j + 1] - c;
      best = std::max({best, lo < 0 ? -lo : lo, hi < 0 ? -hi : hi});
    }
  });
  return Dyadic(best, M);
}

Rational lp_moment_exact(const PointSet& ps, int p, size_t cell_budget) {
  if (p < 2 || p % 2 != 0)
    throw std::invalid_argument("lp_moment_exact: requires even integer p >= 2");
  CellGrid g = CellGrid::build(ps, cell_budget);
  const int64_t N = g.nscale();
  const int M = g.x_exponent() + g.y_exponent();

  // integral of (c - N x y)^p over a cell
  //   = sum_q binom(p,q) c^{p-q} (-N)^q [x1^{q+1}-x0^{q+1}][y1^{q+1}-y0^{q+1}]
  //     / ((q+1)^2 2^{M(q+1)})
  // with breakpoints scaled to integers; the bracketed sums S_q stay integral.
  std::vector<std::vector<BigInt>> xpow(g.xs().size()), ypow(g.ys().size());
  for (size_t i = 0; i < g.xs().size(); ++i) {
    xpow[i].resize(p + 1);
    BigInt b = g.x_nums()[i], acc = b;
    for (int q = 0; q <= p; ++q) {
      xpow[i][q] = acc;
      acc *= b;
    }
  }
  for (size_t j = 0; j < g.ys().size(); ++j) {
    ypow[j].resize(p + 1);
    BigInt b = g.y_nums()[j], acc = b;
    for (int q = 0; q <= p; ++q) {
      ypow[j][q] = acc;
      acc *= b;
    }
  }
  std::vector<std::vector<BigInt>> dy(p + 1);
  for (int q = 0; q <= p; ++q) {
    dy[q].resize(g.y_cells());
    for (size_t j = 0; j < g.y_cells(); ++j) dy[q][j] = ypow[j + 1][q] - ypow[j][q];
  }
  std::vector<std::vector<BigInt>> cpow(size_t(N) + 1);
  for (int64_t c = 0; c <= N; ++c) {
    cpow[c].assign(p + 1, BigInt(1));
    for (int e = 1; e <= p; ++e) cpow[c][e] = cpow[c][e - 1] * c;
  }

  std::vector<BigInt> S(p + 1, BigInt(0));
  g.sweep([&](size_t i, const std::vector<uint32_t>& cnt) {
    for (int q = 0; q <= p; ++q) {
      BigInt dx = xpow[i + 1][q] - xpow[i][q];
      if (dx == 0) continue;
      BigInt inner = 0;
      const auto& dyq = dy[q];
      for (size_t j = 0; j < g.y_cells(); ++j) inner += cpow[cnt[j]][p - q] * dyq[j];
      S[q] += dx * inner;
    }
  });

  mp::cpp_rational total = 0;
  BigInt binom = 1, npow = 1;
  for (int q = 0; q <= p; ++q) {
    BigInt numer = binom * npow * S[q];
    if (q % 2) numer = -numer;
    total += mp::cpp_rational(numer, BigInt((q + 1)) * (q + 1) * (BigInt(1) << (M * (q + 1))));
    binom = binom * (p - q) / (q + 1);
    npow *= N;
  }
  if (total < 0) throw std::logic_error("lp_moment_exact: negative even moment");
  return Rational{mp::numerator(total), mp::denominator(total)};
}

namespace {

// Midpoint quadrature of |D|^p on an r x r refinement of every cell.
double lp_moment_midpoint(const CellGrid& g, double p, int r) {
  const int64_t N = g.nscale();
  double total = 0.0;
  std::vector<double> xs(g.xs().size()), ys(g.ys().size());
  for (size_t i = 0; i < xs.size(); ++i) xs[i] = g.xs()[i].to_double();
  for (size_t j = 0; j < ys.size(); ++j) ys[j] = g.ys()[j].to_double();
  g.sweep([&](size_t i, const std::vector<uint32_t>& cnt) {
    double x0 = xs[i], wx = (xs[i + 1] - xs[i]) / r;
    if (wx == 0.0) return;
    for (size_t j = 0; j < g.y_cells(); ++j) {
      double y0 = ys[j], wy = (ys[j + 1] - ys[j]) / r;
      if (wy == 0.0) continue;
      double c = double(cnt[j]), cellsum = 0.0;
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) {
          double d = c - double(N) * (x0 + (a + 0.5) * wx) * (y0 + (b + 0.5) * wy);
          cellsum += std::pow(std::fabs(d), p);
        }
      total += cellsum * wx * wy;
    }
  });
  return total;
}

}  // namespace

LpValue lp_norm(const PointSet& ps, double p, size_t cell_budget) {
  if (p < 1) throw std::invalid_argument("lp_norm: requires p >= 1");
  LpValue out;
  int ip = int(p);
  if (double(ip) == p && ip % 2 == 0) {
    Rational m = lp_moment_exact(ps, ip, cell_budget);
    out.value = std::pow(m.to_double(), 1.0 / p);
    out.exact = true;
    return out;
  }
  CellGrid g = CellGrid::build(ps, cell_budget);
  double i2 = lp_moment_midpoint(g, p, 2);
  double i4 = lp_moment_midpoint(g, p, 4);
  out.value = std::pow(i4, 1.0 / p);
  // midpoint rule is second order; Richardson gap over the norm
  double gap = std::fabs(i4 - i2) / 3.0;
  out.error = i4 > 0 ? out.value * gap / (p * i4) : 0.0;
  out.refine = 4;
  return out;
}

double OrliczSpec::psi(double t) const {
  if (family == Family::l_log_power) return t * std::pow(std::log(3.0 + t), 1.0 / alpha);
  if (alpha >= 1.0) return std::expm1(std::pow(t, alpha));
  // convexified variant: linear through the origin below the inflection x_a
  double xa = std::pow(1.0 / alpha - 1.0, 1.0 / alpha);
  if (t >= xa) return std::expm1(std::pow(t, alpha));
  return t * std::expm1(std::pow(xa, alpha)) / xa;
}

OrliczResult orlicz_norm_atoms(const std::vector<std::pair<double, double>>& atoms,
                               const OrliczSpec& spec, double tol) {
  double vmax = 0.0;
  for (const auto& [m, v] : atoms) vmax = std::max(vmax, std::fabs(v));
  if (vmax == 0.0) return {0.0, 0.0};
  auto expectation = [&](double K) {
    double e = 0.0;
    for (const auto& [m, v] : atoms) e += m * spec.psi(std::fabs(v) / K);
    return e;
  };
  double hi = vmax;
  while (expectation(hi) > 1.0) hi *= 2.0;
  double lo = hi;
  while (lo > 1e-300 && expectation(lo / 2.0) <= 1.0) lo /= 2.0;
  lo /= 2.0;
  for (int it = 0; it < 200 && hi - lo > tol * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (expectation(mid) <= 1.0 ? hi : lo) = mid;
  }
  return {hi, hi - lo};
}

OrliczResult orlicz_norm(const PointSet& ps, const OrliczSpec& spec, int refine,
                         size_t cell_budget) {
  CellGrid g = CellGrid::build(ps, cell_budget);
  if (g.cells() * size_t(refine) * size_t(refine) > (size_t(1) << 26))
    throw BudgetError("orlicz_norm: sample grid exceeds the work budget");
  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(g.cells() * size_t(refine) * size_t(refine));
  const int64_t N = g.nscale();
  std::vector<double> xs(g.xs().size()), ys(g.ys().size());
  for (size_t i = 0; i < xs.size(); ++i) xs[i] = g.xs()[i].to_double();
  for (size_t j = 0; j < ys.size(); ++j) ys[j] = g.ys()[j].to_double();
  g.sweep([&](size_t i, const std::vector<uint32_t>& cnt) {
    double x0 = xs[i], wx = (xs[i + 1] - xs[i]) / refine;
    if (wx == 0.0) return;
    for (size_t j = 0; j < g.y_cells(); ++j) {
      double y0 = ys[j], wy = (ys[j + 1] - ys[j]) / refine;
      if (wy == 0.0) continue;
      for (int a = 0; a < refine; ++a)
        for (int b = 0; b < refine; ++b)
          atoms.push_back({wx * wy, double(cnt[j]) - double(N) * (x0 + (a + 0.5) * wx) *
                                                        (y0 + (b + 0.5) * wy)});
    }
  });
  return orlicz_norm_atoms(atoms, spec);
}

double exp_proxy_from_lp(const std::vector<int>& p_grid, const std::vector<double>& lp_values,
                         double alpha) {
  if (p_grid.size() != lp_values.size())
    throw std::invalid_argument("exp_proxy_from_lp: grid/value size mismatch");
  double best = 0.0;
  for (size_t i = 0; i < p_grid.size(); ++i)
    best = std::max(best, std::pow(double(p_grid[i]), -1.0 / alpha) * lp_values[i]);
  return best;
}

double exp_proxy(const PointSet& ps, double alpha, const std::vector<int>& p_grid,
                 size_t cell_budget) {
  std::vector<double> lps;
  lps.reserve(p_grid.size());
  for (int p : p_grid) lps.push_back(lp_norm(ps, double(p), cell_budget).value);
  return exp_proxy_from_lp(p_grid, lps, alpha);
}

CwwReport cww_check(const HaarExpansion& f, const std::vector<int>& p_grid) {
  const int A = f.max_r1(), B = f.max_r2();
  const int a = A + 1, b = B + 1;
  if (a + b > 26) throw BudgetError("cww_check: evaluation grid exceeds the work budget");
  CwwReport rep;
  rep.sup_square = std::sqrt(sup_square_sq(f).to_double());

  // Per-block coefficient arrays in double for the dense grid walk.
  struct B2 {
    int r1, r2;
    std::vector<double> c;
  };
  std::vector<B2> blocks;
  for (const auto& blk : f.blocks) {
    B2 d{blk.r1, blk.r2, {}};
    d.c.reserve(blk.coeffs.size());
    for (const auto& cc : blk.coeffs) d.c.push_back(cc.to_double());
    blocks.push_back(std::move(d));
  }
  bool unit_coeffs = true;
  for (const auto& blk : blocks)
    for (double c : blk.c)
      if (c != 1.0 && c != -1.0) unit_coeffs = false;

  std::vector<double> mom(p_grid.size(), 0.0);
  if (unit_coeffs) {
    // Sign expansion: values are integers in [-T, T]; accumulate a value
    // histogram, updating incrementally (a block's value changes at step v
    // only when the trailing-zero count of v reaches its y-sign bit).
    const int T = int(blocks.size());
    std::sort(blocks.begin(), blocks.end(),
              [&](const B2& x, const B2& y) { return (b - x.r2 - 1) < (b - y.r2 - 1); });
    std::vector<uint64_t> hist(2 * T + 1, 0);
    std::vector<int> vals(blocks.size());
    for (uint64_t u = 0; u < (uint64_t(1) << a); ++u) {
      std::vector<int> sx(blocks.size());
      std::vector<const double*> base(blocks.size());
      for (size_t t = 0; t < blocks.size(); ++t) {
        sx[t] = (u >> (a - blocks[t].r1 - 1)) & 1 ? 1 : -1;
        base[t] = blocks[t].c.data() + ((u >> (a - blocks[t].r1)) << blocks[t].r2);
      }
      auto eval_block = [&](size_t t, uint64_t v) {
        const B2& blk = blocks[t];
        int sy = (v >> (b - blk.r2 - 1)) & 1 ? 1 : -1;
        return sx[t] * sy * int(base[t][v >> (b - blk.r2)]);
      };
      int total = 0;
      for (size_t t = 0; t < blocks.size(); ++t) {
        vals[t] = eval_block(t, 0);
        total += vals[t];
      }
      hist[total + T]++;
      for (uint64_t v = 1; v < (uint64_t(1) << b); ++v) {
        int tz = std::countr_zero(v);
        for (size_t t = 0; t < blocks.size() && b - blocks[t].r2 - 1 <= tz; ++t) {
          int nv = eval_block(t, v);
          total += nv - vals[t];
          vals[t] = nv;
        }
        hist[total + T]++;
      }
    }
    for (size_t t = 0; t < p_grid.size(); ++t)
      for (int k = -T; k <= T; ++k)
        mom[t] += double(hist[k + T]) * std::pow(std::fabs(double(k)), double(p_grid[t]));
  } else {
    std::vector<double> row(blocks.size());
    for (uint64_t u = 0; u < (uint64_t(1) << a); ++u) {
      for (size_t t = 0; t < blocks.size(); ++t)
        row[t] = (u >> (a - blocks[t].r1 - 1)) & 1 ? 1.0 : -1.0;
      for (uint64_t v = 0; v < (uint64_t(1) << b); ++v) {
        double val = 0.0;
        for (size_t t = 0; t < blocks.size(); ++t) {
          const B2& blk = blocks[t];
          uint64_t i = u >> (a - blk.r1);
          uint64_t j = v >> (b - blk.r2);
          double sy = (v >> (b - blk.r2 - 1)) & 1 ? 1.0 : -1.0;
          val += row[t] * sy * blk.c[(i << blk.r2) | j];
        }
        double av = std::fabs(val);
        for (size_t t = 0; t < p_grid.size(); ++t) mom[t] += std::pow(av, double(p_grid[t]));
      }
    }
  }
  double cell = std::ldexp(1.0, -(a + b));
  for (size_t t = 0; t < p_grid.size(); ++t) {
    double lp = std::pow(mom[t] * cell, 1.0 / p_grid[t]);
    double ratio = rep.sup_square > 0 ? lp / (std::sqrt(double(p_grid[t])) * rep.sup_square) : 0.0;
    rep.ratios.push_back({p_grid[t], ratio});
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  return rep;
}

InterpolationReport interpolation_check(double exp2, double linf, double alpha) {
  InterpolationReport rep;
  rep.A = std::max(exp2 * exp2, linf);
  rep.bound = std::pow(rep.A, 1.0 - 1.0 / alpha);
  rep.pre_ok = exp2 <= std::sqrt(rep.A) * (1 + 1e-12) && linf <= rep.A * (1 + 1e-12);
  return rep;
}

NormReport norm_report(const PointSet& ps, const std::vector<int>& p_grid,
                       const std::vector<double>& alphas, size_t cell_budget) {
  NormReport rep;
  Dyadic li = linf_norm(ps, cell_budget);
  rep.linf = li.str();
  rep.linf_value = li.to_double();
  rep.p_grid = p_grid;
  std::vector<double> lps;
  for (int p : p_grid) {
    LpValue v = lp_norm(ps, double(p), cell_budget);
    rep.lp[p] = v;
    lps.push_back(v.value);
  }
  for (double alpha : alphas) {
    rep.exp_proxy[alpha] = exp_proxy_from_lp(p_grid, lps, alpha);
    try {
      rep.orlicz[alpha] = orlicz_norm(ps, OrliczSpec{alpha, OrliczSpec::Family::exp_power},
                                      4, cell_budget);
    } catch (const BudgetError&) {
      // proxy entries remain; exact sampling skipped above the budget
    }
  }
  return rep;
}

}  // namespace dlab
