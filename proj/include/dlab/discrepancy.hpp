#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "dlab/dyadic.hpp"
#include "dlab/errors.hpp"
#include "dlab/pointset.hpp"

namespace dlab {

struct DiscrepancyValue {
  int64_t count = 0;
  Dyadic area_term;  // N * x1 * x2
  Dyadic value;      // count - area_term
};

/// #{p in ps : p.x < x1 and p.y < x2}, strict componentwise.
int64_t count_dominated(const PointSet& ps, const Dyadic& x1, const Dyadic& x2);

DiscrepancyValue eval_discrepancy(const PointSet& ps, const Dyadic& x1, const Dyadic& x2);

/// Integral of D_N over the unit square: sum_p (1-p1)(1-p2) - N/4.
Dyadic exact_mean(const PointSet& ps);

/// (1/4)(n/2 - sum of sigma digits); the closed form for vdc sets.
Dyadic closed_form_mean(int n, const DigitString& sigma);

/// Piecewise decomposition of [0,1]^2 by the point coordinates. On the open
/// cell [xs[i],xs[i+1]) x [ys[j],ys[j+1]) the discrepancy function equals
/// count(i,j) - N*x1*x2, where count(i,j) = #{p : p.x <= xs[i], p.y <= ys[j]}.
class CellGrid {
 public:
  static constexpr size_t kDefaultCellBudget = size_t(1) << 24;

  static CellGrid build(const PointSet& ps, size_t cell_budget = kDefaultCellBudget);

  int64_t nscale() const { return nscale_; }
  const std::vector<Dyadic>& xs() const { return xs_; }
  const std::vector<Dyadic>& ys() const { return ys_; }
  size_t x_cells() const { return xs_.size() - 1; }
  size_t y_cells() const { return ys_.size() - 1; }
  size_t cells() const { return x_cells() * y_cells(); }

  /// Common exponents scaling the breakpoints to integers.
  int x_exponent() const { return mx_; }
  int y_exponent() const { return my_; }
  const std::vector<int64_t>& x_nums() const { return xnum_; }
  const std::vector<int64_t>& y_nums() const { return ynum_; }

  /// Requires a materialized grid (cells() <= budget at build time).
  uint32_t count_at(size_t i, size_t j) const;
  bool materialized() const { return !counts_.empty(); }

  /// Visit x-slabs left to right; cnt[j] is the dominance count valid on cell
  /// (i, j). The span is reused between calls.
  void sweep(const std::function<void(size_t i, const std::vector<uint32_t>& cnt)>& f) const;

 private:
  std::vector<Dyadic> xs_, ys_;
  std::vector<int64_t> xnum_, ynum_;
  int mx_ = 0, my_ = 0;
  int64_t nscale_ = 0;
  std::vector<std::vector<uint32_t>> yinc_;  // per x-breakpoint: y-cell indices to bump
  std::vector<uint32_t> counts_;             // row-major i * y_cells() + j when materialized
};

}  // namespace dlab
