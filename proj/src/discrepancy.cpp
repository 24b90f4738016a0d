#include "dlab/discrepancy.hpp"

#include <algorithm>
#include <map>

namespace dlab {

int64_t count_dominated(const PointSet& ps, const Dyadic& x1, const Dyadic& x2) {
  int64_t c = 0;
  for (const Point& p : ps.points)
    if (p.x < x1 && p.y < x2) ++c;
  return c;
}

DiscrepancyValue eval_discrepancy(const PointSet& ps, const Dyadic& x1, const Dyadic& x2) {
  DiscrepancyValue v;
  v.count = count_dominated(ps, x1, x2);
  v.area_term = Dyadic::from_int(ps.size()) * x1 * x2;
  v.value = Dyadic::from_int(v.count) - v.area_term;
  return v;
}

Dyadic exact_mean(const PointSet& ps) {
  Dyadic sum;
  const Dyadic one = Dyadic::from_int(1);
  for (const Point& p : ps.points) sum += (one - p.x) * (one - p.y);
  return sum - Dyadic(ps.size(), 2);
}

Dyadic closed_form_mean(int n, const DigitString& sigma) {
  if (sigma.n != n) throw std::invalid_argument("closed_form_mean: sigma length mismatch");
  return Dyadic(n - 2 * sigma.ones_count(), 3);
}

CellGrid CellGrid::build(const PointSet& ps, size_t cell_budget) {
  CellGrid g;
  g.nscale_ = ps.size();
  std::vector<Dyadic> xs{Dyadic(), Dyadic::from_int(1)};
  std::vector<Dyadic> ys{Dyadic(), Dyadic::from_int(1)};
  for (const Point& p : ps.points) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  g.xs_ = std::move(xs);
  g.ys_ = std::move(ys);

  for (const Dyadic& d : g.xs_) g.mx_ = std::max(g.mx_, d.exp());
  for (const Dyadic& d : g.ys_) g.my_ = std::max(g.my_, d.exp());
  for (const Dyadic& d : g.xs_) g.xnum_.push_back(int64_t(d.scaled_num(g.mx_)));
  for (const Dyadic& d : g.ys_) g.ynum_.push_back(int64_t(d.scaled_num(g.my_)));

  // y-cell increments per x-breakpoint
  std::map<int64_t, size_t> xindex, yindex;
  for (size_t i = 0; i < g.xnum_.size(); ++i) xindex[g.xnum_[i]] = i;
  for (size_t j = 0; j < g.ynum_.size(); ++j) yindex[g.ynum_[j]] = j;
  g.yinc_.assign(g.xs_.size(), {});
  for (const Point& p : ps.points) {
    size_t i = xindex.at(int64_t(p.x.scaled_num(g.mx_)));
    size_t j = yindex.at(int64_t(p.y.scaled_num(g.my_)));
    g.yinc_[i].push_back(uint32_t(j));
  }

  if (g.cells() <= cell_budget) {
    g.counts_.resize(g.cells());
    size_t ny = g.y_cells();
    g.sweep([&](size_t i, const std::vector<uint32_t>& cnt) {
      std::copy(cnt.begin(), cnt.end(), g.counts_.begin() + long(i * ny));
    });
  }
  return g;
}

uint32_t CellGrid::count_at(size_t i, size_t j) const {
  if (counts_.empty()) throw BudgetError("cell grid not materialized: cell count exceeded budget");
  return counts_[i * y_cells() + j];
}

void CellGrid::sweep(const std::function<void(size_t, const std::vector<uint32_t>&)>& f) const {
  std::vector<uint32_t> cnt(y_cells(), 0);
  for (size_t i = 0; i + 1 < xs_.size(); ++i) {
    for (uint32_t j0 : yinc_[i])
      for (size_t j = j0; j < cnt.size(); ++j) ++cnt[j];
    f(i, cnt);
  }
}

}  // namespace dlab
