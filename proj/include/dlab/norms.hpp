#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dlab/bigdyadic.hpp"
#include "dlab/discrepancy.hpp"
#include "dlab/dyadic.hpp"
#include "dlab/haar.hpp"
#include "dlab/pointset.hpp"

namespace dlab {

/// ess-sup of |D_N|: exact corner scan over the cell grid.
Dyadic linf_norm(const PointSet& ps, size_t cell_budget = CellGrid::kDefaultCellBudget);

/// Exact integral of D_N^p over the unit square (even p only).
struct Rational {
  boost::multiprecision::cpp_int num, den;  // den > 0
  double to_double() const;
  std::string str() const;  // "num/den"
};
Rational lp_moment_exact(const PointSet& ps, int p,
                         size_t cell_budget = CellGrid::kDefaultCellBudget);

struct LpValue {
  double value = 0.0;
  bool exact = false;
  double error = 0.0;  // quadrature error estimate; 0 for exact
  int refine = 0;      // quadrature refinement factor used
};

/// ||D_N||_p. Even integer p: exact cellwise integration then a floating
/// p-th root. Otherwise midpoint quadrature on a 4x refinement of the cell
/// grid with a Richardson error estimate.
LpValue lp_norm(const PointSet& ps, double p,
                size_t cell_budget = CellGrid::kDefaultCellBudget);

struct OrliczSpec {
  double alpha = 2.0;
  enum class Family { exp_power, l_log_power } family = Family::exp_power;

  /// Young function value at t >= 0.
  double psi(double t) const;
};

struct OrliczResult {
  double value = 0.0;
  double bracket = 0.0;  // final bisection bracket width
};

/// Luxemburg norm of a function given as atoms (measure, |value|) summing to
/// total measure <= 1; bisection to the given relative bracket.
OrliczResult orlicz_norm_atoms(const std::vector<std::pair<double, double>>& atoms,
                               const OrliczSpec& spec, double tol = 1e-9);

/// Luxemburg norm of D_N, midpoint-sampled on a refinement of the cell grid.
OrliczResult orlicz_norm(const PointSet& ps, const OrliczSpec& spec, int refine = 4,
                         size_t cell_budget = CellGrid::kDefaultCellBudget);

inline const std::vector<int> kDefaultPGrid = {2, 4, 8, 16, 32, 64};

/// sup over the grid of p^{-1/alpha} * lp(p); lp_values parallel to p_grid.
double exp_proxy_from_lp(const std::vector<int>& p_grid, const std::vector<double>& lp_values,
                         double alpha);
double exp_proxy(const PointSet& ps, double alpha, const std::vector<int>& p_grid = kDefaultPGrid,
                 size_t cell_budget = CellGrid::kDefaultCellBudget);

/// ||f||_p / (sqrt(p) * ||S(f)||_inf) for each p in the grid.
struct CwwReport {
  std::vector<std::pair<int, double>> ratios;
  double sup_square = 0.0;
  double max_ratio = 0.0;
};
CwwReport cww_check(const HaarExpansion& f, const std::vector<int>& p_grid = kDefaultPGrid);

struct InterpolationReport {
  double A = 0.0;       // max(exp2^2, linf)
  double bound = 0.0;   // A^{1-1/alpha}
  bool pre_ok = false;  // exp2 <= sqrt(A) and linf <= A
};
InterpolationReport interpolation_check(double exp2, double linf, double alpha);

struct NormReport {
  std::string linf;  // exact rational rendering
  double linf_value = 0.0;
  std::vector<int> p_grid;
  std::map<int, LpValue> lp;
  std::map<double, double> exp_proxy;  // alpha -> value
  std::map<double, OrliczResult> orlicz;
};

NormReport norm_report(const PointSet& ps, const std::vector<int>& p_grid = kDefaultPGrid,
                       const std::vector<double>& alphas = {1.0, 2.0, 3.0},
                       size_t cell_budget = CellGrid::kDefaultCellBudget);

}  // namespace dlab
