#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "dlab/haar.hpp"
#include "dlab/norms.hpp"
#include "dlab/pointset.hpp"

namespace dlab {

/// A union of axis-aligned dyadic cells of side 2^{-level}, stored as a
/// bitmap indexed (ix << level) | iy.
struct CellUnion {
  int level = 0;
  std::vector<uint8_t> cells;  // size 2^{2*level}, 0/1

  static CellUnion full(int level);
  static CellUnion from_rectangle(const DyadicRectangle& r, int level);

  bool cell(uint64_t ix, uint64_t iy) const {
    return cells[(ix << level) | iy] != 0;
  }
  size_t cell_count() const;
  bool empty() const { return cell_count() == 0; }
  Dyadic measure() const { return Dyadic(int128(cell_count()), 2 * level); }
  /// Row-per-line bitmap dump ('#' inside, '.' outside), y increasing upward.
  std::string bitmap_str() const;
};

enum class BmoFamily { dyadic_squares, dyadic_rectangles, greedy_unions };

std::string family_name(BmoFamily f);

struct BmoReport {
  Rational global_sum;  // U = [0,1]^2
  std::string best_u;
  Rational estimate;
  int depth = 0;
  std::string family;

  std::string to_json() const;
};

/// |U|^{-1} sum over dyadic rectangles R contained in U with |R| >= 2^{-depth}
/// of <D_N, h_R>^2 / |R|, exact.  Only full Haar (0,0) coefficients enter.
Rational square_sum_over(const PointSet& ps, const CellUnion& u, int depth);

/// Same square sum for an explicit finite Haar expansion f = sum c_R h_R.
Rational square_sum_over(const HaarExpansion& f, const CellUnion& u, int depth);

/// Supremum of square_sum_over across a candidate family of cell unions.
/// Every family includes U = [0,1]^2, so estimate >= global_sum.
BmoReport bmo_estimate(const PointSet& ps, BmoFamily family, int depth,
                       size_t budget = size_t(1) << 12);

/// One-parameter square sum: sup over dyadic intervals J of
/// |J|^{-1} sum_{I subset J, |I| >= 2^{-depth}} <D_N, h_I x 1>^2 / |I|.
double bmo1_norm(const PointSet& ps, int depth);

/// One-parameter square sum for explicit semi-Haar coefficients
/// (level, index, inner product); absent coefficients are zero.
double bmo1_norm(const std::vector<std::tuple<int, uint64_t, Dyadic>>& coeffs,
                 int depth);

}  // namespace dlab
