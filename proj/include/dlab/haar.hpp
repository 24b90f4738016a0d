#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dlab/dyadic.hpp"
#include "dlab/errors.hpp"
#include "dlab/pointset.hpp"

namespace dlab {

/// epsilon = 0: mean-zero Haar in that variable; epsilon = 1: |h| = indicator.
struct HaarType {
  int ex = 0, ey = 0;
  bool operator==(const HaarType& o) const { return ex == o.ex && ey == o.ey; }
};

struct CoeffRecord {
  DyadicRectangle rect;
  HaarType type;
  Dyadic linear;    // <L_N, h>
  Dyadic counting;  // <C_P, h>
  Dyadic total;     // counting - linear = <D_N, h>
};

/// Pointwise value of h_R^t at x, in {-1, 0, +1}.
int haar_eval(const DyadicRectangle& rect, HaarType t, const Point& x);

/// Exact inner product <D_N, h_R^t>. Shape preconditions: t=(0,1) needs
/// ry = [0,1]; t=(1,0) needs rx = [0,1]; t=(1,1) needs R = [0,1]^2.
CoeffRecord haar_coeff(const PointSet& ps, const DyadicRectangle& rect, HaarType t);

/// All type-(0,0) coefficients of one shape (k,l), bucketed by rectangle.
/// Rectangles without a point in their interior all share empty_total.
struct ShapeCoeffs {
  int k = 0, l = 0;
  int64_t npoints = 0;
  /// key = (i << l) | j; value = sum over interior points of phi(2^k px) phi(2^l py)
  std::unordered_map<uint64_t, Dyadic> phi_sums;
  Dyadic linear;       // N |R|^2 / 16, same for every R of the shape
  Dyadic empty_total;  // -linear

  uint64_t rect_count() const { return uint64_t(1) << (k + l); }
  Dyadic total(uint64_t key) const;
  Dyadic total(uint64_t i, uint64_t j) const { return total((i << l) | j); }
};

ShapeCoeffs bucket_shape(const PointSet& ps, int k, int l);

struct ScanSelector {
  int max_depth = 0;    // scan shapes with k+l == max_depth (exact_level) or k+l <= max_depth
  bool exact_level = false;
};

struct ScanMode {
  bool sampled = false;
  uint64_t sample_count = 0;
  uint64_t seed = 0;
};

struct ScanAggregate {
  uint64_t rects_scanned = 0;
  Dyadic max_abs_total;
  std::optional<DyadicRectangle> argmax;
  double scaled_max = 0.0;  // N * max |total|
  /// histogram of N*|total| in bins of width 1/8 over [0,4), last bin = overflow
  std::vector<uint64_t> histogram = std::vector<uint64_t>(33, 0);
};

/// Type-(0,0) coefficient scan. When csv_out is non-null, emits one line per
/// rectangle: k,i,l,j,eps_x,eps_y,linear,counting,total (deterministic order:
/// lexicographic by (k,i,l,j) in exhaustive mode, seeded order in sampled mode).
ScanAggregate scan_coeffs(const PointSet& ps, const ScanSelector& sel, const ScanMode& mode,
                          std::ostream* csv_out = nullptr,
                          uint64_t rect_budget = uint64_t(1) << 26);

/// Exact per-quadruple residuals |sum_{p in Q} <1_{[p,1)}, h_R> - |R|/4|
/// for a full vdc set and a rectangle with |R| >= 4/N.
std::vector<Dyadic> quadruple_residual(const PointSet& ps, const DyadicRectangle& rect);

/// f = sum over all rectangles of shape (r1,r2) of signs[R] * h_R.
struct RFunction {
  int r1 = 0, r2 = 0;
  std::vector<int8_t> signs;  // size 2^{r1+r2}, index (i << r2) | j

  int index() const { return r1 + r2; }
  int8_t sign(uint64_t i, uint64_t j) const { return signs[(i << r2) | j]; }
  /// Pointwise value (+-1) at x in [0,1)^2 under the half-open convention.
  int eval(const Point& x) const;
};

/// signs[R] = sgn(<D_N, h_R>), with sgn(0) := +1.
RFunction build_r_function(const PointSet& ps, int r1, int r2);

/// <D_N, f> = sum_R signs[R] <D_N, h_R>, exact.
Dyadic r_inner(const PointSet& ps, const RFunction& f);

/// Product of r-functions at a common index; at least one parameter vector
/// must occur an odd number of times. Verified pointwise on the finest grid.
RFunction product_r(const std::vector<RFunction>& fs);

/// Number of v-subsets of the hyperbolic family H_n^2 whose product is an
/// s-function with parameter (s1, s2); brute-force enumeration.
int64_t count_products(int n, int s1, int s2, int v);

/// A finite signed Haar expansion f = sum c_R h_R over full shape blocks.
struct HaarExpansion {
  struct Block {
    int r1 = 0, r2 = 0;
    std::vector<Dyadic> coeffs;  // index (i << r2) | j
  };
  std::vector<Block> blocks;

  static HaarExpansion from_r_function(const RFunction& f);
  int max_r1() const;
  int max_r2() const;
  Dyadic eval(const Point& x) const;
};

/// S(f)^2 at x: sum over blocks of c_{R(x)}^2.
Dyadic square_function_sq(const HaarExpansion& f, const Point& x);

/// Exact sup of S(f)^2 over the grid induced by the blocks.
Dyadic sup_square_sq(const HaarExpansion& f);

}  // namespace dlab
