#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dlab/haar.hpp"
#include "dlab/norms.hpp"
#include "dlab/pointset.hpp"

namespace dlab {

/// Structure report for a built Riesz product: the product of g factors
/// (1 + f_r) must be two-valued {0, 2^g} with P{psi = 2^g} = 2^{-g}.
struct RieszStructure {
  int m = 0;  // common index |r| of the factors; grid is 2^{m+1} x 2^{m+1}
  int g = 0;
  uint64_t cells_on = 0;  // grid cells where psi = 2^g
  bool two_valued = false;
  bool measure_ok = false;  // cells_on == 2^{2(m+1)-g}
};

/// Riesz product psi = prod_{r in G} (1 + f_r), materialized as the indicator
/// set E = {psi = 2^g} on the grid of level (m+1, m+1).
struct RieszProduct {
  int m = 0;
  int g = 0;
  std::vector<std::pair<int, int>> G;  // r-vectors (r1, r2), r1 + r2 = m
  std::vector<RFunction> factors;
  std::vector<uint64_t> e_bits;  // bitset over (u << (m+1)) | v
  RieszStructure structure;

  bool cell_on(uint64_t u, uint64_t v) const {
    uint64_t idx = (u << (m + 1)) | v;
    return (e_bits[idx >> 6] >> (idx & 63)) & 1;
  }
};

/// { r in H_n^2 : a | r_1 } in increasing r_1 order; |result| = floor(n/a)+1.
std::vector<std::pair<int, int>> select_G(int n, int a);

/// Build psi over the given r-vectors (all of one index m <= 13) and verify
/// its two-valued structure exactly.
RieszProduct build_riesz(const PointSet& ps, const std::vector<std::pair<int, int>>& G);

/// Exact <D_N, psi - 1>; the grid must be at least as fine as the points.
Rational pair(const PointSet& ps, const RieszProduct& psi);

struct Certificate {
  int n = 0;
  int a = 0;
  std::vector<std::pair<int, int>> G;
  int g = 0;
  double alpha = 2.0;
  Rational pairing;      // <D_N, psi - 1>, exact
  Rational first_order;  // sum_r <D_N, f_r>, exact
  OrliczResult psi_norm; // || psi - 1 ||_{L(log L)^{1/alpha}}
  double lower_bound = 0.0;  // pairing / psi_norm <= ||D_N||_{exp(L^alpha)}
  RieszStructure structure;

  std::string to_json() const;
};

/// Full duality pipeline: G inside H_m^2 with 2N < 2^m <= 4N, exact pairing,
/// exact two-atom Orlicz norm by bisection to the given tolerance.
Certificate certify_lower(const PointSet& ps, double alpha, int a, double tol = 1e-9);

}  // namespace dlab
