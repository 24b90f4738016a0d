#include "dlab/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "dlab/bigdyadic.hpp"
#include "dlab/discrepancy.hpp"
#include "dlab/errors.hpp"

namespace dlab {

namespace mp = boost::multiprecision;

std::vector<std::pair<int, int>> select_G(int n, int a) {
  if (a < 1) throw std::invalid_argument("select_G: spacing must be >= 1");
  std::vector<std::pair<int, int>> g;
  for (int r1 = 0; r1 <= n; r1 += a) g.emplace_back(r1, n - r1);
  return g;
}

namespace {

constexpr int kMaxRieszIndex = 13;

// Resolution exponent of the point coordinates (vdc: n + 1).
int coord_resolution(const PointSet& ps) {
  int res = 0;
  for (const Point& p : ps.points)
    res = std::max({res, p.x.exp(), p.y.exp()});
  return res;
}

// Per-row evaluation plan for one factor on the level-(m+1) cell grid.
struct FactorRow {
  const int8_t* row = nullptr;  // signs for the x-slice, with the x-sign folded in
  int shift_j = 0;              // v >> shift_j indexes the row
  int sbit_y = 0;               // y half-sign bit of v
};

}  // namespace

RieszProduct build_riesz(const PointSet& ps, const std::vector<std::pair<int, int>>& G) {
  RieszProduct psi;
  psi.G = G;
  psi.g = int(G.size());
  if (G.empty()) {
    psi.m = std::max(1, coord_resolution(ps)) - 1;
  } else {
    psi.m = G.front().first + G.front().second;
    for (const auto& [r1, r2] : G)
      if (r1 + r2 != psi.m || r1 < 0 || r2 < 0)
        throw std::invalid_argument("build_riesz: G must lie in one H_m^2");
  }
  if (psi.m > kMaxRieszIndex) throw BudgetError("build_riesz: index exceeds grid budget");

  for (const auto& [r1, r2] : G) psi.factors.push_back(build_r_function(ps, r1, r2));

  const int L = psi.m + 1;
  const uint64_t side = uint64_t(1) << L;
  psi.e_bits.assign(std::max<uint64_t>(1, (side * side) >> 6), 0);

  uint64_t on = 0;
  bool two_valued = true;
  std::vector<FactorRow> rows(psi.factors.size());
  std::vector<int> sx(psi.factors.size());
  for (uint64_t u = 0; u < side; ++u) {
    for (size_t t = 0; t < psi.factors.size(); ++t) {
      const RFunction& f = psi.factors[t];
      rows[t].shift_j = L - f.r2;
      rows[t].sbit_y = L - f.r2 - 1;
      rows[t].row = f.signs.data() + ((u >> (L - f.r1)) << f.r2);
      sx[t] = (u >> (L - f.r1 - 1)) & 1 ? 1 : -1;
    }
    for (uint64_t v = 0; v < side; ++v) {
      // psi is 2^g where every factor is +1 and 0 elsewhere.
      size_t count_pos = 0;
      for (size_t t = 0; t < psi.factors.size(); ++t) {
        int sy = (v >> rows[t].sbit_y) & 1 ? 1 : -1;
        int val = sx[t] * sy * rows[t].row[v >> rows[t].shift_j];
        if (val != 1 && val != -1) two_valued = false;
        if (val == 1) ++count_pos;
      }
      if (count_pos == psi.factors.size()) {
        uint64_t idx = (u << L) | v;
        psi.e_bits[idx >> 6] |= uint64_t(1) << (idx & 63);
        ++on;
      }
    }
  }

  psi.structure.m = psi.m;
  psi.structure.g = psi.g;
  psi.structure.cells_on = on;
  psi.structure.two_valued = two_valued;
  psi.structure.measure_ok = on == (side * side) >> psi.g;
  return psi;
}

Rational pair(const PointSet& ps, const RieszProduct& psi) {
  const int L = psi.m + 1;
  if (coord_resolution(ps) > L)
    throw std::invalid_argument("pair: grid coarser than the point resolution");
  const uint64_t side = uint64_t(1) << L;
  const int64_t N = int64_t(ps.size());

  // Points enter row u once u >= ceil(x * 2^L); D_N is constant on open cells.
  std::vector<std::vector<uint64_t>> enter(side + 1);
  for (const Point& p : ps.points) {
    uint64_t ux = uint64_t(p.x.scaled_num(L));
    uint64_t vy = uint64_t(p.y.scaled_num(L));
    enter[ux].push_back(vy);
  }

  // S1 = sum over E of the dominated count, S2 = sum over E of (2u+1)(2v+1).
  BigInt s1 = 0;
  int128 s2 = 0;
  std::vector<uint32_t> at_y(side + 1, 0);  // points with y-grid index exactly v
  for (uint64_t u = 0; u < side; ++u) {
    for (uint64_t vy : enter[u]) at_y[vy]++;
    uint64_t running = 0;
    int64_t row_count = 0;
    int128 row_odd = 0;
    for (uint64_t v = 0; v < side; ++v) {
      running += at_y[v];
      if (psi.cell_on(u, v)) {
        row_count += int64_t(running);
        row_odd += int128(2 * v + 1);
      }
    }
    s1 += row_count;
    s2 += int128(2 * u + 1) * row_odd;
  }

  // <D, psi> = 2^g [ S1 h^2 - N h^4 S2 / 4 ],  h = 2^{-L}; subtract the mean
  // of D to pass to psi - 1.
  BigDyadic inner = BigDyadic(s1 << psi.g, 2L * L) -
                    BigDyadic((BigInt(s2) * N) << psi.g, 4L * L + 2);
  Dyadic mean = exact_mean(ps);
  BigDyadic tilde = inner - BigDyadic(mean);
  mp::cpp_rational v(tilde.num(), BigInt(1) << std::max<long>(0, tilde.exp()));
  return Rational{mp::numerator(v), mp::denominator(v)};
}

std::string Certificate::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["a"] = a;
  j["g"] = g;
  j["alpha"] = alpha;
  std::vector<std::vector<int>> gv;
  for (const auto& [r1, r2] : G) gv.push_back({r1, r2});
  j["G"] = gv;
  j["pairing"] = pairing.str();
  j["pairing_approx"] = pairing.to_double();
  j["first_order"] = first_order.str();
  j["first_order_approx"] = first_order.to_double();
  j["psi_norm"] = psi_norm.value;
  j["psi_norm_bracket"] = psi_norm.bracket;
  j["lower_bound"] = lower_bound;
  j["structure"] = {{"m", structure.m},
                    {"g", structure.g},
                    {"cells_on", structure.cells_on},
                    {"two_valued", structure.two_valued},
                    {"measure_ok", structure.measure_ok}};
  return j.dump(2);
}

Certificate certify_lower(const PointSet& ps, double alpha, int a, double tol) {
  if (alpha < 2.0) throw std::invalid_argument("certify_lower: alpha must be >= 2");
  Certificate cert;
  cert.n = std::max(1, coord_resolution(ps)) - 1;
  cert.a = a;
  cert.alpha = alpha;

  // r-functions at index m with 2N < 2^m <= 4N.
  int m = cert.n + 2;
  cert.G = select_G(m, a);
  RieszProduct psi = build_riesz(ps, cert.G);
  cert.g = psi.g;
  cert.structure = psi.structure;
  if (!psi.structure.two_valued || !psi.structure.measure_ok)
    throw std::runtime_error("certify_lower: riesz structure verification failed");

  cert.pairing = pair(ps, psi);

  BigDyadic fo;
  for (const RFunction& f : psi.factors) fo += BigDyadic(r_inner(ps, f));
  mp::cpp_rational fov(fo.num(), BigInt(1) << std::max<long>(0, fo.exp()));
  cert.first_order = Rational{mp::numerator(fov), mp::denominator(fov)};

  // psi - 1 is two-valued: 2^g - 1 on E (measure 2^{-g}) and -1 elsewhere.
  double pg = std::ldexp(1.0, -psi.g);
  OrliczSpec spec{alpha, OrliczSpec::Family::l_log_power};
  cert.psi_norm = orlicz_norm_atoms(
      {{pg, std::ldexp(1.0, psi.g) - 1.0}, {1.0 - pg, 1.0}}, spec, tol);

  cert.lower_bound = cert.pairing.to_double() / cert.psi_norm.value;
  return cert;
}

}  // namespace dlab
