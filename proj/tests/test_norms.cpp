#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "dlab/norms.hpp"

using namespace dlab;

TEST_CASE("linf oracle values") {
  CHECK(linf_norm(generate_vdc(1, DigitString::zeros(1))) == Dyadic(7, 3));
  CHECK(linf_norm(make_external({})) == Dyadic());
  // Single centered point: sup is 3/4, approached at the inner corner of
  // the top-right cell.
  CHECK(linf_norm(make_external({Point{Dyadic(1, 1), Dyadic(1, 1)}})) == Dyadic(3, 2));
}

TEST_CASE("exact L2 moment basics") {
  PointSet v20 = generate_vdc(2, DigitString::zeros(2));
  Rational m2 = lp_moment_exact(v20, 2);
  // Cauchy-Schwarz: ||D||_2^2 >= mean^2 = 1/16.
  CHECK(m2.num * 16 >= m2.den);
  CHECK(m2.num > 0);

  // Jensen against the closed-form mean n/8 for sigma = 0.
  for (int n = 1; n <= 12; ++n) {
    Rational m = lp_moment_exact(generate_vdc(n, DigitString::zeros(n)), 2);
    CHECK(m.num * 64 >= BigInt(n) * n * m.den);
  }
}

TEST_CASE("quadrature agrees with exact") {
  for (int n : {2, 4, 6, 8}) {
    PointSet ps = generate_vdc(n, DigitString::balanced(n));
    for (int p : {2, 4}) {
      double exact = std::pow(lp_moment_exact(ps, p).to_double(), 1.0 / p);
      LpValue q = lp_norm(ps, p + 1e-13);  // force the quadrature path
      CHECK(!q.exact);
      CHECK(std::fabs(q.value - exact) <= std::max(q.error * 4, 1e-6));
    }
  }
}

TEST_CASE("lp monotone in p and dominated by linf") {
  for (int n : {3, 6}) {
    PointSet ps = generate_vdc(n, DigitString::random(n, 17));
    double linf = linf_norm(ps).to_double();
    double prev = 0.0;
    for (int p : kDefaultPGrid) {
      double lp = lp_norm(ps, p).value;
      CHECK(lp >= prev - 1e-12);
      CHECK(lp <= linf + 1e-12);
      prev = lp;
    }
  }
}

TEST_CASE("orlicz closed forms") {
  OrliczSpec exp1{1.0, OrliczSpec::Family::exp_power};
  OrliczResult r = orlicz_norm_atoms({{1.0, 1.0}}, exp1);
  CHECK(r.value == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-8));
  CHECK(r.bracket <= 1e-8 * r.value);

  // Two-valued indicator: K solves 2^{-g}(e^{1/K} - 1) = 1.
  for (int g = 1; g <= 10; ++g) {
    double p = std::ldexp(1.0, -g);
    OrliczResult ind = orlicz_norm_atoms({{p, 1.0}}, exp1);
    CHECK(ind.value == doctest::Approx(1.0 / std::log(1.0 + 1.0 / p)).epsilon(1e-8));
  }

  CHECK(orlicz_norm_atoms({{1.0, 0.0}}, exp1).value == 0.0);

  // Sub-exponential family is defined and positive at alpha < 1.
  OrliczSpec half{0.5, OrliczSpec::Family::exp_power};
  CHECK(orlicz_norm_atoms({{1.0, 1.0}}, half).value > 0.0);
}

TEST_CASE("indicator L logL norm band") {
  for (double alpha : {1.0, 2.0, 4.0}) {
    OrliczSpec spec{alpha, OrliczSpec::Family::l_log_power};
    for (int g = 1; g <= 20; ++g) {
      double p = std::ldexp(1.0, -g);
      double norm = orlicz_norm_atoms({{p, 1.0}}, spec).value;
      double target = p * std::pow(1.0 - std::log(p), 1.0 / alpha);
      CHECK(norm <= 4.0 * target);
      CHECK(norm >= target / 4.0);
    }
  }
}

TEST_CASE("orlicz norm of D_N brackets the proxy") {
  // Equivalence band between sup_p p^{-1/alpha} ||f||_p and the Luxemburg norm.
  for (int n : {3, 5, 7}) {
    PointSet ps = generate_vdc(n, DigitString::balanced(n));
    for (double alpha : {1.0, 2.0, 3.0}) {
      double proxy = exp_proxy(ps, alpha);
      double orl = orlicz_norm(ps, OrliczSpec{alpha, OrliczSpec::Family::exp_power}).value;
      CHECK(proxy <= 8.0 * orl);
      CHECK(orl <= 8.0 * proxy);
    }
  }
}

TEST_CASE("exp proxy") {
  std::vector<double> ones(kDefaultPGrid.size(), 1.0);
  for (double alpha : {1.0, 2.0, 4.0})
    CHECK(exp_proxy_from_lp(kDefaultPGrid, ones, alpha) ==
          doctest::Approx(std::pow(2.0, -1.0 / alpha)));
  // Larger grid can only increase the sup.
  PointSet ps = generate_vdc(5, DigitString::balanced(5));
  double small = exp_proxy(ps, 2.0, {2, 4});
  double big = exp_proxy(ps, 2.0, {2, 4, 8, 16});
  CHECK(big >= small - 1e-15);
}

TEST_CASE("cww single haar function") {
  HaarExpansion f;
  HaarExpansion::Block b;
  b.r1 = 2;
  b.r2 = 1;
  b.coeffs.assign(8, Dyadic());
  b.coeffs[3] = Dyadic(1, 0);
  f.blocks.push_back(b);
  CwwReport rep = cww_check(f, {2});
  CHECK(rep.sup_square == doctest::Approx(1.0));
  // ||h_R||_2 / sqrt(2) = |R|^{1/2}/sqrt(2) <= 1
  CHECK(rep.ratios[0].second == doctest::Approx(std::sqrt(1.0 / 8.0) / std::sqrt(2.0)));
  CHECK(rep.max_ratio <= 1.0);
}

TEST_CASE("cww random expansions at fixed volume") {
  const int m = 10;
  std::mt19937_64 rng(99);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    HaarExpansion f;
    for (int r1 = 0; r1 <= m; ++r1) {
      HaarExpansion::Block b;
      b.r1 = r1;
      b.r2 = m - r1;
      b.coeffs.reserve(size_t(1) << m);
      for (size_t i = 0; i < (size_t(1) << m); ++i)
        b.coeffs.push_back(Dyadic(rng() & 1 ? 1 : -1, 0));
      f.blocks.push_back(std::move(b));
    }
    CwwReport rep = cww_check(f);
    worst = std::max(worst, rep.max_ratio);
    CHECK(rep.sup_square == doctest::Approx(std::sqrt(double(m + 1))));
  }
  CHECK(worst <= 4.0);  // recorded empirical constant
}

TEST_CASE("interpolation check") {
  InterpolationReport r1 = interpolation_check(1.0, 1.0, 3.0);
  CHECK(r1.A == doctest::Approx(1.0));
  CHECK(r1.bound == doctest::Approx(1.0));
  CHECK(r1.pre_ok);
  // alpha = 2 consistency: bound = sqrt(A) >= exp2 when A = exp2^2.
  InterpolationReport r2 = interpolation_check(3.0, 2.0, 2.0);
  CHECK(r2.A == doctest::Approx(9.0));
  CHECK(r2.bound == doctest::Approx(3.0));
  CHECK(r2.pre_ok);
}

TEST_CASE("norm report consistency") {
  PointSet ps = generate_vdc(4, DigitString::balanced(4));
  NormReport rep = norm_report(ps, {2, 4, 8}, {2.0});
  CHECK(rep.lp.at(2).exact);
  CHECK(rep.linf_value >= rep.lp.at(8).value);
  CHECK(rep.exp_proxy.at(2.0) > 0.0);
  CHECK(rep.orlicz.at(2.0).value > 0.0);
}
