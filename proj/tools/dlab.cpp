// discrepancy-lab command line: generate scrambled van der Corput sets and
// run the exact discrepancy / Haar / norm / BMO / Riesz analyses on them.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dlab/bmo.hpp"
#include "dlab/discrepancy.hpp"
#include "dlab/errors.hpp"
#include "dlab/haar.hpp"
#include "dlab/norms.hpp"
#include "dlab/pointset.hpp"
#include "dlab/riesz.hpp"

using namespace dlab;
using nlohmann::json;

namespace {

struct RunConfig {
  int n_lo = 4, n_hi = 4;
  std::string sigma = "zeros";
  int depth = -1;  // -1: per-command default
  size_t budget = CellGrid::kDefaultCellBudget;
  std::vector<int> p_grid = kDefaultPGrid;
  std::vector<double> alphas = {2.0};
  int a = 3;
  std::string out;
  std::string format = "json";
  uint64_t seed = 0;
  int workers = 1;
};

DigitString make_sigma(const RunConfig& cfg, int n) {
  if (cfg.sigma == "zeros") return DigitString::zeros(n);
  if (cfg.sigma == "balanced") return DigitString::balanced(n);
  if (cfg.sigma == "random") return DigitString::random(n, cfg.seed);
  try {
    DigitString s = DigitString::from_string(cfg.sigma);  // explicit bitstring
    if (s.n != n) throw std::invalid_argument("length != n");
    return s;
  } catch (const std::exception& e) {
    throw CLI::ValidationError(
        "--sigma", "expected zeros|balanced|random|n-bit string (" +
                       std::string(e.what()) + ")");
  }
}

PointSet make_set(const RunConfig& cfg, int n) {
  return generate_vdc(n, make_sigma(cfg, n));
}

// "4" or "4..10"
void parse_n_range(const std::string& s, RunConfig& cfg) {
  size_t dots = s.find("..");
  if (dots == std::string::npos) {
    cfg.n_lo = cfg.n_hi = std::stoi(s);
  } else {
    cfg.n_lo = std::stoi(s.substr(0, dots));
    cfg.n_hi = std::stoi(s.substr(dots + 2));
  }
  if (cfg.n_lo < 1 || cfg.n_hi < cfg.n_lo)
    throw CLI::ValidationError("--n", "expected a positive value or lo..hi range");
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + cfg.out);
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
  }
}

std::string f17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Plain fraction rendering of a dyadic rational ("1/2", "-3/8", "2").
std::string plain_fraction(const Dyadic& d) {
  if (d.exp() == 0) return int128_to_string(d.num());
  return int128_to_string(d.num()) + "/" +
         (BigInt(1) << d.exp()).str();
}

int cmd_gen(const RunConfig& cfg) {
  PointSet ps = make_set(cfg, cfg.n_lo);
  std::ostringstream os;
  save_points(ps, os);
  emit(cfg, os.str());
  return 0;
}

int cmd_eval(const RunConfig& cfg, const std::string& xs, const std::string& ys) {
  PointSet ps = make_set(cfg, cfg.n_lo);
  DiscrepancyValue v = eval_discrepancy(ps, Dyadic::parse(xs), Dyadic::parse(ys));
  json j;
  j["count"] = v.count;
  j["area_term"] = v.area_term.str();
  j["value"] = v.value.str();
  j["value_approx"] = v.value.to_double();
  emit(cfg, j.dump(2));
  return 0;
}

int cmd_mean(const RunConfig& cfg) {
  PointSet ps = make_set(cfg, cfg.n_lo);
  emit(cfg, plain_fraction(exact_mean(ps)));
  return 0;
}

int cmd_haar_scan(const RunConfig& cfg) {
  PointSet ps = make_set(cfg, cfg.n_lo);
  ScanSelector sel{cfg.depth >= 0 ? cfg.depth : 2 * cfg.n_lo, false};
  ScanMode mode;
  mode.seed = cfg.seed;
  if (cfg.format == "csv") {
    std::ostringstream csv;
    scan_coeffs(ps, sel, mode, &csv, cfg.budget);
    emit(cfg, csv.str());
    return 0;
  }
  ScanAggregate agg = scan_coeffs(ps, sel, mode, nullptr, cfg.budget);
  json j;
  j["rects_scanned"] = agg.rects_scanned;
  j["max_abs_total"] = agg.max_abs_total.str();
  j["scaled_max"] = agg.scaled_max;
  j["histogram"] = agg.histogram;
  emit(cfg, j.dump(2));
  return 0;
}

int cmd_norms(const RunConfig& cfg) {
  PointSet ps = make_set(cfg, cfg.n_lo);
  NormReport rep = norm_report(ps, cfg.p_grid, cfg.alphas, cfg.budget);
  json j;
  j["linf"] = rep.linf;
  j["linf_value"] = rep.linf_value;
  for (int p : rep.p_grid) {
    const LpValue& v = rep.lp.at(p);
    j["lp"][std::to_string(p)] = {
        {"value", v.value}, {"exact", v.exact}, {"error", v.error}};
  }
  for (const auto& [alpha, v] : rep.exp_proxy) j["exp_proxy"][f17(alpha)] = v;
  for (const auto& [alpha, v] : rep.orlicz)
    j["orlicz"][f17(alpha)] = {{"value", v.value}, {"bracket", v.bracket}};
  emit(cfg, j.dump(2));
  return 0;
}

int cmd_bmo(const RunConfig& cfg, const std::string& family) {
  PointSet ps = make_set(cfg, cfg.n_lo);
  int depth = cfg.depth >= 0 ? cfg.depth : 2 * cfg.n_lo + 4;
  auto run = [&](BmoFamily f) { return bmo_estimate(ps, f, depth, cfg.budget); };
  json j;
  if (family == "squares" || family == "all")
    j["dyadic-squares"] = json::parse(run(BmoFamily::dyadic_squares).to_json());
  if (family == "rectangles" || family == "all")
    j["dyadic-rectangles"] = json::parse(run(BmoFamily::dyadic_rectangles).to_json());
  if (family == "greedy" || family == "all")
    j["greedy-unions"] = json::parse(run(BmoFamily::greedy_unions).to_json());
  if (j.empty())
    throw CLI::ValidationError("--family", "expected squares|rectangles|greedy|all");
  emit(cfg, j.dump(2));
  return 0;
}

int cmd_certify(const RunConfig& cfg) {
  PointSet ps = make_set(cfg, cfg.n_lo);
  json arr = json::array();
  for (double alpha : cfg.alphas)
    arr.push_back(json::parse(certify_lower(ps, alpha, cfg.a).to_json()));
  emit(cfg, arr.size() == 1 ? arr[0].dump(2) : arr.dump(2));
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  double alpha = cfg.alphas.front();
  json rows = json::array();
  std::ostringstream csv;
  csv << "n,N,mean,linf,linf/n,l2,l2/sqrt(n),exp2_proxy/sqrt(n),bmo_global/"
         "sqrt(n),riesz_lower/n^{1-1/alpha}\n";
  for (int n = cfg.n_lo; n <= cfg.n_hi; ++n) {
    PointSet ps = make_set(cfg, n);
    double sn = std::sqrt(double(n));
    Dyadic mean = exact_mean(ps);
    Dyadic linf = linf_norm(ps, cfg.budget);
    double l2 = std::sqrt(lp_moment_exact(ps, 2, cfg.budget).to_double());
    double proxy = exp_proxy(ps, 2.0, cfg.p_grid, cfg.budget);
    int depth = cfg.depth >= 0 ? cfg.depth : 2 * n + 4;
    double bmo_global =
        std::sqrt(square_sum_over(ps, CellUnion::full(0), depth).to_double());
    Certificate cert = certify_lower(ps, alpha, cfg.a);
    double rl = cert.lower_bound / std::pow(double(n), 1.0 - 1.0 / alpha);
    csv << n << ',' << ps.size() << ',' << mean.str() << ',' << linf.str() << ','
        << f17(linf.to_double() / n) << ',' << f17(l2) << ',' << f17(l2 / sn) << ','
        << f17(proxy / sn) << ',' << f17(bmo_global / sn) << ',' << f17(rl) << '\n';
    json row;
    row["n"] = n;
    row["N"] = ps.size();
    row["mean"] = mean.str();
    row["linf"] = linf.str();
    row["linf/n"] = linf.to_double() / n;
    row["l2"] = l2;
    row["l2/sqrt(n)"] = l2 / sn;
    row["exp2_proxy/sqrt(n)"] = proxy / sn;
    row["bmo_global/sqrt(n)"] = bmo_global / sn;
    row["riesz_lower/n^{1-1/alpha}"] = rl;
    rows.push_back(row);
  }
  emit(cfg, cfg.format == "csv" ? csv.str() : rows.dump(2));
  return 0;
}

int cmd_check(const RunConfig& cfg) {
  int failures = 0;
  auto check = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "ok   " : "FAIL ") << name << '\n';
    if (!ok) ++failures;
  };

  for (int n = 2; n <= 10; ++n) {
    DigitString sigma = make_sigma(cfg, n);
    PointSet ps = generate_vdc(n, sigma);
    check("mean identity n=" + std::to_string(n),
          exact_mean(ps) == closed_form_mean(n, sigma));

    // Net property at three shapes per n.
    bool net = true;
    for (int k : {0, n / 2, n}) {
      std::vector<int> hits(size_t(1) << n, 0);
      for (const Point& p : ps.points) {
        uint64_t i = uint64_t(p.x.scaled_num(n + 1) >> (n + 1 - k));
        uint64_t j = uint64_t(p.y.scaled_num(n + 1) >> (k + 1));
        hits[(i << (n - k)) | j]++;
      }
      for (int h : hits) net = net && h == 1;
    }
    check("net property n=" + std::to_string(n), net);
  }

  {
    PointSet ps = generate_vdc(6, make_sigma(cfg, 6));
    // Quadruple cancellation bound on a mid-size shape.
    bool okq = true;
    for (const Dyadic& r : quadruple_residual(ps, DyadicRectangle(2, 1, 2, 2)))
      okq = okq && !(Dyadic(1, 4 + 12 - 2 * 6) < r);  // 1/(N^2 |R|)
    check("quadruple cancellation", okq);

    RieszProduct psi = build_riesz(ps, select_G(8, cfg.a));
    check("riesz structure", psi.structure.two_valued && psi.structure.measure_ok);
    check("riesz pairing positive", pair(ps, psi).to_double() > 0.0);

    BmoReport rep = bmo_estimate(ps, BmoFamily::dyadic_squares, 16, cfg.budget);
    check("bmo estimate dominates global",
          rep.estimate.to_double() >= rep.global_sum.to_double());

    OrliczResult unit = orlicz_norm_atoms(
        {{1.0, 1.0}}, OrliczSpec{2.0, OrliczSpec::Family::exp_power});
    check("orlicz closed form", std::fabs(unit.value - 1.0 / std::sqrt(std::log(2.0))) < 1e-6);

    LpValue l2 = lp_norm(ps, 2, cfg.budget);
    check("l2 exact and above the mean",
          l2.exact && l2.value >= std::fabs(exact_mean(ps).to_double()));
  }
  std::cout << (failures == 0 ? "all checks passed\n"
                              : std::to_string(failures) + " checks failed\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  if (const char* env = std::getenv("DISCREPANCY_LAB_BUDGET"))
    cfg.budget = std::strtoull(env, nullptr, 10);

  CLI::App app{"discrepancy lab: exact discrepancy-function analysis"};
  app.require_subcommand(1);

  std::string n_spec = "4", xs = "1/2^1", ys = "1/2^1", family = "all";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", n_spec, "binary depth n, or a lo..hi range");
    sub->add_option("--sigma", cfg.sigma,
                    "digit scramble: zeros|balanced|random|explicit bits");
    sub->add_option("--depth", cfg.depth, "truncation depth override");
    sub->add_option("--budget", cfg.budget, "work budget (cells/rectangles)");
    sub->add_option("--pgrid", cfg.p_grid, "even p grid for norm scans");
    sub->add_option("--alpha", cfg.alphas, "Orlicz exponents");
    sub->add_option("--a", cfg.a, "riesz lacunary spacing");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", cfg.seed, "seed for sampled modes / random sigma");
    sub->add_option("--workers", cfg.workers, "worker count (never affects values)");
  };

  CLI::App* gen = app.add_subcommand("gen", "emit a scrambled van der Corput set");
  CLI::App* eval = app.add_subcommand("eval", "evaluate D_N at a dyadic point");
  eval->add_option("--x", xs, "x coordinate, num/2^e");
  eval->add_option("--y", ys, "y coordinate, num/2^e");
  CLI::App* mean = app.add_subcommand("mean", "exact integral of D_N");
  CLI::App* scan = app.add_subcommand("haar-scan", "scan Haar coefficients");
  CLI::App* norms = app.add_subcommand("norms", "L^p / Orlicz norm report");
  CLI::App* bmo = app.add_subcommand("bmo", "product BMO square sums");
  bmo->add_option("--family", family, "squares|rectangles|greedy|all");
  CLI::App* certify = app.add_subcommand("certify", "riesz duality certificate");
  CLI::App* sweep = app.add_subcommand("sweep", "growth-rate table over n");
  CLI::App* checkc = app.add_subcommand("check", "run the invariant suite");
  for (CLI::App* sub : {gen, eval, mean, scan, norms, bmo, certify, sweep, checkc})
    add_common(sub);

  try {
    app.parse(argc, argv);
    parse_n_range(n_spec, cfg);
    if (cfg.workers < 1) throw CLI::ValidationError("--workers", "must be >= 1");
    if (gen->parsed()) return cmd_gen(cfg);
    if (eval->parsed()) return cmd_eval(cfg, xs, ys);
    if (mean->parsed()) return cmd_mean(cfg);
    if (scan->parsed()) return cmd_haar_scan(cfg);
    if (norms->parsed()) return cmd_norms(cfg);
    if (bmo->parsed()) return cmd_bmo(cfg, family);
    if (certify->parsed()) return cmd_certify(cfg);
    if (sweep->parsed()) return cmd_sweep(cfg);
    if (checkc->parsed()) return cmd_check(cfg);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "budget error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
