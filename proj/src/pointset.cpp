#include "dlab/pointset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace dlab {

DyadicInterval::DyadicInterval(int level_, uint64_t index_) : level(level_), index(index_) {
  if (level < 0 || level > kMaxExponent) throw std::invalid_argument("interval level out of range");
  if (level < 64 && index >= (uint64_t(1) << level)) throw std::invalid_argument("interval index out of range");
}

bool DyadicInterval::contains(const Dyadic& v) const {
  if (v.is_negative()) return false;
  // floor(v * 2^level) == index, with v in [0,1)
  if (v >= Dyadic::from_int(1)) return false;
  int128 fl = v.exp() >= level ? (v.num() >> (v.exp() - level)) : (v.num() << (level - v.exp()));
  return fl == static_cast<int128>(index);
}

namespace {

uint64_t reverse_bits(uint64_t v, int n) {
  uint64_t r = 0;
  for (int i = 0; i < n; ++i) {
    r = (r << 1) | (v & 1);
    v >>= 1;
  }
  return r;
}

}  // namespace

PointSet generate_vdc(int n, const DigitString& sigma) {
  if (n < 1 || n > kMaxDepth) throw std::out_of_range("generate_vdc: depth exceeds supported range");
  if (sigma.n != n) throw std::invalid_argument("generate_vdc: sigma length must equal n");
  PointSet ps;
  ps.kind = PointSetKind::vdc;
  ps.n = n;
  ps.sigma = sigma;
  uint64_t N = uint64_t(1) << n;
  ps.points.reserve(N);
  for (uint64_t tau = 0; tau < N; ++tau) {
    uint64_t rev = reverse_bits(tau ^ sigma.bits, n);
    ps.points.push_back({Dyadic(static_cast<int128>(2 * tau + 1), n + 1),
                         Dyadic(static_cast<int128>(2 * rev + 1), n + 1)});
  }
  return ps;
}

PointSet general_n_set(int n, const DigitString& sigma, int64_t N) {
  if (n < 2 || n > kMaxDepth) throw std::out_of_range("general_n_set: depth out of range");
  int64_t pow = int64_t(1) << n;
  if (!(pow / 2 < N && N < pow))
    throw std::out_of_range("general_n_set: need 2^{n-1} < N < 2^n");
  PointSet full = generate_vdc(n, sigma);
  PointSet ps;
  ps.kind = PointSetKind::vdc_truncated;
  ps.n = n;
  ps.sigma = sigma;
  ps.points.assign(full.points.begin(), full.points.begin() + N + 1);
  return ps;
}

std::vector<Point> points_in_rectangle(const PointSet& ps, const DyadicRectangle& r) {
  std::vector<Point> out;
  for (const Point& p : ps.points)
    if (r.contains(p)) out.push_back(p);
  return out;
}

PointSet make_external(std::vector<Point> points) {
  std::set<std::pair<std::string, std::string>> seen;
  for (const Point& p : points) {
    if (p.x.is_negative() || p.x >= Dyadic::from_int(1) || p.y.is_negative() ||
        p.y >= Dyadic::from_int(1))
      throw std::domain_error("point coordinate outside [0,1)");
    if (!seen.insert({p.x.str(), p.y.str()}).second)
      throw std::invalid_argument("duplicate point " + p.x.str() + " " + p.y.str());
  }
  PointSet ps;
  ps.kind = PointSetKind::external;
  ps.points = std::move(points);
  return ps;
}

void save_points(const PointSet& ps, std::ostream& out) {
  switch (ps.kind) {
    case PointSetKind::vdc:
      out << "#vdc n=" << *ps.n << " sigma=" << ps.sigma->str() << "\n";
      break;
    case PointSetKind::vdc_truncated:
      out << "#vdc-truncated n=" << *ps.n << " sigma=" << ps.sigma->str()
          << " N=" << ps.size() - 1 << "\n";
      break;
    case PointSetKind::external:
      out << "#external N=" << ps.size() << "\n";
      break;
  }
  for (const Point& p : ps.points) out << p.x.str() << " " << p.y.str() << "\n";
}

void save_points(const PointSet& ps, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  save_points(ps, f);
}

namespace {

std::string header_field(const std::string& line, const std::string& key) {
  auto pos = line.find(key + "=");
  if (pos == std::string::npos) throw std::invalid_argument("missing header field " + key);
  pos += key.size() + 1;
  auto end = line.find(' ', pos);
  return line.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
}

Dyadic parse_coord(const std::string& tok, int lineno) {
  Dyadic d;
  try {
    d = Dyadic::parse(tok);
  } catch (const std::exception& e) {
    throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
  }
  if (d.is_negative() || d >= Dyadic::from_int(1))
    throw std::domain_error("line " + std::to_string(lineno) + ": coordinate outside [0,1)");
  return d;
}

}  // namespace

PointSet load_points(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::invalid_argument("line 1: missing header");
  PointSet ps;
  std::optional<int64_t> expect;
  if (header.rfind("#vdc-truncated", 0) == 0) {
    ps.kind = PointSetKind::vdc_truncated;
    ps.n = std::stoi(header_field(header, "n"));
    ps.sigma = DigitString::from_string(header_field(header, "sigma"));
    expect = std::stoll(header_field(header, "N")) + 1;
  } else if (header.rfind("#vdc", 0) == 0) {
    ps.kind = PointSetKind::vdc;
    ps.n = std::stoi(header_field(header, "n"));
    ps.sigma = DigitString::from_string(header_field(header, "sigma"));
    expect = int64_t(1) << *ps.n;
  } else if (header.rfind("#external", 0) == 0) {
    ps.kind = PointSetKind::external;
    expect = std::stoll(header_field(header, "N"));
  } else {
    throw std::invalid_argument("line 1: unrecognized header");
  }
  std::string line;
  int lineno = 1;
  std::set<std::pair<std::string, std::string>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string xs, ys;
    if (!(ls >> xs >> ys)) throw std::invalid_argument("line " + std::to_string(lineno) + ": expected two coordinates");
    Point p{parse_coord(xs, lineno), parse_coord(ys, lineno)};
    if (!seen.insert({xs, ys}).second)
      throw std::invalid_argument("line " + std::to_string(lineno) + ": duplicate point");
    ps.points.push_back(p);
  }
  if (expect && ps.size() != *expect)
    throw std::invalid_argument("point count does not match header");
  return ps;
}

PointSet load_points_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  return load_points(f);
}

}  // namespace dlab
