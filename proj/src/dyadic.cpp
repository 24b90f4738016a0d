#include "dlab/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace dlab {

std::string int128_to_string(int128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : v;
  std::string s;
  while (u) {
    s.push_back(char('0' + int(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

int128 int128_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw std::invalid_argument("bad integer literal: " + s);
  unsigned __int128 u = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad integer literal: " + s);
    u = u * 10 + unsigned(s[i] - '0');
  }
  return neg ? -static_cast<int128>(u) : static_cast<int128>(u);
}

namespace {

int128 checked_shl(int128 v, int k) {
  if (k == 0 || v == 0) return v;
  if (k >= 127) throw std::overflow_error("dyadic shift overflow");
  int128 r = v << k;
  if ((r >> k) != v) throw std::overflow_error("dyadic shift overflow");
  return r;
}

}  // namespace

Dyadic::Dyadic(int128 num, int exp) : num_(num), exp_(exp) {
  if (exp < 0) throw std::invalid_argument("negative dyadic exponent");
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  while (exp_ > 0 && (num_ & 1) == 0) {
    num_ >>= 1;
    --exp_;
  }
  if (exp_ > kMaxExponent) throw std::overflow_error("dyadic exponent exceeds supported depth");
}

Dyadic Dyadic::operator-() const {
  Dyadic r;
  r.num_ = -num_;
  r.exp_ = exp_;
  return r;
}

int128 Dyadic::scaled_num(int exp) const {
  if (exp < exp_) throw std::invalid_argument("scaled_num below canonical exponent");
  return checked_shl(num_, exp - exp_);
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
  int e = std::max(exp_, o.exp_);
  return Dyadic(scaled_num(e) + o.scaled_num(e), e);
}

Dyadic Dyadic::operator-(const Dyadic& o) const { return *this + (-o); }

Dyadic Dyadic::operator*(const Dyadic& o) const {
  int128 r;
  if (__builtin_mul_overflow(num_, o.num_, &r)) throw std::overflow_error("dyadic product overflow");
  return Dyadic(r, exp_ + o.exp_);
}

bool Dyadic::operator<(const Dyadic& o) const {
  int e = std::max(exp_, o.exp_);
  return scaled_num(e) < o.scaled_num(e);
}

Dyadic Dyadic::frac() const {
  if (num_ >= 0 && exp_ == 0) return Dyadic();  // integer
  unsigned __int128 den = static_cast<unsigned __int128>(1) << exp_;
  int128 m = num_ % static_cast<int128>(den);
  if (m < 0) m += static_cast<int128>(den);
  return Dyadic(m, exp_);
}

double Dyadic::to_double() const {
  return std::ldexp(static_cast<double>(static_cast<long double>(num_)), -exp_);
}

std::string Dyadic::str() const {
  return int128_to_string(num_) + "/2^" + std::to_string(exp_);
}

Dyadic Dyadic::parse(const std::string& s) {
  auto slash = s.find("/2^");
  if (slash == std::string::npos) throw std::invalid_argument("bad dyadic literal: " + s);
  int128 num = int128_from_string(s.substr(0, slash));
  int exp = std::stoi(s.substr(slash + 3));
  Dyadic d(num, exp);
  if (d.num() != num || d.exp() != exp)
    throw std::invalid_argument("non-canonical dyadic literal: " + s);
  return d;
}

DigitString::DigitString(int n_, uint64_t bits_) : n(n_), bits(bits_) {
  if (n < 1 || n > kMaxDepth) throw std::invalid_argument("digit string length out of range");
  if (n < 64 && (bits >> n) != 0) throw std::invalid_argument("digit string bits exceed length");
}

DigitString DigitString::balanced(int n) {
  DigitString s = zeros(n);
  for (int i = 1; i <= n / 2; ++i) s.bits |= uint64_t(1) << (n - i);
  return s;
}

DigitString DigitString::from_string(const std::string& str) {
  if (str.empty()) throw std::invalid_argument("empty digit string");
  DigitString s = zeros(int(str.size()));
  for (size_t i = 0; i < str.size(); ++i) {
    if (str[i] != '0' && str[i] != '1') throw std::invalid_argument("bad digit string: " + str);
    if (str[i] == '1') s.bits |= uint64_t(1) << (s.n - 1 - i);
  }
  return s;
}

DigitString DigitString::random(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  uint64_t mask = n >= 64 ? ~uint64_t(0) : ((uint64_t(1) << n) - 1);
  return DigitString(n, rng() & mask);
}

int DigitString::digit(int i) const {
  if (i < 1 || i > n) throw std::out_of_range("digit index");
  return int((bits >> (n - i)) & 1);
}

int DigitString::ones_count() const { return __builtin_popcountll(bits); }

std::string DigitString::str() const {
  std::string s(size_t(n), '0');
  for (int i = 1; i <= n; ++i)
    if (digit(i)) s[size_t(i - 1)] = '1';
  return s;
}

int digit(const Dyadic& x, int i) {
  if (i < 1) throw std::invalid_argument("digit index must be positive");
  if (x.is_negative() || x >= Dyadic::from_int(1)) throw std::domain_error("digit: x outside [0,1)");
  if (i > x.exp()) return 0;
  return int((x.num() >> (x.exp() - i)) & 1);
}

Dyadic reverse_digits(const Dyadic& x, int n) {
  if (n < 1) throw std::invalid_argument("reverse_digits: n must be positive");
  if (x.is_negative() || x >= Dyadic::from_int(1))
    throw std::domain_error("reverse_digits: x outside [0,1)");
  if (x.exp() > n) throw std::domain_error("reverse_digits: x has digits beyond position " + std::to_string(n));
  unsigned __int128 m = static_cast<unsigned __int128>(x.scaled_num(n));
  unsigned __int128 rev = 0;
  for (int i = 0; i < n; ++i) {
    rev = (rev << 1) | (m & 1);
    m >>= 1;
  }
  return Dyadic(static_cast<int128>(rev), n);
}

Dyadic digital_shift(const Dyadic& x, const DigitString& sigma) {
  if (x.is_negative() || x >= Dyadic::from_int(1))
    throw std::domain_error("digital_shift: x outside [0,1)");
  int e = std::max(x.exp(), sigma.n);
  int128 m = x.scaled_num(e);
  m ^= static_cast<int128>(sigma.bits) << (e - sigma.n);
  return Dyadic(m, e);
}

Dyadic phi(const Dyadic& x) {
  Dyadic f = x.frac();
  // compare f with 1/2 exactly: 2*num vs 2^exp
  unsigned __int128 den = static_cast<unsigned __int128>(1) << f.exp();
  if (static_cast<unsigned __int128>(f.num()) * 2 <= den) return f;
  return Dyadic::from_int(1) - f;
}

}  // namespace dlab
