#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dlab {

using int128 = __int128;

/// Maximum binary depth accepted for point-set coordinates and digit strings.
inline constexpr int kMaxDepth = 40;

/// Maximum exponent a Dyadic may carry before arithmetic refuses to proceed.
/// Chosen so that products and sums of coefficient-sized quantities stay
/// inside a signed 128-bit numerator.
inline constexpr int kMaxExponent = 124;

std::string int128_to_string(int128 v);
int128 int128_from_string(const std::string& s);

/// Exact dyadic rational num / 2^exp, kept canonical: num is odd or zero,
/// and exp == 0 when num == 0.
class Dyadic {
 public:
  constexpr Dyadic() : num_(0), exp_(0) {}
  Dyadic(int128 num, int exp);

  static Dyadic from_int(int128 v) { return Dyadic(v, 0); }

  int128 num() const { return num_; }
  int exp() const { return exp_; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }

  Dyadic operator-() const;
  Dyadic operator+(const Dyadic& o) const;
  Dyadic operator-(const Dyadic& o) const;
  Dyadic operator*(const Dyadic& o) const;
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
  Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

  bool operator==(const Dyadic& o) const { return num_ == o.num_ && exp_ == o.exp_; }
  bool operator!=(const Dyadic& o) const { return !(*this == o); }
  bool operator<(const Dyadic& o) const;
  bool operator<=(const Dyadic& o) const { return !(o < *this); }
  bool operator>(const Dyadic& o) const { return o < *this; }
  bool operator>=(const Dyadic& o) const { return !(*this < o); }

  Dyadic abs() const { return num_ < 0 ? -*this : *this; }

  /// Scaled numerator at a target exponent >= exp().
  int128 scaled_num(int exp) const;

  /// Fractional part in [0,1).
  Dyadic frac() const;

  double to_double() const;

  /// Canonical rendering "num/2^exp"; integers render as "num/2^0".
  std::string str() const;
  static Dyadic parse(const std::string& s);

 private:
  int128 num_;
  int exp_;
};

inline Dyadic operator*(int64_t k, const Dyadic& d) { return Dyadic::from_int(k) * d; }

/// sigma with n binary digits; digit i (1-based) has weight 2^{-i}.
/// Stored as the integer bits = sigma * 2^n.
struct DigitString {
  int n = 0;
  uint64_t bits = 0;

  DigitString() = default;
  DigitString(int n_, uint64_t bits_);

  static DigitString zeros(int n) { return DigitString(n, 0); }
  /// floor(n/2) ones in positions 1..floor(n/2).
  static DigitString balanced(int n);
  static DigitString from_string(const std::string& s);
  static DigitString random(int n, uint64_t seed);

  int digit(int i) const;  // i in 1..n
  int ones_count() const;
  Dyadic value() const { return Dyadic(static_cast<int128>(bits), n); }
  std::string str() const;

  bool operator==(const DigitString& o) const { return n == o.n && bits == o.bits; }
};

/// i'th binary digit of x in [0,1): floor(2^i x) mod 2.
int digit(const Dyadic& x, int i);

/// 0.x_1...x_n -> 0.x_n...x_1. Requires all digits of x beyond position n to vanish.
Dyadic reverse_digits(const Dyadic& x, int n);

/// XOR of the first sigma.n digits of x with sigma; deeper digits pass through.
Dyadic digital_shift(const Dyadic& x, const DigitString& sigma);

/// Periodic tent: phi(x) = {x} on [0,1/2], 1-{x} on [1/2,1].
Dyadic phi(const Dyadic& x);

}  // namespace dlab
