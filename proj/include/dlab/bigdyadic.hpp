#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <string>

#include "dlab/dyadic.hpp"

namespace dlab {

using BigInt = boost::multiprecision::cpp_int;

/// Arbitrary-precision dyadic rational num / 2^exp for accumulations whose
/// intermediate values outgrow the 128-bit fast path (norm integrals, square
/// sums, pairings). Same canonical form as Dyadic.
class BigDyadic {
 public:
  BigDyadic() : num_(0), exp_(0) {}
  BigDyadic(BigInt num, long exp) : num_(std::move(num)), exp_(exp) { normalize(); }
  explicit BigDyadic(const Dyadic& d) : num_(d.num()), exp_(d.exp()) {}

  static BigDyadic from_int(long v) { return BigDyadic(BigInt(v), 0); }

  const BigInt& num() const { return num_; }
  long exp() const { return exp_; }
  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }

  BigInt scaled_num(long exp) const { return num_ << (exp - exp_); }

  BigDyadic operator-() const { return BigDyadic(-num_, exp_); }
  BigDyadic operator+(const BigDyadic& o) const {
    long e = std::max(exp_, o.exp_);
    return BigDyadic(scaled_num(e) + o.scaled_num(e), e);
  }
  BigDyadic operator-(const BigDyadic& o) const { return *this + (-o); }
  BigDyadic operator*(const BigDyadic& o) const {
    return BigDyadic(num_ * o.num_, exp_ + o.exp_);
  }
  BigDyadic& operator+=(const BigDyadic& o) { return *this = *this + o; }
  BigDyadic& operator-=(const BigDyadic& o) { return *this = *this - o; }
  BigDyadic& operator*=(const BigDyadic& o) { return *this = *this * o; }

  bool operator==(const BigDyadic& o) const { return num_ == o.num_ && exp_ == o.exp_; }
  bool operator!=(const BigDyadic& o) const { return !(*this == o); }
  bool operator<(const BigDyadic& o) const {
    long e = std::max(exp_, o.exp_);
    return scaled_num(e) < o.scaled_num(e);
  }
  bool operator<=(const BigDyadic& o) const { return !(o < *this); }
  bool operator>(const BigDyadic& o) const { return o < *this; }
  bool operator>=(const BigDyadic& o) const { return !(*this < o); }

  BigDyadic abs() const { return num_ < 0 ? -*this : *this; }

  double to_double() const {
    if (num_ == 0) return 0.0;
    // peel the exponent off in two steps so huge numerators stay finite
    long bits = long(msb(boost::multiprecision::abs(num_)));
    long shift = std::max<long>(0, bits - 64);
    double m = (num_ >> shift).convert_to<double>();
    return std::ldexp(m, int(shift - exp_));
  }

  std::string str() const { return num_.str() + "/2^" + std::to_string(exp_); }

 private:
  void normalize() {
    if (num_ == 0) {
      exp_ = 0;
      return;
    }
    long tz = long(lsb(boost::multiprecision::abs(num_)));
    long k = std::min(exp_, tz);
    num_ >>= k;
    exp_ -= k;
  }

  BigInt num_;
  long exp_;
};

}  // namespace dlab
