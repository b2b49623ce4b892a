#pragma once

// Exact 64-bit rationals for local densities. Overflow aborts loudly rather
// than wrapping.

#include <numeric>
#include <stdexcept>

#include "pretlab/arith.hpp"

namespace pretlab {

struct Rat {
  i64 num = 0;
  i64 den = 1;

  Rat() = default;
  Rat(i64 n) : num(n), den(1) {}
  Rat(i64 n, i64 d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    i64 g = std::gcd(std::llabs(num), den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  static Rat from_i128(i128 n, i128 d) {
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    i128 a = n < 0 ? -n : n, b = d;
    while (b) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    constexpr i128 lim = (i128)INT64_MAX;
    if (n > lim || n < -lim || d > lim) throw std::overflow_error("rational overflow");
    Rat r;
    r.num = (i64)n;
    r.den = (i64)d;
    return r;
  }

  Rat operator+(const Rat& o) const {
    return from_i128((i128)num * o.den + (i128)o.num * den, (i128)den * o.den);
  }
  Rat operator-(const Rat& o) const {
    return from_i128((i128)num * o.den - (i128)o.num * den, (i128)den * o.den);
  }
  Rat operator*(const Rat& o) const { return from_i128((i128)num * o.num, (i128)den * o.den); }
  Rat operator/(const Rat& o) const {
    if (o.num == 0) throw std::invalid_argument("rational division by zero");
    return from_i128((i128)num * o.den, (i128)den * o.num);
  }
  bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Rat& o) const { return !(*this == o); }

  double to_double() const { return (double)num / (double)den; }
};

}  // namespace pretlab
