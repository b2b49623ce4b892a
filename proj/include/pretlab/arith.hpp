#pragma once

// Integer substrate: overflow-checked 64-bit ops, gcd/CRT, smallest-prime-factor
// sieve and factorizations. Everything downstream sits on this.

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace pretlab {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using u32 = std::uint32_t;
using i128 = __int128;

class no_solution_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int64 add overflow");
  return r;
}

inline i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int64 mul overflow");
  return r;
}

inline i64 checked_pow(i64 base, unsigned e) {
  i64 r = 1;
  while (e--) r = checked_mul(r, base);
  return r;
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return (unsigned __int128)a * b % m; }

inline u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Extended gcd: returns g and x with a*x = g (mod m-ish usage); full Bezout.
inline i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  i64 x1, y1;
  i64 g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

inline u64 inv_mod(u64 a, u64 m) {
  i64 x, y;
  i64 g = ext_gcd((i64)(a % m), (i64)m, x, y);
  if (g != 1 && g != -1) throw std::invalid_argument("inv_mod: not invertible");
  i64 r = x % (i64)m;
  if (r < 0) r += (i64)m;
  return (u64)r;
}

struct Factorization {
  // (prime, exponent), primes strictly increasing; empty list is 1.
  std::vector<std::pair<i64, int>> entries;

  i64 value() const {
    i64 v = 1;
    for (auto& [p, e] : entries) v = checked_mul(v, checked_pow(p, (unsigned)e));
    return v;
  }
  bool is_one() const { return entries.empty(); }
  int vp(i64 p) const {
    for (auto& [q, e] : entries)
      if (q == p) return e;
    return 0;
  }
};

inline i64 euler_phi(const Factorization& fac) {
  i64 r = 1;
  for (auto& [p, e] : fac.entries) {
    r = checked_mul(r, checked_pow(p, (unsigned)(e - 1)));
    r = checked_mul(r, p - 1);
  }
  return r;
}

inline int mobius(const Factorization& fac) {
  for (auto& [p, e] : fac.entries)
    if (e >= 2) return 0;
  return (fac.entries.size() % 2 == 0) ? 1 : -1;
}

// Smallest-prime-factor table for 2..limit. Immutable after construction,
// shareable across workers.
class FactorSieve {
 public:
  explicit FactorSieve(u64 limit) : limit_(limit) {
    if (limit < 2) throw std::invalid_argument("sieve limit must be >= 2");
    if (limit > 0xFFFFFFFFull) throw std::invalid_argument("sieve limit exceeds 32-bit table");
    spf_.resize(limit + 1, 0);
    for (u64 i = 2; i <= limit; ++i) {
      if (spf_[i] == 0) {
        spf_[i] = (u32)i;
        primes_.push_back((i64)i);
        if (i * i <= limit)
          for (u64 j = i * i; j <= limit; j += i)
            if (spf_[j] == 0) spf_[j] = (u32)i;
      }
    }
  }

  u64 limit() const { return limit_; }
  i64 spf(u64 n) const {
    if (n < 2 || n > limit_) throw std::out_of_range("spf: n outside sieve range");
    return spf_[n];
  }
  bool is_prime(u64 n) const { return n >= 2 && n <= limit_ && spf_[n] == n; }
  const std::vector<i64>& primes() const { return primes_; }

  Factorization factorize(u64 n) const {
    if (n == 0) throw std::invalid_argument("factorize: n must be positive");
    if (n > limit_) throw std::out_of_range("factorize: n exceeds sieve limit");
    Factorization f;
    while (n > 1) {
      i64 p = spf_[n];
      int e = 0;
      while (n % (u64)p == 0) {
        n /= (u64)p;
        ++e;
      }
      f.entries.emplace_back(p, e);
    }
    return f;
  }

 private:
  u64 limit_;
  std::vector<u32> spf_;
  std::vector<i64> primes_;
};

inline FactorSieve build_factor_sieve(u64 limit) { return FactorSieve(limit); }

inline Factorization factorize(u64 n, const FactorSieve& sieve) { return sieve.factorize(n); }

// CRT over a list of (residue, modulus). Moduli need not be coprime; an
// inconsistent pair raises no_solution_error.
inline std::pair<i64, i64> crt_solve(const std::vector<std::pair<i64, i64>>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("crt_solve: empty system");
  i64 r = 0, m = 1;
  for (auto& [ri, mi] : pairs) {
    if (mi <= 0) throw std::invalid_argument("crt_solve: modulus must be positive");
    i64 a = ((ri % mi) + mi) % mi;
    i64 x, y;
    i64 g = ext_gcd(m, mi, x, y);
    if ((a - r) % g != 0) throw no_solution_error("crt_solve: incompatible congruences");
    i64 lcm = checked_mul(m / g, mi);
    // r + m t = a (mod mi)  =>  t = (a-r)/g * inv(m/g) (mod mi/g), inv = x
    i64 mi_g = mi / g;
    i64 t = (i64)(((i128)(((a - r) / g) % mi_g) * (x % mi_g)) % mi_g);
    if (t < 0) t += mi_g;
    i64 sol = (i64)(((i128)r + (i128)m * t) % lcm);
    if (sol < 0) sol += lcm;
    r = sol;
    m = lcm;
  }
  return {r, m};
}

inline i64 gcd_i64(i64 a, i64 b) { return std::gcd(std::llabs(a), std::llabs(b)); }

}  // namespace pretlab
