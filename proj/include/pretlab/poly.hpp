#pragma once

// Integer polynomials: evaluation, resultants, root sets mod p^k (Hensel),
// the exact-divisibility densities omega_P(p^k), omega(p^k,p^l), F(d1,d2),
// the large-prime-power set N_P(x), and bulk factorization of P(1..x) by
// progression sieving.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pretlab/arith.hpp"
#include "pretlab/rational.hpp"

namespace pretlab {

struct PolynomialZ {
  std::vector<i64> coeffs;  // c0..cD, cD != 0 unless the zero polynomial

  PolynomialZ() = default;
  explicit PolynomialZ(std::vector<i64> c) : coeffs(std::move(c)) { trim(); }

  void trim() {
    while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
  }
  int degree() const { return coeffs.empty() ? 0 : (int)coeffs.size() - 1; }
  i64 leading() const { return coeffs.empty() ? 0 : coeffs.back(); }
  bool is_constant() const { return degree() == 0; }

  i64 content() const {
    i64 g = 0;
    for (i64 c : coeffs) g = std::gcd(g, std::llabs(c));
    return g;
  }

  i64 eval(i64 n) const {
    i64 v = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
      v = checked_add(checked_mul(v, n), *it);
    return v;
  }

  u64 eval_mod(u64 n, u64 m) const {
    u64 v = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
      i64 c = *it % (i64)m;
      if (c < 0) c += (i64)m;
      v = (mulmod(v, n % m, m) + (u64)c) % m;
    }
    return v;
  }

  PolynomialZ derivative() const {
    if (degree() == 0) return PolynomialZ({0});
    std::vector<i64> d(coeffs.size() - 1);
    for (size_t i = 1; i < coeffs.size(); ++i) d[i - 1] = checked_mul(coeffs[i], (i64)i);
    return PolynomialZ(std::move(d));
  }

  // sum |c_i| x^i, a safe upper bound for |P| on [1,x]
  i64 abs_bound(u64 x) const {
    i64 v = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
      v = checked_add(checked_mul(v, (i64)x), std::llabs(*it));
    return v;
  }

  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      i64 c = coeffs[i];
      if (c == 0 && degree() > 0) continue;
      if (!first)
        os << (c >= 0 ? "+" : "-");
      else if (c < 0)
        os << "-";
      i64 a = std::llabs(c);
      if (i == 0 || a != 1) os << a;
      if (i >= 1) {
        if (a != 1) os << "*";
        os << "x";
        if (i >= 2) os << "^" << i;
      }
      first = false;
    }
    if (first) os << "0";
    return os.str();
  }
};

// "a*x^2+b*x+c" with integer coefficients, whitespace-insensitive.
inline PolynomialZ parse_polynomial(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!isspace((unsigned char)c)) s += c;
  if (s.empty()) throw std::invalid_argument("empty polynomial literal");
  std::vector<i64> coeffs;
  size_t i = 0;
  auto bump = [&](int deg, i64 c) {
    if ((int)coeffs.size() <= deg) coeffs.resize(deg + 1, 0);
    coeffs[deg] = checked_add(coeffs[deg], c);
  };
  while (i < s.size()) {
    i64 sign = 1;
    while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      if (s[i] == '-') sign = -sign;
      ++i;
    }
    if (i >= s.size()) throw std::invalid_argument("dangling sign in polynomial literal");
    i64 coef = 1;
    bool saw_num = false;
    if (isdigit((unsigned char)s[i])) {
      coef = 0;
      while (i < s.size() && isdigit((unsigned char)s[i])) {
        coef = checked_add(checked_mul(coef, 10), s[i] - '0');
        ++i;
      }
      saw_num = true;
    }
    if (i < s.size() && s[i] == '*') ++i;
    int deg = 0;
    if (i < s.size() && (s[i] == 'x' || s[i] == 'n')) {
      ++i;
      deg = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        if (i >= s.size() || !isdigit((unsigned char)s[i]))
          throw std::invalid_argument("bad exponent in polynomial literal");
        deg = 0;
        while (i < s.size() && isdigit((unsigned char)s[i])) deg = deg * 10 + (s[i++] - '0');
      }
    } else if (!saw_num) {
      throw std::invalid_argument("unexpected character in polynomial literal: " +
                                  std::string(1, s[i]));
    }
    bump(deg, sign * coef);
  }
  return PolynomialZ(std::move(coeffs));
}

namespace detail {

inline void check_i128(i128 v) {
  // 62-bit guard so downstream int64 conversions stay exact
  constexpr i128 lim = (i128)1 << 62;
  if (v >= lim || v <= -lim) throw std::overflow_error("resultant intermediate overflow");
}

inline int pdeg(const std::vector<i128>& v) {
  int d = (int)v.size() - 1;
  while (d > 0 && v[d] == 0) --d;
  return d;
}

// Remainder of lb^m * a modulo b, together with the multiplier count m.
inline std::pair<std::vector<i128>, int> prem_tracked(std::vector<i128> a,
                                                      const std::vector<i128>& b) {
  int db = pdeg(b);
  i128 lb = b[db];
  int m = 0;
  while (true) {
    int da = pdeg(a);
    if (da < db || (da == 0 && a[0] == 0)) break;
    i128 la = a[da];
    for (auto& c : a) {
      c *= lb;
      check_i128(c);
    }
    ++m;
    for (int i = 0; i <= db; ++i) {
      a[da - db + i] -= la * b[i];
      check_i128(a[da - db + i]);
    }
  }
  a.resize((size_t)pdeg(a) + 1);
  return {a, m};
}

}  // namespace detail

// Resultant via a pseudo-remainder sequence with exact i128 arithmetic, using
//   res(A,B) = (-1)^{da db} lb^{da - dr - m db} res(B,R),  R = lb^m A mod B.
// For linear P=ax+c, Q=bx+d the sign convention is fixed to ad-bc.
inline i64 resultant(const PolynomialZ& P, const PolynomialZ& Q) {
  if (P.degree() == 0 || Q.degree() == 0)
    throw std::invalid_argument("resultant requires nonconstant polynomials");
  if (P.degree() == 1 && Q.degree() == 1)
    return checked_add(checked_mul(P.coeffs[1], Q.coeffs[0]),
                       -checked_mul(Q.coeffs[1], P.coeffs[0]));
  std::vector<i128> a(P.coeffs.begin(), P.coeffs.end());
  std::vector<i128> b(Q.coeffs.begin(), Q.coeffs.end());
  int sign = 1;
  if (detail::pdeg(a) < detail::pdeg(b)) {
    if ((detail::pdeg(a) & 1) && (detail::pdeg(b) & 1)) sign = -sign;
    std::swap(a, b);
  }
  i128 num = 1, den = 1;
  while (true) {
    int da = detail::pdeg(a), db = detail::pdeg(b);
    if (db == 0) {
      if (b[0] == 0) return 0;  // shared factor
      i128 res = num;
      for (int i = 0; i < da; ++i) {
        res *= b[0];
        detail::check_i128(res);
      }
      if (res % den != 0) throw std::overflow_error("resultant: nonintegral intermediate");
      i128 v = sign * (res / den);
      detail::check_i128(v);
      return (i64)v;
    }
    auto [r, m] = detail::prem_tracked(a, b);
    int dr = detail::pdeg(r);
    bool rzero = (dr == 0 && r[0] == 0);
    if ((da & 1) && (db & 1)) sign = -sign;
    if (rzero) return 0;
    i128 lb = b[db];
    int e = da - dr - m * db;
    for (int i = 0; i < e; ++i) {
      num *= lb;
      detail::check_i128(num);
    }
    for (int i = 0; i < -e; ++i) {
      den *= lb;
      detail::check_i128(den);
    }
    a = std::move(b);
    b = std::move(r);
  }
}

namespace detail {

inline std::optional<u64> sqrt_mod_prime(u64 a, u64 p) {
  // Tonelli-Shanks; p odd prime
  a %= p;
  if (a == 0) return 0;
  if (powmod(a, (p - 1) / 2, p) != 1) return std::nullopt;
  if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
  u64 q = p - 1;
  unsigned s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  u64 z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  u64 m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    u64 tt = t;
    unsigned i = 0;
    while (tt != 1) {
      tt = mulmod(tt, tt, p);
      ++i;
    }
    u64 b = powmod(c, (u64)1 << (m - i - 1), p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

}  // namespace detail

// Roots of P mod p. Closed forms for degree <= 2 (modular inverse, Tonelli-
// Shanks); enumeration otherwise. A polynomial vanishing identically mod p
// returns all p residues, so callers hit the cap rather than silently lose
// content primes.
inline std::vector<u64> roots_mod_prime(const PolynomialZ& P, u64 p) {
  std::vector<i64> red(P.coeffs.size());
  bool all_zero = true;
  for (size_t i = 0; i < P.coeffs.size(); ++i) {
    i64 c = P.coeffs[i] % (i64)p;
    if (c < 0) c += (i64)p;
    red[i] = c;
    if (c != 0) all_zero = false;
  }
  if (all_zero) {
    if (p > 2'000'000) throw std::out_of_range("polynomial vanishes identically mod large p");
    std::vector<u64> all(p);
    for (u64 r = 0; r < p; ++r) all[r] = r;
    return all;
  }
  int d = (int)red.size() - 1;
  while (d > 0 && red[d] == 0) --d;
  if (d == 0) return {};
  if (d == 1) {
    u64 r = mulmod((u64)(((i64)p - red[0]) % (i64)p), inv_mod((u64)red[1], p), p);
    return {r};
  }
  if (d == 2 && p > 2) {
    u64 a = (u64)red[2], b = (u64)red[1], c = (u64)red[0];
    u64 disc = (mulmod(b, b, p) + p - mulmod(4 % p, mulmod(a, c, p), p)) % p;
    auto s = detail::sqrt_mod_prime(disc, p);
    if (!s) return {};
    u64 inv2a = inv_mod(mulmod(2, a, p), p);
    u64 r1 = mulmod((p - b % p + *s) % p, inv2a, p);
    u64 r2 = mulmod((2 * p - b % p - *s) % p, inv2a, p);
    if (r1 == r2) return {r1};
    std::vector<u64> rs{r1, r2};
    std::sort(rs.begin(), rs.end());
    return rs;
  }
  if (p > 2'000'000) throw std::out_of_range("root enumeration infeasible for this p/degree");
  std::vector<u64> rs;
  for (u64 r = 0; r < p; ++r)
    if (P.eval_mod(r, p) == 0) rs.push_back(r);
  return rs;
}

// Roots of P mod p^k. Simple roots (P'(r) != 0 mod p) lift uniquely by Newton;
// singular roots expand level by level, trying all p candidates at each level.
inline std::vector<u64> roots_mod_prime_power(const PolynomialZ& P, u64 p, unsigned k,
                                              u64 node_cap = 8'000'000) {
  if (k == 0) return {0};
  if (std::log2((double)p) * k >= 62.5) throw std::out_of_range("p^k exceeds 64-bit range");
  std::vector<u64> level = roots_mod_prime(P, p);
  if (k == 1) return level;
  PolynomialZ deriv = P.derivative();
  std::vector<u64> out;
  std::vector<u64> simple, singular;
  for (u64 r : level) (deriv.eval_mod(r, p) != 0 ? simple : singular).push_back(r);
  for (u64 r : simple) {
    u64 x = r, mod = p;
    for (unsigned j = 1; j < k; ++j) {
      u64 nmod = mod * p;
      u64 fx = P.eval_mod(x, nmod);
      u64 t = mulmod(fx / mod, inv_mod(deriv.eval_mod(x, p), p), p);
      x = (x + mod * ((p - t) % p)) % nmod;
      mod = nmod;
    }
    out.push_back(x);
  }
  std::vector<u64> frontier = singular;
  u64 pj = p;
  for (unsigned j = 1; j < k && !frontier.empty(); ++j) {
    u64 nmod = pj * p;
    if (frontier.size() * p > node_cap)
      throw std::overflow_error("singular root expansion exceeds node cap");
    std::vector<u64> next;
    for (u64 r : frontier)
      for (u64 t = 0; t < p; ++t) {
        u64 cand = r + t * pj;
        if (P.eval_mod(cand, nmod) == 0) next.push_back(cand);
      }
    frontier = std::move(next);
    pj = nmod;
  }
  out.insert(out.end(), frontier.begin(), frontier.end());
  std::sort(out.begin(), out.end());
  return out;
}

inline u64 omega_prime_power(const PolynomialZ& P, u64 p, unsigned k) {
  if (k == 0) return 1;
  return roots_mod_prime_power(P, p, k).size();
}

inline u64 omega(const PolynomialZ& P, const Factorization& m) {
  u64 r = 1;
  for (auto& [p, e] : m.entries)
    r = (u64)checked_mul((i64)r, (i64)omega_prime_power(P, (u64)p, (unsigned)e));
  return r;
}

// Density of {n : p^k | P(n), p^l | Q(n)} as an exact rational, via the root
// set of the higher-level congruence filtered through the other polynomial.
inline Rat joint_divisibility_density(const PolynomialZ& P, const PolynomialZ& Q, u64 p,
                                      unsigned k, unsigned l) {
  if (k == 0 && l == 0) return Rat(1);
  const PolynomialZ& hi = (k >= l) ? P : Q;
  const PolynomialZ& lo = (k >= l) ? Q : P;
  unsigned hk = std::max(k, l), lk = std::min(k, l);
  auto roots = roots_mod_prime_power(hi, p, hk);
  u64 plk = 1;
  for (unsigned i = 0; i < lk; ++i) plk *= p;
  u64 cnt = 0;
  for (u64 r : roots)
    if (lk == 0 || lo.eval_mod(r % plk, plk) == 0) ++cnt;
  return Rat((i64)cnt, checked_pow((i64)p, hk));
}

// omega(p^k, p^l): exact-divisibility joint density, inclusion-exclusion over
// the four >= corners.
inline Rat joint_omega(const PolynomialZ& P, const PolynomialZ& Q, u64 p, unsigned k, unsigned l) {
  Rat a = joint_divisibility_density(P, Q, p, k, l);
  Rat b = joint_divisibility_density(P, Q, p, k + 1, l);
  Rat c = joint_divisibility_density(P, Q, p, k, l + 1);
  Rat d = joint_divisibility_density(P, Q, p, k + 1, l + 1);
  return a - b - c + d;
}

// F(d1,d2): density of {n : d1 | P(n), d2 | Q(n)}, multiplicative over primes.
inline Rat joint_density_F(const PolynomialZ& P, const PolynomialZ& Q, const Factorization& d1,
                           const Factorization& d2) {
  std::set<i64> ps;
  for (auto& [p, e] : d1.entries) ps.insert(p);
  for (auto& [p, e] : d2.entries) ps.insert(p);
  Rat out(1);
  for (i64 p : ps)
    out = out * joint_divisibility_density(P, Q, (u64)p, (unsigned)d1.vp(p), (unsigned)d2.vp(p));
  return out;
}

// ---------------------------------------------------------------------------
// Bulk factorization of P(1..x) by progression sieving. Each prime p up to the
// bound marks the progressions n = r (mod p) over the roots r of P mod p; a
// division sweep extracts exact exponents, and any leftover cofactor exceeds
// the bound while the value stays below bound^2, so it is a certified prime.

struct PolyFactorContext {
  PolynomialZ P;
  u64 x = 0;
  u64 bound = 0;
  bool allow_nonpositive = false;  // skip n with P(n) < 1 instead of throwing
  std::vector<std::pair<u64, std::vector<u64>>> sieving;  // (p, roots of P mod p)

  static PolyFactorContext build(const PolynomialZ& P, u64 x, bool allow_nonpositive = false,
                                 u64 feasibility_cap = 80'000'000) {
    PolyFactorContext ctx;
    ctx.P = P;
    ctx.x = x;
    ctx.allow_nonpositive = allow_nonpositive;
    i64 vmax = P.abs_bound(x);
    u64 need = (u64)std::ceil(std::sqrt((double)vmax)) + 1;
    u64 b = std::max<u64>(2 * x, need);
    if (b > feasibility_cap)
      throw std::out_of_range("factor_poly_values: required sieving bound " + std::to_string(b) +
                              " exceeds feasibility cap " + std::to_string(feasibility_cap));
    ctx.bound = b;
    std::vector<bool> comp(b + 1, false);
    for (u64 i = 2; i * i <= b; ++i)
      if (!comp[i])
        for (u64 j = i * i; j <= b; j += i) comp[j] = true;
    for (u64 p = 2; p <= b; ++p) {
      if (comp[p]) continue;
      auto roots = roots_mod_prime(P, p);
      if (!roots.empty()) ctx.sieving.emplace_back(p, std::move(roots));
    }
    return ctx;
  }

  // Factor P(n) for n in [lo, hi); sink(n, factorization, valid). valid is
  // false (with an empty factorization) exactly when P(n) < 1 and
  // allow_nonpositive is set.
  template <typename Sink>
  void run_block(u64 lo, u64 hi, Sink&& sink) const {
    u64 len = hi - lo;
    std::vector<i64> vals(len);
    std::vector<char> skip(len, 0);
    for (u64 i = 0; i < len; ++i) {
      vals[i] = P.eval((i64)(lo + i));
      if (vals[i] <= 0) {
        if (!allow_nonpositive)
          throw std::invalid_argument("factor_poly_values: P(n) must be positive on [1,x]");
        skip[i] = 1;
        vals[i] = 1;
      }
    }
    std::vector<Factorization> facs(len);
    for (auto& [p, roots] : sieving) {
      for (u64 r : roots) {
        u64 start = r;
        if (start < lo) start += ((lo - start + p - 1) / p) * p;
        if (start < 1) start += p;
        for (u64 n = start; n < hi; n += p) {
          u64 i = n - lo;
          int e = 0;
          while (vals[i] % (i64)p == 0) {
            vals[i] /= (i64)p;
            ++e;
          }
          if (e > 0) facs[i].entries.emplace_back((i64)p, e);
        }
      }
    }
    for (u64 i = 0; i < len; ++i) {
      if (vals[i] > 1) {
        if ((u64)vals[i] <= bound || (u64)vals[i] > bound * bound)
          throw std::runtime_error("factor_poly_values: leftover cofactor not certifiable");
        facs[i].entries.emplace_back(vals[i], 1);
      }
      std::sort(facs[i].entries.begin(), facs[i].entries.end());
      sink(lo + i, facs[i], !skip[i]);
    }
  }

  template <typename Sink>
  void run(Sink&& sink, u64 block = 1u << 16) const {
    for (u64 lo = 1; lo <= x; lo += block) run_block(lo, std::min(x + 1, lo + block), sink);
  }
};

struct LargePrimePowerSet {
  u64 x = 0;
  u64 threshold = 0;                      // members have p >= threshold
  std::set<std::pair<i64, int>> members;  // (p, k) with p^k || P(n) for some n <= x
};

// N_P(x): prime powers p^k with p >= threshold (default x) exactly dividing
// some P(n), n <= x.
inline LargePrimePowerSet large_prime_powers(const PolynomialZ& P, u64 x, u64 threshold = 0) {
  if (P.is_constant()) throw std::invalid_argument("large_prime_powers: P must be nonconstant");
  LargePrimePowerSet out;
  out.x = x;
  out.threshold = threshold == 0 ? x : threshold;
  auto ctx = PolyFactorContext::build(P, x);
  ctx.run([&](u64, const Factorization& f, bool) {
    for (auto& [p, e] : f.entries)
      if ((u64)p >= out.threshold) out.members.insert({p, e});
  });
  return out;
}

}  // namespace pretlab
