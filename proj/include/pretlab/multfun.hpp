#pragma once

// Multiplicative functions into the unit disc, given by their values on prime
// powers; the Dirichlet-convolution component theta (f = 1 * theta); the text
// mini-grammar used to make experiments reproducible from one string; and the
// pretentious distance in plain, polynomial-weighted and starred variants.

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pretlab/arith.hpp"
#include "pretlab/characters.hpp"
#include "pretlab/poly.hpp"

namespace pretlab {

using cplx = std::complex<double>;

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct MultFunc {
  std::string name;  // echoed verbatim in reports
  std::function<cplx(i64 p, int k)> rule;
  bool unimodular = false;
  bool completely_multiplicative = false;
  // All primes p > trivial_beyond have f(p^k) = 1 for every k (0 = no such bound).
  i64 trivial_beyond = 0;
  // All primes p > tame_beyond have f(p) = 1 (deeper exponents free).
  i64 tame_beyond = 0;

  cplx at(i64 p, int k) const {
    if (k == 0) return 1.0;
    cplx v = rule(p, k);
    double a = std::abs(v);
    if (a > 1.0 + 1e-9)
      throw std::domain_error("multiplicative function leaves the unit disc at " +
                              std::to_string(p) + "^" + std::to_string(k));
    if (unimodular && std::fabs(a - 1.0) > 1e-9)
      throw std::domain_error("declared-unimodular function has |f(" + std::to_string(p) + "^" +
                              std::to_string(k) + ")| != 1");
    return v;
  }

  cplx eval(const Factorization& fac) const {
    cplx v = 1.0;
    for (auto& [p, e] : fac.entries) v *= at(p, e);
    return v;
  }

  cplx eval_n(u64 n, const FactorSieve& sieve) const { return eval(sieve.factorize(n)); }

  // theta(p^k) = f(p^k) - f(p^{k-1}), k >= 1; theta(p^0) = 1.
  cplx theta(i64 p, int k) const {
    if (k == 0) return 1.0;
    return at(p, k) - at(p, k - 1);
  }
};

inline std::vector<cplx> theta_values(const MultFunc& f, i64 p, int K) {
  std::vector<cplx> out;
  out.reserve(K + 1);
  for (int k = 0; k <= K; ++k) out.push_back(f.theta(p, k));
  return out;
}

inline MultFunc mf_one() {
  MultFunc f;
  f.name = "one";
  f.rule = [](i64, int) { return cplx(1.0); };
  f.unimodular = true;
  f.completely_multiplicative = true;
  f.trivial_beyond = 1;
  f.tame_beyond = 1;
  return f;
}

inline MultFunc mf_liouville() {
  MultFunc f;
  f.name = "liouville";
  f.rule = [](i64, int k) { return cplx(k % 2 ? -1.0 : 1.0); };
  f.unimodular = true;
  f.completely_multiplicative = true;
  return f;
}

inline MultFunc mf_mobius_sq() {
  MultFunc f;
  f.name = "mobius_sq";
  f.rule = [](i64, int k) { return cplx(k == 1 ? 1.0 : 0.0); };
  f.tame_beyond = 1;
  return f;
}

inline MultFunc mf_nit(double t) {
  MultFunc f;
  f.name = "nit(" + std::to_string(t) + ")";
  f.rule = [t](i64 p, int k) {
    double ang = t * k * std::log((double)p);
    return cplx(std::cos(ang), std::sin(ang));
  };
  f.unimodular = true;
  f.completely_multiplicative = true;
  if (t == 0.0) {
    f.trivial_beyond = 1;
    f.tame_beyond = 1;
  }
  return f;
}

inline MultFunc mf_indicator_odd() {
  MultFunc f;
  f.name = "indicator_odd";
  f.rule = [](i64 p, int) { return cplx(p == 2 ? 0.0 : 1.0); };
  f.trivial_beyond = 2;
  f.tame_beyond = 2;
  return f;
}

// Character as a multiplicative function: f(p^k) = chi(p)^k.
inline MultFunc mf_char(const DirichletCharacter& chi) {
  MultFunc f;
  f.name = "char(" + std::to_string(chi.modulus()) + "," + std::to_string(chi.index()) + ")";
  auto c = chi;
  f.rule = [c](i64 p, int k) {
    cplx v = c.value((u64)p % c.modulus());
    cplx r = 1.0;
    for (int i = 0; i < k; ++i) r *= v;
    return r;
  };
  f.completely_multiplicative = true;
  return f;
}

inline MultFunc mf_conj(const MultFunc& f) {
  MultFunc h;
  h.name = "conj(" + f.name + ")";
  auto b = f;
  h.rule = [b](i64 p, int k) { return std::conj(b.at(p, k)); };
  h.unimodular = f.unimodular;
  h.completely_multiplicative = f.completely_multiplicative;
  h.trivial_beyond = f.trivial_beyond;
  h.tame_beyond = f.tame_beyond;
  return h;
}

// Pointwise product on prime powers (internal helper).
inline MultFunc mf_product(const MultFunc& f, const MultFunc& g) {
  MultFunc h;
  h.name = f.name + "*" + g.name;
  auto fr = f;
  auto gr = g;
  h.rule = [fr, gr](i64 p, int k) { return fr.at(p, k) * gr.at(p, k); };
  h.completely_multiplicative = f.completely_multiplicative && g.completely_multiplicative;
  h.unimodular = f.unimodular && g.unimodular;
  if (f.trivial_beyond && g.trivial_beyond)
    h.trivial_beyond = std::max(f.trivial_beyond, g.trivial_beyond);
  if (f.tame_beyond && g.tame_beyond) h.tame_beyond = std::max(f.tame_beyond, g.tame_beyond);
  return h;
}

// f_0(p^k) = f(p^k) p^{-ikt}: divides out n^{it}.
inline MultFunc mf_untwist_nit(const MultFunc& f, double t) {
  if (t == 0.0) return f;
  return mf_product(f, mf_nit(-t));
}

// F(p^k) = f(p^k) conj(chi(p^k)) p^{-ikt} off q, and 1 on p | q.
inline MultFunc twist(const MultFunc& f, const DirichletCharacter& chi, double t) {
  MultFunc h;
  h.name = "twist(" + f.name + ";q=" + std::to_string(chi.modulus()) + ";t=" + std::to_string(t) +
           ")";
  if (chi.modulus() == 1 && t == 0.0) return f;
  auto base = f;
  auto c = chi;
  i64 q = (i64)chi.modulus();
  h.rule = [base, c, q, t](i64 p, int k) -> cplx {
    if (std::gcd(p, q) > 1) return 1.0;
    cplx chip = c.value((u64)p % (u64)q);
    cplx cc = 1.0;
    for (int i = 0; i < k; ++i) cc *= chip;
    double ang = -t * k * std::log((double)p);
    return base.at(p, k) * std::conj(cc) * cplx(std::cos(ang), std::sin(ang));
  };
  return h;
}

// ---------------------------------------------------------------------------
// Function-spec mini-grammar.
//
//   spec     := builtin | "override(" spec ";" override { ";" override } ")"
//   builtin  := "one" | "liouville" | "mobius_sq" | "nit(" real ")"
//             | "char(" nat "," nat ")" | "indicator_odd"
//             | "cm(" prime "=>" complex { ";" prime "=>" complex } ")"
//   override := prime ":" (exponent | "*" | "^") "=>" complex
//
// "*" overrides every exponent with the same value, "^" applies value^k.

namespace detail {

struct SpecParser {
  std::string s;
  size_t i = 0;

  explicit SpecParser(const std::string& text) {
    for (char c : text)
      if (!isspace((unsigned char)c)) s += c;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument("malformed function spec: " + msg + " at offset " +
                                std::to_string(i));
  }
  bool eat(char c) {
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  bool peek_word(const std::string& w) { return s.compare(i, w.size(), w) == 0; }
  bool eat_word(const std::string& w) {
    if (peek_word(w)) {
      i += w.size();
      return true;
    }
    return false;
  }
  i64 parse_nat() {
    if (i >= s.size() || !isdigit((unsigned char)s[i])) fail("expected number");
    i64 v = 0;
    while (i < s.size() && isdigit((unsigned char)s[i]))
      v = checked_add(checked_mul(v, 10), s[i++] - '0');
    return v;
  }
  double parse_real() {
    size_t start = i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    while (i < s.size() && (isdigit((unsigned char)s[i]) || s[i] == '.')) ++i;
    if (i == start) fail("expected real number");
    return std::stod(s.substr(start, i - start));
  }
  // "a+bi" with decimal a,b; also plain reals and pure imaginary parts.
  cplx parse_complex() {
    double re = 0, im = 0;
    double first = parse_real();
    if (i < s.size() && (s[i] == 'i' || s[i] == 'I')) {
      ++i;
      return cplx(0, first);
    }
    re = first;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      size_t save = i;
      double second = parse_real();
      if (i < s.size() && (s[i] == 'i' || s[i] == 'I')) {
        ++i;
        im = second;
      } else {
        i = save;  // not an imaginary tail; leave for caller
      }
    }
    return cplx(re, im);
  }
};

}  // namespace detail

inline MultFunc make_mult_func(const std::string& spec_text);

namespace detail {

inline MultFunc parse_spec(SpecParser& ps) {
  if (ps.eat_word("override(")) {
    MultFunc base = parse_spec(ps);
    struct Override {
      i64 p;
      int mode;  // 0 = single exponent, 1 = all exponents, 2 = power rule
      int k;
      cplx v;
    };
    std::vector<Override> ovs;
    while (ps.eat(';')) {
      Override o;
      o.p = ps.parse_nat();
      ps.expect(':');
      if (ps.eat('*')) {
        o.mode = 1;
        o.k = 0;
      } else if (ps.eat('^')) {
        o.mode = 2;
        o.k = 0;
      } else {
        o.mode = 0;
        o.k = (int)ps.parse_nat();
        if (o.k < 1) ps.fail("override exponent must be >= 1");
      }
      ps.eat_word("=>") || (ps.fail("expected '=>'"), false);
      o.v = ps.parse_complex();
      if (std::abs(o.v) > 1.0 + 1e-12) throw std::range_error("override value outside unit disc");
      ovs.push_back(o);
    }
    ps.expect(')');
    MultFunc f;
    f.name = "";  // set by make_mult_func from the original text
    auto b = base;
    f.rule = [b, ovs](i64 p, int k) -> cplx {
      // later overrides win; specific exponent beats '*' and '^'
      const Override* star = nullptr;
      for (auto& o : ovs) {
        if (o.p != p) continue;
        if (o.mode == 0 && o.k == k) return o.v;
        star = &o;
      }
      if (star) {
        if (star->mode == 1) return star->v;
        if (star->mode == 2) {
          cplx r = 1.0;
          for (int j = 0; j < k; ++j) r *= star->v;
          return r;
        }
      }
      return b.at(p, k);
    };
    i64 maxp = base.trivial_beyond;
    for (auto& o : ovs) maxp = std::max(maxp, o.p);
    if (base.trivial_beyond) f.trivial_beyond = maxp;
    i64 maxt = base.tame_beyond;
    for (auto& o : ovs) maxt = std::max(maxt, o.p);
    if (base.tame_beyond) f.tame_beyond = maxt;
    return f;
  }
  if (ps.eat_word("one")) return mf_one();
  if (ps.eat_word("liouville")) return mf_liouville();
  if (ps.eat_word("mobius_sq")) return mf_mobius_sq();
  if (ps.eat_word("indicator_odd")) return mf_indicator_odd();
  if (ps.eat_word("nit(")) {
    double t = ps.parse_real();
    ps.expect(')');
    return mf_nit(t);
  }
  if (ps.eat_word("char(")) {
    i64 q = ps.parse_nat();
    ps.expect(',');
    i64 idx = ps.parse_nat();
    ps.expect(')');
    auto chars = characters_mod((u64)q);
    if (idx < 0 || (size_t)idx >= chars.size())
      throw std::invalid_argument("character index out of range for modulus " + std::to_string(q));
    return mf_char(chars[idx]);
  }
  if (ps.eat_word("cm(")) {
    std::vector<std::pair<i64, cplx>> vals;
    do {
      i64 p = ps.parse_nat();
      ps.eat_word("=>") || (ps.fail("expected '=>'"), false);
      cplx v = ps.parse_complex();
      if (std::abs(v) > 1.0 + 1e-12) throw std::range_error("cm value outside unit disc");
      vals.emplace_back(p, v);
    } while (ps.eat(';'));
    ps.expect(')');
    MultFunc f;
    f.completely_multiplicative = true;
    i64 maxp = 1;
    bool unim = true;
    for (auto& [p, v] : vals) {
      maxp = std::max(maxp, p);
      if (std::fabs(std::abs(v) - 1.0) > 1e-12) unim = false;
    }
    f.unimodular = unim;
    f.trivial_beyond = maxp;
    f.tame_beyond = maxp;
    f.rule = [vals](i64 p, int k) -> cplx {
      for (auto& [q, v] : vals)
        if (q == p) {
          cplx r = 1.0;
          for (int j = 0; j < k; ++j) r *= v;
          return r;
        }
      return 1.0;
    };
    return f;
  }
  ps.fail("unknown builtin");
}

}  // namespace detail

inline MultFunc make_mult_func(const std::string& spec_text) {
  detail::SpecParser ps(spec_text);
  MultFunc f = detail::parse_spec(ps);
  if (ps.i != ps.s.size())
    throw std::invalid_argument("malformed function spec: trailing input at offset " +
                                std::to_string(ps.i));
  f.name = spec_text;
  return f;
}

// ---------------------------------------------------------------------------
// Pretentious distance.

enum class DistanceVariant { plain, poly_weighted, starred };

struct DistanceValue {
  double value = 0.0;
  double y = 1.0, x = 1.0;
  DistanceVariant variant = DistanceVariant::plain;
};

// D(f,g;y;x) = sqrt( sum_{y<=p<=x} (1 - Re f(p) conj g(p))/p )
inline DistanceValue distance(const MultFunc& f, const MultFunc& g, double y, double x,
                              const FactorSieve& sieve) {
  if (!(1.0 <= y && y <= x)) throw std::invalid_argument("distance: need 1 <= y <= x");
  if (x > (double)sieve.limit()) throw std::out_of_range("distance: x exceeds sieve limit");
  double s = 0.0;
  for (i64 p : sieve.primes()) {
    if ((double)p < y) continue;
    if ((double)p > x) break;
    double term = 1.0 - (f.at(p, 1) * std::conj(g.at(p, 1))).real();
    s += term / (double)p;
  }
  DistanceValue d;
  d.value = std::sqrt(std::max(0.0, s));
  d.y = y;
  d.x = x;
  return d;
}

// D_P adds sum over N_P(x) of (1 - Re f(p^k) conj g(p^k))/x.
inline DistanceValue distance_poly(const MultFunc& f, const MultFunc& g, double y, double x,
                                   const PolynomialZ& P, const FactorSieve& sieve,
                                   const LargePrimePowerSet* precomputed = nullptr) {
  if (P.is_constant()) throw std::invalid_argument("distance_poly: P must be nonconstant");
  DistanceValue base = distance(f, g, y, x, sieve);
  LargePrimePowerSet np;
  const LargePrimePowerSet* use = precomputed;
  if (!use) {
    np = large_prime_powers(P, (u64)x);
    use = &np;
  }
  double s = base.value * base.value;
  for (auto& [p, k] : use->members) s += (1.0 - (f.at(p, k) * std::conj(g.at(p, k))).real()) / x;
  DistanceValue d;
  d.value = std::sqrt(std::max(0.0, s));
  d.y = y;
  d.x = x;
  d.variant = DistanceVariant::poly_weighted;
  return d;
}

// Starred variant: main sum over prime powers y <= p^k <= x weighted 1/p^k.
inline DistanceValue distance_poly_starred(const MultFunc& f, const MultFunc& g, double y,
                                           double x, const PolynomialZ& P,
                                           const FactorSieve& sieve,
                                           const LargePrimePowerSet* precomputed = nullptr) {
  if (!(1.0 <= y && y <= x)) throw std::invalid_argument("distance: need 1 <= y <= x");
  if (x > (double)sieve.limit()) throw std::out_of_range("distance: x exceeds sieve limit");
  double s = 0.0;
  for (i64 p : sieve.primes()) {
    if ((double)p > x) break;
    double pk = (double)p;
    for (int k = 1; pk <= x; ++k, pk *= (double)p) {
      if (pk < y) continue;
      s += (1.0 - (f.at(p, k) * std::conj(g.at(p, k))).real()) / pk;
    }
  }
  LargePrimePowerSet np;
  const LargePrimePowerSet* use = precomputed;
  if (!use) {
    np = large_prime_powers(P, (u64)x);
    use = &np;
  }
  for (auto& [p, k] : use->members) s += (1.0 - (f.at(p, k) * std::conj(g.at(p, k))).real()) / x;
  DistanceValue d;
  d.value = std::sqrt(std::max(0.0, s));
  d.y = y;
  d.x = x;
  d.variant = DistanceVariant::starred;
  return d;
}

struct ScanResult {
  DirichletCharacter chi;
  double t = 0.0;
  DistanceValue dist;
};

// Exhaustive minimum of D(f, chi n^{it}; x) over characters of modulus <= q_max
// and t in the grid. Heuristic search, not a proof of the pretentious target.
inline ScanResult pretentious_scan(const MultFunc& f, u64 q_max, const std::vector<double>& t_grid,
                                   u64 x, const FactorSieve& sieve) {
  if (q_max < 1 || t_grid.empty()) throw std::invalid_argument("pretentious_scan: empty search");
  std::optional<ScanResult> best;
  for (u64 q = 1; q <= q_max; ++q) {
    for (auto& chi : characters_mod(q)) {
      MultFunc target = mf_char(chi);
      for (double t : t_grid) {
        MultFunc tw = mf_product(target, mf_nit(t));
        DistanceValue d = distance(f, tw, 1.0, (double)x, sieve);
        if (!best || d.value < best->dist.value - 1e-15) best = ScanResult{chi, t, d};
      }
    }
  }
  return *best;
}

}  // namespace pretlab
