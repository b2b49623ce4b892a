#pragma once

// Correlation predictions: polynomial two-point local factors, the linear
// singular series G(f;g;r;x) in both its divisor-sum and Euler-product forms,
// shifted self-correlations G_0(r), character-twisted shifts, the keytotao
// product, m-point linear correlations, and the direct-sum oracle.

#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <optional>

#include "pretlab/meanvalue.hpp"
#include "pretlab/multfun.hpp"
#include "pretlab/parallel.hpp"
#include "pretlab/poly.hpp"

namespace pretlab {

// sum_{i>k} theta(p^i)/p^{i-k}, truncated with the |theta| <= 2 geometric bound.
inline cplx theta_tail(const MultFunc& f, i64 p, int k, double eps = 1e-14) {
  cplx s = 0.0;
  double w = 1.0 / (double)p;
  for (int i = k + 1;; ++i, w /= (double)p) {
    s += f.theta(p, i) * w;
    if (2.0 * w / ((double)p - 1.0) < eps || i > 500) break;
  }
  return s;
}

// One Euler factor of G(f;g;r;x) at p with k = v_p(r):
//   theta(p^k) gamma(p^k) + delta_b theta(p^k) sum_{i>k} gamma(p^i)/p^{i-k}
//                         + delta_a gamma(p^k) sum_{i>k} theta(p^i)/p^{i-k},
// delta_l = 0 iff p | l.
inline cplx g_local_factor(const MultFunc& f, const MultFunc& g, i64 p, int k, bool delta_a,
                           bool delta_b) {
  cplx tf = f.theta(p, k), tg = g.theta(p, k);
  cplx v = tf * tg;
  if (delta_b && tf != cplx(0.0)) v += tf * theta_tail(g, p, k);
  if (delta_a && tg != cplx(0.0)) v += tg * theta_tail(f, p, k);
  return v;
}

struct GFactor {
  i64 r = 1;
  cplx value = 1.0;
  i64 a = 1, b = 1;
};

// G(f;g;r;x): product over ALL primes p <= x with k = v_p(r) (the k=0 factors
// are included for every prime, which is the only reading under which
// G(2a) = -4 G(a) holds). Zero when gcd(r, gcd(a,b)) > 1.
inline GFactor g_factor(const MultFunc& f, const MultFunc& g, i64 r, i64 a, i64 b,
                        const std::vector<i64>& primes, i64 x) {
  if (r < 1) throw std::invalid_argument("g_factor: r must be >= 1");
  GFactor out;
  out.r = r;
  out.a = a;
  out.b = b;
  if (std::gcd(r, std::gcd(a, b)) > 1) {
    out.value = 0.0;
    return out;
  }
  i64 skip_beyond = 0;  // primes past every support are exact 1-factors at k=0
  if (f.trivial_beyond && g.trivial_beyond)
    skip_beyond = std::max(f.trivial_beyond, g.trivial_beyond);
  cplx v = 1.0;
  for (i64 p : primes) {
    if (p > x) break;
    int k = 0;
    i64 rr = r;
    while (rr % p == 0) {
      rr /= p;
      ++k;
    }
    if (k == 0 && skip_beyond && p > skip_beyond) continue;
    v *= g_local_factor(f, g, p, k, a % p != 0, b % p != 0);
  }
  out.value = v;
  return out;
}

// x^{iT} a^{it} b^{iu} / (1 + iT) with T = deg(P) t + deg(Q) u; 1 when t=u=0.
inline cplx archimedean_factor(double t, double u, const PolynomialZ& P, const PolynomialZ& Q,
                               u64 x) {
  if (t == 0.0 && u == 0.0) return 1.0;
  double a = (double)P.leading(), b = (double)Q.leading();
  if (a < 1 || b < 1) throw std::invalid_argument("archimedean_factor: leading coeffs must be >= 1");
  double T = P.degree() * t + Q.degree() * u;
  double ang = t * std::log(a) + u * std::log(b) + T * std::log((double)x);
  return cplx(std::cos(ang), std::sin(ang)) / cplx(1.0, T);
}

struct CorrelationReport {
  cplx prediction = 0.0;
  cplx archimedean = 1.0;
  std::optional<cplx> direct;
  u64 x = 0;
  std::vector<std::pair<i64, cplx>> local_factors;
  std::vector<std::pair<i64, cplx>> series_terms;  // (r, G(r)) when the divisor-sum route is used
  double error_budget = 0.0;
  double product_form_gap = 0.0;  // |series - product|, the form-agreement check
  std::map<std::string, std::string> config;
};

namespace detail {

inline std::vector<i64> divisors_of(i64 n) {
  n = std::llabs(n);
  std::vector<i64> ds;
  for (i64 d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      ds.push_back(d);
      if (d != n / d) ds.push_back(n / d);
    }
  std::sort(ds.begin(), ds.end());
  return ds;
}

inline Factorization trial_factorize(i64 n) {
  Factorization f;
  n = std::llabs(n);
  for (i64 p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      f.entries.emplace_back(p, e);
    }
  if (n > 1) f.entries.emplace_back(n, 1);
  return f;
}

}  // namespace detail

// Direct oracle (1/x) sum_{n<=x} f(P(n)) g(Q(n)); n with a nonpositive value
// contribute nothing (finitely many for the forms in scope).
inline cplx corr_direct(const MultFunc& f, const MultFunc& g, const PolynomialZ& P,
                        const PolynomialZ& Q, u64 x, const FactorSieve* sieve,
                        unsigned threads = 0) {
  bool p_sieved = sieve && (u64)P.abs_bound(x) <= sieve->limit();
  bool q_sieved = sieve && (u64)Q.abs_bound(x) <= sieve->limit();
  std::optional<PolyFactorContext> pc, qc;
  if (!p_sieved) pc.emplace(PolyFactorContext::build(P, x, /*allow_nonpositive=*/true));
  if (!q_sieved) qc.emplace(PolyFactorContext::build(Q, x, /*allow_nonpositive=*/true));
  cplx total = sum_blocks<cplx>(
      1, x + 1, cplx(0.0),
      [&](u64 lo, u64 hi) {
        size_t len = hi - lo;
        std::vector<cplx> fv(len, 0.0), gv(len, 0.0);
        auto fill = [&](const MultFunc& h, const PolynomialZ& R, bool sieved,
                        const std::optional<PolyFactorContext>& ctx, std::vector<cplx>& out) {
          if (sieved) {
            for (u64 n = lo; n < hi; ++n) {
              i64 v = R.eval((i64)n);
              if (v >= 1) out[n - lo] = h.eval(sieve->factorize((u64)v));
            }
          } else {
            ctx->run_block(lo, hi, [&](u64 n, const Factorization& fac, bool valid) {
              if (valid) out[n - lo] = h.eval(fac);
            });
          }
        };
        fill(f, P, p_sieved, pc, fv);
        fill(g, Q, q_sieved, qc, gv);
        cplx s = 0.0;
        for (size_t i = 0; i < len; ++i) s += fv[i] * gv[i];
        return s;
      },
      threads);
  return total / (double)x;
}

// Local correlation factor M_p(f(P), g(Q)). For p coprime to res(P,Q) this is
// M_p(f(P)) + M_p(g(Q)) - 1; otherwise the exact joint sum
// sum_{k,l} f(p^k) g(p^l) omega(p^k,p^l), where min(k,l) <= v_p(res) always.
inline LocalFactorReport local_corr_poly(const MultFunc& f, const MultFunc& g,
                                         const PolynomialZ& P, const PolynomialZ& Q, i64 p,
                                         i64 res, double eps = 1e-14) {
  if (res == 0) throw std::invalid_argument("local_corr_poly: res(P,Q) must be nonzero");
  LocalFactorReport rep;
  rep.p = p;
  if (res % p != 0) {
    auto a = local_mean_poly(f, P, p, eps);
    auto b = local_mean_poly(g, Q, p, eps);
    rep.value = a.value + b.value - 1.0;
    rep.tail_bound = a.tail_bound + b.tail_bound;
    rep.truncation_K = std::max(a.truncation_K, b.truncation_K);
    return rep;
  }
  int e = 0;
  {
    i64 rr = std::llabs(res);
    while (rr % p == 0) {
      rr /= p;
      ++e;
    }
  }
  int kmax = e + 2 + (int)std::ceil(std::log(4.0 / eps) / std::log((double)p));
  if (std::log2((double)p) * (kmax + 1) > 61.0)
    kmax = (int)(61.0 / std::log2((double)p)) - 1;
  cplx s = 0.0;
  for (int k = 0; k <= kmax; ++k)
    for (int l = 0; l <= kmax; ++l) {
      if (std::min(k, l) > e) continue;  // p^{min} divides res(P,Q)
      Rat w = joint_omega(P, Q, (u64)p, (unsigned)k, (unsigned)l);
      if (w.num == 0) continue;
      s += f.at(p, k) * g.at(p, l) * w.to_double();
    }
  double dp = joint_divisibility_density(P, Q, (u64)p, (unsigned)kmax + 1, 0).to_double();
  double dq = joint_divisibility_density(P, Q, (u64)p, 0, (unsigned)kmax + 1).to_double();
  rep.value = s;
  rep.truncation_K = kmax;
  rep.tail_bound = 2.0 * (dp + dq);
  return rep;
}

// Theorem-style polynomial correlation: prediction = prod_{p<=x} M_p(f(P),g(Q)).
inline CorrelationReport predict_poly_corr(const MultFunc& f, const MultFunc& g,
                                           const PolynomialZ& P, const PolynomialZ& Q, u64 x,
                                           const FactorSieve& sieve, bool with_direct = true,
                                           unsigned threads = 0, size_t factor_cap = 64) {
  i64 res = resultant(P, Q);
  if (res == 0) throw std::invalid_argument("predict_poly_corr: res(P,Q) = 0 (shared factor)");
  CorrelationReport rep;
  rep.x = x;
  cplx prod = 1.0;
  for (i64 p : sieve.primes()) {
    if ((u64)p > x) break;
    bool exact = p <= 50 || res % p == 0;
    LocalFactorReport lf = exact ? local_corr_poly(f, g, P, Q, p, res)
                                 : local_corr_poly(f, g, P, Q, p, 1);  // coprime branch
    prod *= lf.value;
    if (rep.local_factors.size() < factor_cap) rep.local_factors.emplace_back(p, lf.value);
  }
  rep.prediction = prod;
  if (with_direct) rep.direct = corr_direct(f, g, P, Q, x, &sieve, threads);
  rep.config["P"] = P.to_string();
  rep.config["Q"] = Q.to_string();
  rep.config["f"] = f.name;
  rep.config["g"] = g.name;
  return rep;
}

// Linear correlation per the singular-series corollary:
//   (1/x) sum f(an+c) g(bn+d) = M_i * sum_{r | ad-bc} G(f0;g0;r;x)/r + o(1),
// with the equivalent Euler-product form computed alongside and the two
// asserted to agree (same theta data, exact algebraic identity).
inline CorrelationReport predict_linear_corr(const MultFunc& f, const MultFunc& g, i64 a, i64 c,
                                             i64 b, i64 d, double t, double u, u64 x,
                                             const FactorSieve& sieve, bool with_direct = true,
                                             unsigned threads = 0) {
  if (a < 1 || b < 1) throw std::invalid_argument("predict_linear_corr: need a,b >= 1");
  if (std::gcd(a, c) != 1 || std::gcd(b, d) != 1)
    throw std::invalid_argument("predict_linear_corr: need (a,c) = (b,d) = 1");
  i64 det = checked_add(checked_mul(a, d), -checked_mul(b, c));
  if (det == 0) throw std::invalid_argument("predict_linear_corr: degenerate forms (ad = bc)");
  MultFunc f0 = mf_untwist_nit(f, t);
  MultFunc g0 = mf_untwist_nit(g, u);
  i64 R = std::llabs(det);
  auto Rfac = detail::trial_factorize(R);
  auto divisors = detail::divisors_of(R);

  // per-prime factors c_p(k) for p | R, background product over the rest
  std::map<i64, std::vector<cplx>> cpk;
  for (auto& [p, e] : Rfac.entries) {
    std::vector<cplx> col(e + 1);
    for (int k = 0; k <= e; ++k)
      col[k] = g_local_factor(f0, g0, p, k, a % p != 0, b % p != 0);
    cpk[p] = std::move(col);
  }
  i64 skip_beyond = 0;
  if (f0.trivial_beyond && g0.trivial_beyond)
    skip_beyond = std::max(f0.trivial_beyond, g0.trivial_beyond);
  CorrelationReport rep;
  rep.x = x;
  cplx background = 1.0;
  for (i64 p : sieve.primes()) {
    if ((u64)p > x) break;
    if (R % p == 0) continue;
    if (skip_beyond && p > skip_beyond) break;
    cplx v = g_local_factor(f0, g0, p, 0, a % p != 0, b % p != 0);
    background *= v;
    if (rep.local_factors.size() < 48) rep.local_factors.emplace_back(p, v);
  }
  cplx series = 0.0;
  for (i64 r : divisors) {
    cplx G = background;
    for (auto& [p, col] : cpk) {
      i64 rr = r;
      int k = 0;
      while (rr % p == 0) {
        rr /= p;
        ++k;
      }
      G *= col[k];
    }
    rep.series_terms.emplace_back(r, G);
    series += G / (double)r;
  }
  cplx product = background;
  for (auto& [p, col] : cpk) {
    cplx mp = 0.0;
    double pk = 1.0;
    for (size_t k = 0; k < col.size(); ++k, pk *= (double)p) mp += col[k] / pk;
    rep.local_factors.emplace_back(p, mp);
    product *= mp;
  }
  rep.product_form_gap = std::abs(series - product);
  if (rep.product_form_gap > 1e-8)
    throw std::logic_error("predict_linear_corr: series and product forms disagree");

  PolynomialZ Pf({c, a}), Qf({d, b});
  rep.archimedean = archimedean_factor(t, u, Pf, Qf, x);
  rep.prediction = rep.archimedean * series;
  if (with_direct) rep.direct = corr_direct(f, g, Pf, Qf, x, &sieve, threads);
  rep.config["f"] = f.name;
  rep.config["g"] = g.name;
  rep.config["a"] = std::to_string(a);
  rep.config["c"] = std::to_string(c);
  rep.config["b"] = std::to_string(b);
  rep.config["d"] = std::to_string(d);
  rep.config["t"] = std::to_string(t);
  rep.config["u"] = std::to_string(u);
  return rep;
}

struct G0Value {
  double value = 0.0;
  double tail_bound = 0.0;
};

// G_0(r) = prod_p ( |theta(p^k)|^2 + 2 sum_{i>k} Re(theta(p^k) conj theta(p^i))/p^{i-k} ),
// k = v_p(r), truncated at the prime limit with a certificate when theta has
// bounded prime support.
inline G0Value autocorr_G0(const MultFunc& f, i64 r, const std::vector<i64>& primes,
                           i64 limit = 1'000'000) {
  if (r < 1) throw std::invalid_argument("autocorr_G0: r must be >= 1");
  G0Value out;
  double v = 1.0;
  for (i64 p : primes) {
    if (p > limit) break;
    int k = 0;
    i64 rr = r;
    while (rr % p == 0) {
      rr /= p;
      ++k;
    }
    if (k == 0 && f.trivial_beyond && p > f.trivial_beyond && p > r) continue;
    cplx tk = f.theta(p, k);
    double factor = std::norm(tk);
    if (k == 0) factor = 1.0;
    if (tk != cplx(0.0) || k == 0) {
      cplx tail = 0.0;
      double w = 1.0 / (double)p;
      for (int i = k + 1;; ++i, w /= (double)p) {
        tail += std::conj(f.theta(p, i)) * w;
        if (2.0 * w / ((double)p - 1.0) < 1e-15 || i > 500) break;
      }
      factor += 2.0 * (tk * tail).real();
    }
    v *= factor;
  }
  out.value = v;
  if (f.trivial_beyond)
    out.tail_bound = 0.0;
  else if (f.tame_beyond && f.tame_beyond < limit)
    out.tail_bound = 8.0 / (double)limit;  // factors are 1 + O(1/p^2) past tame support
  else
    out.tail_bound = std::numeric_limits<double>::quiet_NaN();  // uncertified
  return out;
}

// (1/x) sum f(n) conj(f(n+m)) = sum_{r|m} G_0(r)/r + o(1).
inline CorrelationReport shifted_selfcorr(const MultFunc& f, i64 m, u64 x,
                                          const FactorSieve& sieve, bool with_direct = true,
                                          unsigned threads = 0, i64 g0_limit = 1'000'000) {
  if (m < 1) throw std::invalid_argument("shifted_selfcorr: m must be >= 1");
  if (with_direct && sieve.limit() < x + (u64)m)
    throw std::out_of_range("shifted_selfcorr: sieve limit below x + m");
  CorrelationReport rep;
  rep.x = x;
  cplx pred = 0.0;
  for (i64 r : detail::divisors_of(m)) {
    auto g0 = autocorr_G0(f, r, sieve.primes(), std::min<i64>(g0_limit, (i64)sieve.limit()));
    rep.series_terms.emplace_back(r, cplx(g0.value));
    pred += g0.value / (double)r;
  }
  rep.prediction = pred;
  if (with_direct) {
    cplx total = sum_blocks<cplx>(
        1, x + 1, cplx(0.0),
        [&](u64 lo, u64 hi) {
          cplx s = 0.0;
          for (u64 n = lo; n < hi; ++n)
            s += f.eval(sieve.factorize(n)) * std::conj(f.eval(sieve.factorize(n + (u64)m)));
          return s;
        },
        threads);
    rep.direct = total / (double)x;
  }
  rep.config["f"] = f.name;
  rep.config["m"] = std::to_string(m);
  return rep;
}

// ---------------------------------------------------------------------------
// Character autocorrelation sums.

// Literal sum_{a mod q} chi(a) conj(chi(a+b)).
inline cplx char_autocorr_literal(const DirichletCharacter& chi, i64 b) {
  u64 q = chi.modulus();
  i64 bm = ((b % (i64)q) + (i64)q) % (i64)q;
  cplx s = 0.0;
  for (u64 n = 0; n < q; ++n) s += chi.value(n) * std::conj(chi.value(n + (u64)bm));
  return s;
}

// Closed form (primitive chi): over p^k || q with i = v_p(b):
//   0 for i <= k-2, mu(p^{k-i}) p^i = -p^{k-1} for i = k-1, phi(p^k) for p^k | b.
inline i64 char_autocorr(const DirichletCharacter& chi, i64 b) {
  if (!chi.is_primitive())
    throw std::invalid_argument("char_autocorr: closed form requires a primitive character");
  u64 q = chi.modulus();
  if (q == 1) return 1;
  i64 bm = ((b % (i64)q) + (i64)q) % (i64)q;
  i64 out = 1;
  auto qf = detail::trial_factorize((i64)q);
  for (auto& [p, k] : qf.entries) {
    i64 pk = checked_pow(p, (unsigned)k);
    int i = 0;
    if (bm == 0) {
      i = k;
    } else {
      i64 bb = bm;
      while (bb % p == 0 && i < k) {
        bb /= p;
        ++i;
      }
    }
    if (i <= k - 2) return 0;
    if (i == k - 1)
      out = checked_mul(out, -checked_pow(p, (unsigned)(k - 1)));
    else
      out = checked_mul(out, pk / p * (p - 1));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Character-twisted shifts (the charactercor theorem).

// Local factor at p coprime to q, p^n || d:
//   1 - 2/p^{n+1} + (1-1/p) sum_{j>n} 2 Re(F(p^n) conj(F(p^j)))/p^j.
inline LocalFactorReport char_shift_local(const MultFunc& F, i64 p, int n, double eps = 1e-14) {
  LocalFactorReport rep;
  rep.p = p;
  double pn1 = std::pow((double)p, (double)(n + 1));
  cplx Fn = F.at(p, n);
  cplx tail = 0.0;
  double w = 1.0 / pn1;
  int j = n + 1;
  for (;; ++j, w /= (double)p) {
    tail += Fn * std::conj(F.at(p, j)) * w + std::conj(Fn) * F.at(p, j) * w;
    if (2.0 * w / ((double)p - 1.0) < eps || j > 500) break;
  }
  rep.value = 1.0 - 2.0 / pn1 + (1.0 - 1.0 / (double)p) * tail;
  rep.truncation_K = j;
  rep.tail_bound = 2.0 * w;
  return rep;
}

// Local factor at p^l || q with i = v_p(d), derived from the proof's character
// sums (the printed table in the theorem is inconsistent with its own proof):
//   i <= l-2:  0
//   i = l-1:   -1/p
//   i = l+k:   (1-1/p) sum_{j=0}^{k} |f(p^j)|^2/p^j - |f(p^{k+1})|^2/p^{k+2}.
inline cplx char_shift_local_ramified(const MultFunc& f, i64 p, int l, int i) {
  if (i <= l - 2) return 0.0;
  if (i == l - 1) return -1.0 / (double)p;
  int k = i - l;
  double s = 0.0, pj = 1.0;
  for (int j = 0; j <= k; ++j, pj *= (double)p) s += std::norm(f.at(p, j)) / pj;
  double last = std::norm(f.at(p, k + 1)) / (pj * (double)p);
  return (1.0 - 1.0 / (double)p) * s - last;
}

inline CorrelationReport predict_char_shift(const MultFunc& f, const DirichletCharacter& chi,
                                            double t, i64 d, u64 x, const FactorSieve& sieve,
                                            bool with_direct = true, unsigned threads = 0,
                                            size_t factor_cap = 64) {
  if (d == 0)
    throw std::invalid_argument("predict_char_shift: d = 0 is the plain mean, not a shift");
  if (!chi.is_primitive())
    throw std::invalid_argument("predict_char_shift: chi must be primitive");
  u64 q = chi.modulus();
  MultFunc F = twist(f, chi, t);
  i64 ad = std::llabs(d);
  CorrelationReport rep;
  rep.x = x;
  cplx prod = 1.0;
  auto qf = detail::trial_factorize((i64)q);
  for (auto& [p, l] : qf.entries) {
    i64 dd = ad;
    int i = 0;
    while (dd % p == 0) {
      dd /= p;
      ++i;
    }
    cplx v = char_shift_local_ramified(f, p, l, i);
    prod *= v;
    rep.local_factors.emplace_back(p, v);
  }
  for (i64 p : sieve.primes()) {
    if ((u64)p > x) break;
    if (q % (u64)p == 0) continue;
    i64 dd = ad;
    int n = 0;
    while (dd % p == 0) {
      dd /= p;
      ++n;
    }
    auto lf = char_shift_local(F, p, n);
    prod *= lf.value;
    if (rep.local_factors.size() < factor_cap) rep.local_factors.emplace_back(p, lf.value);
  }
  rep.prediction = prod;
  if (with_direct) {
    if (sieve.limit() < x + (u64)std::llabs(d))
      throw std::out_of_range("predict_char_shift: sieve limit below x + |d|");
    cplx total = sum_blocks<cplx>(
        1, x + 1, cplx(0.0),
        [&](u64 lo, u64 hi) {
          cplx s = 0.0;
          for (u64 n = lo; n < hi; ++n) {
            i64 m = (i64)n + d;
            if (m < 1) continue;
            s += f.eval(sieve.factorize(n)) * std::conj(f.eval(sieve.factorize((u64)m)));
          }
          return s;
        },
        threads);
    rep.direct = total / (double)x;
  }
  rep.config["f"] = f.name;
  rep.config["q"] = std::to_string(q);
  rep.config["t"] = std::to_string(t);
  rep.config["d"] = std::to_string(d);
  return rep;
}

// keytotao: (mu(q)/q) prod_{p not | q} ( 2 Re[(1-1/p) sum_k f(p^k) conj(chi(p^k)) p^{-ikt}/p^k] - 1 ).
inline cplx keytotao_value(const MultFunc& f, const DirichletCharacter& chi, double t,
                           const std::vector<i64>& primes, i64 limit = 1'000'000) {
  if (!chi.is_primitive())
    throw std::invalid_argument("keytotao_value: chi must be primitive");
  u64 q = chi.modulus();
  int mu = mobius(detail::trial_factorize((i64)q));
  if (mu == 0) return 0.0;
  double out = (double)mu / (double)q;
  MultFunc F = twist(f, chi, t);
  i64 skip_beyond = 0;
  if (f.trivial_beyond && q == 1 && t == 0.0) skip_beyond = f.trivial_beyond;
  for (i64 p : primes) {
    if (p > limit) break;
    if (q % (u64)p == 0) continue;
    if (skip_beyond && p > skip_beyond) break;
    cplx s = 0.0;
    double pk = 1.0;
    for (int k = 0;; ++k) {
      s += F.at(p, k) / pk;
      pk *= (double)p;
      if (1.0 / pk < 1e-15 || k > 400) break;
    }
    out *= 2.0 * ((1.0 - 1.0 / (double)p) * s).real() - 1.0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// m-point linear correlations.

struct MultiTerm {
  MultFunc f;
  double t = 0.0;
  i64 a = 1;  // form a n + b
  i64 b = 0;
};

// Exact local factor at p: sum over exponent tuples (k_1..k_m) of
// prod_j theta_j(p^{k_j}) * p^{-max k}, restricted to pairwise-compatible
// tuples; compatibility of k_i,k_j >= 1 is exactly min(k_i,k_j) <= v_p(res_ij).
inline cplx multi_local_exact(const std::vector<MultFunc>& f0, const std::vector<i64>& as,
                              const std::vector<std::vector<int>>& e_pair, i64 p,
                              double eps = 1e-15) {
  size_t m = f0.size();
  int cap = (int)std::ceil(std::log(4.0 / eps) / std::log((double)p)) + 1;
  // theta columns, k = 0..cap
  std::vector<std::vector<cplx>> th(m);
  for (size_t j = 0; j < m; ++j) {
    th[j].resize(cap + 1);
    for (int k = 0; k <= cap; ++k) th[j][k] = f0[j].theta(p, k);
  }
  cplx total = 0.0;
  std::vector<int> ks(m, 0);
  std::vector<size_t> active;
  std::function<void(size_t, cplx, int)> rec = [&](size_t j, cplx w, int kmax) {
    if (j == m) {
      total += w * std::pow((double)p, -(double)kmax);
      return;
    }
    // k_j = 0
    rec(j + 1, w, kmax);
    if (as[j] % p == 0) return;  // p | a_j kills k_j >= 1
    for (int k = 1; k <= cap; ++k) {
      bool ok = true;
      for (size_t i : active)
        if (std::min(ks[i], k) > e_pair[i][j]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      cplx w2 = w * th[j][k];
      if (w2 == cplx(0.0)) continue;
      ks[j] = k;
      active.push_back(j);
      rec(j + 1, w2, std::max(kmax, k));
      active.pop_back();
      ks[j] = 0;
    }
  };
  rec(0, 1.0, 0);
  return total;
}

inline CorrelationReport correlate_multi(const std::vector<MultiTerm>& terms, u64 x,
                                         const FactorSieve& sieve, bool with_direct = true,
                                         unsigned threads = 0, size_t factor_cap = 64) {
  size_t m = terms.size();
  if (m < 1) throw std::invalid_argument("correlate_multi: need at least one term");
  for (auto& tm : terms) {
    if (tm.a < 1) throw std::invalid_argument("correlate_multi: need a_j >= 1");
    if (std::gcd(tm.a, tm.b) != 1)
      throw std::invalid_argument("correlate_multi: need gcd(a_j, b_j) = 1");
  }
  std::vector<std::vector<i64>> res(m, std::vector<i64>(m, 0));
  std::set<i64> cutoff_primes;
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j) {
      i64 rij = checked_add(checked_mul(terms[i].a, terms[j].b), -checked_mul(terms[j].a, terms[i].b));
      if (rij == 0)
        throw std::invalid_argument("correlate_multi: degenerate pair (" + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
      res[i][j] = res[j][i] = rij;
      for (auto& [p, e] : detail::trial_factorize(rij).entries) cutoff_primes.insert(p);
    }
  for (auto& tm : terms)
    for (auto& [p, e] : detail::trial_factorize(tm.a).entries) cutoff_primes.insert(p);

  std::vector<MultFunc> f0;
  std::vector<i64> as;
  for (auto& tm : terms) {
    f0.push_back(mf_untwist_nit(tm.f, tm.t));
    as.push_back(tm.a);
  }
  CorrelationReport rep;
  rep.x = x;
  cplx prod = 1.0;
  i64 skip_beyond = 0;
  bool all_trivial = true;
  for (auto& h : f0) {
    if (!h.trivial_beyond) all_trivial = false;
    skip_beyond = std::max(skip_beyond, h.trivial_beyond);
  }
  for (i64 p : sieve.primes()) {
    if ((u64)p > x) break;
    bool exact = p <= 50 || cutoff_primes.count(p);
    cplx v;
    if (exact) {
      std::vector<std::vector<int>> epair(m, std::vector<int>(m, 0));
      for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j)
          if (i != j) {
            i64 rr = std::llabs(res[i][j]);
            int e = 0;
            while (rr % p == 0) {
              rr /= p;
              ++e;
            }
            epair[i][j] = e;
          }
      v = multi_local_exact(f0, as, epair, p);
    } else if (all_trivial && p > skip_beyond) {
      continue;  // every marginal is exactly 1
    } else {
      // sum of marginals minus (m-1)
      v = -(double)(m - 1);
      for (size_t j = 0; j < m; ++j)
        v += as[j] % p == 0 ? cplx(1.0) : cplx(1.0) + theta_tail(f0[j], p, 0);
    }
    prod *= v;
    if (rep.local_factors.size() < factor_cap) rep.local_factors.emplace_back(p, v);
  }
  double T = 0.0, ang = 0.0;
  for (auto& tm : terms) {
    T += tm.t;
    ang += tm.t * std::log((double)tm.a);
  }
  if (T != 0.0 || ang != 0.0) {
    ang += T * std::log((double)x);
    rep.archimedean = cplx(std::cos(ang), std::sin(ang)) / cplx(1.0, T);
  }
  rep.prediction = rep.archimedean * prod;
  if (with_direct) {
    i64 vb = 0;
    for (auto& tm : terms)
      vb = std::max(vb, checked_add(checked_mul(tm.a, (i64)x), std::llabs(tm.b)));
    if ((u64)vb > sieve.limit())
      throw std::out_of_range("correlate_multi: form values exceed sieve limit");
    cplx total = sum_blocks<cplx>(
        1, x + 1, cplx(0.0),
        [&](u64 lo, u64 hi) {
          cplx s = 0.0;
          for (u64 n = lo; n < hi; ++n) {
            cplx term = 1.0;
            for (auto& tm : terms) {
              i64 v = checked_add(checked_mul(tm.a, (i64)n), tm.b);
              if (v < 1) {
                term = 0.0;
                break;
              }
              term *= tm.f.eval(sieve.factorize((u64)v));
            }
            s += term;
          }
          return s;
        },
        threads);
    rep.direct = total / (double)x;
  }
  for (size_t j = 0; j < m; ++j) {
    rep.config["f" + std::to_string(j)] = terms[j].f.name;
    rep.config["a" + std::to_string(j)] = std::to_string(terms[j].a);
    rep.config["b" + std::to_string(j)] = std::to_string(terms[j].b);
    rep.config["t" + std::to_string(j)] = std::to_string(terms[j].t);
  }
  return rep;
}

}  // namespace pretlab
