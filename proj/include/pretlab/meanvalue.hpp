#pragma once

// Local factors M_p(f) and M_p(f(P)), truncated Euler products, direct-sum
// oracles, the decoupling constant, Erdos-Kac variance quantities, and the two
// adversarial constructions exhibiting large-prime dependence.

#include <cmath>
#include <complex>
#include <map>
#include <unordered_map>

#include "pretlab/multfun.hpp"
#include "pretlab/parallel.hpp"
#include "pretlab/poly.hpp"

namespace pretlab {

struct LocalFactorReport {
  i64 p = 0;
  cplx value = 1.0;
  int truncation_K = 0;
  double tail_bound = 0.0;
};

// M_p(f) = (1 - 1/p) sum_{k>=0} f(p^k)/p^k, geometric-tail truncated.
inline LocalFactorReport local_mean(const MultFunc& f, i64 p, double tail_eps = 1e-14) {
  LocalFactorReport r;
  r.p = p;
  cplx s = 0.0;
  double pk = 1.0;
  int k = 0;
  for (;; ++k) {
    s += f.at(p, k) / pk;
    pk *= (double)p;
    // remaining tail of (1-1/p) sum_{j>k} f(p^j)/p^j is at most p^{-(k+1)}
    if (1.0 / pk < tail_eps || k > 400) break;
  }
  r.value = (1.0 - 1.0 / (double)p) * s;
  r.truncation_K = k;
  r.tail_bound = 1.0 / pk;
  return r;
}

// omega_P(p^k) provider with the Hensel shortcut: when p divides neither the
// leading coefficient nor any root is singular, omega is constant in k.
class OmegaLocal {
 public:
  OmegaLocal(const PolynomialZ& P, u64 p) : P_(&P), p_(p) {
    auto roots = roots_mod_prime(P, p);
    counts_ = {1, (u64)roots.size()};
    if (P.leading() % (i64)p != 0) {
      PolynomialZ d = P.derivative();
      stable_ = true;
      for (u64 r : roots)
        if (d.eval_mod(r, p) == 0) {
          stable_ = false;
          break;
        }
    }
  }

  u64 at(unsigned k) {
    if (k == 0) return 1;
    if (stable_) return counts_[1];
    while (counts_.size() <= k) {
      unsigned lvl = (unsigned)counts_.size();
      if (counts_.back() == 0) {
        counts_.push_back(0);  // no roots mod p^{k} means none deeper
        continue;
      }
      if (std::log2((double)p_) * lvl >= 62.0) {
        counts_.push_back(counts_.back());  // beyond range; tails are < 1e-14 here
        continue;
      }
      counts_.push_back(omega_prime_power(*P_, p_, lvl));
    }
    return counts_[k];
  }

 private:
  const PolynomialZ* P_;
  u64 p_;
  bool stable_ = false;
  std::vector<u64> counts_;
};

// M_p(f(P)) = sum_{k>=0} f(p^k) (omega_P(p^k)/p^k - omega_P(p^{k+1})/p^{k+1}).
// The tail after K terms telescopes to omega_P(p^K)/p^K, which certifies it.
inline LocalFactorReport local_mean_poly(const MultFunc& f, const PolynomialZ& P, i64 p,
                                         double tail_eps = 1e-14) {
  OmegaLocal om(P, (u64)p);
  LocalFactorReport r;
  r.p = p;
  cplx s = 0.0;
  double pk = 1.0;
  int k = 0;
  for (;; ++k) {
    double dk = (double)om.at(k) / pk;
    double dk1 = (double)om.at(k + 1) / (pk * (double)p);
    s += f.at(p, k) * (dk - dk1);
    pk *= (double)p;
    double tail = (double)om.at(k + 1) / pk;
    if (tail < tail_eps || om.at(k + 1) == 0) {
      r.tail_bound = tail;
      break;
    }
    if (k > 400) {
      r.tail_bound = tail;
      break;
    }
  }
  r.value = s;
  r.truncation_K = k;
  return r;
}

struct EulerProduct {
  cplx value = 1.0;
  double tail_accum = 0.0;  // sum of per-factor truncation bounds
  size_t factors = 0;
};

// Product in ascending-p order (deterministic across runs and thread counts).
inline EulerProduct euler_product(const std::vector<LocalFactorReport>& factors) {
  EulerProduct out;
  for (auto& f : factors) {
    out.value *= f.value;
    out.tail_accum += f.tail_bound;
    ++out.factors;
  }
  out.factors = factors.size();
  return out;
}

template <typename FactorFn>
EulerProduct euler_product_over_primes(const std::vector<i64>& primes, i64 limit,
                                       FactorFn&& factor) {
  EulerProduct out;
  for (i64 p : primes) {
    if (p > limit) break;
    LocalFactorReport f = factor(p);
    out.value *= f.value;
    out.tail_accum += f.tail_bound;
    ++out.factors;
  }
  return out;
}

// (1/x) sum_{n<=x} f(P(n)) by exact factorization. Uses the SPF sieve when the
// values fit under its limit, the progression-sieving stream otherwise.
inline cplx mean_direct(const MultFunc& f, const PolynomialZ& P, u64 x, const FactorSieve* sieve,
                        unsigned threads = 0) {
  if (x == 0) throw std::invalid_argument("mean_direct: x must be positive");
  i64 vmax = P.abs_bound(x);
  cplx total;
  if (sieve && (u64)vmax <= sieve->limit()) {
    total = sum_blocks<cplx>(
        1, x + 1, cplx(0.0),
        [&](u64 lo, u64 hi) {
          cplx s = 0.0;
          for (u64 n = lo; n < hi; ++n) {
            i64 v = P.eval((i64)n);
            if (v <= 0) throw std::invalid_argument("mean_direct: P(n) must be positive");
            s += f.eval(sieve->factorize((u64)v));
          }
          return s;
        },
        threads);
  } else {
    auto ctx = PolyFactorContext::build(P, x);
    total = sum_blocks<cplx>(
        1, x + 1, cplx(0.0),
        [&](u64 lo, u64 hi) {
          cplx s = 0.0;
          ctx.run_block(lo, hi, [&](u64, const Factorization& fac, bool) { s += f.eval(fac); });
          return s;
        },
        threads);
  }
  return total / (double)x;
}

// The decoupling constant P(f;P;x) of the key proposition: the same Euler
// product as the truncated mean-value prediction.
inline EulerProduct frak_P(const MultFunc& f, const PolynomialZ& P, u64 x,
                           const std::vector<i64>& primes) {
  return euler_product_over_primes(primes, (i64)x,
                                   [&](i64 p) { return local_mean_poly(f, P, p); });
}

struct MeanValueReport {
  cplx prediction;
  cplx direct;
  u64 x = 0;
  u64 product_limit = 0;
  double error_budget = 0.0;  // D_P(1,f;log x;x) + 1/log log x
  double product_tail = 0.0;
  std::vector<LocalFactorReport> factors;  // capped sample for reporting
};

inline MeanValueReport mean_report(const MultFunc& f, const PolynomialZ& P, u64 x,
                                   const FactorSieve& sieve, u64 product_limit = 0,
                                   unsigned threads = 0, size_t factor_cap = 64,
                                   bool with_error_budget = true) {
  MeanValueReport rep;
  rep.x = x;
  rep.product_limit = std::min<u64>(product_limit ? product_limit : x, sieve.limit());
  EulerProduct prod;
  for (i64 p : sieve.primes()) {
    if ((u64)p > rep.product_limit) break;
    auto fac = local_mean_poly(f, P, p);
    prod.value *= fac.value;
    prod.tail_accum += fac.tail_bound;
    if (rep.factors.size() < factor_cap) rep.factors.push_back(fac);
  }
  rep.prediction = prod.value;
  rep.product_tail = prod.tail_accum;
  rep.direct = mean_direct(f, P, x, &sieve, threads);
  if (with_error_budget && !P.is_constant()) {
    double y = std::max(1.0, std::log((double)x));
    auto dp = distance_poly(mf_one(), f, y, (double)x, P, sieve);
    rep.error_budget = dp.value + 1.0 / std::log(std::log((double)x));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Erdos-Kac variance quantities for an additive h with h(p^k)=0 for p^k >= x.

struct TkVarianceReport {
  cplx mu;
  double sigma2 = 0.0;
  double empirical = 0.0;  // sum_{n<=x} |h(P(n)) - mu|^2
  double budget = 0.0;     // x sum |h|^2/p^k + x (log log x)^3 / log x
  double ratio = 0.0;
};

inline TkVarianceReport tk_variance(const std::function<cplx(i64, int)>& h, const PolynomialZ& P,
                                    u64 x, const FactorSieve& sieve, unsigned threads = 0) {
  TkVarianceReport rep;
  cplx mu = 0.0;
  double sig = 0.0, hsum = 0.0;
  for (i64 p : sieve.primes()) {
    if ((u64)p > x) break;
    OmegaLocal om(P, (u64)p);
    double pk = (double)p;
    for (int k = 1; pk <= (double)x; ++k, pk *= (double)p) {
      cplx hv = h(p, k);
      if (std::abs(hv) > 2.0 + 1e-12)
        throw std::invalid_argument("tk_variance: |h(p^k)| must be <= 2");
      double w = (double)om.at(k) / pk - (double)om.at(k + 1) / (pk * (double)p);
      mu += hv * w;
      sig += std::norm(hv) * w;
      hsum += std::norm(hv) / pk;
      if (std::log2((double)p) * (k + 1) > 62.0) break;
    }
  }
  rep.mu = mu;
  rep.sigma2 = sig;

  auto h_of = [&](const Factorization& fac) {
    cplx s = 0.0;
    for (auto& [p, e] : fac.entries) {
      double pe = std::pow((double)p, (double)e);
      if (pe < (double)x) s += h(p, e);
    }
    return s;
  };
  i64 vmax = P.abs_bound(x);
  if (sieve.limit() >= (u64)vmax) {
    rep.empirical = sum_blocks<double>(
        1, x + 1, 0.0,
        [&](u64 lo, u64 hi) {
          double s = 0.0;
          for (u64 n = lo; n < hi; ++n) s += std::norm(h_of(sieve.factorize((u64)P.eval((i64)n))) - mu);
          return s;
        },
        threads);
  } else {
    auto ctx = PolyFactorContext::build(P, x);
    rep.empirical = sum_blocks<double>(
        1, x + 1, 0.0,
        [&](u64 lo, u64 hi) {
          double s = 0.0;
          ctx.run_block(lo, hi,
                        [&](u64, const Factorization& fac, bool) { s += std::norm(h_of(fac) - mu); });
          return s;
        },
        threads);
  }
  double lx = std::log((double)x), llx = std::log(lx);
  rep.budget = (double)x * hsum + (double)x * llx * llx * llx / lx;
  rep.ratio = rep.empirical / rep.budget;
  return rep;
}

// ---------------------------------------------------------------------------
// Adversarial constructions (large-prime dependence for P = x^2 + 1).

struct AdversarialAssignment {
  i64 p;
  u64 n;       // the unique n <= x with p | P(n)
  cplx value;  // assigned f(p)
};

struct AdversarialReport {
  u64 x = 0;
  u64 member_count = 0;  // |M(x)|
  cplx small_sum;        // sum over the complement
  double phi = 0.0;
  double achieved = 0.0;  // |x^{-1} sum f(P(n))|
  std::vector<AdversarialAssignment> assignments;
};

// Lemma-style construction: f agrees with `base` on p <= 2x; on each large
// prime p > 2x dividing some P(n_p) it is set to e^{i phi} conj(f(P(n_p)/p)),
// phi the argument of the complement sum, so the two sums align.
inline AdversarialReport adversarial_mean(const PolynomialZ& P, u64 x, const MultFunc& base,
                                          size_t assignment_cap = SIZE_MAX) {
  if (x < 100) throw std::invalid_argument("adversarial_mean: x too small");
  if (!base.unimodular) throw std::invalid_argument("adversarial_mean: base must be unimodular");
  AdversarialReport rep;
  rep.x = x;
  u64 thresh = 2 * x;
  auto ctx = PolyFactorContext::build(P, x);
  cplx s0 = 0.0;
  std::map<i64, std::pair<u64, cplx>> members;  // p -> (n_p, cofactor value)
  ctx.run([&](u64 n, const Factorization& fac, bool) {
    i64 large = 0;
    cplx z = 1.0;
    for (auto& [p, e] : fac.entries) {
      if ((u64)p > thresh) {
        if (large || e != 1)
          throw std::logic_error("adversarial_mean: large prime structure violated");
        large = p;
      } else {
        z *= base.at(p, e);
      }
    }
    if (!large) {
      s0 += z;
    } else {
      if (!members.emplace(large, std::make_pair(n, z)).second)
        throw std::logic_error("adversarial_mean: duplicate large prime");
    }
  });
  rep.small_sum = s0;
  rep.member_count = members.size();
  rep.phi = std::abs(s0) > 0 ? std::arg(s0) : 0.0;
  cplx rot(std::cos(rep.phi), std::sin(rep.phi));
  rep.achieved = std::abs(s0 + rot * (double)members.size()) / (double)x;
  for (auto& [p, info] : members) {
    if (rep.assignments.size() >= assignment_cap) break;
    rep.assignments.push_back({p, info.first, rot * std::conj(info.second)});
  }
  return rep;
}

struct DependenceLevel {
  u64 x = 0;
  double mean_abs = 0.0;
  double dist_sq = 0.0;  // D(1,f;x)^2
};

// Iterated construction over x_k = 2^{2^k}: f is completely multiplicative,
// f(p) = -1 on each block (x_k, x_{k+1}] except the large primes of N_P(x_k),
// which are aligned as in the adversarial lemma.
inline std::vector<DependenceLevel> dependence_demo(unsigned K) {
  if (K < 1 || K > 4) throw std::out_of_range("dependence_demo: need 1 <= K <= 4");
  PolynomialZ P = parse_polynomial("x^2+1");
  u64 xK = 1;
  for (unsigned i = 0; i < (1u << K); ++i) xK *= 2;  // 2^(2^K)
  FactorSieve sieve(xK);
  std::unordered_map<i64, double> assigned;
  auto fp = [&](i64 p) -> double {
    auto it = assigned.find(p);
    return it == assigned.end() ? -1.0 : it->second;
  };
  std::vector<DependenceLevel> out;
  for (unsigned k = 1; k <= K; ++k) {
    u64 xk = 1;
    for (unsigned i = 0; i < (1u << k); ++i) xk *= 2;
    u64 thresh = 2 * xk;
    auto ctx = PolyFactorContext::build(P, xk);
    double s0 = 0.0;
    std::vector<std::pair<i64, double>> level_members;  // (p, f(cofactor))
    ctx.run([&](u64, const Factorization& fac, bool) {
      i64 large = 0;
      double z = 1.0;
      for (auto& [p, e] : fac.entries) {
        if ((u64)p > thresh) {
          if (large || e != 1) throw std::logic_error("dependence_demo: large prime structure");
          large = p;
        } else {
          double v = fp(p);
          if (e % 2) z *= v;  // v in {-1, +1}
        }
      }
      if (!large)
        s0 += z;
      else
        level_members.emplace_back(large, z);
    });
    double sgn = s0 >= 0 ? 1.0 : -1.0;
    for (auto& [p, z] : level_members)
      if (!assigned.count(p)) assigned[p] = sgn * z;
    DependenceLevel lvl;
    lvl.x = xk;
    lvl.mean_abs = (std::fabs(s0) + (double)level_members.size()) / (double)xk;
    double d = 0.0;
    for (i64 p : sieve.primes()) {
      if ((u64)p > xk) break;
      d += (1.0 - fp(p)) / (double)p;
    }
    lvl.dist_sq = d;
    out.push_back(lvl);
  }
  return out;
}

}  // namespace pretlab
