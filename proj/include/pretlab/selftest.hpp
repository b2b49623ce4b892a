#pragma once

// Reduced-scale invariant suite behind the `selftest` subcommand: every core
// identity the library relies on, at x = 10^4 scale, within a minute.

#include <random>
#include <sstream>

#include "pretlab/applications.hpp"
#include "pretlab/correlation.hpp"
#include "pretlab/meanvalue.hpp"

namespace pretlab {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// The section-4 identities for a nominally period-2-like f; factored out so a
// fault-injection test can feed a corrupted function and watch the named
// property fail.
inline CheckResult check_g_identities(const MultFunc& f, const std::vector<i64>& primes) {
  CheckResult r{"G identities (G(4a)=0, G(2a)=-4G(a), sums)", false, ""};
  auto gp = g_properties_check(f, primes);
  std::ostringstream os;
  if (!gp.precondition_ok) {
    r.detail = "precondition failed";
    return r;
  }
  bool ok = true;
  if (!gp.g4a_zero) {
    ok = false;
    os << "G(4a)=0 violated; ";
  }
  if (!gp.g2a_relation) {
    ok = false;
    os << "G(2a)=-4G(a) violated; ";
  }
  if (std::fabs(gp.sum_over_a - 1.0) > 1e-8 + gp.tail_bound) {
    ok = false;
    os << "sum G(a)/a != 1; ";
  }
  if (std::fabs(gp.sum_over_a2) > 1e-8 + gp.tail_bound) {
    ok = false;
    os << "sum G(a)/a^2 != 0; ";
  }
  for (auto& v : gp.violations) os << v << "; ";
  r.pass = ok;
  r.detail = os.str();
  return r;
}

inline std::vector<CheckResult> selftest(u64 sieve_cap, unsigned threads = 0) {
  const u64 need = 100003;
  if (sieve_cap < need)
    throw std::out_of_range("selftest: requires sieve limit >= " + std::to_string(need));
  std::vector<CheckResult> out;
  auto push = [&](const std::string& name, bool pass, const std::string& detail = "") {
    out.push_back({name, pass, detail});
  };
  FactorSieve sieve(need);
  std::mt19937_64 rng(20250810);

  {  // sieve and factorization
    bool ok = true;
    for (u64 n = 1; n <= 10000 && ok; ++n)
      if ((u64)sieve.factorize(n).value() != n) ok = false;
    size_t primes4 = 0;
    for (i64 p : sieve.primes())
      if (p <= 10000) ++primes4;
    ok = ok && primes4 == 1229;
    push("sieve: factorizations multiply back, pi(10^4) = 1229", ok);
  }
  {  // mobius sum
    std::vector<int> mu(10001);
    for (u64 n = 1; n <= 10000; ++n) mu[n] = mobius(sieve.factorize(n));
    bool ok = true;
    for (u64 n = 1; n <= 10000 && ok; ++n) {
      i64 s = 0;
      for (u64 d = 1; d * d <= n; ++d)
        if (n % d == 0) {
          s += mu[d];
          if (d != n / d) s += mu[n / d];
        }
      if (s != (n == 1 ? 1 : 0)) ok = false;
    }
    push("mobius: sum_{d|n} mu(d) = [n=1] for n <= 10^4", ok);
  }
  {  // phi multiplicativity on random coprime pairs
    bool ok = true;
    for (int i = 0; i < 500 && ok; ++i) {
      u64 a = rng() % 300 + 1, b = rng() % 300 + 1;
      if (std::gcd(a, b) != 1) continue;
      ok = euler_phi(sieve.factorize(a * b)) ==
           checked_mul(euler_phi(sieve.factorize(a)), euler_phi(sieve.factorize(b)));
    }
    push("phi multiplicative on coprime pairs", ok);
  }
  {  // CRT
    bool ok = true;
    auto [r1, m1] = crt_solve({{1, 2}, {2, 3}});
    ok = ok && r1 == 5 && m1 == 6;
    auto [r2, m2] = crt_solve({{0, 4}, {3, 9}});
    ok = ok && r2 == 12 && m2 == 36;
    bool threw = false;
    try {
      crt_solve({{0, 4}, {1, 6}});
    } catch (const no_solution_error&) {
      threw = true;
    }
    push("crt: known systems and inconsistency detection", ok && threw);
  }
  {  // omega multiplicativity, random cubic
    bool ok = true;
    for (int i = 0; i < 30 && ok; ++i) {
      std::vector<i64> cs{(i64)(rng() % 19) - 9, (i64)(rng() % 19) - 9, (i64)(rng() % 19) - 9,
                          (i64)(rng() % 9) + 1};
      PolynomialZ P(cs);
      u64 m1 = rng() % 80 + 2, m2 = rng() % 80 + 2;
      if (std::gcd(m1, m2) != 1) continue;
      ok = omega(P, sieve.factorize(m1 * m2)) ==
           omega(P, sieve.factorize(m1)) * omega(P, sieve.factorize(m2));
    }
    push("omega_P multiplicative over coprime moduli", ok);
  }
  {  // Hensel consistency
    bool ok = true;
    PolynomialZ P = parse_polynomial("x^2+1");
    PolynomialZ D = P.derivative();
    for (i64 p : sieve.primes()) {
      if (p > 50) break;
      i64 disc = -4;  // disc(x^2+1)
      if (disc % p == 0) continue;
      u64 w1 = omega_prime_power(P, (u64)p, 1);
      for (unsigned k = 2; k <= 6 && ok; ++k)
        if (omega_prime_power(P, (u64)p, k) != w1) ok = false;
    }
    push("Hensel: omega_P(p^k) = omega_P(p) off the discriminant", ok);
  }
  {  // triangle inequality on random unit-disc functions
    auto rand_mf = [&]() {
      std::vector<std::pair<i64, cplx>> tbl;
      for (i64 p : {2, 3, 5, 7, 11}) {
        double ang = (double)(rng() % 1000) / 1000.0 * kTwoPi;
        double mag = (double)(rng() % 1001) / 1000.0;
        tbl.emplace_back(p, cplx(mag * std::cos(ang), mag * std::sin(ang)));
      }
      MultFunc f;
      f.name = "random";
      f.rule = [tbl](i64 p, int) -> cplx {
        for (auto& [q, v] : tbl)
          if (q == p) return v;
        return 1.0;
      };
      f.trivial_beyond = 11;
      return f;
    };
    bool ok = true;
    for (int i = 0; i < 60 && ok; ++i) {
      auto f = rand_mf(), g = rand_mf(), h = rand_mf();
      double ab = distance(f, g, 1, 10000, sieve).value;
      double bc = distance(g, h, 1, 10000, sieve).value;
      double ac = distance(f, h, 1, 10000, sieve).value;
      if (ab + bc < ac - 1e-12) ok = false;
    }
    push("distance: triangle inequality", ok);
  }
  {  // orthogonality
    bool ok = true;
    for (u64 q = 1; q <= 60 && ok; ++q) {
      auto chars = characters_mod(q);
      u64 phi = euler_phi(sieve.factorize(q));
      if (chars.size() != phi) ok = false;
      for (size_t i = 0; i < chars.size() && ok; ++i)
        for (size_t j = 0; j < chars.size() && ok; ++j) {
          cplx s = 0.0;
          for (u64 n = 0; n < q; ++n) s += chars[i].value(n) * std::conj(chars[j].value(n));
          cplx want = i == j ? cplx((double)phi) : cplx(0.0);
          if (std::abs(s - want) > 1e-7) ok = false;
        }
    }
    push("characters: orthogonality for q <= 60", ok);
  }
  {  // conductor by exhaustive residue scan
    bool ok = true;
    for (u64 q = 1; q <= 100 && ok; ++q) {
      for (auto& chi : characters_mod(q)) {
        // smallest q' | q such that chi is 1 on units = 1 mod q'
        u64 scan = 0;
        for (u64 qp = 1; qp <= q; ++qp) {
          if (q % qp != 0) continue;
          bool constant = true;
          for (u64 n = 1; n < q && constant; ++n)
            if (std::gcd(n, q) == 1 && n % qp == 1 % qp)
              if (std::abs(chi.value(n) - 1.0) > 1e-9) constant = false;
          if (constant) {
            scan = qp;
            break;
          }
        }
        if (scan != chi.conductor()) {
          ok = false;
          break;
        }
      }
    }
    push("characters: conductor matches exhaustive scan for q <= 100", ok);
  }
  {  // theta inversion
    bool ok = true;
    for (auto& name : {"one", "liouville", "mobius_sq", "indicator_odd", "nit(0.7)"}) {
      auto f = make_mult_func(name);
      for (i64 p : sieve.primes()) {
        if (p > 100) break;
        auto tv = theta_values(f, p, 10);
        cplx acc = 0.0;
        for (int k = 0; k <= 10 && ok; ++k) {
          acc += tv[k];
          if (std::abs(acc - f.at(p, k)) > 1e-12) ok = false;
        }
      }
    }
    push("theta: partial sums invert to f(p^k)", ok);
  }
  {  // eval multiplicativity
    bool ok = true;
    auto f = make_mult_func("nit(0.3)");
    for (int i = 0; i < 300 && ok; ++i) {
      u64 a = rng() % 300 + 1, b = rng() % 300 + 1;
      if (std::gcd(a, b) != 1) continue;
      cplx lhs = f.eval(sieve.factorize(a * b));
      cplx rhs = f.eval(sieve.factorize(a)) * f.eval(sieve.factorize(b));
      if (std::abs(lhs - rhs) > 1e-10) ok = false;
    }
    push("eval: f(mn) = f(m) f(n) on coprime pairs", ok);
  }
  {  // G identities, period-2 function
    auto per2 = make_mult_func("override(one; 2:* => -1)");
    out.push_back(check_g_identities(per2, sieve.primes()));
  }
  {  // form agreement on randomized linear cases
    bool ok = true;
    double worst = 0.0;
    for (int i = 0; i < 12 && ok; ++i) {
      i64 a = (i64)(rng() % 4) + 1, b = (i64)(rng() % 4) + 1;
      i64 c = (i64)(rng() % 9) - 4, d = (i64)(rng() % 9) - 4;
      if (std::gcd(a, c) != 1 || std::gcd(b, d) != 1 || a * d == b * c) continue;
      auto f = make_mult_func("override(mobius_sq; 3:1 => 0.5)");
      auto g = make_mult_func("cm(2 => -1; 5 => 0.8)");
      auto rep = predict_linear_corr(f, g, a, c, b, d, 0, 0, 10000, sieve, false);
      worst = std::max(worst, rep.product_form_gap);
      if (rep.product_form_gap > 1e-10) ok = false;
    }
    push("linear correlation: series form = product form", ok,
         "worst gap " + std::to_string(worst));
  }
  {  // mean value at reduced scale
    auto msq = mf_mobius_sq();
    auto rep = mean_report(msq, parse_polynomial("x"), 10000, sieve, 10000, threads, 4, false);
    double gap = std::abs(rep.prediction - rep.direct);
    push("mean value: squarefree density at x = 10^4", gap < 0.01,
         "gap " + std::to_string(gap));
  }
  {  // char autocorrelation closed form
    bool ok = true;
    for (u64 q = 2; q <= 100 && ok; ++q)
      for (auto& chi : characters_mod(q)) {
        if (!chi.is_primitive()) continue;
        for (i64 b = 0; b < (i64)q && ok; ++b) {
          cplx lit = char_autocorr_literal(chi, b);
          if (std::abs(lit - (double)char_autocorr(chi, b)) > 1e-6) ok = false;
        }
      }
    push("characters: autocorrelation closed form vs literal sum, q <= 100", ok);
  }
  {  // joint omega marginal consistency
    bool ok = true;
    PolynomialZ P = parse_polynomial("x");
    PolynomialZ Q = parse_polynomial("x+1");
    for (i64 p : {2, 3, 5, 7}) {
      for (unsigned k = 1; k <= 2 && ok; ++k) {
        // omega(p^k, 1) = omega_P(p^k)/p^k - omega_P(p^{k+1})/p^{k+1}
        Rat lhs = joint_omega(P, Q, (u64)p, k, 0);
        Rat w1 = joint_divisibility_density(P, Q, (u64)p, k, 0);
        Rat w2 = joint_divisibility_density(P, Q, (u64)p, k + 1, 0);
        if (lhs != w1 - w2) ok = false;
        // for (x, x+1) the joint with both exponents >= 1 vanishes
        if (joint_omega(P, Q, (u64)p, k, k).num != 0) ok = false;
      }
    }
    push("joint omega: marginal identity and disjoint-support vanishing", ok);
  }
  {  // empirical divisor density
    bool ok = true;
    PolynomialZ P = parse_polynomial("x^2+1");
    for (u64 d = 2; d <= 100 && ok; ++d) {
      u64 cnt = 0;
      for (u64 n = 1; n <= 10000; ++n)
        if ((u64)P.eval((i64)n) % d == 0) ++cnt;
      double want = (double)omega(P, sieve.factorize(d)) / (double)d;
      if (std::fabs((double)cnt / 10000.0 - want) > 10.0 * (double)d / 10000.0 + 1e-9) ok = false;
    }
    push("omega: empirical divisor densities for d <= 100", ok);
  }
  return out;
}

}  // namespace pretlab
