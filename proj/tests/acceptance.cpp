// Acceptance suite: one line per criterion, every tolerance pinned in code.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <thread>

#include "pretlab/applications.hpp"
#include "pretlab/correlation.hpp"
#include "pretlab/meanvalue.hpp"
#include "pretlab/selftest.hpp"

using namespace pretlab;
using clock_type = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const char* title, bool pass, const std::string& detail) {
  std::printf("%s  criterion %2d: %s  [%s]\n", pass ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

}  // namespace

int main() {
  unsigned threads = std::thread::hardware_concurrency();
  FactorSieve sieve(1'000'004);

  {  // 1: mean-value Euler product, f = mobius_sq, P = x, x = 10^6
    auto t0 = clock_type::now();
    auto msq = mf_mobius_sq();
    auto prod = euler_product_over_primes(sieve.primes(), 100'000,
                                          [&](i64 p) { return local_mean(msq, p); });
    cplx direct = mean_direct(msq, parse_polynomial("x"), 1'000'000, &sieve, threads);
    double gap = std::abs(direct - prod.value);
    double el = since(t0);
    report(1, "mean-value Euler product (squarefree density)", gap <= 0.005 && el <= 10.0,
           fmt("direct=%.6f product=%.6f gap=%.2e runtime=%.1fs", direct.real(),
               prod.value.real(), gap, el));
  }

  {  // 2: polynomial argument, f = mobius_sq, P = x^2+1, x = 10^5
    auto t0 = clock_type::now();
    FactorSieve s5(100'001);
    auto msq = mf_mobius_sq();
    auto P = parse_polynomial("x^2+1");
    auto rep = mean_report(msq, P, 100'000, s5, 100'000, threads, 4, false);
    // internal cross-check: the product must equal prod_{p=1(4)} (1 - 2/p^2)
    double closed = 1.0;
    for (i64 p : s5.primes())
      if (p % 4 == 1) closed *= 1.0 - 2.0 / ((double)p * (double)p);
    double cross = std::abs(rep.prediction.real() - closed);
    double gap = std::abs(rep.direct - rep.prediction);
    double el = since(t0);
    report(2, "polynomial mean value (squarefree n^2+1)",
           gap <= 0.01 && cross <= 1e-10 && el <= 60.0,
           fmt("direct=%.6f product=%.6f gap=%.2e crosscheck=%.1e runtime=%.1fs",
               rep.direct.real(), rep.prediction.real(), gap, cross, el));
  }

  {  // 3: linear correlations
    auto msq = mf_mobius_sq();
    auto r1 = predict_linear_corr(msq, msq, 1, 0, 1, 1, 0, 0, 1'000'000, sieve, true, threads);
    double gap1 = std::abs(*r1.direct - r1.prediction);
    auto cm = make_mult_func("cm(2 => -1)");
    auto r2 = predict_linear_corr(cm, cm, 1, 0, 1, 1, 0, 0, 1'000'000, sieve, true, threads);
    double gap2 = std::abs(*r2.direct - cplx(-1.0 / 3));
    double predgap2 = std::abs(r2.prediction - cplx(-1.0 / 3));
    report(3, "linear correlations (squarefree pairs; the -1/3 function)",
           gap1 <= 0.01 && gap2 <= 0.01 && predgap2 <= 1e-9,
           fmt("squarefree gap=%.2e, cm gap=%.2e, prediction-(-1/3)=%.1e", gap1, gap2, predgap2));
  }

  {  // 4: series form vs product form on 20 randomized linear cases
    std::mt19937_64 rng(424242);
    double worst = 0.0;
    int done = 0;
    while (done < 20) {
      i64 a = (i64)(rng() % 6) + 1, b = (i64)(rng() % 6) + 1;
      i64 c = (i64)(rng() % 21) - 10, d = (i64)(rng() % 21) - 10;
      if (std::gcd(a, c) != 1 || std::gcd(b, d) != 1 || a * d == b * c) continue;
      ++done;
      auto f = make_mult_func("override(mobius_sq; 3:1 => 0.5; 7:2 => -0.25+0.5i)");
      auto g = make_mult_func("cm(2 => -1; 5 => 0.8; 11 => 0+1i)");
      auto rep = predict_linear_corr(f, g, a, c, b, d, 0, 0, 100'000, sieve, false);
      worst = std::max(worst, rep.product_form_gap);
    }
    report(4, "form agreement: divisor sum vs Euler product (20 random cases)", worst <= 1e-10,
           fmt("worst gap=%.2e", worst));
  }

  {  // 5: character machinery
    auto t0 = clock_type::now();
    std::atomic<u64> next_q{2};
    std::atomic<u64> pairs{0};
    std::atomic<i64> first_bad_q{0};
    auto worker = [&] {
      for (;;) {
        u64 q = next_q.fetch_add(1);
        if (q > 500) return;
        u64 local_pairs = 0;
        for (auto& chi : characters_mod(q)) {
          if (!chi.is_primitive()) continue;
          u64 m = chi.order();
          // index table of chi as exact root-of-unity exponents
          std::vector<int64_t> ix(q, -1);
          for (u64 n = 0; n < q; ++n) {
            auto r = chi.root_index(n);
            if (r) ix[n] = (int64_t)*r;
          }
          std::vector<double> cosv(m), sinv(m);
          for (u64 j = 0; j < m; ++j) {
            double ang = kTwoPi * (double)j / (double)m;
            cosv[j] = std::cos(ang);
            sinv[j] = std::sin(ang);
          }
          std::vector<u32> counts(m);
          for (u64 b = 0; b < q; ++b) {
            std::fill(counts.begin(), counts.end(), 0u);
            for (u64 n = 0; n < q; ++n) {
              int64_t in = ix[n], is = ix[(n + b) % q];
              if (in < 0 || is < 0) continue;
              counts[(u64)(in - is + (int64_t)m) % m]++;
            }
            double re = 0, im = 0;
            for (u64 j = 0; j < m; ++j) {
              re += (double)counts[j] * cosv[j];
              im += (double)counts[j] * sinv[j];
            }
            i64 rounded = std::llround(re);
            if (std::fabs(re - (double)rounded) > 1e-6 || std::fabs(im) > 1e-6 ||
                rounded != char_autocorr(chi, (i64)b)) {
              i64 expected = 0;
              first_bad_q.compare_exchange_strong(expected, (i64)q);
            }
            ++local_pairs;
          }
        }
        pairs.fetch_add(local_pairs);
      }
    };
    {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < std::max(1u, threads); ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    bool exact_ok = first_bad_q.load() == 0;
    // keytotao for f = chi mod 3 against the literal shift-1 sum at 10^6
    auto c3 = characters_mod(3);
    auto fchi = mf_char(c3[1]);
    cplx kt = keytotao_value(fchi, c3[1], 0.0, sieve.primes());
    cplx direct = 0.0;
    for (u64 n = 1; n <= 1'000'000; ++n)
      direct += c3[1].value(n % 3) * std::conj(c3[1].value((n + 1) % 3));
    direct /= 1'000'000.0;
    double ktgap = std::abs(kt - cplx(-1.0 / 3));
    double dgap = std::abs(direct - cplx(-1.0 / 3));
    double el = since(t0);
    report(5, "character autocorrelation (exhaustive q <= 500) and keytotao",
           exact_ok && ktgap <= 1e-9 && dgap <= 0.01,
           fmt("%llu exact pairs%s, keytotao=%.6f, direct=%.6f, runtime=%.1fs",
               (unsigned long long)pairs.load(),
               exact_ok ? ""
                        : fmt(" (first failure q=%lld)", (long long)first_bad_q.load()).c_str(),
               kt.real(), direct.real(), el));
  }

  {  // 6: Erdos-Coons-Tao
    FactorSieve s6(1'000'020);
    auto per2 = make_mult_func("override(one; 2:* => -1)");
    auto verdict = ect_characterize(per2, 10'000);
    bool ect_ok = verdict.satisfies_characterization && verdict.period_m &&
                  discrepancy(per2, 100'000, s6) <= (double)*verdict.period_m;
    double worst_sm = 0.0;
    for (auto spec : {"override(one; 2:* => -1)", "override(one; 2:* => -1; 3:* => -1)",
                      "override(one; 2:* => -1; 5:* => -1)"}) {
      auto f = make_mult_func(spec);
      for (unsigned H = 1; H <= 16; ++H) {
        auto sm = second_moment(f, H, 1'000'000, s6);
        worst_sm = std::max(worst_sm, std::fabs(sm.empirical - sm.predicted));
      }
    }
    auto gp = g_properties_check(per2, s6.primes());
    bool ids_ok = gp.g4a_zero && gp.g2a_relation &&
                  std::fabs(gp.sum_over_a - 1.0) <= 1e-8 + gp.tail_bound &&
                  std::fabs(gp.sum_over_a2) <= 1e-8 + gp.tail_bound;
    report(6, "Erdos-Coons-Tao: verdict, second moments (H <= 16), G identities",
           ect_ok && worst_sm <= 0.05 && ids_ok,
           fmt("period=%llu worst |emp-pred|=%.3e sums=(%.1e, %.1e)",
               (unsigned long long)(verdict.period_m ? *verdict.period_m : 0), worst_sm,
               std::fabs(gp.sum_over_a - 1.0), std::fabs(gp.sum_over_a2)));
  }

  {  // 7: Katai
    auto t0 = clock_type::now();
    FactorSieve s7(10'000'001);
    auto cm = make_mult_func("cm(2 => -1)");
    double stat = katai_stat(cm, 10'000'000, s7, threads);
    double gap = std::fabs(stat - 8.0 / 3);
    double nit_stat = katai_stat(make_mult_func("nit(0.3)"), 10'000'000, s7, threads);
    double el = since(t0);
    report(7, "Katai statistic (the -1/3-energy function; the n^{it} equality case)",
           gap <= 0.1 && nit_stat <= 0.05 && el <= 120.0,
           fmt("stat=%.4f |stat-8/3|=%.4f nit=%.4f runtime=%.1fs", stat, gap, nit_stat, el));
  }

  {  // 8: Brudern
    auto one = mf_one(), msq = mf_mobius_sq(), odd = mf_indicator_odd();
    auto b1 = brudern_predict(one, one, 10'000, sieve, threads);
    bool ok1 = std::fabs(b1.r_pred_G - 10'000.0) <= 1e-9 &&
               std::llabs((i64)b1.r_direct - 10'000) == 1;
    auto b2 = brudern_predict(msq, msq, 10'000, sieve, threads);
    double gap2 = std::fabs((double)b2.r_direct - b2.r_pred_G);
    auto b3 = brudern_predict(odd, odd, 9'999, sieve, threads);
    bool ok3 = b3.r_direct == 0 && std::fabs(b3.r_pred_G) <= 1e-12;
    report(8, "Brudern representation counts (N/N; squarefree; odd parity)",
           ok1 && gap2 <= 0.03 * 10'000 && ok3,
           fmt("N/N: pred=%.2f direct=%llu; squarefree gap=%.1f; odd-odd: %llu/%.1e", b1.r_pred_G,
               (unsigned long long)b1.r_direct, gap2, (unsigned long long)b3.r_direct,
               b3.r_pred_G));
  }

  {  // 9: adversarial construction
    auto rep = adversarial_mean(parse_polynomial("x^2+1"), 10'000, mf_liouville(), 0);
    report(9, "adversarial mean of f(n^2+1) at x = 10^4", rep.achieved >= 0.4,
           fmt("achieved=%.4f members=%llu", rep.achieved, (unsigned long long)rep.member_count));
  }

  {  // 10: infrastructure property suites
    auto t0 = clock_type::now();
    auto results = selftest(10'000'000, threads);
    bool all = true;
    std::string bad;
    for (auto& r : results)
      if (!r.pass) {
        all = false;
        bad += r.name + "; ";
      }
    double el = since(t0);
    report(10, "infrastructure property suites (selftest)", all && el <= 60.0,
           fmt("%zu checks, runtime=%.1fs%s%s", results.size(), el, all ? "" : " failed: ",
               bad.c_str()));
  }

  std::printf("%s (%d/%d criteria)\n", failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
              10 - failures, 10);
  return failures;
}
