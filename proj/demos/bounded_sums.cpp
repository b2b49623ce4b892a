// Which +-1 multiplicative functions keep bounded partial sums? The periodic
// ones with zero period sum, and nothing else: compare the period-2 function
// against a near-miss whose 3-power values alternate.

#include <cstdio>

#include "pretlab/applications.hpp"

using namespace pretlab;

static void inspect(const char* spec, const FactorSieve& sieve) {
  auto f = make_mult_func(spec);
  auto verdict = ect_characterize(f, 10'000);
  std::printf("%-42s characterization: %s", spec,
              verdict.satisfies_characterization ? "satisfied" : "violated ");
  if (verdict.period_m) std::printf("  period m = %llu", (unsigned long long)*verdict.period_m);
  if (!verdict.witnesses.empty()) std::printf("  (%s)", verdict.witnesses[0].c_str());
  std::printf("\n");
  for (u64 x : {1'000, 100'000, 1'000'000})
    std::printf("    max_{y<=%-7llu} |sum f(n)| = %.0f\n", (unsigned long long)x,
                discrepancy(f, x, sieve));
}

int main() {
  FactorSieve sieve(1'000'000);
  inspect("override(one; 2:* => -1)", sieve);
  inspect("override(one; 2:* => -1; 3:* => -1)", sieve);
  inspect("override(one; 2:* => -1; 3:^ => -1)", sieve);
  return 0;
}
