// How often are n and n+1 both squarefree? The singular series G(1) answers,
// and the direct count agrees at desk scale.

#include <cstdio>

#include "pretlab/correlation.hpp"

using namespace pretlab;

int main() {
  FactorSieve sieve(1'000'004);
  auto msq = mf_mobius_sq();
  for (u64 x : {10'000, 100'000, 1'000'000}) {
    auto rep = predict_linear_corr(msq, msq, 1, 0, 1, 1, 0.0, 0.0, x, sieve);
    std::printf("x = %7llu   prediction = %.6f   direct = %.6f   |gap| = %.2e\n",
                (unsigned long long)x, rep.prediction.real(), rep.direct->real(),
                std::abs(*rep.direct - rep.prediction));
  }
  std::printf("\nG(1) = prod_p (1 - 2/p^2); the whole series has one divisor since ad-bc = -1.\n");
  return 0;
}
