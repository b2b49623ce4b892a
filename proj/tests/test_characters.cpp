#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pretlab/arith.hpp"
#include "pretlab/characters.hpp"

using cplx = std::complex<double>;

using namespace pretlab;

TEST_CASE("character counts and specific values") {
  auto c3 = characters_mod(3);
  REQUIRE(c3.size() == 2);
  CHECK(c3[0].is_principal());
  CHECK(c3[1].value(2).real() == doctest::Approx(-1.0));
  CHECK(c3[1].conductor() == 3);
  auto c4 = characters_mod(4);
  REQUIRE(c4.size() == 2);
  int nontrivial = c4[0].is_principal() ? 1 : 0;
  CHECK(c4[nontrivial].value(3).real() == doctest::Approx(-1.0));
  CHECK(c4[nontrivial].conductor() == 4);
  auto c8 = characters_mod(8);
  REQUIRE(c8.size() == 4);
  int cond8 = 0;
  for (auto& chi : c8)
    if (chi.conductor() == 8) ++cond8;
  CHECK(cond8 == 2);
  auto c1 = characters_mod(1);
  REQUIRE(c1.size() == 1);
  CHECK(c1[0].value(0) == cplx(1.0));
}

TEST_CASE("character values vanish off units and are multiplicative") {
  for (u64 q : {5, 9, 12, 16, 24, 35, 40}) {
    for (auto& chi : characters_mod(q)) {
      for (u64 n = 0; n < q; ++n) {
        auto v = chi.value(n);
        if (std::gcd(n, q) != 1) {
          REQUIRE(v == cplx(0.0));
          continue;
        }
        for (u64 m = 0; m < q; ++m) {
          if (std::gcd(m, q) != 1) continue;
          REQUIRE(std::abs(chi.value(n * m % q) - chi.value(n) * chi.value(m)) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("orthogonality for q <= 60") {
  FactorSieve s(100);
  for (u64 q = 1; q <= 60; ++q) {
    auto chars = characters_mod(q);
    u64 phi = q == 1 ? 1 : (u64)euler_phi(s.factorize(q));
    REQUIRE(chars.size() == phi);
    for (size_t i = 0; i < chars.size(); ++i)
      for (size_t j = 0; j < chars.size(); ++j) {
        cplx acc = 0.0;
        for (u64 n = 0; n < q; ++n) acc += chars[i].value(n) * std::conj(chars[j].value(n));
        if (q == 1) acc = 1.0;
        cplx want = (i == j) ? cplx((double)phi) : cplx(0.0);
        REQUIRE(std::abs(acc - want) < 1e-7);
      }
  }
}

TEST_CASE("conductor equals the exhaustive-scan conductor for q <= 100") {
  for (u64 q = 1; q <= 100; ++q) {
    for (auto& chi : characters_mod(q)) {
      u64 scan = 0;
      for (u64 qp = 1; qp <= q; ++qp) {
        if (q % qp != 0) continue;
        bool trivial_on_kernel = true;
        for (u64 n = 1; n <= q && trivial_on_kernel; ++n)
          if (std::gcd(n, q) == 1 && n % qp == 1 % qp)
            if (std::abs(chi.value(n % q) - cplx(1.0)) > 1e-9) trivial_on_kernel = false;
        if (trivial_on_kernel) {
          scan = qp;
          break;
        }
      }
      REQUIRE(chi.conductor() == scan);
      REQUIRE(q % chi.conductor() == 0);
      REQUIRE(chi.is_primitive() == (scan == q));
    }
  }
}

TEST_CASE("root indices are exact roots of unity") {
  for (u64 q : {7, 9, 16, 45}) {
    for (auto& chi : characters_mod(q)) {
      for (u64 n = 0; n < q; ++n) {
        auto idx = chi.root_index(n);
        if (std::gcd(n, q) != 1) {
          REQUIRE(!idx.has_value());
          continue;
        }
        REQUIRE(idx.has_value());
        double ang = 6.283185307179586476925286766559 * (double)*idx / (double)chi.order();
        REQUIRE(std::abs(chi.value(n) - cplx(std::cos(ang), std::sin(ang))) < 1e-12);
      }
    }
  }
}
