#pragma once

// Dirichlet characters mod q, built by CRT over prime-power moduli: a
// primitive root generates the odd components, {-1, 5} generate the 2-adic
// ones. Characters are exponent vectors against those fixed generators, with
// discrete-log tables per component, so values come out as exact roots of
// unity. Conductors are computed algebraically from component orders.

#include <cmath>
#include <complex>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pretlab/arith.hpp"

namespace pretlab {

namespace detail {

inline std::vector<i64> prime_factors(i64 n) {
  std::vector<i64> ps;
  for (i64 p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) ps.push_back(n);
  return ps;
}

inline u64 primitive_root_mod_p(u64 p) {
  if (p == 2) return 1;
  auto qs = prime_factors((i64)p - 1);
  for (u64 g = 2; g < p; ++g) {
    bool ok = true;
    for (i64 q : qs)
      if (powmod(g, (p - 1) / (u64)q, p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw std::logic_error("no primitive root found");
}

// A cyclic component of (Z/q)^* with its dlog table.
struct CharComponent {
  u64 pk;         // the prime power modulus this component lives in
  u64 order;      // order of the generator
  std::vector<u32> dlog;  // dlog[r] for r in [0, pk), units only; ~0u elsewhere
};

struct CharGroup {
  u64 q = 1;
  std::vector<std::pair<i64, int>> q_factors;  // prime powers of q
  std::vector<CharComponent> comps;            // aligned component list
  std::vector<u64> comp_modulus;               // pk per component (repeats for 2^a, a>=3)

  static constexpr u64 kTableCap = 20'000'000;
};

inline std::shared_ptr<const CharGroup> build_group(u64 q) {
  auto grp = std::make_shared<CharGroup>();
  grp->q = q;
  if (q == 1) return grp;
  u64 m = q;
  for (i64 p = 2; (u64)p * p <= m; ++p)
    if (m % (u64)p == 0) {
      int e = 0;
      while (m % (u64)p == 0) {
        m /= (u64)p;
        ++e;
      }
      grp->q_factors.emplace_back(p, e);
    }
  if (m > 1) grp->q_factors.emplace_back((i64)m, 1);

  for (auto& [p, e] : grp->q_factors) {
    u64 pk = (u64)checked_pow(p, (unsigned)e);
    if (pk > CharGroup::kTableCap) throw std::out_of_range("character dlog table too large");
    if (p == 2) {
      if (e == 1) continue;  // trivial unit group
      if (e == 2) {
        CharComponent c;
        c.pk = 4;
        c.order = 2;
        c.dlog.assign(4, ~0u);
        c.dlog[1] = 0;
        c.dlog[3] = 1;
        grp->comps.push_back(std::move(c));
        grp->comp_modulus.push_back(4);
        continue;
      }
      // (Z/2^e)^* = <-1> x <5>
      CharComponent sign;
      sign.pk = pk;
      sign.order = 2;
      sign.dlog.assign(pk, ~0u);
      CharComponent five;
      five.pk = pk;
      five.order = pk / 4;
      five.dlog.assign(pk, ~0u);
      u64 v = 1;
      for (u64 j = 0; j < pk / 4; ++j) {
        sign.dlog[v] = 0;
        five.dlog[v] = (u32)j;
        sign.dlog[pk - v] = 1;
        five.dlog[pk - v] = (u32)j;
        v = mulmod(v, 5, pk);
      }
      grp->comps.push_back(std::move(sign));
      grp->comp_modulus.push_back(pk);
      grp->comps.push_back(std::move(five));
      grp->comp_modulus.push_back(pk);
      continue;
    }
    u64 g = primitive_root_mod_p((u64)p);
    // g (or g+p) generates (Z/p^e)^* for all e
    if (e > 1 && powmod(g, (u64)(p - 1), (u64)(p * p)) == 1) g += (u64)p;
    CharComponent c;
    c.pk = pk;
    c.order = pk / (u64)p * (u64)(p - 1);
    c.dlog.assign(pk, ~0u);
    u64 v = 1;
    for (u64 j = 0; j < c.order; ++j) {
      c.dlog[v] = (u32)j;
      v = mulmod(v, g, pk);
    }
    grp->comps.push_back(std::move(c));
    grp->comp_modulus.push_back(pk);
  }
  return grp;
}

}  // namespace detail

class DirichletCharacter {
 public:
  DirichletCharacter() : group_(detail::build_group(1)) { finish(); }

  DirichletCharacter(std::shared_ptr<const detail::CharGroup> group, std::vector<u64> evec,
                     u64 index)
      : group_(std::move(group)), evec_(std::move(evec)), index_(index) {
    finish();
  }

  u64 modulus() const { return group_->q; }
  u64 conductor() const { return conductor_; }
  bool is_primitive() const { return conductor_ == group_->q; }
  bool is_principal() const {
    for (u64 e : evec_)
      if (e) return false;
    return true;
  }
  u64 index() const { return index_; }
  const std::vector<u64>& exponent_vector() const { return evec_; }
  u64 order() const { return order_; }

  // chi(n) as the exact root-of-unity index: chi(n) = e(num / order()), or
  // nothing when gcd(n, q) > 1.
  std::optional<u64> root_index(u64 n) const {
    u64 q = group_->q;
    if (q == 1) return 0;
    n %= q;
    if (std::gcd(n, q) != 1) return std::nullopt;
    u64 num = 0;
    for (size_t j = 0; j < group_->comps.size(); ++j) {
      const auto& c = group_->comps[j];
      u32 d = c.dlog[n % c.pk];
      // e_j d_j / m_j reduces to e'_j d_j / ord_j with e'_j = e_j / gcd(e_j, m_j)
      u64 contrib = mulmod(eprime_[j] % ordj_[j], d % ordj_[j], ordj_[j]);
      num = (num + contrib * (order_ / ordj_[j])) % order_;
    }
    return num;
  }

  std::complex<double> value(u64 n) const {
    auto idx = root_index(n);
    if (!idx) return 0.0;
    double ang = 6.283185307179586476925286766559 * (double)*idx / (double)order_;
    return {std::cos(ang), std::sin(ang)};
  }

 private:
  void finish() {
    // full order = lcm of component character orders; conductor multiplicative
    order_ = 1;
    conductor_ = 1;
    ordj_.assign(group_->comps.size(), 1);
    eprime_.assign(group_->comps.size(), 0);
    for (size_t cj = 0; cj < group_->comps.size(); ++cj) {
      u64 m = group_->comps[cj].order;
      u64 ev = evec_[cj] % m;
      u64 g = ev == 0 ? m : std::gcd(ev, m);
      ordj_[cj] = m / g;
      if (ordj_[cj] == 0) ordj_[cj] = 1;
      eprime_[cj] = ev / g;
      order_ = std::lcm(order_, ordj_[cj]);
    }
    size_t j = 0;
    for (size_t fi = 0; fi < group_->q_factors.size(); ++fi) {
      auto [p, e] = group_->q_factors[fi];
      if (p == 2 && e == 1) continue;
      if (p == 2 && e >= 3) {
        bool sgn = ordj_[j] > 1;
        u64 ord5 = ordj_[j + 1];
        conductor_ *= ord5 > 1 ? 4 * ord5 : (sgn ? 4 : 1);
        j += 2;
        continue;
      }
      u64 ord = ordj_[j];
      u64 cond = 1;
      if (ord > 1) {
        if (p == 2) {
          cond = 4;  // the e == 2 component
        } else {
          // smallest p^c with ord | phi(p^c): c = v_p(ord) + 1
          u64 s = 0, t = ord;
          while (t % (u64)p == 0) {
            t /= (u64)p;
            ++s;
          }
          cond = (u64)checked_pow(p, (unsigned)(s + 1));
        }
      }
      conductor_ *= cond;
      j += 1;
    }
  }

  std::shared_ptr<const detail::CharGroup> group_;
  std::vector<u64> evec_;
  std::vector<u64> ordj_, eprime_;
  u64 index_ = 0;
  u64 conductor_ = 1;
  u64 order_ = 1;
};

// All phi(q) characters mod q, enumerated by mixed-radix exponent vectors.
inline std::vector<DirichletCharacter> characters_mod(u64 q) {
  if (q < 1) throw std::invalid_argument("characters_mod: q must be >= 1");
  auto grp = detail::build_group(q);
  std::vector<DirichletCharacter> out;
  size_t ncomp = grp->comps.size();
  std::vector<u64> evec(ncomp, 0);
  u64 total = 1;
  for (auto& c : grp->comps) total *= c.order;
  out.reserve(total);
  for (u64 idx = 0; idx < total; ++idx) {
    out.emplace_back(grp, evec, idx);
    for (size_t j = 0; j < ncomp; ++j) {
      if (++evec[j] < grp->comps[j].order) break;
      evec[j] = 0;
    }
  }
  return out;
}

}  // namespace pretlab
