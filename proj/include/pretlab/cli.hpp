#pragma once

// Experiment runner behind the pretlab binary: one subcommand per pipeline,
// reproducible text-spec inputs, JSON/CSV reports. Exit codes: 0 success,
// 2 precondition failure, 1 internal error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "pretlab/report.hpp"
#include "pretlab/selftest.hpp"

namespace pretlab {

struct ExperimentConfig {
  std::string subcommand;
  std::string f_spec = "one";
  std::string g_spec;
  std::string A_spec = "one";
  std::string B_spec = "one";
  std::string P_text = "x";
  std::string Q_text;
  u64 x = 10000;
  double y = 1.0;
  unsigned H = 1;
  i64 d = 1;
  u64 n = 10000;
  u64 q = 1;
  u64 chi_index = 0;
  i64 p = 2;
  unsigned k = 1;
  u64 m = 0;
  u64 M = 0;
  unsigned K = 4;
  double t = 0.0, u = 0.0;
  std::string mode;  // adversary: "construct" or "iterate"; brudern sigma switch
  std::vector<std::string> terms;  // multi: "spec;t;a;b"
  u64 product_limit = 0;
  bool starred = false;
  std::string output;  // empty = stdout
  std::string format = "json";
  unsigned threads = 0;
  u64 sieve_limit = 10'000'000;
};

inline u64 default_sieve_limit() {
  if (const char* env = std::getenv("PRETLAB_SIEVE_LIMIT")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v >= 2) return (u64)v;
  }
  return 10'000'000;
}

namespace detail {

inline FactorSieve make_sieve(u64 need, u64 cap) {
  if (need > cap)
    throw std::out_of_range("experiment needs sieve limit " + std::to_string(need) +
                            " but the configured cap is " + std::to_string(cap) +
                            " (PRETLAB_SIEVE_LIMIT / --sieve-limit)");
  return FactorSieve(std::max<u64>(need, 4));
}

inline void emit(const ExperimentConfig& cfg, ojson j, const std::string& csv,
                 double wall_seconds) {
  j["version"] = kVersion;
  j["command"] = cfg.subcommand;
  j["timing_seconds"] = wall_seconds;
  std::string payload = cfg.format == "csv" && !csv.empty() ? csv : j.dump(2) + "\n";
  if (cfg.output.empty()) {
    std::cout << payload;
  } else {
    std::ofstream os(cfg.output, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file " + cfg.output);
    os << payload;
  }
}

inline ojson config_json(const ExperimentConfig& cfg) {
  ojson j;
  j["subcommand"] = cfg.subcommand;
  j["f"] = cfg.f_spec;
  if (!cfg.g_spec.empty()) j["g"] = cfg.g_spec;
  if (cfg.subcommand == "brudern") {
    j["A"] = cfg.A_spec;
    j["B"] = cfg.B_spec;
    j["n"] = cfg.n;
  }
  j["P"] = cfg.P_text;
  if (!cfg.Q_text.empty()) j["Q"] = cfg.Q_text;
  j["x"] = cfg.x;
  j["t"] = cfg.t;
  j["u"] = cfg.u;
  j["threads"] = cfg.threads;
  j["sieve_limit"] = cfg.sieve_limit;
  if (!cfg.terms.empty()) j["terms"] = cfg.terms;
  return j;
}

}  // namespace detail

inline int run(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  try {
    const std::string& cmd = cfg.subcommand;
    if (cmd == "meanvalue") {
      auto f = make_mult_func(cfg.f_spec);
      auto P = parse_polynomial(cfg.P_text);
      u64 need = std::max<u64>(cfg.x + 1, (u64)std::max<i64>(P.abs_bound(cfg.x), 2));
      bool spf_route = need <= cfg.sieve_limit;
      auto sieve = detail::make_sieve(spf_route ? need : cfg.x + 1, cfg.sieve_limit);
      auto rep = mean_report(f, P, cfg.x, sieve, cfg.product_limit, cfg.threads);
      ojson j = to_json(rep);
      j["spec"] = detail::config_json(cfg);
      detail::emit(cfg, j, to_csv(rep), elapsed());
      return 0;
    }
    if (cmd == "correlate") {
      auto f = make_mult_func(cfg.f_spec);
      auto g = make_mult_func(cfg.g_spec.empty() ? cfg.f_spec : cfg.g_spec);
      auto P = parse_polynomial(cfg.P_text);
      auto Q = parse_polynomial(cfg.Q_text.empty() ? "x+1" : cfg.Q_text);
      u64 need = (u64)std::max<i64>({P.abs_bound(cfg.x), Q.abs_bound(cfg.x), 2});
      CorrelationReport rep;
      if (P.degree() == 1 && Q.degree() == 1) {
        auto sieve = detail::make_sieve(std::max(need, cfg.x + 1), cfg.sieve_limit);
        rep = predict_linear_corr(f, g, P.coeffs[1], P.coeffs[0], Q.coeffs[1], Q.coeffs[0], cfg.t,
                                  cfg.u, cfg.x, sieve, true, cfg.threads);
      } else {
        u64 size = std::max(cfg.x + 1, std::min(need, cfg.sieve_limit));
        auto sieve = detail::make_sieve(size, cfg.sieve_limit);
        rep = predict_poly_corr(f, g, P, Q, cfg.x, sieve, true, cfg.threads);
      }
      ojson j = to_json(rep);
      j["spec"] = detail::config_json(cfg);
      detail::emit(cfg, j, to_csv(rep), elapsed());
      return 0;
    }
    if (cmd == "char-shift") {
      auto chars = characters_mod(cfg.q);
      if (cfg.chi_index >= chars.size())
        throw std::invalid_argument("char-shift: chi index out of range");
      auto& chi = chars[cfg.chi_index];
      auto f = make_mult_func(cfg.f_spec);
      u64 need = cfg.x + (u64)std::llabs(cfg.d) + 1;
      auto sieve = detail::make_sieve(need, cfg.sieve_limit);
      auto rep = predict_char_shift(f, chi, cfg.t, cfg.d, cfg.x, sieve, true, cfg.threads);
      ojson j = to_json(rep);
      j["keytotao"] = to_json(keytotao_value(f, chi, cfg.t, sieve.primes(),
                                             std::min<i64>((i64)sieve.limit(), 1'000'000)));
      j["spec"] = detail::config_json(cfg);
      detail::emit(cfg, j, to_csv(rep), elapsed());
      return 0;
    }
    if (cmd == "omega") {
      auto P = parse_polynomial(cfg.P_text);
      ojson j;
      if (cfg.m >= 2) {
        auto sieve = detail::make_sieve(cfg.m, cfg.sieve_limit);
        j["omega"] = omega(P, sieve.factorize(cfg.m));
        j["m"] = cfg.m;
      } else {
        j["omega"] = omega_prime_power(P, (u64)cfg.p, cfg.k);
        j["p"] = cfg.p;
        j["k"] = cfg.k;
        auto roots = roots_mod_prime_power(P, (u64)cfg.p, cfg.k);
        j["roots"] = roots;
      }
      j["P"] = P.to_string();
      j["spec"] = detail::config_json(cfg);
      detail::emit(cfg, j, "", elapsed());
      return 0;
    }
    if (cmd == "distance") {
      auto f = make_mult_func(cfg.f_spec);
      auto g = make_mult_func(cfg.g_spec.empty() ? "one" : cfg.g_spec);
      auto sieve = detail::make_sieve(cfg.x + 1, cfg.sieve_limit);
      DistanceValue dv;
      if (!cfg.Q_text.empty()) {  // polynomial-weighted variant against Q
        auto P = parse_polynomial(cfg.Q_text);
        dv = cfg.starred ? distance_poly_starred(f, g, cfg.y, (double)cfg.x, P, sieve)
                         : distance_poly(f, g, cfg.y, (double)cfg.x, P, sieve);
      } else {
        dv = distance(f, g, cfg.y, (double)cfg.x, sieve);
      }
      ojson j = to_json(dv);
      j["spec"] = detail::config_json(cfg);
      detail::emit(cfg, j, "", elapsed());
      return 0;
    }
    if (cmd == "ect") {
      auto f = make_mult_func(cfg.f_spec);
      auto verdict = ect_characterize(f, cfg.M ? cfg.M : std::min<u64>(cfg.x, 10000));
      ojson j = to_json(verdict);
      auto sieve = detail::make_sieve(cfg.x + 1, cfg.sieve_limit);
      j["discrepancy"] = discrepancy(f, cfg.x, sieve);
      j["spec"] = detail::config_json(cfg);
      detail::emit(cfg, j, "", elapsed());
      return 0;
    }
    if (cmd == "katai") {
      auto f = make_mult_func(cfg.f_spec);
      auto chars = characters_mod(cfg.q);
      if (cfg.chi_index >= chars.size())
        throw std::invalid_argument("katai: chi index out of range");
      auto sieve = detail::make_sieve(cfg.x + 1, cfg.sieve_limit);
      auto rep = katai_report(f, chars[cfg.chi_index], cfg.t, cfg.x, sieve, cfg.threads);
      ojson j = to_json(rep);
      j["spec"] = detail::config_json(cfg);
      detail::emit(cfg, j, "", elapsed());
      return 0;
    }
    if (cmd == "brudern") {
      auto A = make_mult_func(cfg.A_spec);
      auto B = make_mult_func(cfg.B_spec);
      u64 need = std::max<u64>(cfg.n, 1'000'000);
      auto sieve = detail::make_sieve(std::min<u64>(need, cfg.sieve_limit), cfg.sieve_limit);
      if (sieve.limit() < cfg.n) throw std::out_of_range("brudern: n exceeds sieve limit");
      auto rep = brudern_predict(A, B, cfg.n, sieve, cfg.threads);
      ojson j = to_json(rep);
      j["spec"] = detail::config_json(cfg);
      detail::emit(cfg, j, "", elapsed());
      return 0;
    }
    if (cmd == "adversary") {
      ojson j;
      if (cfg.mode == "iterate") {
        auto levels = dependence_demo(cfg.K);
        ojson ls = ojson::array();
        for (auto& l : levels) {
          ojson lj;
          lj["x"] = l.x;
          lj["mean_abs"] = l.mean_abs;
          lj["dist_sq"] = l.dist_sq;
          ls.push_back(lj);
        }
        j["levels"] = ls;
      } else {
        auto base = make_mult_func(cfg.f_spec);
        auto P = parse_polynomial(cfg.P_text == "x" ? "x^2+1" : cfg.P_text);
        auto rep = adversarial_mean(P, cfg.x, base, 10000);
        j = to_json(rep);
      }
      j["spec"] = detail::config_json(cfg);
      detail::emit(cfg, j, "", elapsed());
      return 0;
    }
    if (cmd == "multi") {
      std::vector<MultiTerm> terms;
      for (auto& spec : cfg.terms) {
        // "funcspec;t;a;b"
        std::vector<std::string> parts;
        std::string s = spec;
        // the function spec itself may contain ';' inside override(...); split
        // from the right on the last three separators
        for (int i = 0; i < 3; ++i) {
          size_t cut = s.rfind(';');
          if (cut == std::string::npos)
            throw std::invalid_argument("multi: term must be \"spec;t;a;b\"");
          parts.insert(parts.begin(), s.substr(cut + 1));
          s = s.substr(0, cut);
        }
        MultiTerm tm;
        tm.f = make_mult_func(s);
        tm.t = std::stod(parts[0]);
        tm.a = std::stoll(parts[1]);
        tm.b = std::stoll(parts[2]);
        terms.push_back(std::move(tm));
      }
      if (terms.empty()) throw std::invalid_argument("multi: no terms given");
      i64 vb = 2;
      for (auto& tm : terms)
        vb = std::max(vb, checked_add(checked_mul(tm.a, (i64)cfg.x), std::llabs(tm.b)));
      auto sieve = detail::make_sieve((u64)vb, cfg.sieve_limit);
      auto rep = correlate_multi(terms, cfg.x, sieve, true, cfg.threads);
      ojson j = to_json(rep);
      j["spec"] = detail::config_json(cfg);
      detail::emit(cfg, j, to_csv(rep), elapsed());
      return 0;
    }
    if (cmd == "selftest") {
      auto results = selftest(cfg.sieve_limit, cfg.threads);
      bool all = true;
      for (auto& r : results) {
        std::cout << (r.pass ? "PASS  " : "FAIL  ") << r.name
                  << (r.detail.empty() ? "" : "  [" + r.detail + "]") << "\n";
        all = all && r.pass;
      }
      std::cout << (all ? "selftest: all checks passed" : "selftest: FAILURES present") << " ("
                << results.size() << " checks, " << elapsed() << "s)\n";
      return all ? 0 : 1;
    }
    throw std::invalid_argument("unknown subcommand: " + cmd);
  } catch (const std::invalid_argument& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 2;
  } catch (const no_solution_error& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace pretlab
