// pretlab: experiment runner for pretentious multiplicative function
// predictions. Every pipeline is a subcommand; reports go to stdout or --output
// as JSON (default) or CSV.

#include <CLI11.hpp>

#include "pretlab/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"local-to-global predictions for mean values and correlations of "
               "pretentious multiplicative functions"};
  app.require_subcommand(1);

  pretlab::ExperimentConfig cfg;
  cfg.sieve_limit = pretlab::default_sieve_limit();

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--output,-o", cfg.output, "report file (default: stdout)");
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--threads", cfg.threads, "worker count (0 = available parallelism)");
    sub->add_option("--sieve-limit", cfg.sieve_limit, "factor sieve cap");
  };

  auto* mv = app.add_subcommand("meanvalue", "mean of f(P(n)) vs the truncated Euler product");
  mv->add_option("--f", cfg.f_spec, "function spec")->required();
  mv->add_option("--P", cfg.P_text, "polynomial literal");
  mv->add_option("--x", cfg.x, "summation range")->required();
  mv->add_option("--product-limit", cfg.product_limit, "truncate the product at p <= this");
  add_common(mv);

  auto* co = app.add_subcommand("correlate", "two-point correlation of f(P(n)) g(Q(n))");
  co->add_option("--f", cfg.f_spec)->required();
  co->add_option("--g", cfg.g_spec);
  co->add_option("--P", cfg.P_text);
  co->add_option("--Q", cfg.Q_text);
  co->add_option("--x", cfg.x)->required();
  co->add_option("--t", cfg.t, "archimedean twist of f");
  co->add_option("--u", cfg.u, "archimedean twist of g");
  add_common(co);

  auto* cs = app.add_subcommand("char-shift", "f(n) conj f(n+d) for chi-pretentious f");
  cs->add_option("--f", cfg.f_spec)->required();
  cs->add_option("--q", cfg.q, "character modulus")->required();
  cs->add_option("--chi-index", cfg.chi_index, "index into characters_mod(q)");
  cs->add_option("--t", cfg.t);
  cs->add_option("--d", cfg.d, "shift")->required();
  cs->add_option("--x", cfg.x)->required();
  add_common(cs);

  auto* om = app.add_subcommand("omega", "root counts omega_P(p^k) or omega_P(m)");
  om->add_option("--P", cfg.P_text)->required();
  om->add_option("--p", cfg.p);
  om->add_option("--k", cfg.k);
  om->add_option("--m", cfg.m, "composite modulus (overrides --p/--k)");
  add_common(om);

  auto* di = app.add_subcommand("distance", "pretentious distance D(f,g;y;x)");
  di->add_option("--f", cfg.f_spec)->required();
  di->add_option("--g", cfg.g_spec);
  di->add_option("--y", cfg.y);
  di->add_option("--x", cfg.x)->required();
  di->add_option("--P", cfg.Q_text, "polynomial for the D_P variant");
  di->add_flag("--starred", cfg.starred, "use the starred prime-power variant");
  add_common(di);

  auto* ec = app.add_subcommand("ect", "Erdos-Coons-Tao characterization check");
  ec->add_option("--f", cfg.f_spec)->required();
  ec->add_option("--x", cfg.x)->required();
  ec->add_option("--M", cfg.M, "prime-power inspection cap (default min(x, 10^4))");
  add_common(ec);

  auto* ka = app.add_subcommand("katai", "divided-difference statistic vs 2(1 - Re E(f))");
  ka->add_option("--f", cfg.f_spec)->required();
  ka->add_option("--x", cfg.x)->required();
  ka->add_option("--q", cfg.q, "pretentious target character modulus");
  ka->add_option("--chi-index", cfg.chi_index);
  ka->add_option("--t", cfg.t);
  add_common(ka);

  auto* br = app.add_subcommand("brudern", "binary additive representation counts");
  br->add_option("--A", cfg.A_spec, "indicator spec")->required();
  br->add_option("--B", cfg.B_spec, "indicator spec")->required();
  br->add_option("--n", cfg.n, "target of a + b = n")->required();
  add_common(br);

  auto* ad = app.add_subcommand("adversary", "large-prime adversarial constructions");
  ad->add_option("--x", cfg.x);
  ad->add_option("--base", cfg.f_spec, "unimodular base function");
  ad->add_option("--mode", cfg.mode, "construct (default) or iterate")
      ->check(CLI::IsMember({"construct", "iterate"}));
  ad->add_option("--K", cfg.K, "levels for --mode iterate (x_k = 2^(2^k))");
  add_common(ad);

  auto* mu = app.add_subcommand("multi", "m-point linear correlation");
  mu->add_option("--term", cfg.terms, "repeatable: \"funcspec;t;a;b\" for a n + b")->required();
  mu->add_option("--x", cfg.x)->required();
  add_common(mu);

  auto* st = app.add_subcommand("selftest", "run the invariant suite at reduced scale");
  add_common(st);

  CLI11_PARSE(app, argc, argv);

  for (auto* sub : {mv, co, cs, om, di, ec, ka, br, ad, mu, st})
    if (sub->parsed()) cfg.subcommand = sub->get_name();
  if (cfg.subcommand == "adversary" && cfg.f_spec == "one") cfg.f_spec = "liouville";
  return pretlab::run(cfg);
}
