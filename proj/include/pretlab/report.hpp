#pragma once

// JSON / CSV serialization of reports. Key order is fixed (ordered_json) and
// the timing field is the only run-to-run variation, so identical configs
// produce byte-identical reports otherwise.

#include <json.hpp>

#include "pretlab/applications.hpp"
#include "pretlab/correlation.hpp"
#include "pretlab/meanvalue.hpp"
#include "pretlab/version.hpp"

namespace pretlab {

using ojson = nlohmann::ordered_json;

inline ojson to_json(cplx z) { return ojson{{"re", z.real()}, {"im", z.imag()}}; }

inline ojson to_json(const CorrelationReport& r) {
  ojson j;
  j["prediction"] = to_json(r.prediction);
  j["archimedean"] = to_json(r.archimedean);
  if (r.direct) j["direct"] = to_json(*r.direct);
  j["x"] = r.x;
  ojson lfs = ojson::array();
  for (auto& [p, v] : r.local_factors) lfs.push_back(ojson::array({p, v.real(), v.imag()}));
  j["local_factors"] = lfs;
  if (!r.series_terms.empty()) {
    ojson st = ojson::array();
    for (auto& [rr, v] : r.series_terms) st.push_back(ojson::array({rr, v.real(), v.imag()}));
    j["series_terms"] = st;
  }
  j["error_budget"] = r.error_budget;
  j["product_form_gap"] = r.product_form_gap;
  ojson cfg;
  for (auto& [k, v] : r.config) cfg[k] = v;
  j["spec"] = cfg;
  return j;
}

inline ojson to_json(const MeanValueReport& r) {
  ojson j;
  j["prediction"] = to_json(r.prediction);
  j["direct"] = to_json(r.direct);
  j["x"] = r.x;
  j["product_limit"] = r.product_limit;
  j["error_budget"] = r.error_budget;
  j["product_tail"] = r.product_tail;
  ojson lfs = ojson::array();
  for (auto& f : r.factors)
    lfs.push_back(ojson::array({f.p, f.value.real(), f.value.imag(), f.tail_bound}));
  j["local_factors"] = lfs;
  return j;
}

inline ojson to_json(const EctVerdict& v) {
  ojson j;
  j["satisfies_characterization"] = v.satisfies_characterization;
  j["conclusive"] = v.conclusive;
  if (v.period_m) j["period_m"] = *v.period_m;
  j["threshold_M"] = v.threshold_M;
  j["period_sum"] = v.period_sum;
  j["witnesses"] = v.witnesses;
  return j;
}

inline ojson to_json(const KataiReport& r) {
  ojson j;
  j["energy"] = to_json(r.energy);
  j["coefficient_pred"] = r.coefficient_pred;
  j["coefficient_emp"] = r.coefficient_emp;
  j["x"] = r.x;
  j["modulus_vanishes"] = r.modulus_vanishes;
  j["modulus_mean"] = r.modulus_mean;
  return j;
}

inline ojson to_json(const BrudernReport& r) {
  ojson j;
  j["n"] = r.n;
  j["r_direct"] = r.r_direct;
  j["r_pred_G"] = r.r_pred_G;
  j["r_pred_sigma"] = r.r_pred_sigma;
  j["r_pred_sigma_local"] = r.r_pred_sigma_local;
  j["rho_A"] = r.rho_A;
  j["rho_B"] = r.rho_B;
  j["degenerate"] = r.degenerate;
  ojson tabs = ojson::array();
  for (auto& [p, k, a, b] : r.ab_tables) tabs.push_back(ojson::array({p, k, a, b}));
  j["ab_tables"] = tabs;
  return j;
}

inline ojson to_json(const AdversarialReport& r) {
  ojson j;
  j["x"] = r.x;
  j["member_count"] = r.member_count;
  j["member_share"] = (double)r.member_count / (double)r.x;
  j["small_sum"] = to_json(r.small_sum);
  j["phi"] = r.phi;
  j["achieved"] = r.achieved;
  ojson as = ojson::array();
  for (auto& a : r.assignments)
    as.push_back(ojson::array({a.p, a.n, a.value.real(), a.value.imag()}));
  j["assignments"] = as;
  return j;
}

inline ojson to_json(const DistanceValue& d) {
  ojson j;
  j["value"] = d.value;
  j["y"] = d.y;
  j["x"] = d.x;
  j["variant"] = d.variant == DistanceVariant::plain
                     ? "plain"
                     : (d.variant == DistanceVariant::poly_weighted ? "poly" : "starred");
  return j;
}

// CSV: one row per local factor plus a summary row.
inline std::string to_csv(const CorrelationReport& r) {
  std::ostringstream os;
  os << "kind,key,re,im\n";
  for (auto& [p, v] : r.local_factors)
    os << "local_factor," << p << "," << v.real() << "," << v.imag() << "\n";
  for (auto& [rr, v] : r.series_terms)
    os << "series_term," << rr << "," << v.real() << "," << v.imag() << "\n";
  os << "prediction,," << r.prediction.real() << "," << r.prediction.imag() << "\n";
  if (r.direct) os << "direct,," << r.direct->real() << "," << r.direct->imag() << "\n";
  return os.str();
}

inline std::string to_csv(const MeanValueReport& r) {
  std::ostringstream os;
  os << "kind,key,re,im,tail\n";
  for (auto& f : r.factors)
    os << "local_factor," << f.p << "," << f.value.real() << "," << f.value.imag() << ","
       << f.tail_bound << "\n";
  os << "prediction,," << r.prediction.real() << "," << r.prediction.imag() << ",\n";
  os << "direct,," << r.direct.real() << "," << r.direct.imag() << ",\n";
  return os.str();
}

}  // namespace pretlab
