#pragma once

#include <json.hpp>

#include "fiscale/asymptotics.hpp"
#include "fiscale/ext_real.hpp"
#include "fiscale/variational.hpp"

namespace fiscale {

// JSON views of the result records. Keys are emitted in sorted order and
// doubles round-trip exactly, so serialized reports are byte-stable.

inline nlohmann::json to_json(const ExtReal& v) {
  nlohmann::json j;
  j["finite"] = v.finite();
  j["value"] = v.finite() ? nlohmann::json(v.value()) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json to_json(const VariationalEstimate& e) {
  nlohmann::json j;
  j["value"] = e.value;
  j["m"] = e.m;
  switch (e.kind) {
    case BasisKind::linear: j["kind"] = "linear"; break;
    case BasisKind::log: j["kind"] = "log"; break;
    case BasisKind::mixed: j["kind"] = "mixed"; break;
  }
  j["rank_used"] = e.rank_used;
  j["condition"] = e.condition;
  j["divergence_flag"] = e.divergence_flag;
  j["b"] = std::vector<double>(e.b.data(), e.b.data() + e.b.size());
  j["m_eigenvalues"] =
      std::vector<double>(e.m_eigenvalues.data(), e.m_eigenvalues.data() + e.m_eigenvalues.size());
  if (e.source == VariationalEstimate::Source::empirical) {
    j["source"] = "empirical";
    j["note"] = "plug-in with m <= n/2 smoothing cap; the raw empirical measure "
                "carries infinite information off zero";
  } else {
    j["source"] = "quadrature";
  }
  return j;
}

inline nlohmann::json to_json(const ScanResult& s) {
  nlohmann::json j;
  j["sizes"] = s.sizes;
  nlohmann::json values = nlohmann::json::array();
  nlohmann::json flags = nlohmann::json::array();
  for (const auto& e : s.estimates) {
    values.push_back(e.value);
    flags.push_back(e.divergence_flag);
  }
  j["values"] = values;
  j["divergence_flags"] = flags;
  j["verdict"] = to_string(s.verdict);
  if (s.verdict == ScanVerdict::finite) j["limit"] = s.limit;
  return j;
}

inline nlohmann::json to_json(const McReport& r) {
  nlohmann::json j;
  j["experiment"] = r.experiment;
  j["n"] = r.n;
  j["reps"] = r.reps;
  j["seed"] = r.seed;
  j["mean"] = r.mean;
  j["variance"] = r.variance;
  j["mean_se"] = r.mean_se;
  j["var_se"] = r.var_se;
  j["target_mean"] = r.target_mean;
  j["target_var"] = r.target_var;
  j["pass"] = r.pass;
  if (r.experiment == "lan") {
    j["remainder_mean_abs"] = r.remainder_mean_abs;
    j["remainder_se"] = r.remainder_se;
  }
  if (r.experiment == "mc_variance") j["failures"] = r.failures;
  return j;
}

inline nlohmann::json to_json(const BoundRow& row) {
  nlohmann::json j;
  j["score"] = row.score_id;
  j["v1"] = to_json(row.v1);
  j["v1_degenerate"] = row.v1_degenerate;
  j["inv_info"] = row.inv_info;
  j["efficiency"] = row.efficiency;
  j["bound_ok"] = row.bound_ok;
  return j;
}

}  // namespace fiscale
