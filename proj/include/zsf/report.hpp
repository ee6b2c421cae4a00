#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "zsf/forms.hpp"
#include "zsf/search.hpp"

namespace zsf {

using Json = nlohmann::ordered_json;

/// What goes into JSON beyond the deterministic core. Timing and shard count
/// vary run to run, so they stay out unless asked for.
struct JsonOptions {
  bool witnesses = false;
  bool timing = false;
};

inline Json to_json(const FormMatch& m, const GroupSpec& G) {
  Json params = Json::array();
  for (Flat p : m.params) params.push_back(G.render(p));
  return Json{{"form", std::string(to_string(m.form))},
              {"params", std::move(params)},
              {"checks",
               {{"constraints", m.checks.constraints},
                {"distinct", m.checks.distinct},
                {"zero_sum_free", m.checks.zero_sum_free}}}};
}

inline Json to_json(const Witness& w, const GroupSpec& G) {
  Json forms = Json::array();
  for (const auto& m : w.forms) forms.push_back(to_json(m, G));
  return Json{{"subset", render_subset(G, w.elements)}, {"forms", std::move(forms)}};
}

inline Json to_json(const SearchReport& r, const JsonOptions& opt = {}) {
  Json j;
  j["group"] = r.group.to_string();
  j["k"] = r.k;
  j["zsf_count"] = r.zsf_count;
  j["min_sigma"] = r.min_sigma ? Json(*r.min_sigma) : Json(nullptr);
  j["conjectured"] = r.conjectured();
  j["fast_cyclic"] = r.fast_cyclic;
  j["witness_count"] = r.witnesses.size();
  if (opt.witnesses) {
    Json list = Json::array();
    for (const auto& w : r.witnesses) list.push_back(to_json(w, r.group));
    j["witnesses"] = std::move(list);
  }
  if (opt.timing) {
    j["elapsed_ms"] = r.elapsed_ms;
    j["shards"] = r.shards;
  }
  return j;
}

inline Json to_json(const VerifyOutcome& o, const JsonOptions& opt = {}) {
  Json j;
  j["claim"] = o.claim;
  j["group"] = o.group;
  j["status"] = o.passed ? "pass" : "fail";
  j["checked"] = o.checked;
  Json stats = Json::object();
  for (const auto& [k, v] : o.stats) stats[k] = v;
  j["stats"] = std::move(stats);
  if (o.counterexample) {
    j["counterexample"] = {{"group", o.counterexample->group},
                           {"subset", o.counterexample->subset},
                           {"details", o.counterexample->details}};
  } else {
    j["counterexample"] = nullptr;
  }
  if (opt.timing) j["elapsed_ms"] = o.elapsed_ms;
  return j;
}

inline constexpr const char* kCsvHeader = "group,k,zsf_count,min_sigma,witness_count,elapsed_ms";

inline std::string csv_row(const SearchReport& r) {
  char elapsed[32];
  std::snprintf(elapsed, sizeof elapsed, "%.3f", r.elapsed_ms);
  return r.group.to_string() + ',' + std::to_string(r.k) + ',' + std::to_string(r.zsf_count) + ',' +
         (r.min_sigma ? std::to_string(*r.min_sigma) : std::string()) + ',' + std::to_string(r.witnesses.size()) +
         ',' + elapsed;
}

}  // namespace zsf
