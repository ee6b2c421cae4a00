#pragma once

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zsf/catalog.hpp"
#include "zsf/error.hpp"
#include "zsf/forms.hpp"
#include "zsf/group.hpp"
#include "zsf/report.hpp"
#include "zsf/search.hpp"
#include "zsf/sumset.hpp"

// Command-line front end. `run` never throws: usage and capacity problems
// return 2 with one `error: kind=... reason=...` line on the error stream,
// failed verifications return 1 after printing a counterexample line.

namespace zsf::cli {

enum ExitCode : int { kOk = 0, kFailed = 1, kUsage = 2 };

struct Flags {
  std::string group;
  std::uint32_t max_order = 0;
  unsigned k = 0;
  unsigned k_min = 1;
  unsigned k_max = 7;
  std::uint32_t target = 0;
  unsigned threads = 1;
  std::string json_path;
  std::string csv_path;
  bool witnesses = false;
  bool fast_cyclic = false;
  bool timing = false;
  std::string subset;
  std::string form;
  std::vector<std::string> params;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
};

namespace impl {

inline constexpr std::uint32_t kCatalogCap = 4096;

inline std::vector<GroupSpec> selected_groups(const Flags& f, std::uint32_t min_order = 2) {
  if (!f.group.empty()) return {parse_group(f.group)};
  if (f.max_order == 0) throw Error(ErrorKind::invalid_argument, "one of --group or --max-order is required");
  if (f.max_order > kCatalogCap) {
    throw Error(ErrorKind::capacity, "--max-order above " + std::to_string(kCatalogCap) + " is not supported");
  }
  std::vector<GroupSpec> out;
  for (auto& g : group_catalog(f.max_order)) {
    if (g.order() >= min_order) out.push_back(std::move(g));
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::invalid_argument, "cannot open '" + path + "' for writing");
  file << text;
  if (!file) throw Error(ErrorKind::invalid_argument, "failed writing '" + path + "'");
}

inline void write_json(const Flags& f, const Json& j) {
  if (!f.json_path.empty()) write_file(f.json_path, j.dump(2) + "\n");
}

inline int emit_outcomes(const Flags& f, const std::vector<VerifyOutcome>& outcomes, std::ostream& out) {
  const JsonOptions jopt{f.witnesses, f.timing};
  Json arr = Json::array();
  bool ok = true;
  for (const auto& o : outcomes) {
    arr.push_back(to_json(o, jopt));
    out << o.claim << ' ' << o.group << ' ' << (o.passed ? "pass" : "fail") << " checked=" << o.checked;
    for (const auto& [k, v] : o.stats) out << ' ' << k << '=' << v;
    out << " elapsed_ms=" << static_cast<long long>(o.elapsed_ms) << '\n';
    if (!o.passed) {
      ok = false;
      out << "counterexample: group=" << o.counterexample->group << " subset=" << o.counterexample->subset
          << " details=" << o.counterexample->details << '\n';
    }
  }
  write_json(f, arr);
  return ok ? kOk : kFailed;
}

inline void print_report(const SearchReport& r, std::ostream& out) {
  out << r.group.to_string() << " k=" << r.k << " zsf_count=" << r.zsf_count << " min_sigma="
      << (r.min_sigma ? std::to_string(*r.min_sigma) : std::string("none")) << " witnesses=" << r.witnesses.size()
      << " conjectured=" << r.conjectured() << " elapsed_ms=" << static_cast<long long>(r.elapsed_ms)
      << " threads=" << r.shards << '\n';
}

inline void print_forms(const GroupSpec& G, const std::vector<FormMatch>& forms, std::ostream& out) {
  for (const auto& m : forms) {
    out << ' ' << to_string(m.form) << '[';
    for (std::size_t i = 0; i < m.params.size(); ++i) out << (i ? ";" : "") << G.render(m.params[i]);
    out << ']';
  }
}

inline void print_witness(const GroupSpec& G, const Witness& w, std::ostream& out) {
  out << "  " << render_subset(G, w.elements);
  print_forms(G, w.forms, out);
  out << '\n';
}

inline int min_sigma_cmd(const Flags& f, std::ostream& out) {
  const auto groups = selected_groups(f, f.k + 1);
  if (!f.group.empty()) ::zsf::detail::check_k(groups.front(), f.k);
  const SearchOptions opt{f.threads, f.fast_cyclic, true};
  const JsonOptions jopt{f.witnesses, f.timing};
  Json arr = Json::array();
  std::string csv = std::string(kCsvHeader) + "\n";
  for (const auto& G : groups) {
    const auto r = min_sigma(G, f.k, opt);
    print_report(r, out);
    if (f.witnesses) {
      for (const auto& w : r.witnesses) print_witness(G, w, out);
    }
    arr.push_back(to_json(r, jopt));
    csv += csv_row(r) + "\n";
  }
  write_json(f, f.group.empty() ? arr : arr.front());
  if (!f.csv_path.empty()) write_file(f.csv_path, csv);
  return kOk;
}

inline int enumerate_cmd(const Flags& f, std::ostream& out) {
  const auto G = parse_group(f.group);
  ::zsf::detail::check_k(G, f.k);
  Json subsets = Json::array();
  const auto count = enumerate_zsf_subsets(G, f.k, [&](std::span<const Flat> S, std::uint32_t sigma) {
    const auto text = render_subset(G, S);
    out << text << " sigma=" << sigma << '\n';
    subsets.push_back(Json{{"subset", text}, {"sigma", sigma}});
  });
  out << G.to_string() << " k=" << f.k << " zsf_count=" << count << '\n';
  write_json(f, Json{{"group", G.to_string()}, {"k", f.k}, {"zsf_count", count}, {"subsets", std::move(subsets)}});
  return kOk;
}

inline int classify_subset(const Flags& f, std::ostream& out) {
  const auto G = parse_group(f.group);
  const auto S = parse_sequence(G, f.subset);
  if (!S.is_subset()) throw Error(ErrorKind::invalid_argument, "classify needs a subset (no repeated elements)");
  const auto sigma = sigma_set(S);
  const bool zsf = !sigma.test(0);
  const auto ids = set_forms_of_size(S.length());
  const auto forms = ids.empty() ? std::vector<FormMatch>{} : match_subset(S, std::span<const FormId>(ids));
  out << G.to_string() << " subset=" << S.to_string() << " zero_sum_free=" << (zsf ? "true" : "false")
      << " sigma=" << sigma.popcount() << " forms=" << forms.size();
  print_forms(G, forms, out);
  out << '\n';
  Json jf = Json::array();
  for (const auto& m : forms) jf.push_back(to_json(m, G));
  write_json(f, Json{{"group", G.to_string()},
                     {"subset", S.to_string()},
                     {"zero_sum_free", zsf},
                     {"sigma", sigma.popcount()},
                     {"forms", std::move(jf)}});
  return kOk;
}

inline int classify_cmd(const Flags& f, std::ostream& out, bool outcome_only) {
  if (!outcome_only && !f.subset.empty()) return classify_subset(f, out);
  if (f.k == 0 || f.target == 0) throw Error(ErrorKind::invalid_argument, "--k and --target are required");
  const auto groups = selected_groups(f);
  std::vector<VerifyOutcome> outcomes;
  Json details = Json::array();
  for (const auto& G : groups) {
    auto rep = classify_extremal(G, f.k, f.target);
    if (!outcome_only || f.witnesses) {
      for (const auto& w : rep.witnesses) print_witness(G, w, out);
    }
    if (!outcome_only) {
      Json ws = Json::array();
      for (const auto& w : rep.witnesses) ws.push_back(to_json(w, G));
      details.push_back(Json{{"outcome", to_json(rep.outcome, {f.witnesses, f.timing})}, {"witnesses", std::move(ws)}});
    }
    outcomes.push_back(std::move(rep.outcome));
  }
  const int code = emit_outcomes(f, outcomes, out);
  if (!outcome_only) write_json(f, details);
  return code;
}

inline int verify_bounds_cmd(const Flags& f, std::ostream& out) {
  unsigned lo = f.k ? f.k : f.k_min;
  unsigned hi = f.k ? f.k : f.k_max;
  std::vector<VerifyOutcome> outcomes;
  for (const auto& G : selected_groups(f)) {
    for (auto& o : verify_lower_bounds(G, lo, hi)) outcomes.push_back(std::move(o));
    outcomes.push_back(verify_additivity(G, std::min(hi, 7U)));
    outcomes.push_back(verify_duplicate_sums(G, std::min(hi, 7U)));
  }
  return emit_outcomes(f, outcomes, out);
}

inline int verify_shapes_cmd(const Flags& f, std::ostream& out) {
  std::vector<VerifyOutcome> outcomes;
  for (const auto& G : selected_groups(f)) outcomes.push_back(verify_class_shapes(G));
  return emit_outcomes(f, outcomes, out);
}

inline int verify_quotient_cmd(const Flags& f, std::ostream& out) {
  std::vector<VerifyOutcome> outcomes;
  for (const auto& G : selected_groups(f, 3)) outcomes.push_back(verify_quotient_bound(G, f.trials, f.seed));
  return emit_outcomes(f, outcomes, out);
}

inline int verify_multiplicity_cmd(const Flags& f, std::ostream& out) {
  const auto G = parse_group(f.group);
  if (!G.is_cyclic_form()) throw Error(ErrorKind::invalid_argument, "multiplicity check needs a cyclic group Z<n>");
  return emit_outcomes(f, {verify_multiplicity_bound(G.order())}, out);
}

inline int forms_instantiate_cmd(const Flags& f, std::ostream& out) {
  const auto G = parse_group(f.group);
  const auto id = parse_form(f.form);
  std::vector<Flat> params;
  for (const auto& p : f.params) params.push_back(G.parse_element(p));
  const auto inst = instantiate_form(id, params, G);
  out << to_string(id) << ' ' << G.to_string() << ' ' << (inst.valid() ? "valid" : "rejected");
  if (!inst.valid()) out << " reason=" << to_string(inst.rejection) << " detail=\"" << inst.detail << '"';
  out << " elements=" << render_subset(G, inst.elements);
  if (inst.valid()) out << " sigma=" << sigma_set(SubsetSeq(G, inst.elements)).popcount();
  out << '\n';
  Json elems = Json::array();
  for (Flat e : inst.elements) elems.push_back(G.render(e));
  write_json(f, Json{{"form", std::string(to_string(id))},
                     {"group", G.to_string()},
                     {"valid", inst.valid()},
                     {"rejection", std::string(to_string(inst.rejection))},
                     {"detail", inst.detail},
                     {"elements", std::move(elems)}});
  return inst.valid() ? kOk : kFailed;
}

inline int forms_match_cmd(const Flags& f, std::ostream& out) {
  const auto G = parse_group(f.group);
  const auto S = parse_sequence(G, f.subset);
  std::vector<FormId> ids;
  if (!f.form.empty()) {
    ids.push_back(parse_form(f.form));
  } else {
    ids = set_forms_of_size(S.length());
    if (ids.empty()) {
      throw Error(ErrorKind::size_mismatch, "no set family has size " + std::to_string(S.length()));
    }
  }
  const auto matches = match_subset(S, std::span<const FormId>(ids));
  out << G.to_string() << " subset=" << S.to_string() << " matches=" << matches.size();
  print_forms(G, matches, out);
  out << '\n';
  Json jm = Json::array();
  for (const auto& m : matches) jm.push_back(to_json(m, G));
  write_json(f, Json{{"group", G.to_string()}, {"subset", S.to_string()}, {"matches", std::move(jm)}});
  return kOk;
}

inline int catalog_cmd(const Flags& f, std::ostream& out) {
  if (f.max_order < 2) throw Error(ErrorKind::invalid_argument, "--max-order must be at least 2");
  if (f.max_order > kCatalogCap) throw Error(ErrorKind::capacity, "--max-order too large");
  Json arr = Json::array();
  for (const auto& G : group_catalog(f.max_order)) {
    out << G.order() << ' ' << G.to_string() << '\n';
    arr.push_back(G.to_string());
  }
  write_json(f, arr);
  return kOk;
}

}  // namespace impl

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-sum free subset search and verification"};
  app.name("zsf");
  app.require_subcommand(1);
  Flags f;

  auto group_opt = [&](CLI::App* sub, bool catalog) {
    auto* g = sub->add_option("--group", f.group, "group spec, e.g. Z20 or Z2xZ10");
    if (catalog) sub->add_option("--max-order", f.max_order, "iterate every catalog group up to this order")->excludes(g);
  };
  auto output_opts = [&](CLI::App* sub) {
    sub->add_option("--json", f.json_path, "write the full report as JSON");
    sub->add_option("--threads", f.threads, "search shards")->check(CLI::Range(1U, 256U));
    sub->add_flag("--witnesses", f.witnesses, "include full witness lists");
    sub->add_flag("--timing", f.timing, "include elapsed time and shard count in JSON");
  };

  auto* min_sigma = app.add_subcommand("min-sigma", "minimum |Sigma(S)| over zero-sum free k-subsets");
  group_opt(min_sigma, true);
  min_sigma->add_option("--k", f.k, "subset size")->required();
  min_sigma->add_option("--csv", f.csv_path, "write a CSV summary");
  min_sigma->add_flag("--fast-cyclic", f.fast_cyclic, "unit-multiplier orbit reduction for cyclic groups");
  output_opts(min_sigma);

  auto* enumerate = app.add_subcommand("enumerate", "list zero-sum free k-subsets");
  group_opt(enumerate, false);
  enumerate->add_option("--k", f.k, "subset size")->required();
  output_opts(enumerate);

  auto* classify = app.add_subcommand("classify", "classify one subset, or all extremal k-subsets");
  group_opt(classify, true);
  classify->add_option("--subset", f.subset, "subset such as 1,3,4,5,6,18");
  classify->add_option("--k", f.k, "subset size");
  classify->add_option("--target", f.target, "|Sigma| of the extremal subsets");
  output_opts(classify);

  auto* verify = app.add_subcommand("verify", "exhaustive verification suites");
  verify->require_subcommand(1);
  auto* v_bounds = verify->add_subcommand("bounds", "lower bounds on |Sigma(S)|");
  group_opt(v_bounds, true);
  v_bounds->add_option("--k", f.k, "single subset size");
  v_bounds->add_option("--k-min", f.k_min, "smallest subset size")->check(CLI::Range(1U, 7U));
  v_bounds->add_option("--k-max", f.k_max, "largest subset size")->check(CLI::Range(1U, 7U));
  output_opts(v_bounds);
  auto* v_class = verify->add_subcommand("classification", "extremal classification biconditional");
  group_opt(v_class, true);
  v_class->add_option("--k", f.k, "subset size")->required();
  v_class->add_option("--target", f.target, "|Sigma| of the extremal subsets")->required();
  output_opts(v_class);
  auto* v_shapes = verify->add_subcommand("shapes", "equal-sum class sizes and shapes of 6-subsets");
  group_opt(v_shapes, true);
  output_opts(v_shapes);
  auto* v_quot = verify->add_subcommand("quotient", "quotient-group bound on random splits");
  group_opt(v_quot, true);
  v_quot->add_option("--trials", f.trials, "random trials per group")->check(CLI::PositiveNumber);
  v_quot->add_option("--seed", f.seed, "random seed");
  output_opts(v_quot);
  auto* v_mult = verify->add_subcommand("multiplicity", "multiplicity bound for long zero-sum free sequences");
  group_opt(v_mult, false);
  output_opts(v_mult);

  auto* forms = app.add_subcommand("forms", "extremal family instantiation and matching");
  forms->require_subcommand(1);
  auto* f_inst = forms->add_subcommand("instantiate", "build and validate one family member");
  group_opt(f_inst, false);
  f_inst->add_option("--form", f.form, "s6-i ... s6-v, s5-i, s5-ii, s4-i")->required();
  f_inst->add_option("--params", f.params, "parameters, e.g. 1 or (0,1) (1,1)")->required();
  output_opts(f_inst);
  auto* f_match = forms->add_subcommand("match", "find every family parameterization of a subset");
  group_opt(f_match, false);
  f_match->add_option("--subset", f.subset, "subset such as 1,3,4,5,6,18")->required();
  f_match->add_option("--form", f.form, "restrict to one family");
  output_opts(f_match);

  auto* catalog = app.add_subcommand("catalog", "abelian groups up to an order");
  catalog->add_option("--max-order", f.max_order, "largest order")->required();
  output_opts(catalog);

  std::vector<const char*> argv{"zsf"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: kind=usage reason=" << e.what() << '\n';
    return kUsage;
  }

  auto needs_group = [&] {
    if (f.group.empty()) throw Error(ErrorKind::invalid_argument, "--group is required");
  };
  try {
    if (*min_sigma) return impl::min_sigma_cmd(f, out);
    if (*enumerate) return needs_group(), impl::enumerate_cmd(f, out);
    if (*classify) return impl::classify_cmd(f, out, false);
    if (*v_bounds) return impl::verify_bounds_cmd(f, out);
    if (*v_class) return impl::classify_cmd(f, out, true);
    if (*v_shapes) return impl::verify_shapes_cmd(f, out);
    if (*v_quot) return impl::verify_quotient_cmd(f, out);
    if (*v_mult) return needs_group(), impl::verify_multiplicity_cmd(f, out);
    if (*f_inst) return needs_group(), impl::forms_instantiate_cmd(f, out);
    if (*f_match) return needs_group(), impl::forms_match_cmd(f, out);
    if (*catalog) return impl::catalog_cmd(f, out);
  } catch (const Error& e) {
    err << "error: kind=" << to_string(e.kind()) << " reason=" << e.what() << '\n';
    return kUsage;
  }
  err << "error: kind=usage reason=no command\n";
  return kUsage;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace zsf::cli
