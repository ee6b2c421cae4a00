// Runs every acceptance criterion and prints one pass/fail line for each.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "oracle.hpp"
#include "zsf/catalog.hpp"
#include "zsf/report.hpp"
#include "zsf/search.hpp"

using namespace zsf;

namespace {

struct Verdict {
  bool ok = true;
  std::ostringstream note;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) note << "FAILED: " << what << "; ";
    ok = ok && cond;
  }
};

bool has_witness(const SearchReport& r, std::vector<Flat> S) {
  std::sort(S.begin(), S.end());
  return std::any_of(r.witnesses.begin(), r.witnesses.end(), [&](const Witness& w) { return w.elements == S; });
}

bool all_match(const SearchReport& r, FormId id) {
  return !r.witnesses.empty() && std::all_of(r.witnesses.begin(), r.witnesses.end(), [&](const Witness& w) {
    return std::any_of(w.forms.begin(), w.forms.end(), [&](const FormMatch& m) { return m.form == id; });
  });
}

void report_outcome(Verdict& v, const VerifyOutcome& o) {
  if (!o.passed && v.ok) {
    v.note << "FAILED: " << o.claim << " on " << o.group << " at " << o.counterexample->subset << " ("
           << o.counterexample->details << "); ";
  }
  v.ok = v.ok && o.passed;
}

Verdict criterion_1() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  auto r = min_sigma(parse_group("Z20"), 6);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.require(r.min_sigma == 19U, "min_sigma(Z20, 6) == 19");
  v.require(has_witness(r, {1, 3, 4, 5, 6, 18}), "witness {1,3,4,5,6,18}");
  v.require(has_witness(r, {1, 4, 5, 9, 12, 17}), "witness {1,4,5,9,12,17}");
  v.require(secs < 5.0, "runtime < 5 s");
  v.note << "min_sigma=" << (r.min_sigma ? std::to_string(*r.min_sigma) : "none") << " witnesses=" << r.witnesses.size()
         << " zsf_count=" << r.zsf_count << " runtime=" << secs << "s";
  return v;
}

Verdict criterion_2() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  std::vector<GroupSpec> groups{parse_group("Z20"), parse_group("Z2xZ10"), parse_group("Z2xZ2xZ8")};
  for (auto& g : group_catalog(32)) {
    if (g.order() >= 7) groups.push_back(std::move(g));
  }
  std::uint64_t witnesses = 0, checked = 0;
  for (const auto& G : groups) {
    auto rep = classify_extremal(G, 6, 19);
    report_outcome(v, rep.outcome);
    witnesses += rep.witnesses.size();
    checked += rep.outcome.checked;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.require(secs < 600.0, "runtime < 10 min");
  v.note << groups.size() << " groups, " << checked << " zero-sum free 6-subsets, " << witnesses
         << " |Sigma|=19 witnesses, runtime=" << secs << "s";
  return v;
}

Verdict criterion_3() {
  Verdict v;
  const auto G = parse_group("Z9");
  auto r = min_sigma(G, 4);
  v.require(r.min_sigma == 8U, "min_sigma(Z9, 4) == 8");
  v.require(all_match(r, FormId::S4_I), "every witness matches s4-i");
  for (const auto& w : r.witnesses) {
    for (const auto& m : w.forms) v.require(G.order_of(m.params.front()) == 9, "ord(x) == 9");
  }
  auto cls = classify_extremal(G, 4, 8);
  report_outcome(v, cls.outcome);
  v.note << "min_sigma=" << (r.min_sigma ? std::to_string(*r.min_sigma) : "none") << " witnesses=" << r.witnesses.size();
  return v;
}

Verdict criterion_4() {
  Verdict v;
  const auto z14 = parse_group("Z14");
  auto r = min_sigma(z14, 5);
  v.require(r.min_sigma == 13U, "min_sigma(Z14, 5) == 13");
  std::vector<std::string> outside;
  std::size_t s5ii = 0;
  for (const auto& w : r.witnesses) {
    const bool ii = std::any_of(w.forms.begin(), w.forms.end(), [](const FormMatch& m) { return m.form == FormId::S5_II; });
    if (ii) {
      ++s5ii;
      continue;
    }
    std::string text = render_subset(z14, w.elements);
    for (const auto& m : w.forms) text += std::string(" ") + std::string(to_string(m.form));
    outside.push_back(text);
  }
  v.require(outside.empty(), "every Z14 witness matches s5-ii");
  report_outcome(v, classify_extremal(z14, 5, 13).outcome);
  std::int64_t s5i = 0;
  for (const char* g : {"Z2xZ8", "Z2xZ10", "Z2xZ12"}) {
    const auto G = parse_group(g);
    auto rep = classify_extremal(G, 5, 13);
    report_outcome(v, rep.outcome);
    s5i += rep.outcome.stat("match_s5-i");
    v.require(rep.outcome.stat("match_s5-i") > 0, std::string(g) + " has s5-i witnesses");
  }
  v.note << "Z14 witnesses=" << r.witnesses.size() << " matching s5-ii=" << s5ii;
  if (!outside.empty()) {
    v.note << ", not s5-ii:";
    for (const auto& t : outside) v.note << " {" << t << '}';
  }
  v.note << "; s5-i matches on Z2xZ8/Z2xZ10/Z2xZ12=" << s5i;
  return v;
}

Verdict criterion_5() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  int groups = 0;
  std::uint32_t min5 = UINT32_MAX, min6 = UINT32_MAX;
  for (const auto& G : group_catalog(27)) {
    if (G.order() % 2 == 0) continue;
    ++groups;
    for (unsigned k : {5U, 6U}) {
      if (k >= G.order()) continue;
      auto r = min_sigma(G, k, {1, false, false});
      if (!r.min_sigma) continue;
      const std::uint32_t bound = k == 5 ? 14 : 20;
      v.require(*r.min_sigma >= bound, G.to_string() + " k=" + std::to_string(k) + " min_sigma=" +
                                           std::to_string(*r.min_sigma));
      (k == 5 ? min5 : min6) = std::min(k == 5 ? min5 : min6, *r.min_sigma);
    }
    for (const auto& o : verify_lower_bounds(G, 5, 6)) {
      if (o.claim.rfind("cor-odd", 0) == 0) report_outcome(v, o);
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.require(secs < 300.0, "runtime < 5 min");
  v.note << groups << " odd groups, smallest |Sigma| k=5: " << min5 << ", k=6: " << min6 << ", runtime=" << secs << "s";
  return v;
}

Verdict criterion_6() {
  Verdict v;
  std::uint64_t checked = 0;
  std::map<std::string, std::uint64_t> per_claim;
  for (const auto& G : group_catalog(16)) {
    std::vector<VerifyOutcome> outcomes = verify_lower_bounds(G, 1, 7);
    outcomes.push_back(verify_additivity(G, 7));
    outcomes.push_back(verify_duplicate_sums(G, 7));
    outcomes.push_back(verify_class_shapes(G));
    for (const auto& o : outcomes) {
      report_outcome(v, o);
      checked += o.checked;
      per_claim[o.claim] += o.checked;
    }
  }
  v.note << "checks=" << checked;
  for (const auto& [claim, n] : per_claim) v.note << ' ' << claim << '=' << n;
  if (per_claim["lemma-class-shapes"] == 0) v.note << " (no zero-sum free 6-subset exists in a group of order <= 19)";
  return v;
}

Verdict criterion_7() {
  Verdict v;
  std::vector<GroupSpec> groups;
  for (auto& g : group_catalog(24)) {
    if (g.order() >= 3) groups.push_back(std::move(g));
  }
  const std::uint64_t per_group = (10'000 + groups.size() - 1) / groups.size() + 50;
  std::uint64_t trials = 0, equality = 0;
  std::uint64_t seed = 1;
  for (const auto& G : groups) {
    auto o = verify_quotient_bound(G, per_group, seed++);
    report_outcome(v, o);
    trials += o.checked;
    equality += static_cast<std::uint64_t>(o.stat("equality"));
  }
  v.require(trials >= 10'000, "at least 10,000 trials");
  v.note << trials << " trials over " << groups.size() << " groups, " << equality << " with equality";
  return v;
}

Verdict criterion_8() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  auto o = verify_multiplicity_bound(15);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report_outcome(v, o);
  v.require(o.stat("threshold_length") == 6, "length threshold 6 at n=15");
  v.require(secs < 600.0, "runtime < 10 min");
  v.note << o.checked << " sequences of length >= 6, longest=" << o.stat("longest_sequence") << ", runtime=" << secs
         << "s";
  return v;
}

Verdict criterion_9() {
  Verdict v;
  int cases = 0;
  for (const auto& G : group_catalog(12)) {
    oracle::Group O{G.moduli()};
    for (unsigned k = 1; k <= 5 && k < G.order(); ++k) {
      const auto pruned = enumerate_zsf_subsets(G, k, [](std::span<const Flat>, std::uint32_t) {});
      v.require(pruned == oracle::zsf_count(O, k), G.to_string() + " k=" + std::to_string(k));
      ++cases;
    }
  }
  const auto z5 = enumerate_zsf_subsets(parse_group("Z5"), 2, [](std::span<const Flat>, std::uint32_t) {});
  v.require(z5 == 4, "zsf_count(Z5, 2) == 4");
  v.note << cases << " (group, k) pairs agree with the unpruned count; zsf_count(Z5,2)=" << z5;
  return v;
}

Verdict criterion_10() {
  Verdict v;
  for (auto [g, k] : {std::pair{"Z20", 6U}, std::pair{"Z9", 4U}}) {
    const auto G = parse_group(g);
    const auto base = to_json(min_sigma(G, k, {1, false, true}), {true, false}).dump(2);
    for (unsigned threads : {2U, 8U}) {
      v.require(to_json(min_sigma(G, k, {threads, false, true}), {true, false}).dump(2) == base,
                std::string(g) + " JSON identical at " + std::to_string(threads) + " shards");
    }
  }
  std::uint64_t seven_subsets = 0;
  for (Flat n = 8; n <= 24; ++n) {
    const GroupSpec G({n});
    for (const auto& o : verify_lower_bounds(G, 7, 7)) {
      if (o.claim == "bound-k7") {
        report_outcome(v, o);
        seven_subsets += o.checked;
      }
    }
  }
  v.note << "JSON byte-equal at 1/2/8 shards for Z20 k=6 and Z9 k=4; zero-sum free 7-subsets in Z8..Z24: "
         << seven_subsets;
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"1 Z20 k=6 minimum and witnesses", criterion_1},
      {"2 classification (6,19) across groups", criterion_2},
      {"3 Z9 k=4 extremal sets", criterion_3},
      {"4 k=5 extremal sets", criterion_4},
      {"5 odd-order bounds", criterion_5},
      {"6 lemma suites on groups of order <= 16", criterion_6},
      {"7 quotient bound fuzz", criterion_7},
      {"8 multiplicity bound at n=15", criterion_8},
      {"9 pruned vs unpruned counts", criterion_9},
      {"10 determinism and k=7 spot check", criterion_10},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v.ok = false;
      v.note << "exception: " << e.what();
    }
    failures += !v.ok;
    std::printf("criterion %s: %s (%s)\n", name.c_str(), v.ok ? "PASS" : "FAIL", v.note.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
