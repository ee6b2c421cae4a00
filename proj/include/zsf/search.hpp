#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "zsf/error.hpp"
#include "zsf/forms.hpp"
#include "zsf/group.hpp"
#include "zsf/sumset.hpp"

namespace zsf {

// ---------------------------------------------------------------------------
// Mask kernels. The enumerators are written once against this interface and
// instantiated with a single-word mask for |G| <= 64 or SumsetMask otherwise.

namespace detail {

struct WordKernel {
  const Translator* translator;
  using Mask = std::uint64_t;

  Mask empty() const noexcept { return 0; }
  Mask extend(Mask m, Flat g) const noexcept { return m | translator->apply(m, g) | (std::uint64_t{1} << g); }
  static bool has_zero(Mask m) noexcept { return m & 1U; }
  static std::uint32_t popcount(Mask m) noexcept { return static_cast<std::uint32_t>(std::popcount(m)); }
};

struct WideKernel {
  const Translator* translator;
  using Mask = SumsetMask;

  Mask empty() const { return SumsetMask(translator->group().order()); }
  Mask extend(const Mask& m, Flat g) const {
    Mask out = translator->apply(m, g);
    out.set(g);
    out |= m;
    return out;
  }
  static bool has_zero(const Mask& m) noexcept { return m.test(0); }
  static std::uint32_t popcount(const Mask& m) noexcept { return m.popcount(); }
};

template <class Fn>
decltype(auto) with_kernel(const Translator& T, Fn&& fn) {
  if (T.word_sized()) return fn(WordKernel{&T});
  return fn(WideKernel{&T});
}

/// Depth-first over strictly increasing nonzero flats, cutting a branch as
/// soon as 0 enters the running subset-sum mask.
template <class Kernel, class Visit>
std::uint64_t subset_dfs(const Kernel& K, Flat n, unsigned k, std::vector<Flat>& chosen,
                         const typename Kernel::Mask& mask, Flat start, Visit& visit) {
  if (chosen.size() == k) {
    visit(std::span<const Flat>(chosen), Kernel::popcount(mask));
    return 1;
  }
  std::uint64_t count = 0;
  const Flat last = n - static_cast<Flat>(k - chosen.size());
  for (Flat g = start; g <= last; ++g) {
    auto next = K.extend(mask, g);
    if (Kernel::has_zero(next)) continue;
    chosen.push_back(g);
    count += subset_dfs(K, n, k, chosen, next, g + 1, visit);
    chosen.pop_back();
  }
  return count;
}

inline void check_k(const GroupSpec& G, unsigned k) {
  if (k < 1 || k + 1 > G.order()) {
    throw Error(ErrorKind::invalid_argument,
                "k=" + std::to_string(k) + " outside [1, " + std::to_string(G.order() - 1) + "]");
  }
}

/// Runs fn(i) for i in [0, count) on `threads` workers pulling from a shared counter.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Visits every zero-sum free k-subset once, in lexicographic order of flat
/// index lists. visit(span<const Flat> subset, uint32_t sigma_size).
template <class Visit>
std::uint64_t enumerate_zsf_subsets(const GroupSpec& G, unsigned k, Visit&& visit) {
  detail::check_k(G, k);
  Translator T(G);
  return detail::with_kernel(T, [&](const auto& K) {
    std::vector<Flat> chosen;
    chosen.reserve(k);
    return detail::subset_dfs(K, G.order(), k, chosen, K.empty(), 1, visit);
  });
}

/// Same as enumerate_zsf_subsets restricted to subsets whose smallest element is `root`.
template <class Visit>
std::uint64_t enumerate_zsf_subsets_rooted(const GroupSpec& G, const Translator& T, unsigned k, Flat root,
                                           Visit&& visit) {
  return detail::with_kernel(T, [&](const auto& K) -> std::uint64_t {
    auto mask = K.extend(K.empty(), root);
    if (K.has_zero(mask)) return 0;
    std::vector<Flat> chosen{root};
    chosen.reserve(k);
    return detail::subset_dfs(K, G.order(), k, chosen, mask, root + 1, visit);
  });
}

/// Visits every zero-sum free sequence (non-decreasing flat lists of nonzero
/// elements) whose length lies in [min_len, max_len].
/// visit(span<const Flat> sequence, uint32_t max_multiplicity, uint32_t sigma_size).
template <class Visit>
std::uint64_t enumerate_zsf_sequences(const GroupSpec& G, unsigned min_len, unsigned max_len, Visit&& visit) {
  Translator T(G);
  return detail::with_kernel(T, [&](const auto& K) {
    using Kernel = std::decay_t<decltype(K)>;
    std::vector<Flat> seq;
    std::vector<std::uint32_t> run;  // multiplicity of seq.back() up to each depth
    std::vector<std::uint32_t> best;
    std::uint64_t visited = 0;
    auto rec = [&](auto&& self, const typename Kernel::Mask& mask, Flat start) -> void {
      if (seq.size() >= min_len) {
        visit(std::span<const Flat>(seq), best.back(), Kernel::popcount(mask));
        ++visited;
      }
      if (seq.size() == max_len) return;
      for (Flat g = start; g < G.order(); ++g) {
        auto next = K.extend(mask, g);
        if (Kernel::has_zero(next)) continue;
        const std::uint32_t r = (!seq.empty() && seq.back() == g) ? run.back() + 1 : 1;
        seq.push_back(g);
        run.push_back(r);
        best.push_back(std::max(r, best.empty() ? 0U : best.back()));
        self(self, next, g);
        seq.pop_back();
        run.pop_back();
        best.pop_back();
      }
    };
    if (max_len == 0) return visited;
    for (Flat g = 1; g < G.order(); ++g) {
      auto mask = K.extend(K.empty(), g);
      if (Kernel::has_zero(mask)) continue;
      seq = {g};
      run = {1};
      best = {1};
      rec(rec, mask, g);
    }
    return visited;
  });
}

// ---------------------------------------------------------------------------
// Reports

struct Witness {
  std::vector<Flat> elements;
  std::vector<FormMatch> forms;
};

struct SearchOptions {
  unsigned threads = 1;
  bool fast_cyclic = false;
  bool match_forms = true;
};

struct SearchReport {
  SearchReport(GroupSpec g, unsigned size) : group(std::move(g)), k(size) {}

  GroupSpec group;
  unsigned k = 0;
  std::uint64_t zsf_count = 0;
  std::optional<std::uint32_t> min_sigma;
  std::vector<Witness> witnesses;
  double elapsed_ms = 0;
  unsigned shards = 1;
  bool fast_cyclic = false;

  /// floor(k^2/2) + 1, tabulated for comparison only.
  std::uint32_t conjectured() const noexcept { return k * k / 2 + 1; }
};

struct Counterexample {
  std::string group;
  std::string subset;
  std::string details;
};

struct VerifyOutcome {
  VerifyOutcome() = default;
  VerifyOutcome(std::string claim_id, std::string group_text)
      : claim(std::move(claim_id)), group(std::move(group_text)) {}

  std::string claim;
  std::string group;
  bool passed = true;
  std::uint64_t checked = 0;
  std::vector<std::pair<std::string, std::int64_t>> stats;
  std::optional<Counterexample> counterexample;
  double elapsed_ms = 0;

  void fail(const GroupSpec& G, std::string subset, std::string details) {
    if (!passed) return;
    passed = false;
    counterexample = Counterexample{G.to_string(), std::move(subset), std::move(details)};
  }

  void bump(const std::string& key, std::int64_t by = 1) {
    for (auto& [k, v] : stats) {
      if (k == key) {
        v += by;
        return;
      }
    }
    stats.emplace_back(key, by);
  }

  std::int64_t stat(const std::string& key) const {
    for (const auto& [k, v] : stats) {
      if (k == key) return v;
    }
    return 0;
  }
};

namespace detail {

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Units of Z_n other than 1.
inline std::vector<std::uint32_t> nontrivial_units(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t u = 2; u < n; ++u) {
    if (std::gcd(u, n) == 1) out.push_back(u);
  }
  return out;
}

/// Lexicographically least member of its unit-multiplier orbit?
/// On success fills `orbit` with the distinct sorted images (including S).
inline bool canonical_under_units(std::span<const Flat> S, std::uint32_t n, std::span<const std::uint32_t> units,
                                  std::vector<std::vector<Flat>>& orbit) {
  orbit.clear();
  orbit.emplace_back(S.begin(), S.end());
  std::vector<Flat> image(S.size());
  for (auto u : units) {
    for (std::size_t i = 0; i < S.size(); ++i) {
      image[i] = static_cast<Flat>(static_cast<std::uint64_t>(S[i]) * u % n);
    }
    std::sort(image.begin(), image.end());
    if (std::lexicographical_compare(image.begin(), image.end(), S.begin(), S.end())) return false;
    orbit.push_back(image);
  }
  std::sort(orbit.begin(), orbit.end());
  orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
  return true;
}

struct RootResult {
  std::uint64_t count = 0;
  std::optional<std::uint32_t> best;
  std::vector<std::vector<Flat>> witnesses;

  void offer(std::span<const Flat> S, std::uint32_t sigma) {
    if (!best || sigma < *best) {
      best = sigma;
      witnesses.clear();
    }
    if (sigma == *best) witnesses.emplace_back(S.begin(), S.end());
  }
};

}  // namespace detail

inline std::vector<FormMatch> match_families(const GroupSpec& G, std::span<const Flat> subset) {
  const auto ids = set_forms_of_size(subset.size());
  if (ids.empty()) return {};
  return match_subset(SubsetSeq(G, subset), std::span<const FormId>(ids));
}

/// Exact minimum of |Sigma(S)| over zero-sum free k-subsets with every witness.
/// The tree is sharded by smallest element; shard results merge min-then-union,
/// and the witness list is sorted, so output does not depend on `threads`.
inline SearchReport min_sigma(const GroupSpec& G, unsigned k, const SearchOptions& options = {}) {
  detail::check_k(G, k);
  detail::Stopwatch clock;
  SearchReport report{G, k};
  report.shards = std::max(1U, options.threads);
  report.fast_cyclic = options.fast_cyclic && G.is_cyclic_form();

  const Flat n = G.order();
  std::vector<Flat> roots;
  for (Flat r = 1; r + k <= n; ++r) {
    // A canonical orbit representative's least element is least among its
    // unit multiples, which forces it to divide n.
    if (report.fast_cyclic && n % r != 0) continue;
    roots.push_back(r);
  }
  const auto units = detail::nontrivial_units(n);
  Translator T(G);
  std::vector<detail::RootResult> results(roots.size());
  detail::parallel_for(roots.size(), report.shards, [&](std::size_t i) {
    auto& out = results[i];
    std::vector<std::vector<Flat>> orbit;
    enumerate_zsf_subsets_rooted(G, T, k, roots[i], [&](std::span<const Flat> S, std::uint32_t sigma) {
      if (!report.fast_cyclic) {
        ++out.count;
        out.offer(S, sigma);
        return;
      }
      if (!detail::canonical_under_units(S, n, units, orbit)) return;
      out.count += orbit.size();
      for (const auto& image : orbit) out.offer(image, sigma);
    });
  });

  for (const auto& r : results) {
    report.zsf_count += r.count;
    if (r.best && (!report.min_sigma || *r.best < *report.min_sigma)) report.min_sigma = r.best;
  }
  std::vector<std::vector<Flat>> witnesses;
  for (auto& r : results) {
    if (r.best && r.best == report.min_sigma) {
      for (auto& w : r.witnesses) witnesses.push_back(std::move(w));
    }
  }
  std::sort(witnesses.begin(), witnesses.end());
  witnesses.erase(std::unique(witnesses.begin(), witnesses.end()), witnesses.end());
  for (auto& w : witnesses) {
    Witness wit{std::move(w), {}};
    if (options.match_forms) wit.forms = match_families(G, wit.elements);
    report.witnesses.push_back(std::move(wit));
  }
  report.elapsed_ms = clock.ms();
  return report;
}

// ---------------------------------------------------------------------------
// Verification

struct ClassificationReport {
  VerifyOutcome outcome;
  std::vector<Witness> witnesses;
  std::vector<std::vector<Flat>> instantiations;
};

/// Both directions of a classification: every zero-sum free k-subset with
/// |Sigma| = target matches some family of size k, and every valid family
/// member in G is such a subset.
inline ClassificationReport classify_extremal(const GroupSpec& G, unsigned k, std::uint32_t target) {
  const bool supported = (k == 6 && target == 19) || (k == 5 && target == 13) || (k == 4 && target == 8);
  if (!supported) {
    throw Error(ErrorKind::invalid_argument, "unsupported (k, target) = (" + std::to_string(k) + ", " +
                                                 std::to_string(target) + "); expected (6,19), (5,13) or (4,8)");
  }
  detail::Stopwatch clock;
  ClassificationReport report;
  auto& outcome = report.outcome;
  outcome.claim = k == 6 ? "thm-main-classify" : k == 5 ? "lemma-s5-classify" : "lemma-s4-classify";
  outcome.group = G.to_string();

  std::vector<std::vector<Flat>> hits;
  if (k + 1 <= G.order()) {
    enumerate_zsf_subsets(G, k, [&](std::span<const Flat> S, std::uint32_t sigma) {
      ++outcome.checked;
      if (sigma == target) hits.emplace_back(S.begin(), S.end());
    });
  }
  for (auto& h : hits) {
    Witness w{std::move(h), {}};
    w.forms = match_families(G, w.elements);
    if (w.forms.empty()) {
      outcome.fail(G, render_subset(G, w.elements), "|Sigma|=" + std::to_string(target) + " but no family matches");
    }
    for (const auto& m : w.forms) outcome.bump("match_" + std::string(to_string(m.form)));
    report.witnesses.push_back(std::move(w));
  }

  for (auto id : set_forms_of_size(k)) {
    auto members = valid_instantiations(id, G);
    outcome.bump("valid_" + std::string(to_string(id)), static_cast<std::int64_t>(members.size()));
    for (auto& m : members) report.instantiations.push_back(std::move(m));
  }
  std::sort(report.instantiations.begin(), report.instantiations.end());
  report.instantiations.erase(std::unique(report.instantiations.begin(), report.instantiations.end()),
                              report.instantiations.end());
  for (const auto& inst : report.instantiations) {
    const bool found = std::binary_search(
        report.witnesses.begin(), report.witnesses.end(), inst,
        [](const auto& a, const auto& b) {
          auto elems = [](const auto& x) -> const std::vector<Flat>& {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Witness>) {
              return x.elements;
            } else {
              return x;
            }
          };
          return elems(a) < elems(b);
        });
    if (!found) {
      const auto sigma = sigma_set(SubsetSeq(G, inst)).popcount();
      outcome.fail(G, render_subset(G, inst),
                   "valid family member has |Sigma|=" + std::to_string(sigma) + ", expected " + std::to_string(target));
    }
  }
  outcome.bump("witnesses", static_cast<std::int64_t>(report.witnesses.size()));
  outcome.bump("instantiations", static_cast<std::int64_t>(report.instantiations.size()));
  outcome.elapsed_ms = clock.ms();
  return report;
}

namespace detail {

inline bool has_order_two(const GroupSpec& G, std::span<const Flat> S) {
  return std::any_of(S.begin(), S.end(), [&](Flat x) { return G.order_of(x) == 2; });
}

}  // namespace detail

/// Lower bounds on |Sigma(S)| over every zero-sum free k-subset, k in [k_min, k_max].
/// One outcome per claim; claims that never apply are still reported with checked = 0.
inline std::vector<VerifyOutcome> verify_lower_bounds(const GroupSpec& G, unsigned k_min, unsigned k_max) {
  if (k_min < 1 || k_max > 7 || k_min > k_max) {
    throw Error(ErrorKind::invalid_argument, "k range must lie in [1,7]");
  }
  detail::Stopwatch clock;
  const bool odd = G.order() % 2 == 1;
  std::vector<VerifyOutcome> out;
  out.reserve(7);
  auto make = [&](std::string claim) -> VerifyOutcome& {
    out.push_back(VerifyOutcome{std::move(claim), G.to_string()});
    return out.back();
  };
  auto& smallset_r = make("lemma-smallset");
  auto& order2_r = make("lemma-order2");
  auto& olson_r = make("olson");
  auto& six_r = make("thm-main-lower");
  auto& seven_r = make("bound-k7");
  VerifyOutcome* odd20 = odd ? &make("cor-odd-20") : nullptr;
  VerifyOutcome* odd14 = odd ? &make("cor-odd-14") : nullptr;

  for (unsigned k = k_min; k <= k_max && k + 1 <= G.order(); ++k) {
    enumerate_zsf_subsets(G, k, [&](std::span<const Flat> S, std::uint32_t sigma) {
      auto text = [&] { return render_subset(G, S); };
      auto need = [&](VerifyOutcome& o, std::uint32_t bound, const char* what) {
        ++o.checked;
        if (sigma < bound) {
          o.fail(G, text(), "|Sigma|=" + std::to_string(sigma) + " < " + std::to_string(bound) + " (" + what + ")");
        }
      };
      const bool two = detail::has_order_two(G, S);
      if (k <= 2) {
        ++smallset_r.checked;
        if (sigma != 2 * k - 1) {
          smallset_r.fail(G, text(), "|Sigma|=" + std::to_string(sigma) + " != 2|S|-1");
        }
      } else if (k == 3) {
        need(smallset_r, two ? 5 : 6, two ? "|S|=3" : "|S|=3 without order-2 elements");
      } else {
        need(smallset_r, 2 * k, "|S|>=4");
        if (k == 5) need(smallset_r, 13, "|S|=5");
      }
      if (k >= 4 && two) need(order2_r, k * k / 2 + 1, "order-2 element present");
      ++olson_r.checked;
      if (9 * sigma < k * k) olson_r.fail(G, text(), "|Sigma| < |S|^2/9");
      if (k == 6) need(six_r, 19, "|S|=6");
      if (k == 7) need(seven_r, 24, "|S|=7");
      if (odd20 && k == 6) need(*odd20, 20, "odd |G|, |S|=6");
      if (odd14 && k == 5) need(*odd14, 14, "odd |G|, |S|=5");
    });
  }
  for (auto& o : out) o.elapsed_ms = clock.ms();
  return out;
}

/// |Sigma(S)| >= sum |Sigma(S_i)| over every set partition of every zero-sum
/// free subset of size 2..k_max into at least two blocks.
inline VerifyOutcome verify_additivity(const GroupSpec& G, unsigned k_max) {
  detail::Stopwatch clock;
  VerifyOutcome o{"lemma-additivity", G.to_string()};
  Translator T(G);
  detail::with_kernel(T, [&](const auto& K) {
    using Kernel = std::decay_t<decltype(K)>;
    for (unsigned k = 2; k <= k_max && k + 1 <= G.order(); ++k) {
      enumerate_zsf_subsets(G, k, [&](std::span<const Flat> S, std::uint32_t sigma) {
        const std::uint32_t subsets = 1U << k;
        std::vector<std::uint32_t> pop(subsets, 0);
        std::vector<typename Kernel::Mask> masks(subsets, K.empty());
        for (std::uint32_t m = 1; m < subsets; ++m) {
          const std::uint32_t low = m & (~m + 1);
          masks[m] = K.extend(masks[m ^ low], S[std::countr_zero(low)]);
          pop[m] = Kernel::popcount(masks[m]);
        }
        // Restricted growth strings enumerate set partitions of positions.
        std::vector<std::uint32_t> block(k, 0);
        std::vector<std::uint32_t> blocks;
        auto rec = [&](auto&& self, unsigned i, std::uint32_t used) -> void {
          if (i == k) {
            if (used < 2) return;
            blocks.assign(used, 0);
            for (unsigned j = 0; j < k; ++j) blocks[block[j]] |= 1U << j;
            std::uint32_t total = 0;
            for (auto b : blocks) total += pop[b];
            ++o.checked;
            if (total > sigma) {
              o.fail(G, render_subset(G, S),
                     "block sigma sizes sum to " + std::to_string(total) + " > |Sigma|=" + std::to_string(sigma));
            }
            return;
          }
          for (std::uint32_t b = 0; b <= used && b < k; ++b) {
            block[i] = b;
            self(self, i + 1, std::max(used, b + 1));
          }
        };
        rec(rec, 0, 0);
      });
    }
  });
  o.elapsed_ms = clock.ms();
  return o;
}

/// Both duplicate-sum exclusions:
/// (1) for zero-sum free S, nonempty W | S and any U (empty or one element of G),
///     sigma(U W) != sigma(U);
/// (2) subsets T1 = C + a, T2 = C + b (a != b, |C| <= 2) have different sums.
inline VerifyOutcome verify_duplicate_sums(const GroupSpec& G, unsigned k_max) {
  detail::Stopwatch clock;
  VerifyOutcome o{"lemma-duplicate-sums", G.to_string()};
  const Flat n = G.order();
  for (unsigned k = 1; k <= k_max && k + 1 <= n; ++k) {
    enumerate_zsf_subsets(G, k, [&](std::span<const Flat> S, std::uint32_t) {
      for (std::uint32_t w = 1; w < (1U << k); ++w) {
        Flat sw = 0;
        for (unsigned j = 0; j < k; ++j) {
          if (w >> j & 1U) sw = G.add_flat(sw, S[j]);
        }
        // U = empty, then U = {u} for each u.
        for (Flat u = 0; u <= n; ++u) {
          const Flat su = u == n ? 0 : u;
          const Flat st = G.add_flat(su, sw);
          ++o.checked;
          if (st == su) {
            o.fail(G, render_subset(G, S), "sigma(UW) == sigma(U) with W mask " + std::to_string(w));
          }
        }
      }
    });
  }
  o.bump("clause1_checks", static_cast<std::int64_t>(o.checked));
  std::uint64_t clause2 = 0;
  auto pair_check = [&](std::span<const Flat> C, Flat sc) {
    for (Flat a = 0; a < n; ++a) {
      if (std::find(C.begin(), C.end(), a) != C.end()) continue;
      for (Flat b = a + 1; b < n; ++b) {
        if (std::find(C.begin(), C.end(), b) != C.end()) continue;
        ++clause2;
        if (G.add_flat(sc, a) == G.add_flat(sc, b)) {
          std::vector<Flat> t1(C.begin(), C.end());
          t1.push_back(a);
          o.fail(G, render_subset(G, t1), "equal sums for T1, T2 differing in one element");
        }
      }
    }
  };
  pair_check({}, 0);
  for (Flat c1 = 0; c1 < n; ++c1) {
    const Flat one[] = {c1};
    pair_check(one, c1);
    for (Flat c2 = c1 + 1; c2 < n; ++c2) {
      const Flat two[] = {c1, c2};
      pair_check(two, G.add_flat(c1, c2));
    }
  }
  o.checked += clause2;
  o.bump("clause2_checks", static_cast<std::int64_t>(clause2));
  o.elapsed_ms = clock.ms();
  return o;
}

struct QuotientSides {
  std::uint64_t lhs = 0;      // |Sigma(S1 S2)|
  std::uint64_t s1 = 0;       // |Sigma(S1)|
  std::uint64_t q = 0;        // nonzero cosets hit by Sigma(phi(S2))
  std::uint64_t literal = 0;  // all cosets hit, identity included

  std::uint64_t rhs() const noexcept { return (1 + q) * s1 + q; }
  std::uint64_t literal_rhs() const noexcept { return (1 + literal) * s1 + literal; }
};

/// Both sides of the quotient bound for one split, H = <supp(S1)>. An empty S2
/// has an empty image.
inline QuotientSides quotient_bound_sides(const GroupSpec& G, std::span<const Flat> S1, std::span<const Flat> S2,
                                          const Translator& T) {
  if (S1.empty()) throw Error(ErrorKind::empty_input, "S1 must be nonempty");
  const auto H = subgroup_closure(S1, G);
  const auto phi = quotient_labeling(H, G);
  std::vector<char> image(phi.coset_count(), 0);
  for (std::uint32_t m = 1; m < (1U << S2.size()); ++m) {
    Flat s = 0;
    for (std::size_t j = 0; j < S2.size(); ++j) {
      if (m >> j & 1U) s = G.add_flat(s, S2[j]);
    }
    image[phi(s)] = 1;
  }
  QuotientSides out;
  out.literal = static_cast<std::uint64_t>(std::count(image.begin(), image.end(), 1));
  out.q = out.literal - (image[phi.zero_label] ? 1 : 0);
  std::vector<Flat> all(S1.begin(), S1.end());
  all.insert(all.end(), S2.begin(), S2.end());
  out.lhs = sigma_set(SubsetSeq(G, all), T).popcount();
  out.s1 = sigma_set(SubsetSeq(G, S1), T).popcount();
  return out;
}

inline QuotientSides quotient_bound_sides(const GroupSpec& G, std::span<const Flat> S1, std::span<const Flat> S2) {
  return quotient_bound_sides(G, S1, S2, Translator(G));
}

/// Quotient bound |Sigma(S)| >= (1 + q)|Sigma(S1)| + q with q the number of
/// nonzero cosets in Sigma(phi(S2)), H = <supp(S1)>, over random zero-sum free
/// S (|S| <= 6) and random splits with S1 nonempty. Literal counting (identity
/// coset included) is reported alongside as `literal_violations`.
inline VerifyOutcome verify_quotient_bound(const GroupSpec& G, std::uint64_t trials, std::uint64_t seed = 1) {
  if (trials < 1) throw Error(ErrorKind::invalid_argument, "trials must be at least 1");
  detail::Stopwatch clock;
  VerifyOutcome o{"lemma-quotient", G.to_string()};
  constexpr std::size_t kPoolCap = 400'000;
  std::vector<std::vector<Flat>> pool;
  for (unsigned k = 1; k <= 6 && k + 1 <= G.order() && pool.size() < kPoolCap; ++k) {
    enumerate_zsf_subsets(G, k, [&](std::span<const Flat> S, std::uint32_t) {
      if (pool.size() < kPoolCap) pool.emplace_back(S.begin(), S.end());
    });
  }
  if (pool.empty()) {
    o.bump("trials", 0);
    return o;
  }
  std::mt19937_64 rng(seed);
  Translator T(G);
  std::uint64_t zero_in_image = 0, literal_violations = 0, equality = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto& S = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    std::vector<Flat> S1, S2;
    do {
      S1.clear();
      S2.clear();
      for (Flat x : S) (rng() & 1U ? S1 : S2).push_back(x);
    } while (S1.empty());

    const auto sides = quotient_bound_sides(G, S1, S2, T);
    const std::uint64_t lhs = sides.lhs, rhs = sides.rhs();
    const bool has_zero = sides.literal > sides.q;
    ++o.checked;
    zero_in_image += has_zero;
    equality += lhs == rhs;
    if (sides.literal_rhs() > lhs) ++literal_violations;
    if (lhs < rhs) {
      o.fail(G, render_subset(G, S),
             "S1=" + render_subset(G, S1) + " |Sigma(S)|=" + std::to_string(lhs) + " < " + std::to_string(rhs));
    }
  }
  o.bump("trials", static_cast<std::int64_t>(trials));
  o.bump("zero_in_image", static_cast<std::int64_t>(zero_in_image));
  o.bump("literal_violations", static_cast<std::int64_t>(literal_violations));
  o.bump("equality", static_cast<std::int64_t>(equality));
  o.elapsed_ms = clock.ms();
  return o;
}

/// Class-size bounds and class-shape coverage over every zero-sum free 6-subset
/// whose elements all have order >= 3:
///  - |[x_i]| <= 4 and every class has at most 5 members;
///  - a size-4 class holding a singleton matches some b-shape;
///  - a size-5 class matches some c-shape, directly or through its dual class;
///  - when |Sigma| = 19, no class has shape b2 or c7.
inline VerifyOutcome verify_class_shapes(const GroupSpec& G) {
  detail::Stopwatch clock;
  VerifyOutcome o{"lemma-class-shapes", G.to_string()};
  if (G.order() < 7) return o;
  enumerate_zsf_subsets(G, 6, [&](std::span<const Flat> S, std::uint32_t sigma) {
    if (std::any_of(S.begin(), S.end(), [&](Flat x) { return G.order_of(x) < 3; })) {
      o.bump("skipped_order_two");
      return;
    }
    ++o.checked;
    const auto P = partition_classes(SubsetSeq(G, S));
    const auto text = [&] { return render_subset(G, S); };
    for (const auto& [sum, members] : P.classes()) {
      const bool singleton = std::any_of(members.begin(), members.end(),
                                         [](std::uint32_t m) { return std::has_single_bit(m); });
      if (members.size() > 5) o.fail(G, text(), "class of " + G.render(sum) + " has " + std::to_string(members.size()) + " members");
      if (singleton && members.size() > 4) o.fail(G, text(), "singleton class [" + G.render(sum) + "] has more than 4 members");
      if (members.size() != 4 && members.size() != 5) continue;

      const auto direct = class_shape_match(P, sum);
      for (const auto& m : direct) {
        if (sigma == 19 && (m.shape == FormId::B2 || m.shape == FormId::C7)) {
          o.fail(G, text(), std::string(to_string(m.shape)) + " class at sum " + G.render(sum) + " with |Sigma|=19");
        }
      }
      std::set<FormId> seen;
      for (const auto& m : direct) seen.insert(m.shape);
      for (auto s : seen) o.bump(std::string(to_string(s)));

      if (members.size() == 4 && singleton) {
        if (direct.empty()) o.fail(G, text(), "size-4 singleton class at " + G.render(sum) + " matches no b-shape");
      }
      if (members.size() == 5 && direct.empty()) {
        const Flat dual_sum = G.sub_flat(P.total_sum(), sum);
        if (class_shape_match(P, dual_sum).empty()) {
          o.fail(G, text(), "size-5 class at " + G.render(sum) + " matches no c-shape, nor does its dual");
        } else {
          o.bump("c_via_dual");
        }
      }
    }
  });
  o.elapsed_ms = clock.ms();
  return o;
}

/// Every zero-sum free sequence over Z_n (n odd, 9..21) of length at least
/// ceil((6n + 26) / 20) has h(S) >= ceil((6|S| - n + 1) / 16).
inline VerifyOutcome verify_multiplicity_bound(std::uint32_t n) {
  if (n % 2 == 0 || n < 9 || n > 21) {
    throw Error(ErrorKind::invalid_argument, "n must be odd and in [9, 21], got " + std::to_string(n));
  }
  detail::Stopwatch clock;
  const GroupSpec G({n});
  VerifyOutcome o{"cor-multiplicity", G.to_string()};
  const unsigned threshold = (6 * n + 26 + 19) / 20;
  std::uint32_t longest = 0;
  enumerate_zsf_sequences(G, threshold, n - 1, [&](std::span<const Flat> seq, std::uint32_t h, std::uint32_t) {
    ++o.checked;
    const auto len = static_cast<std::int64_t>(seq.size());
    longest = std::max<std::uint32_t>(longest, static_cast<std::uint32_t>(seq.size()));
    if (16 * static_cast<std::int64_t>(h) < 6 * len - static_cast<std::int64_t>(n) + 1) {
      o.fail(G, SubsetSeq(G, seq).to_string(), "h(S)=" + std::to_string(h) + " below bound at |S|=" + std::to_string(len));
    }
  });
  o.bump("threshold_length", threshold);
  o.bump("longest_sequence", longest);
  o.elapsed_ms = clock.ms();
  return o;
}

}  // namespace zsf
