#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zsf/error.hpp"
#include "zsf/group.hpp"
#include "zsf/sumset.hpp"

namespace zsf {

// Set families: S6_* are the five |S|=6, |Sigma|=19 families, S5_* the two
// |S|=5, |Sigma|=13 families, S4_I the |S|=4, |Sigma|=8 family.
// B*/C* are the equal-sum class shapes of a zero-sum free 6-subset.
enum class FormId {
  S6_I, S6_II, S6_III, S6_IV, S6_V,
  S5_I, S5_II,
  S4_I,
  B1, B2, B3, B4,
  C1, C2, C3, C4, C5, C6, C7,
};

inline constexpr std::array kSetForms{FormId::S6_I, FormId::S6_II, FormId::S6_III, FormId::S6_IV,
                                      FormId::S6_V, FormId::S5_I,  FormId::S5_II,  FormId::S4_I};
inline constexpr std::array kShapeForms{FormId::B1, FormId::B2, FormId::B3, FormId::B4, FormId::C1, FormId::C2,
                                        FormId::C3, FormId::C4, FormId::C5, FormId::C6, FormId::C7};

constexpr std::string_view to_string(FormId id) noexcept {
  switch (id) {
    case FormId::S6_I: return "s6-i";
    case FormId::S6_II: return "s6-ii";
    case FormId::S6_III: return "s6-iii";
    case FormId::S6_IV: return "s6-iv";
    case FormId::S6_V: return "s6-v";
    case FormId::S5_I: return "s5-i";
    case FormId::S5_II: return "s5-ii";
    case FormId::S4_I: return "s4-i";
    case FormId::B1: return "b1";
    case FormId::B2: return "b2";
    case FormId::B3: return "b3";
    case FormId::B4: return "b4";
    case FormId::C1: return "c1";
    case FormId::C2: return "c2";
    case FormId::C3: return "c3";
    case FormId::C4: return "c4";
    case FormId::C5: return "c5";
    case FormId::C6: return "c6";
    case FormId::C7: return "c7";
  }
  return "?";
}

inline FormId parse_form(std::string_view text) {
  for (auto id : kSetForms) {
    if (to_string(id) == text) return id;
  }
  for (auto id : kShapeForms) {
    if (to_string(id) == text) return id;
  }
  throw Error(ErrorKind::parse, "unknown form '" + std::string(text) + "'");
}

constexpr bool is_set_form(FormId id) noexcept { return id <= FormId::S4_I; }
constexpr bool is_b_shape(FormId id) noexcept { return id >= FormId::B1 && id <= FormId::B4; }
constexpr bool is_c_shape(FormId id) noexcept { return id >= FormId::C1; }

constexpr std::size_t form_arity(FormId id) noexcept {
  switch (id) {
    case FormId::S6_I: return 3;
    case FormId::S6_II:
    case FormId::S6_V:
    case FormId::S5_I: return 2;
    default: return is_set_form(id) ? 1 : 0;
  }
}

constexpr std::size_t form_set_size(FormId id) noexcept {
  if (id <= FormId::S6_V) return 6;
  if (id <= FormId::S5_II) return 5;
  return id == FormId::S4_I ? 4 : 0;
}

/// |Sigma| shared by every member of a set family.
constexpr std::uint32_t form_sigma_size(FormId id) noexcept {
  switch (form_set_size(id)) {
    case 6: return 19;
    case 5: return 13;
    case 4: return 8;
    default: return 0;
  }
}

inline std::vector<FormId> set_forms_of_size(std::size_t k) {
  std::vector<FormId> out;
  for (auto id : kSetForms) {
    if (form_set_size(id) == k) out.push_back(id);
  }
  return out;
}

enum class Rejection { none, constraint, duplicate, not_zero_sum_free };

constexpr std::string_view to_string(Rejection r) noexcept {
  switch (r) {
    case Rejection::none: return "none";
    case Rejection::constraint: return "constraint";
    case Rejection::duplicate: return "duplicate";
    case Rejection::not_zero_sum_free: return "not-zero-sum-free";
  }
  return "?";
}

struct FormChecks {
  bool constraints = false;
  bool distinct = false;
  bool zero_sum_free = false;
  friend bool operator==(const FormChecks&, const FormChecks&) = default;
};

/// Result of building a family member. Checks run in the fixed order
/// constraints, distinctness, zero-sum freeness; `rejection` names the first failure.
struct Instantiation {
  FormId form{};
  std::vector<Flat> params;
  std::vector<Flat> elements;  // family order, before sorting
  FormChecks checks;
  Rejection rejection = Rejection::none;
  std::string detail;

  bool valid() const noexcept { return rejection == Rejection::none; }
  std::vector<Flat> sorted_elements() const {
    auto out = elements;
    std::sort(out.begin(), out.end());
    return out;
  }
};

struct FormMatch {
  FormId form{};
  std::vector<Flat> params;
  FormChecks checks;
  friend bool operator==(const FormMatch&, const FormMatch&) = default;
};

namespace detail {

inline std::vector<Flat> build_family(FormId id, std::span<const Flat> p, const GroupSpec& G) {
  auto A = [&](Flat a, Flat b) { return G.add_flat(a, b); };
  auto M = [&](std::int64_t k, Flat a) { return G.mul_flat(k, a); };
  auto multiples = [&](std::initializer_list<std::int64_t> ks) {
    std::vector<Flat> out;
    for (auto k : ks) out.push_back(M(k, p[0]));
    return out;
  };
  switch (id) {
    case FormId::S6_I: return {p[0], p[1], p[2], A(p[0], p[2]), A(p[1], p[2]), A(A(p[0], p[1]), p[2])};
    case FormId::S6_II: return {p[0], p[1], M(2, p[1]), M(3, p[1]), A(p[0], p[1]), A(p[0], M(2, p[1]))};
    case FormId::S6_III: return multiples({-2, 1, 3, 4, 5, 6});
    case FormId::S6_IV: return multiples({-3, 1, 4, 5, 9, 12});
    case FormId::S6_V:
      return {p[0], p[1], A(p[0], p[1]), A(p[0], M(2, p[1])), A(M(2, p[0]), p[1]), M(4, A(p[0], p[1]))};
    // Fifth term is x1 + 2x2: with ord(x1) = 2 the alternative 2x1 + x2 collapses onto x2.
    case FormId::S5_I: return {p[0], p[1], A(p[0], p[1]), M(2, p[1]), A(p[0], M(2, p[1]))};
    case FormId::S5_II: return multiples({-2, 1, 3, 4, 5});
    case FormId::S4_I: return multiples({1, 3, 4, 7});
    default: break;
  }
  throw Error(ErrorKind::invalid_argument, std::string(to_string(id)) + " is a class shape, not a set family");
}

inline std::optional<std::string> order_mismatch(const GroupSpec& G, Flat x, std::string_view name,
                                                 std::uint64_t want) {
  const auto ord = G.order_of(x);
  if (ord == want) return std::nullopt;
  return "ord(" + std::string(name) + ")=" + std::to_string(ord) + ", required " + std::to_string(want);
}

/// ord(x1) demanded by each set family.
constexpr std::uint64_t required_first_order(FormId id) noexcept {
  switch (id) {
    case FormId::S6_I:
    case FormId::S6_II:
    case FormId::S5_I: return 2;
    case FormId::S6_III:
    case FormId::S6_IV: return 20;
    case FormId::S6_V: return 10;
    case FormId::S5_II: return 14;
    case FormId::S4_I: return 9;
    default: return 0;
  }
}

/// First failed side constraint, if any.
inline std::optional<std::string> side_constraint(FormId id, std::span<const Flat> p, const GroupSpec& G) {
  switch (id) {
    case FormId::S6_I: {
      if (auto m = order_mismatch(G, p[0], "x1", 2)) return m;
      const Flat two = G.mul_flat(2, p[1]);
      if (two != 0 && two != p[0]) return "2x2 is not in <x1>";
      return std::nullopt;
    }
    case FormId::S6_II:
    case FormId::S5_I: return order_mismatch(G, p[0], "x1", 2);
    case FormId::S6_III:
    case FormId::S6_IV: return order_mismatch(G, p[0], "x1", 20);
    case FormId::S6_V: {
      if (G.mul_flat(2, p[0]) != G.mul_flat(2, p[1])) return "2x1 != 2x2";
      if (auto m = order_mismatch(G, p[0], "x1", 10)) return m;
      return order_mismatch(G, p[1], "x2", 10);
    }
    case FormId::S5_II: return order_mismatch(G, p[0], "x1", 14);
    case FormId::S4_I: return order_mismatch(G, p[0], "x", 9);
    default: break;
  }
  return std::nullopt;
}

}  // namespace detail

inline Instantiation instantiate_form(FormId id, std::span<const Flat> params, const GroupSpec& G) {
  if (!is_set_form(id)) {
    throw Error(ErrorKind::invalid_argument, std::string(to_string(id)) + " is a class shape, not a set family");
  }
  if (params.size() != form_arity(id)) {
    throw Error(ErrorKind::invalid_argument, std::string(to_string(id)) + " takes " +
                                                 std::to_string(form_arity(id)) + " parameter(s), got " +
                                                 std::to_string(params.size()));
  }
  for (Flat p : params) {
    if (p >= G.order()) throw Error(ErrorKind::invalid_argument, "parameter out of range");
  }
  Instantiation out;
  out.form = id;
  out.params.assign(params.begin(), params.end());
  out.elements = detail::build_family(id, params, G);

  if (auto why = detail::side_constraint(id, params, G)) {
    out.rejection = Rejection::constraint;
    out.detail = *why;
    return out;
  }
  out.checks.constraints = true;

  auto sorted = out.sorted_elements();
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    out.rejection = Rejection::duplicate;
    out.detail = "elements are not pairwise distinct";
    return out;
  }
  out.checks.distinct = true;

  if (!is_zero_sum_free(SubsetSeq(G, std::span<const Flat>(sorted)))) {
    out.rejection = Rejection::not_zero_sum_free;
    out.detail = "0 is a subset sum";
    return out;
  }
  out.checks.zero_sum_free = true;
  return out;
}

inline Instantiation instantiate_form(FormId id, std::span<const Element> params, const GroupSpec& G) {
  std::vector<Flat> flats;
  for (const auto& e : params) flats.push_back(e.flat);
  return instantiate_form(id, std::span<const Flat>(flats), G);
}

namespace detail {

template <class Fn>
void for_each_tuple(std::size_t arity, std::span<const Flat> first, std::span<const Flat> rest, Fn&& fn) {
  std::vector<Flat> tuple(arity);
  auto rec = [&](auto&& self, std::size_t depth) -> void {
    if (depth == arity) {
      fn(std::span<const Flat>(tuple));
      return;
    }
    for (Flat v : depth == 0 ? first : rest) {
      tuple[depth] = v;
      self(self, depth + 1);
    }
  };
  rec(rec, 0);
}

}  // namespace detail

/// Every parameterization (over the support of S) of the requested families
/// whose validated instantiation equals S as a set. Parameters of every family
/// are themselves members of the family, so sweeping supp(S) is exhaustive.
inline std::vector<FormMatch> match_subset(const SubsetSeq& S, std::span<const FormId> ids) {
  if (!S.is_subset()) throw Error(ErrorKind::invalid_argument, "matching needs a subset");
  for (auto id : ids) {
    if (!is_set_form(id)) {
      throw Error(ErrorKind::invalid_argument, std::string(to_string(id)) + " is not a set family");
    }
    if (form_set_size(id) != S.length()) {
      throw Error(ErrorKind::size_mismatch, std::string(to_string(id)) + " has size " +
                                                std::to_string(form_set_size(id)) + ", subset has size " +
                                                std::to_string(S.length()));
    }
  }
  const GroupSpec& G = S.group();
  const auto support = S.support();
  std::vector<FormMatch> out;
  for (auto id : ids) {
    detail::for_each_tuple(form_arity(id), support, support, [&](std::span<const Flat> params) {
      if (detail::side_constraint(id, params, G)) return;
      auto built = detail::build_family(id, params, G);
      std::sort(built.begin(), built.end());
      if (built != support) return;
      auto inst = instantiate_form(id, params, G);
      if (inst.valid()) out.push_back({id, inst.params, inst.checks});
    });
  }
  return out;
}

inline std::vector<FormMatch> match_subset(const SubsetSeq& S, std::initializer_list<FormId> ids) {
  return match_subset(S, std::span<const FormId>(ids.begin(), ids.size()));
}

/// All valid members of a family in G (sorted element lists, deduplicated),
/// sweeping parameters over the whole group.
inline std::vector<std::vector<Flat>> valid_instantiations(FormId id, const GroupSpec& G) {
  std::vector<Flat> all(G.order());
  std::iota(all.begin(), all.end(), Flat{0});
  std::vector<std::vector<Flat>> out;
  std::vector<Flat> firsts;
  const auto want = detail::required_first_order(id);
  for (Flat x : all) {
    if (G.order_of(x) == want) firsts.push_back(x);
  }
  detail::for_each_tuple(form_arity(id), firsts, all, [&](std::span<const Flat> params) {
    if (detail::side_constraint(id, params, G)) return;
    auto inst = instantiate_form(id, params, G);
    if (inst.valid()) out.push_back(inst.sorted_elements());
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Class shapes

using Permutation6 = std::array<std::uint8_t, 6>;

struct ShapeMatch {
  FormId shape{};
  Permutation6 tau{};  // template position j (0-based) sits at position tau[j] of S
  friend bool operator==(const ShapeMatch&, const ShapeMatch&) = default;
};

namespace detail {

constexpr std::uint32_t pos(std::initializer_list<int> one_based) {
  std::uint32_t m = 0;
  for (int p : one_based) m |= std::uint32_t{1} << (p - 1);
  return m;
}

inline const std::vector<std::pair<FormId, std::vector<std::uint32_t>>>& shape_templates() {
  static const std::vector<std::pair<FormId, std::vector<std::uint32_t>>> templates{
      {FormId::B1, {pos({1}), pos({2, 3, 4, 5}), pos({2, 6}), pos({3, 4, 6})}},
      {FormId::B2, {pos({1}), pos({2, 3, 4, 5}), pos({2, 3, 6}), pos({4, 5, 6})}},
      {FormId::B3, {pos({1}), pos({2, 3}), pos({4, 5}), pos({2, 4, 6})}},
      {FormId::B4, {pos({1}), pos({2, 3, 4}), pos({2, 5, 6}), pos({3, 5})}},
      {FormId::C1, {pos({1, 2}), pos({3, 4}), pos({1, 3, 5, 6}), pos({2, 4, 5, 6}), pos({1, 4, 5})}},
      {FormId::C2, {pos({1, 2}), pos({3, 4}), pos({1, 3, 5, 6}), pos({2, 5, 6}), pos({1, 4, 5})}},
      {FormId::C3, {pos({1, 2}), pos({3, 4}), pos({1, 3, 5, 6}), pos({1, 4, 5}), pos({2, 4, 6})}},
      {FormId::C4, {pos({1, 2}), pos({3, 4}), pos({1, 5, 6}), pos({2, 3, 5}), pos({2, 4, 6})}},
      {FormId::C5, {pos({1, 2}), pos({1, 3, 5, 6}), pos({1, 3, 4}), pos({2, 3, 6}), pos({4, 5, 6})}},
      {FormId::C6, {pos({1, 2}), pos({1, 3, 5, 6}), pos({1, 3, 4}), pos({2, 3, 6}), pos({2, 4, 5})}},
      {FormId::C7, {pos({1, 2}), pos({1, 3, 4}), pos({1, 5, 6}), pos({2, 3, 5}), pos({2, 4, 6})}},
  };
  return templates;
}

inline std::uint32_t permute_mask(std::uint32_t mask, const Permutation6& tau) {
  std::uint32_t out = 0;
  for (std::size_t j = 0; j < 6; ++j) {
    if (mask >> j & 1U) out |= std::uint32_t{1} << tau[j];
  }
  return out;
}

/// Sorted member-mask list -> every (shape, tau) producing it; built once over P_6.
inline const std::map<std::vector<std::uint32_t>, std::vector<ShapeMatch>>& shape_table() {
  static const auto table = [] {
    std::map<std::vector<std::uint32_t>, std::vector<ShapeMatch>> t;
    Permutation6 tau{0, 1, 2, 3, 4, 5};
    do {
      for (const auto& [shape, masks] : shape_templates()) {
        std::vector<std::uint32_t> key;
        for (auto m : masks) key.push_back(permute_mask(m, tau));
        std::sort(key.begin(), key.end());
        t[key].push_back({shape, tau});
      }
    } while (std::next_permutation(tau.begin(), tau.end()));
    return t;
  }();
  return table;
}

}  // namespace detail

/// Template members of a shape under tau, as position masks.
inline std::vector<std::uint32_t> shape_members(FormId shape, const Permutation6& tau) {
  for (const auto& [id, masks] : detail::shape_templates()) {
    if (id != shape) continue;
    std::vector<std::uint32_t> out;
    for (auto m : masks) out.push_back(detail::permute_mask(m, tau));
    std::sort(out.begin(), out.end());
    return out;
  }
  throw Error(ErrorKind::invalid_argument, std::string(to_string(shape)) + " is not a class shape");
}

/// Shape lookup on a raw member list, with no preconditions on the subset.
inline std::vector<ShapeMatch> shapes_of_members(std::vector<std::uint32_t> members) {
  std::sort(members.begin(), members.end());
  const auto& table = detail::shape_table();
  auto it = table.find(members);
  return it == table.end() ? std::vector<ShapeMatch>{} : it->second;
}

/// Every (shape, tau) reproducing the class at `sum`. Size-4 classes are tried
/// against b1..b4 and size-5 classes against c1..c7.
inline std::vector<ShapeMatch> class_shape_match(const ClassPartition& P, Flat sum) {
  const GroupSpec& G = P.group();
  if (P.elements().size() != 6) throw Error(ErrorKind::size_mismatch, "class shapes need a 6-subset");
  if (P.has(0)) throw Error(ErrorKind::invalid_argument, "subset is not zero-sum free");
  for (Flat x : P.elements()) {
    if (G.order_of(x) < 3) {
      throw Error(ErrorKind::invalid_argument, "element " + G.render(x) + " has order below 3");
    }
  }
  const auto& cls = P.at(sum);
  if (cls.size() != 4 && cls.size() != 5) {
    throw Error(ErrorKind::invalid_argument, "class size " + std::to_string(cls.size()) + " is not 4 or 5");
  }
  auto matches = shapes_of_members(cls);
  const bool want_b = cls.size() == 4;
  std::erase_if(matches, [&](const ShapeMatch& m) { return is_b_shape(m.shape) != want_b; });
  return matches;
}

}  // namespace zsf
