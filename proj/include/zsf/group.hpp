#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zsf/error.hpp"

namespace zsf {

using Flat = std::uint32_t;

inline constexpr std::uint64_t kDefaultMaxOrder = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kHardMaxOrder = std::uint64_t{1} << 31;

/// One group element: residue vector plus its flat mixed-radix index.
struct Element {
  std::vector<std::uint32_t> residues;
  Flat flat = 0;

  friend bool operator==(const Element&, const Element&) = default;
};

/// A finite abelian group Z_{n_1} x ... x Z_{n_m}, kept in the factor order
/// the user gave. Factor 0 is the most significant mixed-radix digit.
class GroupSpec {
 public:
  explicit GroupSpec(std::vector<std::uint32_t> moduli,
                     std::uint64_t max_order = kDefaultMaxOrder)
      : moduli_(std::move(moduli)) {
    if (moduli_.empty()) throw Error(ErrorKind::invalid_argument, "group has no factors");
    std::uint64_t order = 1;
    for (auto n : moduli_) {
      if (n < 2) {
        throw Error(ErrorKind::invalid_argument,
                    "modulus " + std::to_string(n) + " is below 2");
      }
      order *= n;
      if (order > max_order || order > kHardMaxOrder) {
        throw Error(ErrorKind::capacity,
                    "group order exceeds maximum " + std::to_string(max_order));
      }
    }
    order_ = static_cast<Flat>(order);
    strides_.assign(moduli_.size(), 1);
    for (std::size_t i = moduli_.size() - 1; i-- > 0;) {
      strides_[i] = strides_[i + 1] * moduli_[i + 1];
    }
  }

  const std::vector<std::uint32_t>& moduli() const noexcept { return moduli_; }
  const std::vector<std::uint32_t>& strides() const noexcept { return strides_; }
  Flat order() const noexcept { return order_; }
  std::size_t rank() const noexcept { return moduli_.size(); }
  bool is_cyclic_form() const noexcept { return moduli_.size() == 1; }

  std::uint32_t digit(Flat flat, std::size_t factor) const noexcept {
    return (flat / strides_[factor]) % moduli_[factor];
  }

  Flat add_flat(Flat a, Flat b) const noexcept {
    if (is_cyclic_form()) {
      Flat s = a + b;
      return s >= order_ ? s - order_ : s;
    }
    Flat out = 0;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
      std::uint32_t d = digit(a, i) + digit(b, i);
      if (d >= moduli_[i]) d -= moduli_[i];
      out += d * strides_[i];
    }
    return out;
  }

  Flat neg_flat(Flat a) const noexcept {
    Flat out = 0;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
      std::uint32_t d = digit(a, i);
      out += (d == 0 ? 0 : moduli_[i] - d) * strides_[i];
    }
    return out;
  }

  Flat sub_flat(Flat a, Flat b) const noexcept { return add_flat(a, neg_flat(b)); }

  Flat mul_flat(std::int64_t k, Flat a) const noexcept {
    Flat out = 0;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
      const auto n = static_cast<std::int64_t>(moduli_[i]);
      std::int64_t d = (k % n) * static_cast<std::int64_t>(digit(a, i)) % n;
      if (d < 0) d += n;
      out += static_cast<Flat>(d) * strides_[i];
    }
    return out;
  }

  /// lcm over factors of n_i / gcd(residue_i, n_i).
  std::uint64_t order_of(Flat a) const noexcept {
    std::uint64_t ord = 1;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
      const std::uint64_t n = moduli_[i];
      ord = std::lcm(ord, n / std::gcd<std::uint64_t>(digit(a, i), n));
    }
    return ord;
  }

  Element element(Flat flat) const {
    if (flat >= order_) {
      throw Error(ErrorKind::invalid_argument,
                  "flat index " + std::to_string(flat) + " out of range");
    }
    Element e;
    e.flat = flat;
    e.residues.resize(moduli_.size());
    for (std::size_t i = 0; i < moduli_.size(); ++i) e.residues[i] = digit(flat, i);
    return e;
  }

  /// Builds an element from arbitrary integer residues, reducing each mod n_i.
  Element element(std::span<const std::int64_t> residues) const {
    if (residues.size() != moduli_.size()) {
      throw Error(ErrorKind::invalid_argument, "residue count does not match group rank");
    }
    Flat flat = 0;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
      const auto n = static_cast<std::int64_t>(moduli_[i]);
      std::int64_t r = residues[i] % n;
      if (r < 0) r += n;
      flat += static_cast<Flat>(r) * strides_[i];
    }
    return element(flat);
  }

  Element identity() const { return element(Flat{0}); }

  /// `Z20`, `Z2xZ10`.
  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
      if (i) out += 'x';
      out += 'Z' + std::to_string(moduli_[i]);
    }
    return out;
  }

  /// Bare integer for single-factor groups, `(a,b)` otherwise.
  std::string render(Flat flat) const {
    if (is_cyclic_form()) return std::to_string(flat);
    std::string out = "(";
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(digit(flat, i));
    }
    return out + ")";
  }

  /// Inverse of render(). Also accepts a bare integer for single-factor groups
  /// and tolerates surrounding whitespace.
  Flat parse_element(std::string_view text) const {
    auto trim = [](std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
      return s;
    };
    text = trim(text);
    if (!text.empty() && text.front() == '(') {
      if (text.back() != ')') throw Error(ErrorKind::parse, "unbalanced element '" + std::string(text) + "'");
      text = text.substr(1, text.size() - 2);
    }
    std::vector<std::int64_t> residues;
    std::size_t pos = 0;
    while (true) {
      auto comma = text.find(',', pos);
      auto piece = trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
      if (piece.empty() || ec != std::errc{} || ptr != piece.data() + piece.size()) {
        throw Error(ErrorKind::parse, "bad residue '" + std::string(piece) + "'");
      }
      residues.push_back(v);
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (residues.size() != moduli_.size()) {
      throw Error(ErrorKind::parse, "element '" + std::string(text) + "' has wrong number of residues");
    }
    return element(residues).flat;
  }

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) { return a.moduli_ == b.moduli_; }

 private:
  std::vector<std::uint32_t> moduli_;
  std::vector<std::uint32_t> strides_;
  Flat order_ = 0;
};

/// Parses `Z<n>` factors joined by `x` (or U+00D7), case-insensitive. No normalization.
inline GroupSpec parse_group(std::string_view text, std::uint64_t max_order = kDefaultMaxOrder) {
  std::vector<std::uint32_t> moduli;
  const std::string original(text);
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorKind::parse, "bad group spec '" + original + "': " + why);
  };
  if (text.empty()) fail("empty");
  while (true) {
    if (i >= text.size() || (text[i] != 'Z' && text[i] != 'z')) fail("expected 'Z'");
    ++i;
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i) fail("expected modulus");
    std::uint64_t n = 0;
    auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + i, n);
    if (ec != std::errc{} || n > kHardMaxOrder) throw Error(ErrorKind::capacity, "modulus too large in '" + original + "'");
    if (n < 2) fail("modulus " + std::to_string(n) + " is below 2");
    moduli.push_back(static_cast<std::uint32_t>(n));
    if (i == text.size()) break;
    if (text.substr(i, 2) == "\u00d7") {
      i += 2;
    } else if (text[i] == 'x' || text[i] == 'X') {
      ++i;
    } else {
      fail("expected 'x'");
    }
  }
  return GroupSpec(std::move(moduli), max_order);
}

inline Element add(const Element& g, const Element& h, const GroupSpec& G) {
  return G.element(G.add_flat(g.flat, h.flat));
}

inline Element neg(const Element& g, const GroupSpec& G) { return G.element(G.neg_flat(g.flat)); }

inline Element scalar_mul(std::int64_t k, const Element& g, const GroupSpec& G) {
  return G.element(G.mul_flat(k, g.flat));
}

inline std::uint64_t element_order(const Element& g, const GroupSpec& G) { return G.order_of(g.flat); }

/// Smallest subgroup containing `gens`, as a sorted flat-index list (BFS closure).
inline std::vector<Flat> subgroup_closure(std::span<const Flat> gens, const GroupSpec& G) {
  std::vector<char> seen(G.order(), 0);
  std::vector<Flat> members{0};
  seen[0] = 1;
  for (std::size_t head = 0; head < members.size(); ++head) {
    const Flat x = members[head];
    for (Flat g : gens) {
      const Flat y = G.add_flat(x, g);
      if (!seen[y]) {
        seen[y] = 1;
        members.push_back(y);
      }
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

inline std::vector<Flat> subgroup_closure(std::span<const Element> gens, const GroupSpec& G) {
  std::vector<Flat> flats;
  flats.reserve(gens.size());
  for (const auto& g : gens) flats.push_back(g.flat);
  return subgroup_closure(std::span<const Flat>(flats), G);
}

/// Realizes G -> G/H. Coset ids are assigned in order of each coset's smallest
/// flat index, so the subgroup itself is always coset 0.
struct CosetLabeling {
  std::vector<Flat> subgroup;
  std::vector<std::uint32_t> labels;
  std::vector<Flat> representatives;
  std::uint32_t zero_label = 0;

  std::uint32_t coset_count() const noexcept { return static_cast<std::uint32_t>(representatives.size()); }
  std::uint32_t operator()(Flat g) const { return labels[g]; }
  std::uint32_t add_labels(std::uint32_t a, std::uint32_t b, const GroupSpec& G) const {
    return labels[G.add_flat(representatives[a], representatives[b])];
  }
};

inline CosetLabeling quotient_labeling(std::span<const Flat> H, const GroupSpec& G) {
  const Flat n = G.order();
  std::vector<char> in_h(n, 0);
  for (Flat h : H) {
    if (h >= n) throw Error(ErrorKind::invalid_subgroup, "subgroup element out of range");
    if (in_h[h]) throw Error(ErrorKind::invalid_subgroup, "subgroup list has duplicates");
    in_h[h] = 1;
  }
  if (H.empty() || !in_h[0]) throw Error(ErrorKind::invalid_subgroup, "subgroup must contain the identity");

  // H is a subgroup iff it equals the closure of a generating set drawn from it.
  std::vector<Flat> gens;
  std::vector<Flat> closure{0};
  std::vector<char> in_closure(n, 0);
  in_closure[0] = 1;
  for (Flat h : H) {
    if (in_closure[h]) continue;
    gens.push_back(h);
    for (std::size_t head = 0; head < closure.size(); ++head) {
      for (Flat g : gens) {
        const Flat y = G.add_flat(closure[head], g);
        if (!in_closure[y]) {
          if (!in_h[y]) throw Error(ErrorKind::invalid_subgroup, "element set is not closed under addition");
          in_closure[y] = 1;
          closure.push_back(y);
        }
      }
    }
  }

  CosetLabeling out;
  out.subgroup.assign(H.begin(), H.end());
  std::sort(out.subgroup.begin(), out.subgroup.end());
  constexpr auto unset = static_cast<std::uint32_t>(-1);
  out.labels.assign(n, unset);
  for (Flat g = 0; g < n; ++g) {
    if (out.labels[g] != unset) continue;
    const auto id = static_cast<std::uint32_t>(out.representatives.size());
    out.representatives.push_back(g);
    for (Flat h : out.subgroup) out.labels[G.add_flat(g, h)] = id;
  }
  out.zero_label = out.labels[0];
  return out;
}

}  // namespace zsf
