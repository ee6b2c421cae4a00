#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zsf/error.hpp"
#include "zsf/group.hpp"

namespace zsf {

/// A |G|-bit set; bit i is set iff the element with flat index i is present.
class SumsetMask {
 public:
  SumsetMask() = default;
  explicit SumsetMask(Flat size) : size_(size), words_((size + 63) / 64, 0) {}

  static SumsetMask from_word(Flat size, std::uint64_t word) {
    SumsetMask m(size);
    if (!m.words_.empty()) m.words_[0] = word;
    m.count_ = static_cast<std::uint32_t>(std::popcount(word));
    return m;
  }

  Flat size() const noexcept { return size_; }
  bool test(Flat i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }

  void set(Flat i) noexcept {
    auto& w = words_[i >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (!(w & bit)) {
      w |= bit;
      ++count_;
    }
  }

  SumsetMask& operator|=(const SumsetMask& other) noexcept {
    count_ = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      words_[i] |= other.words_[i];
      count_ += static_cast<std::uint32_t>(std::popcount(words_[i]));
    }
    return *this;
  }

  std::uint32_t popcount() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  std::vector<Flat> indices() const {
    std::vector<Flat> out;
    out.reserve(count_);
    for (std::size_t w = 0; w < words_.size(); ++w) {
      for (std::uint64_t bits = words_[w]; bits; bits &= bits - 1) {
        out.push_back(static_cast<Flat>(w * 64 + std::countr_zero(bits)));
      }
    }
    return out;
  }

  friend bool operator==(const SumsetMask& a, const SumsetMask& b) noexcept {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

 private:
  Flat size_ = 0;
  std::vector<std::uint64_t> words_;
  std::uint32_t count_ = 0;
};

/// Group translation x -> x + g applied to a whole mask.
///
/// For |G| <= 64 the mask is one machine word and translating by g factors into
/// one masked rotation per nonzero digit of g: bits whose digit stays below
/// n_i shift up by d * stride_i, the rest wrap down by (n_i - d) * stride_i.
/// Cyclic groups reduce to a plain n-bit rotation. Larger groups fall back to
/// moving each set bit through add_flat.
class Translator {
 public:
  explicit Translator(const GroupSpec& G) : group_(G) {
    const Flat n = G.order();
    if (n > 64) return;
    full_ = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    offsets_.resize(G.rank());
    std::size_t total = 0;
    for (std::size_t i = 0; i < G.rank(); ++i) {
      offsets_[i] = total;
      total += G.moduli()[i];
    }
    keep_.assign(total, 0);
    for (std::size_t i = 0; i < G.rank(); ++i) {
      const std::uint32_t mod = G.moduli()[i];
      for (std::uint32_t d = 1; d < mod; ++d) {
        std::uint64_t keep = 0;
        for (Flat f = 0; f < n; ++f) {
          if (G.digit(f, i) < mod - d) keep |= std::uint64_t{1} << f;
        }
        keep_[offsets_[i] + d] = keep;
      }
    }
  }

  const GroupSpec& group() const noexcept { return group_; }
  bool word_sized() const noexcept { return group_.order() <= 64; }
  std::uint64_t full_word() const noexcept { return full_; }

  std::uint64_t apply(std::uint64_t mask, Flat g) const noexcept {
    const auto& mods = group_.moduli();
    const auto& strides = group_.strides();
    for (std::size_t i = 0; i < mods.size(); ++i) {
      const std::uint32_t d = group_.digit(g, i);
      if (d == 0) continue;
      const std::uint64_t keep = keep_[offsets_[i] + d];
      mask = ((mask & keep) << (d * strides[i])) | ((mask & ~keep & full_) >> ((mods[i] - d) * strides[i]));
    }
    return mask;
  }

  SumsetMask apply(const SumsetMask& mask, Flat g) const {
    if (word_sized()) {
      return SumsetMask::from_word(mask.size(), apply(mask.words().empty() ? 0 : mask.words()[0], g));
    }
    SumsetMask out(mask.size());
    for (Flat x : mask.indices()) out.set(group_.add_flat(x, g));
    return out;
  }

 private:
  GroupSpec group_;
  std::uint64_t full_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint64_t> keep_;
};

/// A sequence over G in canonical form: entries sorted by flat index, each with
/// its multiplicity. A subset is the all-multiplicities-one case.
class SubsetSeq {
 public:
  struct Entry {
    Flat flat;
    std::uint32_t multiplicity;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  /// Repeated flats become multiplicities.
  SubsetSeq(const GroupSpec& G, std::span<const Flat> terms) : group_(G) {
    std::vector<Flat> sorted(terms.begin(), terms.end());
    std::sort(sorted.begin(), sorted.end());
    for (Flat f : sorted) {
      if (f >= G.order()) throw Error(ErrorKind::invalid_argument, "element index out of range");
      if (!entries_.empty() && entries_.back().flat == f) {
        ++entries_.back().multiplicity;
      } else {
        entries_.push_back({f, 1});
      }
    }
  }

  SubsetSeq(const GroupSpec& G, std::initializer_list<Flat> terms)
      : SubsetSeq(G, std::span<const Flat>(terms.begin(), terms.size())) {}

  const GroupSpec& group() const noexcept { return group_; }
  std::span<const Entry> entries() const noexcept { return entries_; }

  std::uint32_t length() const noexcept {
    std::uint32_t n = 0;
    for (const auto& e : entries_) n += e.multiplicity;
    return n;
  }
  std::size_t support_size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  bool is_subset() const noexcept {
    return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.multiplicity == 1; });
  }

  std::uint32_t multiplicity(Flat g) const noexcept {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), g,
                               [](const Entry& e, Flat f) { return e.flat < f; });
    return it != entries_.end() && it->flat == g ? it->multiplicity : 0;
  }

  /// h(S)
  std::uint32_t max_multiplicity() const noexcept {
    std::uint32_t h = 0;
    for (const auto& e : entries_) h = std::max(h, e.multiplicity);
    return h;
  }

  std::vector<Flat> support() const {
    std::vector<Flat> out;
    for (const auto& e : entries_) out.push_back(e.flat);
    return out;
  }

  /// Every occurrence listed, ascending.
  std::vector<Flat> expanded() const {
    std::vector<Flat> out;
    for (const auto& e : entries_) out.insert(out.end(), e.multiplicity, e.flat);
    return out;
  }

  /// sigma(S)
  Flat sum() const noexcept {
    Flat s = 0;
    for (const auto& e : entries_) s = group_.add_flat(s, group_.mul_flat(e.multiplicity, e.flat));
    return s;
  }

  /// `1,3,4` for subsets; `1^2,3` when multiplicities exceed one.
  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (i) out += ',';
      out += group_.render(entries_[i].flat);
      if (entries_[i].multiplicity > 1) out += '^' + std::to_string(entries_[i].multiplicity);
    }
    return out;
  }

 private:
  GroupSpec group_;
  std::vector<Entry> entries_;
};

/// Renders a list of flats the way SubsetSeq::to_string does for subsets.
inline std::string render_subset(const GroupSpec& G, std::span<const Flat> flats) {
  std::vector<Flat> sorted(flats.begin(), flats.end());
  std::sort(sorted.begin(), sorted.end());
  std::string out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i) out += ',';
    out += G.render(sorted[i]);
  }
  return out;
}

/// Parses `1,3,4`, `(1,2),(0,3)` or `1^2,3`.
inline SubsetSeq parse_sequence(const GroupSpec& G, std::string_view text) {
  std::vector<Flat> terms;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (i == text.size()) throw Error(ErrorKind::empty_input, "empty sequence");
  while (i < text.size()) {
    skip_ws();
    std::size_t start = i;
    if (i < text.size() && text[i] == '(') {
      i = text.find(')', i);
      if (i == std::string_view::npos) throw Error(ErrorKind::parse, "unbalanced '(' in sequence");
      ++i;
    } else {
      while (i < text.size() && text[i] != ',' && text[i] != '^') ++i;
    }
    const Flat g = G.parse_element(text.substr(start, i - start));
    std::uint64_t mult = 1;
    skip_ws();
    if (i < text.size() && text[i] == '^') {
      ++i;
      std::size_t ms = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      auto [p, ec] = std::from_chars(text.data() + ms, text.data() + i, mult);
      if (ms == i || ec != std::errc{} || mult == 0 || mult > 1'000'000) {
        throw Error(ErrorKind::parse, "bad multiplicity in sequence");
      }
    }
    terms.insert(terms.end(), mult, g);
    skip_ws();
    if (i < text.size()) {
      if (text[i] != ',') throw Error(ErrorKind::parse, "expected ',' in sequence");
      ++i;
      skip_ws();
      if (i == text.size()) throw Error(ErrorKind::parse, "trailing ',' in sequence");
    }
  }
  return SubsetSeq(G, std::span<const Flat>(terms));
}

/// Sigma(S) via the incremental DP mask <- mask | (mask + g) | {g}, once per occurrence.
inline SumsetMask sigma_set(const SubsetSeq& S, const Translator& T) {
  if (S.empty()) throw Error(ErrorKind::empty_input, "sigma_set of an empty sequence");
  const Flat n = S.group().order();
  if (T.word_sized()) {
    std::uint64_t mask = 0;
    for (Flat g : S.expanded()) mask |= T.apply(mask, g) | (std::uint64_t{1} << g);
    return SumsetMask::from_word(n, mask);
  }
  SumsetMask mask(n);
  for (Flat g : S.expanded()) {
    SumsetMask shifted = T.apply(mask, g);
    shifted.set(g);
    mask |= shifted;
  }
  return mask;
}

inline SumsetMask sigma_set(const SubsetSeq& S) { return sigma_set(S, Translator(S.group())); }

inline bool is_zero_sum_free(const SubsetSeq& S) { return !sigma_set(S).test(0); }

/// Nonempty subsets of a subset S grouped by sum. Members are position masks:
/// bit i stands for the i-th element of S in ascending flat order, so the
/// complement of a member within S is `full_mask() ^ member`.
class ClassPartition {
 public:
  const GroupSpec& group() const noexcept { return group_; }
  std::span<const Flat> elements() const noexcept { return elements_; }
  std::uint32_t full_mask() const noexcept { return (std::uint32_t{1} << elements_.size()) - 1; }
  Flat total_sum() const noexcept { return total_; }

  /// r
  std::size_t class_count() const noexcept { return classes_.size(); }
  const std::map<Flat, std::vector<std::uint32_t>>& classes() const noexcept { return classes_; }

  bool has(Flat sum) const { return classes_.count(sum) != 0; }

  const std::vector<std::uint32_t>& at(Flat sum) const {
    auto it = classes_.find(sum);
    if (it == classes_.end()) {
      throw Error(ErrorKind::invalid_argument, group_.render(sum) + " is not a realized subset sum");
    }
    return it->second;
  }

  /// Sum of the class holding the singleton at position i, i.e. [x_i].
  Flat singleton_sum(std::size_t position) const { return elements_.at(position); }

  /// Sum of the subset encoded by a position mask.
  Flat sum_of(std::uint32_t members) const {
    Flat s = 0;
    for (std::uint32_t bits = members; bits; bits &= bits - 1) {
      s = group_.add_flat(s, elements_[std::countr_zero(bits)]);
    }
    return s;
  }

 private:
  friend ClassPartition partition_classes(const SubsetSeq& S, std::size_t max_size);
  explicit ClassPartition(const GroupSpec& G) : group_(G) {}

  GroupSpec group_;
  std::vector<Flat> elements_;
  Flat total_ = 0;
  std::map<Flat, std::vector<std::uint32_t>> classes_;
};

inline constexpr std::size_t kMaxPartitionSize = 20;

inline ClassPartition partition_classes(const SubsetSeq& S, std::size_t max_size = kMaxPartitionSize) {
  if (S.empty()) throw Error(ErrorKind::empty_input, "partition of an empty subset");
  if (!S.is_subset()) throw Error(ErrorKind::invalid_argument, "class partition needs a subset (multiplicities 1)");
  if (S.length() > std::min(max_size, kMaxPartitionSize)) {
    throw Error(ErrorKind::capacity, "subset too large for 2^|S| class enumeration");
  }
  const GroupSpec& G = S.group();
  ClassPartition P(G);
  P.elements_ = S.support();
  const std::size_t k = P.elements_.size();
  const std::uint32_t subsets = std::uint32_t{1} << k;
  std::vector<Flat> sums(subsets, 0);
  for (std::uint32_t m = 1; m < subsets; ++m) {
    const std::uint32_t low = m & (~m + 1);
    sums[m] = G.add_flat(sums[m ^ low], P.elements_[std::countr_zero(low)]);
    P.classes_[sums[m]].push_back(m);
  }
  P.total_ = sums[subsets - 1];
  return P;
}

/// The class of sums sigma(S) - s. Members of the result are exactly the
/// complements of the members of class(s) when S is zero-sum free.
/// The class {S} has the empty set as its only complement, so it has no dual.
inline const std::vector<std::uint32_t>& dual_class(const ClassPartition& P, Flat sum) {
  const auto& cls = P.at(sum);
  if (cls.size() == 1 && cls.front() == P.full_mask()) {
    throw Error(ErrorKind::invalid_argument, "the class [S] has no dual (its complement is empty)");
  }
  return P.at(P.group().sub_flat(P.total_sum(), sum));
}

}  // namespace zsf
