#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "zsf/group.hpp"

namespace zsf {

namespace detail {

/// Partitions of e into non-increasing parts, largest-first partitions first.
inline void partitions(std::uint32_t remaining, std::uint32_t max_part, std::vector<std::uint32_t>& current,
                       std::vector<std::vector<std::uint32_t>>& out) {
  if (remaining == 0) {
    out.push_back(current);
    return;
  }
  for (std::uint32_t part = std::min(remaining, max_part); part >= 1; --part) {
    current.push_back(part);
    partitions(remaining - part, part, current, out);
    current.pop_back();
  }
}

inline std::vector<std::pair<std::uint32_t, std::uint32_t>> factorize(std::uint32_t n) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t p = 2; p * p <= n; ++p) {
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

}  // namespace detail

/// Every abelian group of order n as prime-power cyclic factors: primes
/// ascending, factors ascending within a prime (Z2xZ4, Z4xZ3, ...).
inline std::vector<GroupSpec> abelian_groups_of_order(std::uint32_t n) {
  std::vector<std::vector<std::uint32_t>> acc{{}};
  for (auto [p, e] : detail::factorize(n)) {
    std::vector<std::vector<std::uint32_t>> parts;
    std::vector<std::uint32_t> current;
    detail::partitions(e, e, current, parts);
    std::vector<std::vector<std::uint32_t>> next;
    for (const auto& prefix : acc) {
      for (const auto& part : parts) {
        std::vector<std::uint32_t> moduli = prefix;
        for (auto it = part.rbegin(); it != part.rend(); ++it) {
          std::uint32_t q = 1;
          for (std::uint32_t i = 0; i < *it; ++i) q *= p;
          moduli.push_back(q);
        }
        next.push_back(std::move(moduli));
      }
    }
    acc = std::move(next);
  }
  std::vector<GroupSpec> out;
  for (auto& moduli : acc) out.emplace_back(std::move(moduli), kHardMaxOrder);
  return out;
}

inline std::vector<GroupSpec> group_catalog(std::uint32_t order_max) {
  std::vector<GroupSpec> out;
  for (std::uint32_t n = 2; n <= order_max; ++n) {
    for (auto& g : abelian_groups_of_order(n)) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace zsf
