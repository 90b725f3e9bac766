#pragma once

// Test-side oracles. Everything here re-derives facts straight from the
// table by definition-level loops, independent of the library's decision
// paths, so agreement checks are meaningful.

#include <cstdint>
#include <vector>

#include "cayley/perm.hpp"
#include "cayley/table.hpp"

namespace cayley::test {

// reduced + latin + O(n^3) associativity, by the definitions
inline bool oracle_is_group(const GroupTable& t) {
  const std::uint32_t n = t.order();
  for (std::uint32_t i = 0; i < n; ++i)
    if (t.entry(0, i) != i || t.entry(i, 0) != i) return false;
  std::vector<bool> seen(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::fill(seen.begin(), seen.end(), false);
    for (std::uint32_t j = 0; j < n; ++j) {
      if (seen[t.entry(i, j)]) return false;
      seen[t.entry(i, j)] = true;
    }
  }
  for (std::uint32_t j = 0; j < n; ++j) {
    std::fill(seen.begin(), seen.end(), false);
    for (std::uint32_t i = 0; i < n; ++i) {
      if (seen[t.entry(i, j)]) return false;
      seen[t.entry(i, j)] = true;
    }
  }
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      for (std::uint32_t c = 0; c < n; ++c)
        if (t.entry(a, t.entry(b, c)) != t.entry(t.entry(a, b), c))
          return false;
  return true;
}

// direct index-chasing composition (the library route is the two-pass
// placement form)
inline Perm naive_compose(const Perm& a, const Perm& b) {
  Perm out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = b[a[i]];
  return out;
}

// element orders by repeated table multiplication
inline std::vector<std::uint32_t> oracle_orders(const GroupTable& t) {
  std::vector<std::uint32_t> ord(t.order());
  for (std::uint32_t x = 0; x < t.order(); ++x) {
    std::uint32_t y = x, k = 1;
    while (y != 0) {
      y = t.entry(x, y);
      ++k;
    }
    ord[x] = k;
  }
  return ord;
}

// subgroup generated by the seed labels, via multiplication closure
inline std::vector<std::uint32_t> oracle_closure(
    const GroupTable& t, const std::vector<std::uint32_t>& seed) {
  std::vector<bool> in(t.order(), false);
  std::vector<std::uint32_t> sub{0};
  in[0] = true;
  for (std::uint32_t s : seed)
    if (!in[s]) {
      in[s] = true;
      sub.push_back(s);
    }
  for (std::size_t i = 0; i < sub.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      for (std::uint32_t p : {t.entry(sub[i], sub[j]), t.entry(sub[j], sub[i])})
        if (!in[p]) {
          in[p] = true;
          sub.push_back(p);
        }
  return sub;
}

inline std::uint32_t oracle_inverse(const GroupTable& t, std::uint32_t x) {
  for (std::uint32_t y = 0; y < t.order(); ++y)
    if (t.entry(x, y) == 0) return y;
  return UINT32_MAX;
}

// full witness check straight off the two tables
inline bool oracle_witness_ok(const GroupTable& a, const GroupTable& b,
                              const std::vector<std::uint32_t>& sigma) {
  if (sigma.size() != a.order() || a.order() != b.order()) return false;
  std::vector<bool> hit(a.order(), false);
  for (auto v : sigma) {
    if (v >= a.order() || hit[v]) return false;
    hit[v] = true;
  }
  for (std::uint32_t i = 0; i < a.order(); ++i)
    for (std::uint32_t j = 0; j < a.order(); ++j)
      if (sigma[a.entry(i, j)] != b.entry(sigma[i], sigma[j])) return false;
  return true;
}

}  // namespace cayley::test
