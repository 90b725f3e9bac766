#pragma once

// Seeded corpus generation for the recognition and isomorphism sweeps:
// random reduced latin squares (incidence-cube +/-1 mixing), tampered group
// tables, and random relabelings.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "cayley/table.hpp"

namespace cayley::test {

inline std::vector<std::uint32_t> random_relabel_perm(std::uint32_t n,
                                                      std::mt19937_64& rng) {
  std::vector<std::uint32_t> sigma(n);
  for (std::uint32_t i = 0; i < n; ++i) sigma[i] = i;
  for (std::uint32_t i = n - 1; i >= 2; --i) {
    std::uniform_int_distribution<std::uint32_t> pick(1, i);
    std::swap(sigma[i], sigma[pick(rng)]);  // fix label 0
  }
  return sigma;
}

inline GroupTable random_relabel(const GroupTable& t, std::mt19937_64& rng) {
  return relabel(t, random_relabel_perm(t.order(), rng));
}

/// Random reduced latin square of order n >= 2 by +/-1 moves on the n^3
/// incidence cube, starting from the cyclic square, then normalized to
/// reduced form (column permutation, then row sort).
inline GroupTable random_reduced_latin(std::uint32_t n, std::mt19937_64& rng,
                                       std::uint64_t moves = 0) {
  if (moves == 0) moves = 2ull * n * n * n;
  std::vector<std::int8_t> f(static_cast<std::size_t>(n) * n * n, 0);
  auto at = [&](std::uint32_t r, std::uint32_t c, std::uint32_t s)
      -> std::int8_t& { return f[(static_cast<std::size_t>(r) * n + c) * n + s]; };
  for (std::uint32_t r = 0; r < n; ++r)
    for (std::uint32_t c = 0; c < n; ++c) at(r, c, (r + c) % n) = 1;

  std::uniform_int_distribution<std::uint32_t> pick(0, n - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  bool improper = false;
  std::uint32_t ir = 0, ic = 0, is = 0;  // the -1 cell when improper

  auto line_pick = [&](auto&& value_at) {
    // index (or one of the two indices, at random) carrying value 1
    std::uint32_t first = n, second = n;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (value_at(i) == 1) {
        if (first == n)
          first = i;
        else
          second = i;
      }
    }
    return second == n ? first : (coin(rng) ? second : first);
  };

  std::uint64_t remaining = moves;
  while (remaining > 0 || improper) {
    std::uint32_t r, c, s;
    if (!improper) {
      do {
        r = pick(rng);
        c = pick(rng);
        s = pick(rng);
      } while (at(r, c, s) != 0);
    } else {
      r = ir, c = ic, s = is;
    }
    const std::uint32_t r2 = line_pick([&](std::uint32_t i) { return at(i, c, s); });
    const std::uint32_t c2 = line_pick([&](std::uint32_t i) { return at(r, i, s); });
    const std::uint32_t s2 = line_pick([&](std::uint32_t i) { return at(r, c, i); });
    at(r, c, s) += 1;
    at(r2, c, s) -= 1;
    at(r, c2, s) -= 1;
    at(r, c, s2) -= 1;
    at(r2, c2, s) += 1;
    at(r2, c, s2) += 1;
    at(r, c2, s2) += 1;
    at(r2, c2, s2) -= 1;
    improper = at(r2, c2, s2) < 0;
    if (improper) ir = r2, ic = c2, is = s2;
    if (remaining > 0) --remaining;
  }

  std::vector<std::uint32_t> square(static_cast<std::size_t>(n) * n);
  for (std::uint32_t r = 0; r < n; ++r)
    for (std::uint32_t c = 0; c < n; ++c)
      for (std::uint32_t s = 0; s < n; ++s)
        if (at(r, c, s) == 1) square[static_cast<std::size_t>(r) * n + c] = s;

  // reduce: permute columns so row 0 reads 0..n-1, then sort rows by first
  // entry (row 0 stays put since it starts with 0)
  std::vector<std::uint32_t> reduced(static_cast<std::size_t>(n) * n);
  std::vector<std::uint32_t> colof(n);
  for (std::uint32_t c = 0; c < n; ++c) colof[square[c]] = c;
  std::vector<std::uint32_t> roword(n);
  for (std::uint32_t r = 0; r < n; ++r)
    roword[square[static_cast<std::size_t>(r) * n + colof[0]]] = r;
  for (std::uint32_t r = 0; r < n; ++r)
    for (std::uint32_t c = 0; c < n; ++c)
      reduced[static_cast<std::size_t>(r) * n + c] =
          square[static_cast<std::size_t>(roword[r]) * n + colof[c]];
  return GroupTable(n, std::move(reduced));
}

/// Overwrite one inner cell with a different value (breaks the latin
/// property of one row).
inline GroupTable tamper_single_entry(const GroupTable& t,
                                      std::mt19937_64& rng) {
  const std::uint32_t n = t.order();
  std::uniform_int_distribution<std::uint32_t> inner(1, n - 1);
  std::uniform_int_distribution<std::uint32_t> any(0, n - 1);
  std::vector<std::uint32_t> cells(static_cast<std::size_t>(n) * n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      cells[static_cast<std::size_t>(i) * n + j] = t.entry(i, j);
  const std::uint32_t i = inner(rng), j = inner(rng);
  std::uint32_t v = any(rng);
  while (v == t.entry(i, j)) v = any(rng);
  cells[static_cast<std::size_t>(i) * n + j] = v;
  return GroupTable(n, std::move(cells));
}

/// Swap a 2x2 intercalate not touching row/column 0: the result stays a
/// reduced latin square but is (almost) never a group table.
inline std::optional<GroupTable> intercalate_flip(const GroupTable& t,
                                                  std::mt19937_64& rng) {
  const std::uint32_t n = t.order();
  if (n < 3) return std::nullopt;
  std::uniform_int_distribution<std::uint32_t> inner(1, n - 1);
  for (int attempt = 0; attempt < 200; ++attempt) {
    const std::uint32_t r1 = inner(rng), r2 = inner(rng), c1 = inner(rng);
    if (r1 == r2) continue;
    const std::uint32_t a = t.entry(r1, c1), b = t.entry(r2, c1);
    // column where row r1 holds b
    std::uint32_t c2 = 0;
    for (std::uint32_t c = 1; c < n; ++c)
      if (t.entry(r1, c) == b) c2 = c;
    if (c2 == 0 || t.entry(r2, c2) != a) continue;
    std::vector<std::uint32_t> cells(static_cast<std::size_t>(n) * n);
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j)
        cells[static_cast<std::size_t>(i) * n + j] = t.entry(i, j);
    cells[static_cast<std::size_t>(r1) * n + c1] = b;
    cells[static_cast<std::size_t>(r1) * n + c2] = a;
    cells[static_cast<std::size_t>(r2) * n + c1] = a;
    cells[static_cast<std::size_t>(r2) * n + c2] = b;
    return GroupTable(n, std::move(cells));
  }
  return std::nullopt;
}

}  // namespace cayley::test
