#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cayley/perm.hpp"

namespace cayley {

/// Errors raised while building or transforming multiplication tables.
class TableError : public std::runtime_error {
 public:
  enum class Kind {
    MalformedInput,      // bad integer, wrong length, entry out of range
    NotReduced,          // first row/column is not 1,2,...,n
    InvalidParams,       // family parameters do not describe a group
    InvalidPermutation,  // relabeling map is not a bijection fixing label 1
  };

  TableError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// An n-by-n multiplication table over labels {0,...,n-1} (0-based in code;
/// label 0 plays the role "1" has in the 1-based file format). The table is
/// "reduced" when row 0 and column 0 both read 0,1,...,n-1, i.e. label 0 is
/// a two-sided identity. Construction checks only that entries are in range;
/// reducedness is enforced by parse_table and re-checked by recognition, and
/// the latin property is checked separately by latin_defect.
class GroupTable {
 public:
  GroupTable(std::uint32_t n, std::vector<std::uint32_t> cells)
      : n_(n), cells_(std::move(cells)) {
    if (n == 0 || cells_.size() != static_cast<std::size_t>(n) * n)
      throw TableError(TableError::Kind::MalformedInput,
                       "table must hold exactly n*n entries, n >= 1");
    for (auto v : cells_)
      if (v >= n)
        throw TableError(TableError::Kind::MalformedInput,
                         "table entry out of range [1..n]");
  }

  std::uint32_t order() const { return n_; }

  // entry(i, j) = i * j, all 0-based
  std::uint32_t entry(std::uint32_t i, std::uint32_t j) const {
    return cells_[static_cast<std::size_t>(i) * n_ + j];
  }

  // Row i of the table, i.e. the left-multiplication map a -> i * a.
  std::span<const std::uint32_t> row(std::uint32_t i) const {
    return {cells_.data() + static_cast<std::size_t>(i) * n_, n_};
  }

  Perm row_perm(std::uint32_t i) const {
    auto r = row(i);
    return Perm(r.begin(), r.end());
  }

  bool is_reduced() const {
    for (std::uint32_t i = 0; i < n_; ++i)
      if (entry(0, i) != i || entry(i, 0) != i) return false;
    return true;
  }

  bool operator==(const GroupTable& other) const {
    return n_ == other.n_ && cells_ == other.cells_;
  }

 private:
  std::uint32_t n_;
  std::vector<std::uint32_t> cells_;
};

/// First latin-property violation found in a table, if any.
/// `line` and `symbol` are 0-based; printed diagnostics use 1-based labels.
struct LatinDefect {
  bool in_row;         // true: duplicated symbol in a row, false: in a column
  std::uint32_t line;  // offending row or column index
  std::uint32_t symbol;  // smallest duplicated symbol on that line

  std::string to_string() const {
    return std::string(in_row ? "row " : "column ") +
           std::to_string(line + 1) + " repeats symbol " +
           std::to_string(symbol + 1);
  }
};

/// Checks that every row and every column is a permutation of the n symbols
/// by counting-sort per line (buckets scanned in ascending symbol order, so
/// the reported duplicate is the smallest repeated symbol, as a comparison
/// sort would find). Rows are checked before columns; columns are processed
/// in blocks so the passes stay sequential over the cells. On success a
/// reduced table describes a loop.
inline std::optional<LatinDefect> latin_defect(const GroupTable& t) {
  const std::uint32_t n = t.order();
  std::vector<std::uint8_t> count(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::fill(count.begin(), count.end(), 0);
    const auto row = t.row(i);
    for (std::uint32_t j = 0; j < n; ++j)
      if (count[row[j]] < 2) ++count[row[j]];
    for (std::uint32_t s = 0; s < n; ++s)
      if (count[s] >= 2) return LatinDefect{true, i, s};
  }
  constexpr std::uint32_t kBlock = 64;
  std::vector<std::uint8_t> colcount(static_cast<std::size_t>(kBlock) * n);
  for (std::uint32_t j0 = 0; j0 < n; j0 += kBlock) {
    const std::uint32_t width = std::min(kBlock, n - j0);
    std::fill(colcount.begin(),
              colcount.begin() + static_cast<std::size_t>(width) * n, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto row = t.row(i);
      for (std::uint32_t dj = 0; dj < width; ++dj) {
        std::uint8_t& c = colcount[static_cast<std::size_t>(dj) * n +
                                   row[j0 + dj]];
        if (c < 2) ++c;
      }
    }
    for (std::uint32_t dj = 0; dj < width; ++dj)
      for (std::uint32_t s = 0; s < n; ++s)
        if (colcount[static_cast<std::size_t>(dj) * n + s] >= 2)
          return LatinDefect{false, j0 + dj, s};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// File format: ASCII, '#' starts a comment line, first token is n (decimal),
// then n*n tokens in [1..n] in row-major order. The emitter writes one row
// per line, single-space separated, with a trailing newline.
// ---------------------------------------------------------------------------

namespace detail {

inline bool next_token(std::istream& in, std::string& tok) {
  tok.clear();
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {  // comment until end of line
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return true;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return !tok.empty();
}

inline std::uint64_t parse_uint(const std::string& tok) {
  if (tok.empty() || tok.size() > 19)
    throw TableError(TableError::Kind::MalformedInput,
                     "bad integer token '" + tok + "'");
  std::uint64_t v = 0;
  for (char ch : tok) {
    if (ch < '0' || ch > '9')
      throw TableError(TableError::Kind::MalformedInput,
                       "bad integer token '" + tok + "'");
    v = v * 10 + static_cast<std::uint64_t>(ch - '0');
  }
  return v;
}

}  // namespace detail

/// Parses a table file. Throws MalformedInput for syntax/range problems and
/// NotReduced when label 1 is not a two-sided identity (by convention such a
/// table does not describe a group). The latin property is NOT checked here.
inline GroupTable parse_table(std::istream& in) {
  std::string tok;
  if (!detail::next_token(in, tok))
    throw TableError(TableError::Kind::MalformedInput, "empty input");
  const std::uint64_t n64 = detail::parse_uint(tok);
  if (n64 == 0 || n64 > (1u << 20))
    throw TableError(TableError::Kind::MalformedInput,
                     "table order out of supported range");
  const auto n = static_cast<std::uint32_t>(n64);
  std::vector<std::uint32_t> cells;
  cells.reserve(static_cast<std::size_t>(n) * n);
  for (std::size_t i = 0; i < static_cast<std::size_t>(n) * n; ++i) {
    if (!detail::next_token(in, tok))
      throw TableError(TableError::Kind::MalformedInput,
                       "expected " + std::to_string(std::size_t(n) * n) +
                           " entries, found " + std::to_string(i));
    const std::uint64_t v = detail::parse_uint(tok);
    if (v < 1 || v > n)
      throw TableError(TableError::Kind::MalformedInput,
                       "entry " + std::to_string(v) + " outside [1.." +
                           std::to_string(n) + "]");
    cells.push_back(static_cast<std::uint32_t>(v - 1));
  }
  if (detail::next_token(in, tok))
    throw TableError(TableError::Kind::MalformedInput,
                     "trailing token '" + tok + "' after table");
  GroupTable t(n, std::move(cells));
  if (!t.is_reduced())
    throw TableError(TableError::Kind::NotReduced,
                     "first row/column is not 1,2,...,n");
  return t;
}

inline void emit_table(const GroupTable& t, std::ostream& out) {
  out << t.order() << '\n';
  for (std::uint32_t i = 0; i < t.order(); ++i) {
    for (std::uint32_t j = 0; j < t.order(); ++j) {
      if (j) out << ' ';
      out << t.entry(i, j) + 1;
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Family constructors for corpus generation.
// ---------------------------------------------------------------------------

/// Parameterized group family. Element enumeration is deterministic:
///  - cyclic {m}: residues 0..m-1, entry(i,j) = (i+j) mod m;
///  - dihedral {m}: order 2m, pairs (f, i) = s^f r^i listed with f major
///    (rotations first), so labels [0,m) are rotations;
///  - direct_product {m1,...,mk}: tuples in row-major (lexicographic) order,
///    identity first;
///  - semidirect_cyclic {q, r, k}: pairs (h, b) in H = Z_r acting on B = Z_q
///    by b -> k*b, listed with h major; requires q prime and k^r = 1 (mod q).
struct FamilySpec {
  enum class Kind { Cyclic, Dihedral, DirectProduct, SemidirectCyclic };
  Kind kind;
  std::vector<std::uint64_t> params;
};

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b,
                                std::uint64_t m) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t e,
                                std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, base, m);
    base = mulmod_u64(base, base, m);
    e >>= 1;
  }
  return r;
}

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  // deterministic Miller-Rabin for 64-bit inputs
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace detail

inline GroupTable make_family(const FamilySpec& spec) {
  using Kind = FamilySpec::Kind;
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw TableError(TableError::Kind::InvalidParams, msg);
  };
  const std::uint64_t max_order = 1u << 16;

  // A dihedral group is the h-major semidirect layout with r = 2, k = m-1,
  // and the semidirect/cyclic layouts are special cases of the same product
  // rule (h1,b1)(h2,b2) = (h1+h2, k^{h2} b1 + b2), so one builder serves all
  // three. Here q need not be prime; the public semidirect family insists.
  auto semidirect_table = [&](std::uint64_t q, std::uint64_t r,
                              std::uint64_t k) {
    const std::uint64_t n64 = q * r;
    require(n64 >= 1 && n64 <= max_order, "group order out of range");
    const auto n = static_cast<std::uint32_t>(n64);
    std::vector<std::uint64_t> kpow(r);  // k^h mod q
    kpow[0] = 1 % q;
    for (std::uint64_t h = 1; h < r; ++h)
      kpow[h] = detail::mulmod_u64(kpow[h - 1], k, q);
    std::vector<std::uint32_t> cells(static_cast<std::size_t>(n) * n);
    for (std::uint64_t h1 = 0; h1 < r; ++h1)
      for (std::uint64_t b1 = 0; b1 < q; ++b1)
        for (std::uint64_t h2 = 0; h2 < r; ++h2)
          for (std::uint64_t b2 = 0; b2 < q; ++b2) {
            const std::uint64_t h = (h1 + h2) % r;
            const std::uint64_t b =
                (detail::mulmod_u64(kpow[h2], b1, q) + b2) % q;
            cells[(h1 * q + b1) * n + (h2 * q + b2)] =
                static_cast<std::uint32_t>(h * q + b);
          }
    return GroupTable(n, std::move(cells));
  };

  switch (spec.kind) {
    case Kind::Cyclic: {
      require(spec.params.size() == 1 && spec.params[0] >= 1,
              "cyclic takes one order >= 1");
      return semidirect_table(spec.params[0], 1, 0);
    }
    case Kind::Dihedral: {
      require(spec.params.size() == 1 && spec.params[0] >= 1,
              "dihedral takes one order >= 1");
      const std::uint64_t m = spec.params[0];
      return semidirect_table(m, 2, (m - 1) % m);
    }
    case Kind::DirectProduct: {
      require(!spec.params.empty(), "direct_product takes >= 1 factor");
      std::uint64_t n64 = 1;
      for (auto m : spec.params) {
        require(m >= 1, "factors must be >= 1");
        n64 *= m;
        require(n64 <= max_order, "group order out of range");
      }
      const auto n = static_cast<std::uint32_t>(n64);
      // mixed-radix tuples, last factor fastest
      auto add = [&](std::uint32_t x, std::uint32_t y) {
        std::uint32_t out = 0;
        std::uint64_t scale = 1;
        for (std::size_t f = spec.params.size(); f-- > 0;) {
          const std::uint64_t m = spec.params[f];
          const std::uint64_t s = ((x / scale) % m + (y / scale) % m) % m;
          out += static_cast<std::uint32_t>(s * scale);
          scale *= m;
        }
        return out;
      };
      std::vector<std::uint32_t> cells(static_cast<std::size_t>(n) * n);
      for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j)
          cells[static_cast<std::size_t>(i) * n + j] = add(i, j);
      return GroupTable(n, std::move(cells));
    }
    case Kind::SemidirectCyclic: {
      require(spec.params.size() == 3, "semidirect_cyclic takes q, r, k");
      const std::uint64_t q = spec.params[0], r = spec.params[1],
                          k = spec.params[2];
      require(detail::is_prime_u64(q), "q must be prime");
      require(r >= 1, "r must be >= 1");
      require(k >= 1 && k < q, "k must lie in [1, q)");
      require(detail::powmod_u64(k, r, q) == 1 % q,
              "action exponent must satisfy k^r = 1 (mod q)");
      return semidirect_table(q, r, k);
    }
  }
  throw TableError(TableError::Kind::InvalidParams, "unknown family kind");
}

inline GroupTable make_cyclic(std::uint64_t m) {
  return make_family({FamilySpec::Kind::Cyclic, {m}});
}
inline GroupTable make_dihedral(std::uint64_t m) {
  return make_family({FamilySpec::Kind::Dihedral, {m}});
}
inline GroupTable make_direct_product(std::vector<std::uint64_t> ms) {
  return make_family({FamilySpec::Kind::DirectProduct, std::move(ms)});
}
inline GroupTable make_semidirect_cyclic(std::uint64_t q, std::uint64_t r,
                                         std::uint64_t k) {
  return make_family({FamilySpec::Kind::SemidirectCyclic, {q, r, k}});
}

/// Relabels a table by sigma (0-based, must fix 0 so the result stays
/// reduced): result[sigma(i)][sigma(j)] = sigma(t[i][j]). The result is
/// isomorphic to t by construction, with sigma as the witness.
inline GroupTable relabel(const GroupTable& t,
                          const std::vector<std::uint32_t>& sigma) {
  const std::uint32_t n = t.order();
  if (sigma.size() != n || !is_permutation(sigma) || sigma[0] != 0)
    throw TableError(TableError::Kind::InvalidPermutation,
                     "relabeling must be a permutation fixing label 1");
  std::vector<std::uint32_t> cells(static_cast<std::size_t>(n) * n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      cells[static_cast<std::size_t>(sigma[i]) * n + sigma[j]] =
          sigma[t.entry(i, j)];
  return GroupTable(n, std::move(cells));
}

}  // namespace cayley
