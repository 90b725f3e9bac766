#pragma once

#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cayley/perm.hpp"
#include "cayley/permrep.hpp"
#include "cayley/table.hpp"

namespace cayley {

enum class NotGroupReason { NotReduced, NotLatin, NotRegular, TransversalMismatch };

inline const char* to_string(NotGroupReason r) {
  switch (r) {
    case NotGroupReason::NotReduced: return "not_reduced";
    case NotGroupReason::NotLatin: return "not_latin";
    case NotGroupReason::NotRegular: return "not_regular";
    case NotGroupReason::TransversalMismatch: return "transversal_mismatch";
  }
  return "?";
}

struct NotGroup {
  NotGroupReason reason;
  std::string detail;
};

inline std::uint32_t ceil_log2(std::uint32_t n) {
  return n <= 1 ? 0 : static_cast<std::uint32_t>(std::bit_width(n - 1));
}

/// Greedy transitive generating rows: starting from S = {0} (the identity
/// row), repeatedly add the smallest label outside the current orbit of 0
/// under the rows of S. Always terminates with a transitive set on a latin
/// table, since row j moves 0 to j. On a group table each addition at least
/// doubles the generated group, so |S| <= ceil(log2 n) + 1; recognition
/// treats larger sets as proof that the table is not a group.
inline std::vector<std::uint32_t> transitive_generating_rows(
    const GroupTable& t) {
  const std::uint32_t n = t.order();
  std::vector<std::uint32_t> S{0};
  std::vector<bool> in_orbit(n, false);
  std::vector<std::uint32_t> orbit{0};
  in_orbit[0] = true;
  while (orbit.size() < n) {
    std::uint32_t next = 0;
    while (in_orbit[next]) ++next;
    S.push_back(next);
    // grow the orbit under all rows of S (new generator included)
    orbit.push_back(next);
    in_orbit[next] = true;
    for (std::size_t head = 0; head < orbit.size(); ++head) {
      for (std::uint32_t s : S) {
        const std::uint32_t img = t.entry(s, orbit[head]);
        if (!in_orbit[img]) {
          in_orbit[img] = true;
          orbit.push_back(img);
        }
      }
    }
  }
  return S;
}

/// Cube chain: generators g_1..g_k whose subset-products form a
/// nondegenerate cube, together with the orbit of 0 under the doubled list
/// h = [g_k^-1,...,g_1^-1, g_1,...,g_k] and per-point provenance words of
/// length <= 2k (a shallow Schreier tree).
struct CubeChain {
  enum class Status {
    Complete,       // orbit covers all n points
    CapExceeded,    // needed more than floor(log2 n) cube generators
    NotTransitive,  // input generators do not act transitively
    Degenerate,     // cube collision: internal inconsistency
  };

  std::uint32_t n = 0;
  Status status = Status::Complete;
  std::vector<Perm> cube_gens;            // g_1..g_k
  std::vector<Perm> hlist;                // g_k^-1..g_1^-1, g_1..g_k
  std::vector<std::uint32_t> parent;      // tree parent per point, root 0
  std::vector<std::uint32_t> edge;        // hlist index mapping parent -> point
  std::vector<std::uint32_t> bfs_order;   // points in construction order
  std::uint32_t max_depth = 0;

  std::uint32_t k() const {
    return static_cast<std::uint32_t>(cube_gens.size());
  }
  static std::uint32_t hlist_inverse_index(std::uint32_t hsize,
                                           std::uint32_t i) {
    return hsize - 1 - i;
  }

  // provenance word of x over hlist, outermost letter first
  std::vector<std::uint32_t> provenance(std::uint32_t x) const {
    std::vector<std::uint32_t> w;
    while (x != 0) {
      w.push_back(edge[x]);
      x = parent[x];
    }
    return w;
  }
};

namespace detail {

inline std::uint64_t perm_hash(const Perm& p) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (std::uint32_t v : p) {
    h ^= v;
    h *= 1099511628211ull;
  }
  return h;
}

// orbit of 0 under hlist applied in order h_1, h_2, ..., h_{2k}, each step
// mapping the previous layer; records provenance tree
inline void rebuild_orbit(const std::vector<Perm>& hlist, std::uint32_t n,
                          CubeChain& out) {
  out.parent.assign(n, 0);
  out.edge.assign(n, 0);
  out.bfs_order.clear();
  out.bfs_order.push_back(0);
  std::vector<bool> seen(n, false);
  seen[0] = true;
  for (std::uint32_t step = 0; step < hlist.size(); ++step) {
    const std::size_t frontier = out.bfs_order.size();
    for (std::size_t i = 0; i < frontier; ++i) {
      const std::uint32_t p = out.bfs_order[i];
      const std::uint32_t q = hlist[step][p];
      if (!seen[q]) {
        seen[q] = true;
        out.parent[q] = p;
        out.edge[q] = step;
        out.bfs_order.push_back(q);
      }
    }
  }
}

inline Perm provenance_perm(const CubeChain& chain, std::uint32_t x) {
  Perm p = identity_perm(chain.n);
  const auto word = chain.provenance(x);
  for (auto it = word.rbegin(); it != word.rend(); ++it)
    p = compose(p, chain.hlist[*it]);  // apply accumulated map, then h
  return p;
}

}  // namespace detail

/// Builds the shallow tree for a transitive generator list by cube doubling:
/// while the orbit is incomplete, pick the smallest orbit point j and
/// generator s (in that tie-break order) with s(j) outside, and append
/// g_{k+1} = s o lambda_(j). Nondegeneracy of the extended cube is implied
/// by s(j) lying outside the old orbit; it is additionally checked by
/// storing the cube elements explicitly while |C_k| <= 2n.
inline CubeChain shallow_rebuild(const std::vector<Perm>& gens) {
  CubeChain chain;
  chain.n = gens.empty() ? 1 : static_cast<std::uint32_t>(gens[0].size());
  const std::uint32_t n = chain.n;
  const std::uint32_t k_cap = n <= 1 ? 0 : std::bit_width(n) - 1;  // 2^k <= n

  // explicit cube elements while |C_k| <= 2n, deduplicated through hashes
  std::vector<Perm> cube{identity_perm(n)};
  std::vector<std::pair<std::uint64_t, std::uint32_t>> cube_index{
      {detail::perm_hash(cube[0]), 0}};
  bool track_cube = true;

  while (true) {
    // h-list for the current generators
    chain.hlist.clear();
    const std::uint32_t k = chain.k();
    for (std::uint32_t i = 0; i < k; ++i)
      chain.hlist.push_back(inverse_perm(chain.cube_gens[k - 1 - i]));
    for (std::uint32_t i = 0; i < k; ++i)
      chain.hlist.push_back(chain.cube_gens[i]);
    detail::rebuild_orbit(chain.hlist, n, chain);
    if (chain.bfs_order.size() == n) break;

    if (k >= k_cap) {
      // a group of order n admits no nondegenerate cube beyond 2^k = n
      chain.status = CubeChain::Status::CapExceeded;
      return chain;
    }
    // smallest orbit point j, then smallest generator index, escaping the orbit
    std::vector<bool> in_orbit(n, false);
    for (std::uint32_t p : chain.bfs_order) in_orbit[p] = true;
    std::uint32_t j = n, r = 0;
    for (std::uint32_t cand = 0; cand < n && j == n; ++cand) {
      if (!in_orbit[cand]) continue;
      for (std::uint32_t g = 0; g < gens.size(); ++g) {
        if (!in_orbit[gens[g][cand]]) {
          j = cand;
          r = g;
          break;
        }
      }
    }
    if (j == n) {
      chain.status = CubeChain::Status::NotTransitive;
      return chain;
    }
    Perm next = compose(detail::provenance_perm(chain, j), gens[r]);
    if (track_cube) {
      if ((std::uint64_t{2} << k) <= 2 * std::uint64_t{n}) {
        Perm scratch;
        const std::size_t old_size = cube.size();
        std::vector<std::pair<std::uint64_t, std::uint32_t>> fresh;
        fresh.reserve(old_size);
        for (std::size_t i = 0; i < old_size; ++i) {
          Perm e;
          compose_into(cube[i], next, scratch, e);
          const std::uint64_t hash = detail::perm_hash(e);
          auto range = std::equal_range(
              cube_index.begin(), cube_index.end(),
              std::pair<std::uint64_t, std::uint32_t>{hash, 0},
              [](const auto& a, const auto& b) { return a.first < b.first; });
          for (auto it = range.first; it != range.second; ++it)
            if (cube[it->second] == e) {
              chain.status = CubeChain::Status::Degenerate;
              return chain;
            }
          fresh.emplace_back(hash, static_cast<std::uint32_t>(cube.size()));
          cube.push_back(std::move(e));
        }
        cube_index.insert(cube_index.end(), fresh.begin(), fresh.end());
        std::sort(cube_index.begin(), cube_index.end());
      } else {
        track_cube = false;
        cube.clear();
        cube_index.clear();
      }
    }
    chain.cube_gens.push_back(std::move(next));
  }

  for (std::uint32_t x = 0; x < n; ++x) {
    std::uint32_t d = 0, cur = x;
    while (cur != 0) {
      cur = chain.parent[cur];
      ++d;
    }
    chain.max_depth = std::max(chain.max_depth, d);
  }
  chain.status = CubeChain::Status::Complete;
  return chain;
}

/// Transversal permutations lambda_(x) for every point, materialized along
/// the tree (one composition per point).
inline std::vector<Perm> transversal_perms(const CubeChain& chain) {
  std::vector<Perm> trans(chain.n);
  trans[0] = identity_perm(chain.n);
  for (std::uint32_t x : chain.bfs_order) {
    if (x == 0) continue;
    trans[x] = compose(trans[chain.parent[x]], chain.hlist[chain.edge[x]]);
  }
  return trans;
}

/// One Schreier relation per (generator, point): the words
/// h_gen * lambda_(x) and lambda_(y) with y = h_gen(x) agree on the base
/// point; the stabilizer of 0 is trivial iff they agree as permutations.
struct SchreierRelation {
  std::uint32_t gen;  // hlist index
  std::uint32_t x;
  std::uint32_t y;
};

inline std::vector<SchreierRelation> schreier_relations(const CubeChain& chain) {
  std::vector<SchreierRelation> rels;
  rels.reserve(static_cast<std::size_t>(chain.n) * chain.hlist.size());
  for (std::uint32_t g = 0; g < chain.hlist.size(); ++g)
    for (std::uint32_t x = 0; x < chain.n; ++x)
      rels.push_back({g, x, chain.hlist[g][x]});
  return rels;
}

/// First relation whose two sides differ as permutations, or nullopt when
/// the stabilizer is trivial (equivalently, the generated group is regular).
inline std::optional<SchreierRelation> find_schreier_violation(
    const CubeChain& chain, const std::vector<Perm>& trans,
    const std::vector<SchreierRelation>& rels) {
  for (const auto& rel : rels) {
    const Perm& h = chain.hlist[rel.gen];
    const Perm& tx = trans[rel.x];
    const Perm& ty = trans[rel.y];
    for (std::uint32_t z = 0; z < chain.n; ++z)
      if (h[tx[z]] != ty[z]) return rel;
  }
  return std::nullopt;
}

inline bool stabilizer_trivial(const CubeChain& chain,
                               const std::vector<Perm>& trans,
                               const std::vector<SchreierRelation>& rels) {
  return !find_schreier_violation(chain, trans, rels).has_value();
}

using RecognitionResult = std::variant<PermRep, NotGroup>;

/// Decides whether the table describes a group. On success the returned
/// representation's transversal permutation for every label x equals row x
/// of the table, so x -> lambda_x is the regular representation. Any failure
/// reason means "not a group": the checks are exhaustive, ending with the
/// full table comparison.
inline RecognitionResult recognize(const GroupTable& t) {
  const std::uint32_t n = t.order();
  if (!t.is_reduced())
    return NotGroup{NotGroupReason::NotReduced,
                    "first row/column is not 1,2,...,n"};
  if (auto defect = latin_defect(t))
    return NotGroup{NotGroupReason::NotLatin, defect->to_string()};
  if (n == 1) return PermRep(1, {}, {}, {}, {0}, {0});

  const auto S = transitive_generating_rows(t);
  if (S.size() > 2 * ceil_log2(n) + 2)
    return NotGroup{NotGroupReason::NotRegular,
                    "needed " + std::to_string(S.size()) +
                        " generating rows; a group of this order needs at most " +
                        std::to_string(2 * ceil_log2(n) + 2)};

  std::vector<Perm> gens;
  gens.reserve(S.size());
  for (std::uint32_t s : S) gens.push_back(t.row_perm(s));
  CubeChain chain = shallow_rebuild(gens);
  if (chain.status != CubeChain::Status::Complete)
    return NotGroup{NotGroupReason::NotRegular,
                    "shallow tree construction failed (orbit or cube)"};

  // every rebuilt generator must itself be a row of the table
  std::vector<std::uint32_t> gen_label(chain.hlist.size());
  for (std::uint32_t i = 0; i < chain.hlist.size(); ++i) {
    const std::uint32_t u = chain.hlist[i][0];
    const auto row = t.row(u);
    for (std::uint32_t z = 0; z < n; ++z)
      if (chain.hlist[i][z] != row[z])
        return NotGroup{NotGroupReason::NotRegular,
                        "generator mapping 1 to " + std::to_string(u + 1) +
                            " is not row " + std::to_string(u + 1)};
    gen_label[i] = u;
  }

  // Compare transversal and table without materializing the transversal:
  // in tree order, lambda_(x) = h_edge * lambda_(parent), and once
  // lambda_(parent) is known to equal the parent row, lambda_(x) equals row
  // x iff h_edge maps the parent row onto row x pointwise.
  for (std::uint32_t x : chain.bfs_order) {
    if (x == 0) continue;
    const auto rowx = t.row(x);
    const auto rowp = t.row(chain.parent[x]);
    const Perm& h = chain.hlist[chain.edge[x]];
    for (std::uint32_t z = 0; z < n; ++z)
      if (h[rowp[z]] != rowx[z])
        return NotGroup{NotGroupReason::TransversalMismatch,
                        "row " + std::to_string(x + 1) +
                            " differs from the generated transversal"};
  }
  // Every lambda_(x) is now its table row, so the Schreier relations
  // s * lambda_(x) = lambda_(s(x)) become row identities. Checking them for
  // the transitive generating rows S suffices: rows with the relation are
  // closed under products (if rows a and b left-multiply like the table,
  // row_{a*b} = row_a o row_b does too, and associativity of permutation
  // composition identifies the labels), every cube generator is a product
  // of rows of S by construction, and every label is reachable from S by
  // left multiplications.
  for (std::uint32_t s : S) {
    if (s == 0) continue;
    const auto rows = t.row(s);
    for (std::uint32_t x = 0; x < n; ++x) {
      const auto rowx = t.row(x);
      const auto rowy = t.row(rows[x]);
      for (std::uint32_t z = 0; z < n; ++z)
        if (rows[rowx[z]] != rowy[z])
          return NotGroup{
              NotGroupReason::NotRegular,
              "point stabilizer is nontrivial (row " + std::to_string(s + 1) +
                  " does not act by left multiplication at point " +
                  std::to_string(x + 1) + ")"};
    }
  }

  std::vector<std::uint32_t> gen_inverse(chain.hlist.size());
  for (std::uint32_t i = 0; i < chain.hlist.size(); ++i)
    gen_inverse[i] = CubeChain::hlist_inverse_index(
        static_cast<std::uint32_t>(chain.hlist.size()), i);
  return PermRep(n, std::move(chain.hlist), std::move(gen_inverse),
                 std::move(gen_label), std::move(chain.parent),
                 std::move(chain.edge));
}

}  // namespace cayley
