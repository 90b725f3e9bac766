#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cayley/numbers.hpp"
#include "cayley/perm.hpp"

namespace cayley {

class PermrepError : public std::runtime_error {
 public:
  enum class Kind {
    IndexOverflow,  // coset graph grew past the promised subgroup index
    WordTooLong,    // a stored word exceeded the length cap
  };

  PermrepError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// A group element, written as a short word over the stored generators.
/// Letters are generator indices and apply right to left: w = [w0, w1, ...]
/// is the map gens[w0] o gens[w1] o ... (last letter acts first). All
/// operations renormalize through the Schreier tree, so stored words never
/// exceed the tree depth.
using Word = std::vector<std::uint32_t>;

/// Regular permutation representation of a group on {0,...,n-1}: a short
/// generator list closed under inverses, plus a shallow Schreier tree rooted
/// at 0. Regularity makes the image of 0 a complete element id, which is what
/// gives O(word length) multiplication and equality.
class PermRep {
 public:
  PermRep(std::uint32_t n, std::vector<Perm> gens,
          std::vector<std::uint32_t> gen_inverse,
          std::vector<std::uint32_t> gen_label,
          std::vector<std::uint32_t> parent, std::vector<std::uint32_t> edge_gen)
      : n_(n),
        gens_(std::move(gens)),
        gen_inverse_(std::move(gen_inverse)),
        gen_label_(std::move(gen_label)),
        parent_(std::move(parent)),
        edge_gen_(std::move(edge_gen)),
        depth_(n, 0) {
    // depth by chasing parents; the tree is guaranteed acyclic by construction
    for (std::uint32_t x = 0; x < n_; ++x) {
      std::uint32_t d = 0, cur = x;
      while (cur != 0) {
        cur = parent_[cur];
        ++d;
      }
      depth_[x] = d;
      tree_depth_ = std::max(tree_depth_, d);
    }
  }

  std::uint32_t degree() const { return n_; }
  std::uint32_t gen_count() const {
    return static_cast<std::uint32_t>(gens_.size());
  }
  const Perm& gen(std::uint32_t i) const { return gens_[i]; }
  std::uint32_t inverse_gen(std::uint32_t i) const { return gen_inverse_[i]; }
  // table row label of generator i (the generators are rows of the table)
  std::uint32_t gen_label(std::uint32_t i) const { return gen_label_[i]; }
  std::uint32_t tree_depth() const { return tree_depth_; }

  // Stored words stay within this bound; operations renormalize well below it.
  std::uint32_t word_cap() const {
    const std::uint32_t lg =
        n_ <= 1 ? 1 : static_cast<std::uint32_t>(std::bit_width(n_ - 1));
    return 8 * lg;
  }

  /// Canonical word for the unique element mapping 0 to x (the tree path).
  Word element_of(std::uint32_t x) const {
    Word w;
    w.reserve(depth_[x]);
    while (x != 0) {
      w.push_back(edge_gen_[x]);  // outermost letter first
      x = parent_[x];
    }
    return w;
  }

  /// Image of a point under the word (letters act right to left).
  std::uint32_t apply_word(const Word& w, std::uint32_t pt) const {
    for (auto it = w.rbegin(); it != w.rend(); ++it) pt = gens_[*it][pt];
    return pt;
  }

  /// Element id: the image of the base point 0.
  std::uint32_t label_of(const Word& w) const { return apply_word(w, 0); }

  bool eq(const Word& u, const Word& v) const {
    check_cap(u);
    check_cap(v);
    return label_of(u) == label_of(v);
  }

  bool is_identity(const Word& w) const { return label_of(w) == 0; }

  /// Product u*v (v acts first), renormalized to the canonical tree word.
  Word mul(const Word& u, const Word& v) const {
    check_cap(u);
    check_cap(v);
    return element_of(apply_word(u, apply_word(v, 0)));
  }

  Word inv(const Word& w) const {
    check_cap(w);
    std::uint32_t pt = 0;  // apply the inverse letters left to right
    for (std::uint32_t letter : w) pt = gens_[gen_inverse_[letter]][pt];
    return element_of(pt);
  }

  Word pow(const Word& w, std::uint64_t e) const {
    Word acc;  // identity
    Word base = element_of(label_of(w));
    while (e) {
      if (e & 1) acc = mul(acc, base);
      e >>= 1;
      if (e) base = mul(base, base);
    }
    return acc;
  }

  /// Least e >= 1 with w^e = 1, by divisor refinement over the factorization
  /// of the group order.
  std::uint64_t order_of(const Word& w) const {
    std::uint64_t e = n_;
    for (auto& [p, a] : factorize(n_).prime_powers) {
      for (std::uint32_t i = 0; i < a; ++i) {
        if (e % p == 0 && is_identity(pow(w, e / p)))
          e /= p;
        else
          break;
      }
    }
    return e;
  }

  /// Materialize the word as a full permutation (verification paths only).
  Perm eval_perm(const Word& w) const {
    Perm p = identity_perm(n_);
    for (auto it = w.rbegin(); it != w.rend(); ++it) p = compose(p, gens_[*it]);
    return p;
  }

 private:
  void check_cap(const Word& w) const {
    if (w.size() > word_cap())
      throw PermrepError(PermrepError::Kind::WordTooLong,
                         "word of length " + std::to_string(w.size()) +
                             " exceeds cap " + std::to_string(word_cap()));
  }

  std::uint32_t n_;
  std::vector<Perm> gens_;
  std::vector<std::uint32_t> gen_inverse_;
  std::vector<std::uint32_t> gen_label_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> edge_gen_;
  std::vector<std::uint32_t> depth_;
  std::uint32_t tree_depth_ = 0;
};

using MemberFn = std::function<bool(const Word&)>;

/// Membership test for the (normal Hall) subgroup of order b: g lies in it
/// exactly when g^b = 1. Sound for normal Hall subgroups; callers re-verify
/// closure when the premise is in doubt.
inline MemberFn hall_membership(const PermRep& rep, std::uint64_t b) {
  return [&rep, b](const Word& w) { return rep.is_identity(rep.pow(w, b)); };
}

/// Schreier coset graph for a subgroup B given by a membership test:
/// vertices are cosets xB stored via canonical representative words, edges
/// are (xB, g xB; g), with a spanning tree recorded. Vertex 0 is B itself
/// with the empty representative.
struct CosetGraph {
  struct Edge {
    std::uint32_t from, to, gen;
  };

  std::uint64_t subgroup_order = 0;  // b = |B|
  MemberFn member;
  std::vector<Word> reps;       // reps[0] is empty
  std::vector<Edge> tree;       // spanning Schreier tree (|reps|-1 edges)
  std::vector<Edge> edges;      // all gen_count * |reps| edges

  std::uint32_t vertex_count() const {
    return static_cast<std::uint32_t>(reps.size());
  }
};

inline CosetGraph schreier_graph(const PermRep& rep, MemberFn member,
                                 std::uint64_t subgroup_order,
                                 std::uint64_t index_bound) {
  CosetGraph cg;
  cg.subgroup_order = subgroup_order;
  cg.member = member;
  cg.reps.push_back({});
  // locate the coset of g among the known vertices, or UINT32_MAX
  auto find_vertex = [&](const Word& g) -> std::uint32_t {
    for (std::uint32_t u = 0; u < cg.reps.size(); ++u)
      if (member(rep.mul(rep.inv(cg.reps[u]), g))) return u;
    return UINT32_MAX;
  };
  for (std::uint32_t v = 0; v < cg.reps.size(); ++v) {
    for (std::uint32_t g = 0; g < rep.gen_count(); ++g) {
      const Word moved = rep.mul(Word{g}, cg.reps[v]);
      std::uint32_t u = find_vertex(moved);
      if (u == UINT32_MAX) {
        if (cg.reps.size() >= index_bound)
          throw PermrepError(
              PermrepError::Kind::IndexOverflow,
              "coset graph exceeded the promised index " +
                  std::to_string(index_bound));
        u = cg.vertex_count();
        cg.reps.push_back(moved);
        cg.tree.push_back({v, u, g});
      }
      cg.edges.push_back({v, u, g});
    }
  }
  return cg;
}

/// Canonical representative word of the coset gB.
inline Word coset_rewrite(const PermRep& rep, const CosetGraph& cg,
                          const Word& g) {
  for (const Word& t : cg.reps)
    if (cg.member(rep.mul(rep.inv(t), g))) return t;
  throw std::logic_error("coset_rewrite: cosets failed to partition");
}

/// Schreier generators of B: for every edge (t, st; s) the element
/// rep(stB)^{-1} * s * t lies in B, and together these generate B.
/// Identity words are dropped and duplicates (same element) deduplicated.
inline std::vector<Word> schreier_generators(const PermRep& rep,
                                             const CosetGraph& cg) {
  std::vector<Word> gens;
  std::vector<std::uint32_t> seen;
  for (const auto& e : cg.edges) {
    const Word st = rep.mul(Word{e.gen}, cg.reps[e.from]);
    const Word g = rep.mul(rep.inv(cg.reps[e.to]), st);
    const std::uint32_t label = rep.label_of(g);
    if (label == 0) continue;
    if (std::find(seen.begin(), seen.end(), label) != seen.end()) continue;
    seen.push_back(label);
    gens.push_back(g);
  }
  return gens;
}

}  // namespace cayley
