#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cayley/recognition.hpp"
#include "cayley/split.hpp"
#include "cayley/table.hpp"

namespace cayley {

/// Raised by iso_main when an input fails recognition: under the reduced
/// table convention there is no promise to strip, so "not a group" is a
/// first-class outcome rather than a verdict.
class NotGroupError : public std::runtime_error {
 public:
  NotGroupError(int input_index, NotGroup failure)
      : std::runtime_error("input " + std::to_string(input_index) +
                           " is not a group: " + failure.detail),
        input_index_(input_index),
        failure_(std::move(failure)) {}

  int input_index() const { return input_index_; }
  const NotGroup& failure() const { return failure_; }

 private:
  int input_index_;
  NotGroup failure_;
};

/// Raised when mode=pipeline is requested for an order outside the
/// supported class.
class ModeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IsoWitness {
  enum class Reason {
    OrderMismatch,
    BMismatch,
    HNotIsomorphic,
    NoCompatiblePair,
    WitnessFound,
  };
  enum class Method { Pipeline, Brute };

  bool isomorphic = false;
  Reason reason = Reason::OrderMismatch;
  Method method = Method::Brute;
  std::vector<std::uint32_t> sigma;  // 0-based witness when isomorphic
};

inline const char* to_string(IsoWitness::Reason r) {
  switch (r) {
    case IsoWitness::Reason::OrderMismatch: return "order_mismatch";
    case IsoWitness::Reason::BMismatch: return "b_mismatch";
    case IsoWitness::Reason::HNotIsomorphic: return "H_not_isomorphic";
    case IsoWitness::Reason::NoCompatiblePair: return "no_compatible_pair";
    case IsoWitness::Reason::WitnessFound: return "witness_found";
  }
  return "?";
}

inline const char* to_string(IsoWitness::Method m) {
  return m == IsoWitness::Method::Pipeline ? "pipeline" : "brute";
}

namespace detail {

inline std::vector<std::uint32_t> element_orders(const GroupTable& t) {
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

// greedy irredundant generating sequence: each pick is the smallest label
// outside the subgroup generated so far
inline std::vector<std::uint32_t> generating_sequence(const GroupTable& t) {
  const std::uint32_t n = t.order();
  std::vector<std::uint32_t> gens;
  std::vector<bool> in(n, false);
  std::vector<std::uint32_t> sub{0};
  in[0] = true;
  while (sub.size() < n) {
    std::uint32_t g = 0;
    while (in[g]) ++g;
    gens.push_back(g);
    // subgroup closure under multiplication
    sub.push_back(g);
    in[g] = true;
    for (std::size_t qi = 0; qi < sub.size(); ++qi) {
      for (std::size_t m = 0; m <= qi; ++m) {
        for (std::uint32_t prod : {t.entry(sub[qi], sub[m]),
                                   t.entry(sub[m], sub[qi])}) {
          if (!in[prod]) {
            in[prod] = true;
            sub.push_back(prod);
          }
        }
      }
    }
  }
  return gens;
}

// Backtracking enumerator over images of the generating sequence; each
// assignment is propagated by multiplicative closure, so a completed map is
// a verified isomorphism on all pairs. The callback receives the full map
// and returns false to stop the enumeration.
template <typename Callback>
class IsoSearch {
 public:
  IsoSearch(const GroupTable& a, const GroupTable& b, Callback cb)
      : a_(a),
        b_(b),
        cb_(std::move(cb)),
        gens_(generating_sequence(a)),
        ord_a_(element_orders(a)),
        ord_b_(element_orders(b)),
        map_(a.order(), kUnset),
        used_(b.order(), false) {
    mapped_.reserve(a.order());
  }

  // returns false if the callback asked to stop
  bool run() {
    map_[0] = 0;
    used_[0] = true;
    mapped_.push_back(0);
    return descend(0);
  }

 private:
  static constexpr std::uint32_t kUnset = UINT32_MAX;

  bool descend(std::size_t gi) {
    if (gi == gens_.size()) return cb_(map_);
    const std::uint32_t g = gens_[gi];
    for (std::uint32_t h = 1; h < b_.order(); ++h) {
      if (used_[h] || ord_b_[h] != ord_a_[g]) continue;
      const std::size_t mark = mapped_.size();
      if (extend(g, h)) {
        if (!descend(gi + 1)) return false;
      }
      rollback(mark);
    }
    return true;
  }

  // map x -> y and close under products against everything already mapped
  bool extend(std::uint32_t x, std::uint32_t y) {
    if (!push_pair(x, y)) return false;
    for (std::size_t qi = mapped_.size() - 1; qi < mapped_.size(); ++qi) {
      const std::uint32_t a = mapped_[qi];
      for (std::size_t m = 0; m <= qi; ++m) {
        const std::uint32_t c = mapped_[m];
        if (!push_pair(a_.entry(a, c), b_.entry(map_[a], map_[c]))) return false;
        if (!push_pair(a_.entry(c, a), b_.entry(map_[c], map_[a]))) return false;
      }
    }
    return true;
  }

  bool push_pair(std::uint32_t x, std::uint32_t y) {
    if (map_[x] != kUnset) return map_[x] == y;
    if (used_[y] || ord_a_[x] != ord_b_[y]) return false;
    map_[x] = y;
    used_[y] = true;
    mapped_.push_back(x);
    return true;
  }

  void rollback(std::size_t mark) {
    while (mapped_.size() > mark) {
      const std::uint32_t x = mapped_.back();
      mapped_.pop_back();
      used_[map_[x]] = false;
      map_[x] = kUnset;
    }
  }

  const GroupTable& a_;
  const GroupTable& b_;
  Callback cb_;
  std::vector<std::uint32_t> gens_;
  std::vector<std::uint32_t> ord_a_, ord_b_;
  std::vector<std::uint32_t> map_;
  std::vector<bool> used_;
  std::vector<std::uint32_t> mapped_;
};

}  // namespace detail

/// Enumerates isomorphisms A -> B (as full 0-based maps) in deterministic
/// order; the callback returns false to stop early. Both tables must be
/// groups of equal order.
template <typename Callback>
inline void for_each_isomorphism(const GroupTable& a, const GroupTable& b,
                                 Callback cb) {
  if (a.order() != b.order()) return;
  detail::IsoSearch<Callback> search(a, b, std::move(cb));
  search.run();
}

/// Full witness check: sigma(T[i][j]) == T'[sigma(i)][sigma(j)] on all pairs.
inline bool verify_witness(const GroupTable& a, const GroupTable& b,
                           const std::vector<std::uint32_t>& sigma) {
  if (a.order() != b.order() || sigma.size() != a.order()) return false;
  if (!is_permutation(sigma)) return false;
  for (std::uint32_t i = 0; i < a.order(); ++i)
    for (std::uint32_t j = 0; j < a.order(); ++j)
      if (sigma[a.entry(i, j)] != b.entry(sigma[i], sigma[j])) return false;
  return true;
}

/// Brute-force isomorphism: backtracking over images of an irredundant
/// generating sequence, pruned by element order. Exact for any order.
inline IsoWitness brute_iso(const GroupTable& t1, const GroupTable& t2) {
  IsoWitness w;
  w.method = IsoWitness::Method::Brute;
  if (t1.order() != t2.order()) {
    w.reason = IsoWitness::Reason::OrderMismatch;
    return w;
  }
  std::optional<std::vector<std::uint32_t>> found;
  for_each_isomorphism(t1, t2, [&](const std::vector<std::uint32_t>& sigma) {
    found = sigma;
    return false;
  });
  if (!found) {
    w.reason = IsoWitness::Reason::NoCompatiblePair;
    return w;
  }
  if (!verify_witness(t1, t2, *found))
    throw std::logic_error("brute witness failed verification");
  w.isomorphic = true;
  w.reason = IsoWitness::Reason::WitnessFound;
  w.sigma = std::move(*found);
  return w;
}

inline std::uint64_t count_automorphisms(const GroupTable& t) {
  std::uint64_t count = 0;
  for_each_isomorphism(t, t, [&](const std::vector<std::uint32_t>&) {
    ++count;
    return true;
  });
  return count;
}

/// All isomorphisms between the complement tables of two decompositions,
/// as full index maps.
inline std::vector<std::vector<std::uint32_t>> match_H(const Decomposition& d1,
                                                       const Decomposition& d2) {
  std::vector<std::vector<std::uint32_t>> out;
  for_each_isomorphism(d1.h_table, d2.h_table,
                       [&](const std::vector<std::uint32_t>& alpha) {
                         out.push_back(alpha);
                         return true;
                       });
  return out;
}

namespace detail {

// does alpha (a complement-table isomorphism) transport theta to theta~ ?
// Checking the generators suffices: both sides are homomorphisms into the
// abelian unit group mod b.
inline bool compatible_alpha(const Decomposition& d1, const Decomposition& d2,
                             const std::vector<std::uint32_t>& alpha) {
  for (std::size_t i = 0; i < d1.h_gens.size(); ++i) {
    const std::uint32_t label1 = d1.rep.label_of(d1.h_gens[i]);
    const std::uint32_t idx1 = d1.h_index[label1];
    const std::uint32_t label2 = d2.h_labels[alpha[idx1]];
    if (d2.theta_of_label(label2) % d2.b != d1.theta[i] % d1.b) return false;
  }
  return true;
}

}  // namespace detail

/// First complement isomorphism from the candidate list satisfying
/// theta~(alpha(h)) = theta(h) on every generator. The cyclic-part
/// identification is independent of the unit choice, fixed as u = 1.
inline std::optional<std::pair<std::vector<std::uint32_t>, std::uint64_t>>
compatible_pair(const Decomposition& d1, const Decomposition& d2,
                const std::vector<std::vector<std::uint32_t>>& alphas) {
  for (const auto& alpha : alphas)
    if (detail::compatible_alpha(d1, d2, alpha)) return std::make_pair(alpha, 1ull);
  return std::nullopt;
}

/// Witness from a compatible pair: factor every element as h * gB^k (the
/// complement part found by membership of h^{-1} x in <gB>, the exponent by
/// discrete log) and map it to alpha(h) * gB'^(u*k). The result is verified
/// on all pairs before being returned.
inline std::vector<std::uint32_t> assemble_witness(
    const GroupTable& t1, const GroupTable& t2, const Decomposition& d1,
    const Decomposition& d2, const std::vector<std::uint32_t>& alpha,
    std::uint64_t u = 1) {
  const std::uint32_t n = d1.rep.degree();
  const auto nh = static_cast<std::uint32_t>(d1.h_order());
  // per complement element: inverse word in G1 and image word in G2
  std::vector<Word> inv1(nh), img2(nh);
  for (std::uint32_t i = 0; i < nh; ++i) {
    inv1[i] = d1.rep.inv(d1.rep.element_of(d1.h_labels[i]));
    img2[i] = d2.rep.element_of(d2.h_labels[alpha[i]]);
  }
  std::vector<std::uint32_t> sigma(n, UINT32_MAX);
  for (std::uint32_t x = 0; x < n; ++x) {
    for (std::uint32_t i = 0; i < nh; ++i) {
      const std::uint32_t beta = d1.rep.apply_word(inv1[i], x);
      const std::uint32_t k = d1.dlog_table[beta];
      if (k == UINT32_MAX) continue;
      const std::uint64_t k2 = u * k % d1.b;
      sigma[x] = d2.rep.apply_word(img2[i], d2.power_labels[k2]);
      break;
    }
    if (sigma[x] == UINT32_MAX)
      throw std::logic_error("witness assembly: element failed to factor");
  }
  if (!verify_witness(t1, t2, sigma))
    throw std::logic_error("assembled witness failed verification");
  return sigma;
}

enum class IsoMode { Auto, Pipeline, Brute };

/// Isomorphism decision. Both inputs are first recognized (NotGroupError
/// otherwise). Orders in the supported class take the decomposition route
/// under auto; everything else falls back to brute force. Isomorphic
/// verdicts always carry a fully verified witness.
inline IsoWitness iso_main(const GroupTable& t1, const GroupTable& t2,
                           IsoMode mode = IsoMode::Auto) {
  auto r1 = recognize(t1);
  if (std::holds_alternative<NotGroup>(r1))
    throw NotGroupError(1, std::get<NotGroup>(r1));
  auto r2 = recognize(t2);
  if (std::holds_alternative<NotGroup>(r2))
    throw NotGroupError(2, std::get<NotGroup>(r2));

  if (t1.order() != t2.order()) {
    IsoWitness w;
    w.reason = IsoWitness::Reason::OrderMismatch;
    w.method = IsoWitness::Method::Brute;
    return w;
  }

  const auto cert = upsilon_check(t1.order());
  if (mode == IsoMode::Pipeline && !cert.member)
    throw ModeError("pipeline mode requires a certified order, and " +
                    std::to_string(t1.order()) + " is not one");
  const bool pipeline =
      mode == IsoMode::Pipeline || (mode == IsoMode::Auto && cert.member);
  if (!pipeline) return brute_iso(t1, t2);

  const Decomposition d1 =
      decompose(std::move(std::get<PermRep>(r1)), cert);
  const Decomposition d2 =
      decompose(std::move(std::get<PermRep>(r2)), cert);

  IsoWitness w;
  w.method = IsoWitness::Method::Pipeline;
  if (d1.b != d2.b) {  // both orders share n, so this cannot fire
    w.reason = IsoWitness::Reason::BMismatch;
    return w;
  }
  bool any_alpha = false;
  std::optional<std::vector<std::uint32_t>> alpha;
  for_each_isomorphism(d1.h_table, d2.h_table,
                       [&](const std::vector<std::uint32_t>& cand) {
                         any_alpha = true;
                         if (detail::compatible_alpha(d1, d2, cand)) {
                           alpha = cand;
                           return false;
                         }
                         return true;
                       });
  if (!alpha) {
    w.reason = any_alpha ? IsoWitness::Reason::NoCompatiblePair
                         : IsoWitness::Reason::HNotIsomorphic;
    return w;
  }
  w.isomorphic = true;
  w.reason = IsoWitness::Reason::WitnessFound;
  w.sigma = assemble_witness(t1, t2, d1, d2, *alpha, 1);
  return w;
}

}  // namespace cayley
