#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cayley/numbers.hpp"
#include "cayley/permrep.hpp"
#include "cayley/table.hpp"

namespace cayley {

class SplitError : public std::runtime_error {
 public:
  enum class Kind {
    NotNormalHall,          // closure of the Hall generators has the wrong size
    NotCyclic,              // no combination of generator powers has order b
    RelatorOutsideB,        // presentation relator evaluates outside B
    NoComplement,           // congruence system inconsistent (only possible
                            // when the order is not a certified member)
    InternalInconsistency,  // invariant violated downstream of valid inputs
    NotAUnit,               // conjugation exponent not invertible mod b
    TooLarge,               // complement too large to materialize
  };

  SplitError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

namespace detail {

inline std::uint64_t egcd_inv(std::uint64_t a, std::uint64_t m) {
  // inverse of a mod m, gcd(a, m) = 1
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m),
               new_r = static_cast<std::int64_t>(a % m);
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) throw std::logic_error("egcd_inv: not a unit");
  return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(m)
                                          : t);
}

}  // namespace detail

/// Labels of the subgroup generated by the given words (orbit of the base
/// point under left multiplication), in discovery order.
inline std::vector<std::uint32_t> closure_labels(const PermRep& rep,
                                                 const std::vector<Word>& gens) {
  std::vector<bool> seen(rep.degree(), false);
  std::vector<std::uint32_t> out{0};
  seen[0] = true;
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (const Word& g : gens) {
      const std::uint32_t img = rep.apply_word(g, out[head]);
      if (!seen[img]) {
        seen[img] = true;
        out.push_back(img);
      }
    }
  }
  return out;
}

struct HallData {
  CosetGraph cg;
  std::vector<Word> gens;
};

/// Generators for the normal Hall subgroup of order b, via the coset graph
/// of its power-membership test and Schreier's lemma. Verified by full
/// closure enumeration: anything but exactly b elements reports failure.
inline HallData hall_generators(const PermRep& rep, std::uint64_t b) {
  const std::uint64_t index = rep.degree() / b;
  HallData hd;
  try {
    hd.cg = schreier_graph(rep, hall_membership(rep, b), b, index);
  } catch (const PermrepError& e) {
    throw SplitError(SplitError::Kind::NotNormalHall,
                     std::string("coset graph: ") + e.what());
  }
  if (hd.cg.vertex_count() != index)
    throw SplitError(SplitError::Kind::NotNormalHall,
                     "subgroup index " + std::to_string(hd.cg.vertex_count()) +
                         ", expected " + std::to_string(index));
  hd.gens = schreier_generators(rep, hd.cg);
  for (const Word& g : hd.gens)
    if (!hd.cg.member(g))
      throw SplitError(SplitError::Kind::NotNormalHall,
                       "Schreier generator escapes the subgroup");
  if (closure_labels(rep, hd.gens).size() != b)
    throw SplitError(SplitError::Kind::NotNormalHall,
                     "closure size differs from the promised order " +
                         std::to_string(b));
  return hd;
}

/// Discrete logarithm in the cyclic group generated by gB, order b
/// squarefree: one exponent per prime by direct enumeration, combined by
/// the Chinese remainder theorem. Every query is verified.
struct Dlog {
  const PermRep& rep;
  Word gB;
  std::uint64_t b = 1;
  std::vector<std::uint64_t> primes;

  std::uint64_t of(const Word& x) const {
    std::uint64_t k = 0;
    for (std::uint64_t p : primes) {
      const Word base = rep.pow(gB, b / p);
      const Word target = rep.pow(x, b / p);
      std::uint64_t kp = p;
      Word cur;
      for (std::uint64_t c = 0; c < p; ++c) {
        if (rep.eq(cur, target)) {
          kp = c;
          break;
        }
        cur = rep.mul(cur, base);
      }
      if (kp == p)
        throw SplitError(SplitError::Kind::InternalInconsistency,
                         "element projects outside <gB> at prime " +
                             std::to_string(p));
      // CRT: k == kp (mod p)
      const std::uint64_t m = b / p;
      k = (k + (kp + p - k % p) % p * m % b * detail::egcd_inv(m % p, p)) % b;
    }
    if (!rep.eq(rep.pow(gB, k), x))
      throw SplitError(SplitError::Kind::InternalInconsistency,
                       "discrete log verification failed");
    return k;
  }
};

/// A generator of order exactly b for the cyclic Hall subgroup: per prime,
/// power up a Schreier generator of order divisible by p, then multiply the
/// commuting prime-order parts together.
inline Word cyclic_generator(const PermRep& rep, const HallData& hd,
                             std::uint64_t b,
                             const std::vector<std::uint64_t>& b_primes) {
  Word gB;  // identity when b = 1
  for (std::uint64_t p : b_primes) {
    Word part;
    bool found = false;
    for (const Word& g : hd.gens) {
      const std::uint64_t ord = rep.order_of(g);
      if (ord % p == 0) {
        part = rep.pow(g, ord / p);
        found = true;
        break;
      }
    }
    if (!found)
      throw SplitError(SplitError::Kind::NotCyclic,
                       "no generator of order divisible by " +
                           std::to_string(p));
    gB = rep.mul(gB, part);
  }
  if (rep.order_of(gB) != b)
    throw SplitError(SplitError::Kind::NotCyclic,
                     "assembled generator does not have order " +
                         std::to_string(b));
  return gB;
}

/// Presentation of G/B over one symbol per stored generator. Relator letters
/// are signed 1-based symbol references: +i stands for x_i, -i for its
/// inverse.
struct Presentation {
  std::uint32_t symbol_count = 0;
  std::vector<std::vector<std::int32_t>> relators;
};

namespace detail {

inline Word eval_symbols(const PermRep& rep,
                         const std::vector<std::int32_t>& word) {
  Word acc;
  for (std::int32_t letter : word) {
    const std::uint32_t i = static_cast<std::uint32_t>(
        (letter > 0 ? letter : -letter) - 1);
    const Word g{letter > 0 ? i : rep.inverse_gen(i)};
    acc = rep.mul(acc, g);
  }
  return acc;
}

}  // namespace detail

/// Coset-table relators w_t x_s w_{ts}^{-1} over the transversal words of
/// the Schreier coset graph: each one evaluates into B (checked), and
/// together they present G/B. Lengths stay within 8*ceil(log2 n) because
/// the transversal words are canonical shallow-tree words.
inline Presentation quotient_presentation(const PermRep& rep,
                                          const CosetGraph& cg) {
  Presentation pres;
  pres.symbol_count = rep.gen_count();
  const std::uint32_t cap =
      rep.degree() <= 1
          ? 1
          : 8 * static_cast<std::uint32_t>(std::bit_width(rep.degree() - 1));
  for (std::uint32_t v = 0; v < cg.vertex_count(); ++v) {
    for (std::uint32_t s = 0; s < rep.gen_count(); ++s) {
      const Word ts = rep.mul(cg.reps[v], Word{s});
      const Word& u = coset_rewrite(rep, cg, ts);
      std::vector<std::int32_t> relator;
      for (std::uint32_t letter : cg.reps[v])
        relator.push_back(static_cast<std::int32_t>(letter) + 1);
      relator.push_back(static_cast<std::int32_t>(s) + 1);
      for (auto it = u.rbegin(); it != u.rend(); ++it)
        relator.push_back(-(static_cast<std::int32_t>(*it) + 1));
      if (relator.size() > cap)
        throw SplitError(SplitError::Kind::InternalInconsistency,
                         "relator exceeds the shallow length bound");
      if (!cg.member(detail::eval_symbols(rep, relator)))
        throw SplitError(SplitError::Kind::RelatorOutsideB,
                         "relator evaluates outside the subgroup");
      pres.relators.push_back(std::move(relator));
    }
  }
  return pres;
}

/// Complement construction: look for m_i = gB^{mu_i} making s_i * m_i
/// satisfy every relator. Substituting and collecting the B-parts to the
/// right turns each relator w into the congruence
///     dlog(w(s)) + sum_i c_{w,i} * mu_i = 0  (mod b),
/// where the coefficient of mu_i picks up the conjugation twist of every
/// letter to the right of each occurrence of x_i. The system splits into one
/// Gaussian elimination per prime of b (squarefree), glued back by CRT.
inline std::vector<Word> bigsplit(const PermRep& rep, const Presentation& pres,
                                  const Word& gB, const Dlog& dlog,
                                  std::uint64_t b,
                                  const std::vector<std::uint64_t>& b_primes) {
  const std::uint32_t d = pres.symbol_count;
  // conjugation twists of gB by each generator and inverse generator
  std::vector<std::uint64_t> tau(d), tau_inv(d);
  for (std::uint32_t i = 0; i < d; ++i) {
    const Word gi{i};
    tau[i] = dlog.of(rep.mul(rep.mul(rep.inv(gi), gB), gi));
    if (b > 1 && std::gcd(tau[i], b) != 1)
      throw SplitError(SplitError::Kind::NotAUnit,
                       "conjugation twist is not a unit mod b");
    tau_inv[i] = b == 1 ? 0 : detail::egcd_inv(tau[i] % b, b);
  }

  std::vector<std::vector<std::uint64_t>> rows;  // d coefficients, then rhs
  for (const auto& relator : pres.relators) {
    std::vector<std::uint64_t> c(d + 1, 0);
    for (std::int32_t letter : relator) {
      const std::uint32_t i = static_cast<std::uint32_t>(
          (letter > 0 ? letter : -letter) - 1);
      if (letter > 0) {
        for (std::uint32_t j = 0; j < d; ++j)
          c[j] = c[j] * (tau[i] % b) % b;
        c[i] = (c[i] + 1) % b;
      } else {
        c[i] = (c[i] + b - 1) % b;
        for (std::uint32_t j = 0; j < d; ++j)
          c[j] = c[j] * (tau_inv[i] % b) % b;
      }
    }
    const std::uint64_t r = dlog.of(detail::eval_symbols(rep, relator));
    c[d] = (b - r % b) % b;  // move the constant to the right-hand side
    rows.push_back(std::move(c));
  }

  // solve per prime, free variables zero, then CRT
  std::vector<std::uint64_t> mu(d, 0);
  for (std::uint64_t p : b_primes) {
    std::vector<std::vector<std::uint64_t>> m;
    m.reserve(rows.size());
    for (const auto& row : rows) {
      std::vector<std::uint64_t> r(d + 1);
      for (std::uint32_t j = 0; j <= d; ++j) r[j] = row[j] % p;
      m.push_back(std::move(r));
    }
    std::vector<std::uint32_t> pivot_col;
    std::uint32_t rank = 0;
    for (std::uint32_t col = 0; col < d && rank < m.size(); ++col) {
      std::uint32_t sel = rank;
      while (sel < m.size() && m[sel][col] == 0) ++sel;
      if (sel == m.size()) continue;
      std::swap(m[rank], m[sel]);
      const std::uint64_t inv = detail::egcd_inv(m[rank][col], p);
      for (std::uint32_t j = col; j <= d; ++j)
        m[rank][j] = m[rank][j] * inv % p;
      for (std::uint32_t rr = 0; rr < m.size(); ++rr) {
        if (rr == rank || m[rr][col] == 0) continue;
        const std::uint64_t f = m[rr][col];
        for (std::uint32_t j = col; j <= d; ++j)
          m[rr][j] = (m[rr][j] + (p - f) * m[rank][j]) % p;
      }
      pivot_col.push_back(col);
      ++rank;
    }
    for (std::uint32_t rr = rank; rr < m.size(); ++rr)
      if (m[rr][d] != 0)
        throw SplitError(SplitError::Kind::NoComplement,
                         "congruence system inconsistent mod " +
                             std::to_string(p));
    // pivot solution with free variables zero
    for (std::uint32_t rr = 0; rr < rank; ++rr) {
      const std::uint64_t val = m[rr][d];
      const std::uint32_t col = pivot_col[rr];
      // CRT: mu[col] == val (mod p), keeping previous residues mod b/p parts
      const std::uint64_t mprod = b / p;
      mu[col] = (mu[col] +
                 (val + p - mu[col] % p) % p * (mprod % b) % b *
                     detail::egcd_inv(mprod % p, p)) %
                b;
    }
  }

  std::vector<Word> h_gens;
  h_gens.reserve(d);
  for (std::uint32_t i = 0; i < d; ++i)
    h_gens.push_back(rep.mul(Word{i}, rep.pow(gB, mu[i])));
  return h_gens;
}

/// Conjugation exponents gB^{h} = gB^{theta(h)} per generator, with the
/// homomorphism property checked on all generator pairs.
inline std::vector<std::uint64_t> theta_map(const PermRep& rep, const Word& gB,
                                            const Dlog& dlog, std::uint64_t b,
                                            const std::vector<Word>& h_gens) {
  std::vector<std::uint64_t> theta;
  theta.reserve(h_gens.size());
  for (const Word& h : h_gens) {
    const std::uint64_t e = dlog.of(rep.mul(rep.mul(rep.inv(h), gB), h));
    if (b > 1 && std::gcd(e, b) != 1)
      throw SplitError(SplitError::Kind::NotAUnit,
                       "conjugation exponent " + std::to_string(e) +
                           " is not a unit mod " + std::to_string(b));
    theta.push_back(e);
  }
  for (std::size_t i = 0; i < h_gens.size(); ++i)
    for (std::size_t j = 0; j < h_gens.size(); ++j) {
      const Word prod = rep.mul(h_gens[i], h_gens[j]);
      const std::uint64_t e = dlog.of(rep.mul(rep.mul(rep.inv(prod), gB), prod));
      if (b > 1 && e != theta[i] * theta[j] % b)
        throw SplitError(SplitError::Kind::InternalInconsistency,
                         "theta is not multiplicative on generators");
    }
  return theta;
}

/// Full decomposition data: G = H x| B with B the cyclic normal Hall part
/// whose primes are the large strongly isolated primes of n.
struct Decomposition {
  explicit Decomposition(PermRep r) : rep(std::move(r)) {}

  PermRep rep;
  std::uint64_t b = 1;
  std::vector<std::uint64_t> b_primes;
  Word gB;
  std::vector<Word> h_gens_raw;  // one complement generator per rep generator
  std::vector<Word> h_gens;      // irredundant subset
  std::vector<std::uint64_t> theta;  // exponent per h_gens entry
  GroupTable h_table = GroupTable(1, {0});
  std::vector<std::uint32_t> h_labels;      // h_table index -> group label
  std::vector<std::uint32_t> h_index;       // group label -> h_table index
  std::vector<std::uint32_t> dlog_table;    // group label -> exponent, or ~0u
  std::vector<std::uint32_t> power_labels;  // exponent -> group label

  std::uint64_t h_order() const { return h_labels.size(); }

  // conjugation exponent of an arbitrary complement element (by label)
  std::uint64_t theta_of_label(std::uint32_t label) const {
    const Word h = rep.element_of(label);
    const Word conj = rep.mul(rep.mul(rep.inv(h), gB), h);
    const std::uint32_t k = dlog_table[rep.label_of(conj)];
    if (k == UINT32_MAX)
      throw SplitError(SplitError::Kind::InternalInconsistency,
                       "conjugate of gB escapes <gB>");
    return k;
  }
};

inline Decomposition decompose(PermRep rep, const UpsilonCertificate& cert,
                               bool force = false) {
  if (!cert.member && !force)
    throw std::invalid_argument(
        "decompose requires a certified order (or force)");
  const std::uint32_t n = rep.degree();
  if (cert.n != n)
    throw std::invalid_argument("certificate order does not match the table");

  const auto fact = factorize(n);
  Decomposition dec(std::move(rep));
  dec.b_primes = pi_lsi(fact);
  dec.b = 1;
  for (std::uint64_t p : dec.b_primes) dec.b *= p;

  const auto hd = hall_generators(dec.rep, dec.b);
  dec.gB = cyclic_generator(dec.rep, hd, dec.b, dec.b_primes);
  const Dlog dlog{dec.rep, dec.gB, dec.b, dec.b_primes};

  // label <-> exponent tables for <gB>
  dec.dlog_table.assign(n, UINT32_MAX);
  dec.power_labels.assign(dec.b, 0);
  std::uint32_t cur = 0;
  for (std::uint64_t k = 0; k < dec.b; ++k) {
    dec.dlog_table[cur] = static_cast<std::uint32_t>(k);
    dec.power_labels[k] = cur;
    cur = dec.rep.apply_word(dec.gB, cur);
  }
  if (cur != 0)
    throw SplitError(SplitError::Kind::NotCyclic,
                     "gB does not have order " + std::to_string(dec.b));

  const auto pres = quotient_presentation(dec.rep, hd.cg);
  try {
    dec.h_gens_raw = bigsplit(dec.rep, pres, dec.gB, dlog, dec.b, dec.b_primes);
  } catch (const SplitError& e) {
    if (e.kind() == SplitError::Kind::NoComplement && cert.member)
      throw SplitError(SplitError::Kind::InternalInconsistency,
                       "complement must exist for a certified order");
    throw;
  }

  // complement closure and invariants
  auto h_labels = closure_labels(dec.rep, dec.h_gens_raw);
  if (h_labels.size() * dec.b != n)
    throw SplitError(SplitError::Kind::InternalInconsistency,
                     "complement order " + std::to_string(h_labels.size()) +
                         " does not complement b = " + std::to_string(dec.b));
  for (std::uint32_t x : h_labels)
    if (x != 0 && dec.dlog_table[x] != UINT32_MAX)
      throw SplitError(SplitError::Kind::InternalInconsistency,
                       "complement meets the Hall subgroup nontrivially");
  for (const auto& relator : pres.relators) {
    Word acc;
    for (std::int32_t letter : relator) {
      const std::uint32_t i = static_cast<std::uint32_t>(
          (letter > 0 ? letter : -letter) - 1);
      const Word& g = dec.h_gens_raw[i];
      acc = letter > 0 ? dec.rep.mul(acc, g)
                       : dec.rep.mul(acc, dec.rep.inv(g));
    }
    if (!dec.rep.is_identity(acc))
      throw SplitError(SplitError::Kind::InternalInconsistency,
                       "complement generators violate a relator");
  }

  if (h_labels.size() > (1u << 16))
    throw SplitError(SplitError::Kind::TooLarge,
                     "complement too large to materialize");
  std::sort(h_labels.begin(), h_labels.end());
  dec.h_labels = std::move(h_labels);
  dec.h_index.assign(n, UINT32_MAX);
  for (std::uint32_t i = 0; i < dec.h_labels.size(); ++i)
    dec.h_index[dec.h_labels[i]] = i;

  const auto nh = static_cast<std::uint32_t>(dec.h_labels.size());
  std::vector<std::uint32_t> cells(static_cast<std::size_t>(nh) * nh);
  for (std::uint32_t i = 0; i < nh; ++i) {
    const Word wi = dec.rep.element_of(dec.h_labels[i]);
    for (std::uint32_t j = 0; j < nh; ++j) {
      const std::uint32_t prod = dec.rep.apply_word(wi, dec.h_labels[j]);
      const std::uint32_t idx = dec.h_index[prod];
      if (idx == UINT32_MAX)
        throw SplitError(SplitError::Kind::InternalInconsistency,
                         "complement is not closed under multiplication");
      cells[static_cast<std::size_t>(i) * nh + j] = idx;
    }
  }
  dec.h_table = GroupTable(nh, std::move(cells));

  // irredundant generating subset of the complement, scanning high-order
  // elements first so cyclic complements end up with a single generator
  std::vector<std::pair<std::uint64_t, std::uint32_t>> candidates;
  for (const Word& g : dec.h_gens_raw) {
    const std::uint32_t label = dec.rep.label_of(g);
    if (label != 0) candidates.emplace_back(dec.rep.order_of(g), label);
  }
  std::sort(candidates.begin(), candidates.end(), [](auto& a, auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  for (const auto& [ord, label] : candidates) {
    auto span = closure_labels(dec.rep, dec.h_gens);
    if (span.size() == dec.h_labels.size()) break;
    if (std::find(span.begin(), span.end(), label) == span.end())
      dec.h_gens.push_back(dec.rep.element_of(label));
  }
  if (closure_labels(dec.rep, dec.h_gens).size() != dec.h_labels.size())
    throw SplitError(SplitError::Kind::InternalInconsistency,
                     "irredundant generating subset failed to span");
  dec.theta = theta_map(dec.rep, dec.gB, dlog, dec.b, dec.h_gens);
  return dec;
}

}  // namespace cayley
