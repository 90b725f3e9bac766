#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cayley {

class NumbersError : public std::runtime_error {
 public:
  enum class Kind {
    NotADivisor,    // queried prime does not divide n
    BoundTooLarge,  // request beyond the configured table bound
    ResourceLimit,  // request beyond the configured compute budget
  };

  NumbersError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline std::uint64_t isqrt_u64(std::uint64_t n) {
  if (n == 0) return 0;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while (r + 1 < (std::uint64_t{1} << 32) && (r + 1) * (r + 1) <= n) ++r;
  return r;
}

// ---------------------------------------------------------------------------
// Sieves and factorization.
// ---------------------------------------------------------------------------

/// Smallest-prime-factor sieve up to a fixed limit (linear sieve).
struct Sieve {
  std::uint32_t limit = 0;
  std::vector<std::uint32_t> spf;  // spf[m] = smallest prime factor, spf[0..1] = 0
  std::vector<std::uint32_t> primes;
};

inline Sieve make_sieve(std::uint32_t limit) {
  if (limit < 2) limit = 2;
  if (limit > (1u << 27))
    throw NumbersError(NumbersError::Kind::BoundTooLarge,
                       "spf sieve limited to 2^27; use sieve_primes for counts");
  Sieve s;
  s.limit = limit;
  s.spf.assign(static_cast<std::size_t>(limit) + 1, 0);
  for (std::uint32_t i = 2; i <= limit; ++i) {
    if (s.spf[i] == 0) {
      s.spf[i] = i;
      s.primes.push_back(i);
    }
    for (std::uint32_t p : s.primes) {
      if (p > s.spf[i] || static_cast<std::uint64_t>(p) * i > limit) break;
      s.spf[p * i] = p;
    }
  }
  return s;
}

/// All primes <= N. Plain bitmap up to 10^7, segmented beyond.
inline std::vector<std::uint32_t> sieve_primes(std::uint64_t N) {
  if (N > 200'000'000ull)
    throw NumbersError(NumbersError::Kind::BoundTooLarge,
                       "prime list capped at 2*10^8 entries domain");
  std::vector<std::uint32_t> primes;
  if (N < 2) return primes;
  if (N <= 10'000'000ull) {
    std::vector<bool> comp(N + 1, false);
    for (std::uint64_t i = 2; i * i <= N; ++i)
      if (!comp[i])
        for (std::uint64_t m = i * i; m <= N; m += i) comp[m] = true;
    for (std::uint64_t i = 2; i <= N; ++i)
      if (!comp[i]) primes.push_back(static_cast<std::uint32_t>(i));
    return primes;
  }
  const auto root = static_cast<std::uint32_t>(isqrt_u64(N));
  const auto base = make_sieve(root);
  const std::uint64_t window = 1u << 22;
  std::vector<bool> comp;
  for (std::uint64_t lo = 2; lo <= N; lo += window) {
    const std::uint64_t hi = std::min(N + 1, lo + window);
    comp.assign(hi - lo, false);
    for (std::uint32_t p : base.primes) {
      std::uint64_t start = std::max<std::uint64_t>(
          static_cast<std::uint64_t>(p) * p, ((lo + p - 1) / p) * p);
      for (std::uint64_t m = start; m < hi; m += p) comp[m - lo] = true;
    }
    for (std::uint64_t i = lo; i < hi; ++i)
      if (!comp[i - lo]) primes.push_back(static_cast<std::uint32_t>(i));
  }
  return primes;
}

/// Prime-power factorization with exponents, primes ascending.
struct Factorization {
  std::uint64_t n = 1;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> prime_powers;

  // largest exponent of a prime-power divisor (1 for squarefree n > 1)
  std::uint32_t max_exponent() const {
    std::uint32_t e = 0;
    for (auto& [p, k] : prime_powers) e = std::max(e, k);
    return e;
  }
};

inline Factorization factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize(0)");
  Factorization f;
  f.n = n;
  std::uint64_t m = n;
  auto strip = [&](std::uint64_t p) {
    std::uint32_t e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e) f.prime_powers.emplace_back(p, e);
  };
  strip(2);
  strip(3);
  for (std::uint64_t d = 5, step = 2; d * d <= m; d += step, step = 6 - step)
    strip(d);
  if (m > 1) f.prime_powers.emplace_back(m, 1);
  return f;
}

// ---------------------------------------------------------------------------
// Exact base-2 logarithm comparisons. Membership decisions never touch
// floating point: every comparison against log2 n or log2 log2 n is rewritten
// as an integer inequality.
// ---------------------------------------------------------------------------

/// v <= log2(n), exactly: 2^v <= n.
inline bool le_log2(std::uint64_t v, std::uint64_t n) {
  return v < 64 && (std::uint64_t{1} << v) <= n;
}

/// p <= log2(log2(n)), exactly: 2^(2^p) <= n.
inline bool le_loglog2(std::uint64_t p, std::uint64_t n) {
  return p < 7 && le_log2(std::uint64_t{1} << p, n);
}

namespace detail {

// Minimal big natural, only multiplication and bit length: enough to compare
// n^q against powers of two when resolving boundary inequalities.
struct BigNat {
  std::vector<std::uint64_t> w;  // little-endian limbs

  static BigNat from(std::uint64_t v) { return BigNat{{v}}; }

  std::uint64_t bit_length() const {
    if (w.empty() || (w.size() == 1 && w[0] == 0)) return 0;
    return (w.size() - 1) * 64 + std::bit_width(w.back());
  }

  static BigNat mul(const BigNat& a, const BigNat& b) {
    std::vector<std::uint64_t> out(a.w.size() + b.w.size(), 0);
    for (std::size_t i = 0; i < a.w.size(); ++i) {
      if (a.w[i] == 0) continue;
      unsigned __int128 carry = 0;
      for (std::size_t j = 0; j < b.w.size(); ++j) {
        unsigned __int128 cur = static_cast<unsigned __int128>(a.w[i]) * b.w[j] +
                                out[i + j] + carry;
        out[i + j] = static_cast<std::uint64_t>(cur);
        carry = cur >> 64;
      }
      std::size_t k = i + b.w.size();
      while (carry) {
        unsigned __int128 cur = carry + out[k];
        out[k] = static_cast<std::uint64_t>(cur);
        carry = cur >> 64;
        ++k;
      }
    }
    while (out.size() > 1 && out.back() == 0) out.pop_back();
    return BigNat{std::move(out)};
  }
};

// bit length of n^q
inline std::uint64_t pow_bit_length(std::uint64_t n, std::uint64_t q) {
  BigNat acc = BigNat::from(1);
  BigNat base = BigNat::from(n);
  while (q) {
    if (q & 1) acc = BigNat::mul(acc, base);
    q >>= 1;
    if (q) base = BigNat::mul(base, base);
  }
  return acc.bit_length();
}

}  // namespace detail

/// omega <= 2*log2(log2 n), exactly. Even omega reduces to an integer power
/// comparison; odd omega needs (log2 n)^2 >= 2^omega, which is decided by a
/// rational bisection between log2 n and sqrt(2^omega) using exact n^q vs 2^p
/// comparisons (no tie is possible unless n is a power of two, handled first).
inline bool le_twice_loglog2(std::uint64_t omega, std::uint64_t n) {
  if (omega == 0) return true;
  if (n < 2) return false;
  if (omega % 2 == 0) return le_loglog2(omega / 2, n);
  if (omega >= 12) return false;  // (log2 n)^2 < 4096 <= 2^omega for any u64 n
  const std::uint64_t M = std::uint64_t{1} << omega;
  if (std::has_single_bit(n)) {
    const std::uint64_t j = std::bit_width(n) - 1;
    return j * j >= M;
  }
  for (std::uint64_t q = 1; q <= (std::uint64_t{1} << 20); q *= 2) {
    const std::uint64_t p0 = isqrt_u64(M * q * q);  // p0/q <= sqrt(M) < (p0+1)/q
    const std::uint64_t bl = detail::pow_bit_length(n, q);
    if (bl >= p0 + 2) return true;  // n^q > 2^(p0+1) >= 2^(q*sqrt(M))
    if (bl <= p0) return false;     // n^q < 2^p0 <= 2^(q*sqrt(M))
  }
  throw std::logic_error("le_twice_loglog2: bisection failed to converge");
}

// ---------------------------------------------------------------------------
// Isolated primes and simple-group order tables.
// ---------------------------------------------------------------------------

/// A prime p | n is isolated when no prime power q^k | n (k >= 1) satisfies
/// q^k = 1 (mod p).
inline bool is_isolated(std::uint64_t p, const Factorization& f) {
  bool divides = false;
  for (auto& [q, e] : f.prime_powers) divides = divides || q == p;
  if (!divides)
    throw NumbersError(NumbersError::Kind::NotADivisor,
                       std::to_string(p) + " does not divide " +
                           std::to_string(f.n));
  for (auto& [q, e] : f.prime_powers) {
    if (q == p) continue;
    std::uint64_t qk = 1;
    for (std::uint32_t k = 1; k <= e; ++k) {
      qk *= q;
      if (qk % p == 1) return false;
    }
  }
  return true;
}

/// Ascending deduplicated orders of the non-abelian finite simple groups up
/// to N (default maximum 10^10). Generated from the family order formulas
/// plus the sporadic orders; the table is an order list, so groups sharing
/// an order contribute one entry.
inline std::vector<std::uint64_t> simple_orders_upto(
    std::uint64_t N, std::uint64_t configured_max = 10'000'000'000ull) {
  if (N > configured_max)
    throw NumbersError(NumbersError::Kind::BoundTooLarge,
                       "simple order table capped at " +
                           std::to_string(configured_max));
  using u128 = unsigned __int128;
  std::vector<std::uint64_t> out;
  const u128 cap = N;
  // partial products may exceed N before the final division by gcd(...) <= 64
  const u128 slack_cap = cap * 64;

  auto push = [&](u128 v) {
    if (v <= cap) out.push_back(static_cast<std::uint64_t>(v));
  };

  // alternating groups A_k, k >= 5: k!/2
  {
    u128 fact = 24;  // 4!
    for (std::uint64_t k = 5;; ++k) {
      fact *= k;
      if (fact / 2 > cap) break;
      push(fact / 2);
    }
  }

  // prime powers q used as field sizes
  std::vector<std::uint64_t> prime_powers;
  {
    auto ps = make_sieve(1u << 16).primes;
    for (std::uint64_t p : ps)
      for (u128 q = p; q <= (std::uint64_t{1} << 16); q *= p)
        prime_powers.push_back(static_cast<std::uint64_t>(q));
    std::sort(prime_powers.begin(), prime_powers.end());
  }

  auto qpow = [&](std::uint64_t q, std::uint64_t e) -> u128 {
    u128 r = 1;
    while (e--) {
      r *= q;
      if (r > slack_cap) return slack_cap + 1;
    }
    return r;
  };

  for (std::uint64_t q : prime_powers) {
    // PSL(d, q), d >= 2; PSL(2,2) and PSL(2,3) are not simple
    for (std::uint64_t d = 2;; ++d) {
      u128 ord = qpow(q, d * (d - 1) / 2);
      for (std::uint64_t i = 2; i <= d && ord <= slack_cap; ++i)
        ord *= qpow(q, i) - 1;
      if (ord > slack_cap) break;
      if (!(d == 2 && (q == 2 || q == 3)))
        push(ord / std::gcd<std::uint64_t>(d, q - 1));
    }
    if (qpow(q, 2) > cap) continue;  // remaining families need at least q^2

    // PSU(d, q), d >= 3; PSU(3,2) is solvable
    for (std::uint64_t d = 3;; ++d) {
      if (d == 3 && q == 2) continue;
      u128 ord = qpow(q, d * (d - 1) / 2);
      for (std::uint64_t i = 2; i <= d && ord <= slack_cap; ++i) {
        const u128 qi = qpow(q, i);
        ord *= (i % 2 == 0) ? qi - 1 : qi + 1;
      }
      if (ord > slack_cap) break;
      push(ord / std::gcd<std::uint64_t>(d, q + 1));
    }

    // PSp(2m, q), m >= 2; PSp(4,2) = Sym(6) is not simple.
    // POmega(2m+1, q) has the same order for every q, so the odd-dimensional
    // orthogonal family adds no new orders to the table.
    for (std::uint64_t m = 2;; ++m) {
      if (m == 2 && q == 2) continue;
      u128 ord = qpow(q, m * m);
      for (std::uint64_t i = 1; i <= m && ord <= slack_cap; ++i)
        ord *= qpow(q, 2 * i) - 1;
      if (ord > slack_cap) break;
      push(ord / std::gcd<std::uint64_t>(2, q - 1));
    }

    // POmega+/-(2m, q), m >= 4
    for (int sign : {+1, -1}) {
      for (std::uint64_t m = 4;; ++m) {
        u128 ord = qpow(q, m * (m - 1));
        const u128 qm_pm = qpow(q, m) + (sign > 0 ? -1 : +1);
        if (ord <= slack_cap) ord *= qm_pm;
        for (std::uint64_t i = 1; i + 1 <= m && ord <= slack_cap; ++i)
          ord *= qpow(q, 2 * i) - 1;
        if (ord > slack_cap) break;
        push(ord / std::gcd<std::uint64_t>(
                       4, static_cast<std::uint64_t>(qm_pm % 4)));
      }
    }

    // exceptional families
    if (q >= 3) {  // G2(2) is not simple; its derived group is PSU(3,3)
      u128 ord = qpow(q, 6);
      if (ord <= slack_cap) {
        ord *= qpow(q, 6) - 1;
        if (ord <= slack_cap) push(ord * (qpow(q, 2) - 1));
      }
    }
    {
      u128 ord = qpow(q, 12);  // 3D4(q)
      if (ord <= slack_cap) {
        ord *= qpow(q, 8) + qpow(q, 4) + 1;
        if (ord <= slack_cap) ord *= qpow(q, 6) - 1;
        if (ord <= slack_cap) push(ord * (qpow(q, 2) - 1));
      }
    }
    {
      u128 ord = qpow(q, 24);  // F4(q)
      if (ord <= slack_cap) {
        for (std::uint64_t i : {12u, 8u, 6u, 2u})
          if (ord <= slack_cap) ord *= qpow(q, i) - 1;
        if (ord <= slack_cap) push(ord);
      }
    }
    {
      u128 ord = qpow(q, 36);  // E6(q)
      if (ord <= slack_cap) {
        for (std::uint64_t i : {12u, 9u, 8u, 6u, 5u, 2u})
          if (ord <= slack_cap) ord *= qpow(q, i) - 1;
        if (ord <= slack_cap) push(ord / std::gcd<std::uint64_t>(3, q - 1));
      }
    }
    {
      u128 ord = qpow(q, 36);  // 2E6(q)
      if (ord <= slack_cap) {
        for (std::uint64_t i : {12u, 8u, 6u, 2u})
          if (ord <= slack_cap) ord *= qpow(q, i) - 1;
        if (ord <= slack_cap) ord *= qpow(q, 9) + 1;
        if (ord <= slack_cap) ord *= qpow(q, 5) + 1;
        if (ord <= slack_cap) push(ord / std::gcd<std::uint64_t>(3, q + 1));
      }
    }
    {
      u128 ord = qpow(q, 63);  // E7(q)
      if (ord <= slack_cap) {
        for (std::uint64_t i : {18u, 14u, 12u, 10u, 8u, 6u, 2u})
          if (ord <= slack_cap) ord *= qpow(q, i) - 1;
        if (ord <= slack_cap) push(ord / std::gcd<std::uint64_t>(2, q - 1));
      }
    }
    {
      u128 ord = qpow(q, 120);  // E8(q)
      if (ord <= slack_cap) {
        for (std::uint64_t i : {30u, 24u, 20u, 18u, 14u, 12u, 8u, 2u})
          if (ord <= slack_cap) ord *= qpow(q, i) - 1;
        if (ord <= slack_cap) push(ord);
      }
    }
  }

  // Suzuki and Ree families over q = 2^(2e+1) or 3^(2e+1)
  for (u128 q = 8; q * q * (q * q + 1) * (q - 1) <= slack_cap; q *= 4)
    push(q * q * (q * q + 1) * (q - 1));  // Sz(q), q = 2^(2e+1) >= 8
  for (u128 q = 27;; q *= 9) {            // 2G2(q), q = 3^(2e+1) >= 27
    u128 q3 = q * q * q;
    if (q3 > slack_cap / (q3 + 1)) break;
    u128 ord = q3 * (q3 + 1);
    if (ord > slack_cap / (q - 1)) break;
    push(ord * (q - 1));
  }
  for (u128 q = 8;; q *= 4) {  // 2F4(q), q = 2^(2e+1) >= 8
    u128 ord = qpow(static_cast<std::uint64_t>(q), 12);
    if (ord > slack_cap) break;
    for (int step = 0; step < 4 && ord <= slack_cap; ++step) {
      switch (step) {
        case 0: ord *= qpow(static_cast<std::uint64_t>(q), 6) + 1; break;
        case 1: ord *= qpow(static_cast<std::uint64_t>(q), 4) - 1; break;
        case 2: ord *= qpow(static_cast<std::uint64_t>(q), 3) + 1; break;
        case 3: ord *= q - 1; break;
      }
    }
    if (ord <= slack_cap) push(ord);
  }
  push(17971200);  // Tits group, the derived subgroup of 2F4(2)

  // sporadic orders that fit in 64 bits; the remaining four (J4, Fi24',
  // Baby Monster, Monster) all exceed 8*10^19 and the configured maximum
  static constexpr std::uint64_t kSporadic[] = {
      7920ull,                // M11
      95040ull,               // M12
      175560ull,              // J1
      443520ull,              // M22
      604800ull,              // J2
      10200960ull,            // M23
      44352000ull,            // HS
      50232960ull,            // J3
      244823040ull,           // M24
      898128000ull,           // McL
      4030387200ull,          // He
      145926144000ull,        // Ru
      448345497600ull,        // Suz
      460815505920ull,        // O'N
      495766656000ull,        // Co3
      42305421312000ull,      // Co2
      64561751654400ull,      // Fi22
      273030912000000ull,     // HN
      51765179004000000ull,   // Ly
      90745943887872000ull,   // Th
      4089470473293004800ull, // Fi23
      4157776806543360000ull, // Co1
  };
  for (std::uint64_t v : kSporadic) push(v);

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Strongly isolated: isolated, and p divides no simple-group order that
/// divides n.
inline bool strongly_isolated(std::uint64_t p, const Factorization& f) {
  if (!is_isolated(p, f)) return false;
  for (std::uint64_t t : simple_orders_upto(f.n))
    if (f.n % t == 0 && t % p == 0) return false;
  return true;
}

/// Strongly isolated primes of n exceeding log2 log2 n, ascending. These are
/// the primes of the large cyclic normal Hall subgroup in the decomposition.
inline std::vector<std::uint64_t> pi_lsi(const Factorization& f) {
  std::vector<std::uint64_t> out;
  const auto simple = simple_orders_upto(f.n);
  for (auto& [p, e] : f.prime_powers) {
    if (le_loglog2(p, f.n)) continue;
    if (!is_isolated(p, f)) continue;
    bool strong = true;
    for (std::uint64_t t : simple)
      if (f.n % t == 0 && t % p == 0) strong = false;
    if (strong) out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// The order class Upsilon: n = a*b where a collects the prime powers with
// p <= log2 log2 n, and
//   a) p^e | a implies p^e <= log2 n,
//   b) every p | b exceeds log2 log2 n and is isolated in n,
//   c) b is squarefree,
//   d) b has at most 2*log2 log2 n prime divisors.
// Small-order convention: 1 is a member (a = b = 1, all conditions vacuous);
// 2 and 3 are non-members (the degenerate log2 log2 bounds force b = 1 while
// every prime of n must land in b).
// ---------------------------------------------------------------------------

struct UpsilonCertificate {
  std::uint64_t n = 0;
  std::uint64_t a = 1;
  std::uint64_t b = 1;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> small_primes;  // of a
  std::vector<std::uint64_t> big_primes;                              // of b
  bool member = false;
  std::optional<char> failing_condition;  // 'a', 'b', 'c' or 'd'
  std::uint64_t witness = 0;              // offending prime, when applicable
};

inline UpsilonCertificate upsilon_check(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("upsilon_check(0)");
  if (n >= (std::uint64_t{1} << 32))
    throw NumbersError(NumbersError::Kind::ResourceLimit,
                       "membership test supported for n < 2^32");
  UpsilonCertificate c;
  c.n = n;
  if (n == 1) {
    c.member = true;
    return c;
  }
  if (n <= 3) {
    c.b = n;
    c.big_primes = {n};
    c.member = false;
    c.failing_condition = 'd';
    c.witness = n;
    return c;
  }
  const auto f = factorize(n);
  std::vector<std::pair<std::uint64_t, std::uint32_t>> big;
  for (auto& [p, e] : f.prime_powers) {
    std::uint64_t pe = 1;
    for (std::uint32_t k = 0; k < e; ++k) pe *= p;
    if (le_loglog2(p, n)) {
      c.small_primes.emplace_back(p, e);
      c.a *= pe;
    } else {
      big.emplace_back(p, e);
      c.big_primes.push_back(p);
      c.b *= pe;
    }
  }
  auto fail = [&](char cond, std::uint64_t witness) {
    c.member = false;
    c.failing_condition = cond;
    c.witness = witness;
  };
  // a) small prime powers bounded by log2 n
  for (auto& [p, e] : c.small_primes) {
    std::uint64_t pe = 1;
    bool overflow = false;
    for (std::uint32_t k = 0; k < e; ++k) {
      if (pe > (std::uint64_t{1} << 62) / p) overflow = true;
      pe = overflow ? pe : pe * p;
    }
    if (overflow || !le_log2(pe, n)) return fail('a', p), c;
  }
  // b) big primes isolated (they exceed log2 log2 n by the split)
  for (auto& [p, e] : big)
    if (!is_isolated(p, f)) return fail('b', p), c;
  // c) big part squarefree
  for (auto& [p, e] : big)
    if (e != 1) return fail('c', p), c;
  // d) big part has at most 2*log2 log2 n prime divisors
  if (!le_twice_loglog2(big.size(), n)) return fail('d', big.size()), c;
  c.member = true;
  return c;
}

// ---------------------------------------------------------------------------
// Density counting: exact |members <= m| at decimal checkpoints, via a
// segmented factor sieve. This is a second, streamlined evaluation of the
// membership conditions (the per-n certificate path above factors by trial
// division); the two routes are cross-checked in tests.
// ---------------------------------------------------------------------------

struct DensityOptions {
  std::uint64_t cap = 1'000'000'000ull;  // refuse larger N unless overridden
  bool allow_above_cap = false;
  bool base2_exact = true;  // exact integer comparisons; false: long double
};

struct DensityPoint {
  std::uint64_t checkpoint = 0;
  std::uint64_t count = 0;
  double ratio = 0.0;
};

namespace detail {

// membership evaluation on batch-sieved factor slots
inline bool upsilon_member_from_factors(std::uint64_t n,
                                        const std::uint32_t* fp,
                                        const std::uint8_t* fe,
                                        std::uint32_t fc, bool exact) {
  if (n == 1) return true;
  if (n <= 3) return false;
  if (!exact) {
    const long double ll = std::log2l(std::log2l(static_cast<long double>(n)));
    const long double l = std::log2l(static_cast<long double>(n));
    std::uint32_t omega_b = 0;
    for (std::uint32_t i = 0; i < fc; ++i) {
      const std::uint64_t p = fp[i];
      if (static_cast<long double>(p) <= ll) {
        long double pe = 1;
        for (std::uint8_t k = 0; k < fe[i]; ++k) pe *= p;
        if (pe > l) return false;
      } else {
        if (fe[i] != 1) return false;
        for (std::uint32_t j = 0; j < fc; ++j) {
          if (j == i) continue;
          std::uint64_t qk = 1;
          for (std::uint8_t k = 0; k < fe[j]; ++k) {
            qk *= fp[j];
            if (qk % p == 1) return false;
          }
        }
        ++omega_b;
      }
    }
    return static_cast<long double>(omega_b) <= 2 * ll;
  }
  std::uint32_t omega_b = 0;
  for (std::uint32_t i = 0; i < fc; ++i) {
    const std::uint64_t p = fp[i];
    if (le_loglog2(p, n)) {
      std::uint64_t pe = 1;
      bool over = false;
      for (std::uint8_t k = 0; k < fe[i]; ++k) {
        if (pe > (std::uint64_t{1} << 62) / p) over = true;
        pe = over ? pe : pe * p;
      }
      if (over || !le_log2(pe, n)) return false;  // condition a
    } else {
      if (fe[i] != 1) return false;  // condition c
      for (std::uint32_t j = 0; j < fc; ++j) {  // condition b: isolated
        if (j == i) continue;
        std::uint64_t qk = 1;
        for (std::uint8_t k = 0; k < fe[j]; ++k) {
          qk *= fp[j];
          if (qk % p == 1) return false;
        }
      }
      ++omega_b;
    }
  }
  return le_twice_loglog2(omega_b, n);  // condition d
}

}  // namespace detail

inline std::vector<DensityPoint> density(std::uint64_t N,
                                         DensityOptions opt = {}) {
  if (N < 1) throw std::invalid_argument("density(0)");
  if (N > opt.cap && !opt.allow_above_cap)
    throw NumbersError(NumbersError::Kind::ResourceLimit,
                       "N exceeds the density cap " + std::to_string(opt.cap) +
                           " (pass the override to proceed)");
  if (N >= (std::uint64_t{1} << 32))
    throw NumbersError(NumbersError::Kind::ResourceLimit,
                       "density counting supported for N < 2^32");

  std::vector<std::uint64_t> checkpoints;
  for (std::uint64_t m = 10; m <= N / 10 * 10 && m <= N; m *= 10)
    checkpoints.push_back(m);
  if (checkpoints.empty() || checkpoints.back() != N) checkpoints.push_back(N);

  const auto base = make_sieve(
      std::max<std::uint32_t>(2, static_cast<std::uint32_t>(isqrt_u64(N))));

  constexpr std::uint32_t kMaxF = 9;  // omega(n) <= 9 for n < 2^32
  constexpr std::uint64_t kWindow = 1u << 18;
  std::vector<std::uint32_t> rem(kWindow);
  std::vector<std::uint32_t> fp(kWindow * kMaxF);
  std::vector<std::uint8_t> fe(kWindow * kMaxF);
  std::vector<std::uint8_t> fc(kWindow);

  std::vector<DensityPoint> points;
  std::uint64_t count = 0;
  std::size_t next_cp = 0;

  for (std::uint64_t lo = 1; lo <= N; lo += kWindow) {
    const std::uint64_t hi = std::min(N + 1, lo + kWindow);
    const std::uint64_t len = hi - lo;
    for (std::uint64_t i = 0; i < len; ++i)
      rem[i] = static_cast<std::uint32_t>(lo + i);
    std::fill(fc.begin(), fc.begin() + len, 0);
    for (std::uint32_t p : base.primes) {
      if (static_cast<std::uint64_t>(p) * p >= hi) break;
      std::uint64_t m = ((lo + p - 1) / p) * p;
      if (m < p) m = p;
      for (; m < hi; m += p) {
        const std::uint64_t i = m - lo;
        std::uint32_t e = 0;
        while (rem[i] % p == 0) {
          rem[i] /= p;
          ++e;
        }
        const std::uint32_t slot = i * kMaxF + fc[i]++;
        fp[slot] = p;
        fe[slot] = static_cast<std::uint8_t>(e);
      }
    }
    for (std::uint64_t i = 0; i < len; ++i) {
      const std::uint64_t n = lo + i;
      if (rem[i] > 1) {
        const std::uint32_t slot = i * kMaxF + fc[i]++;
        fp[slot] = rem[i];
        fe[slot] = 1;
      }
      if (detail::upsilon_member_from_factors(n, &fp[i * kMaxF], &fe[i * kMaxF],
                                              fc[i], opt.base2_exact))
        ++count;
      while (next_cp < checkpoints.size() && checkpoints[next_cp] == n) {
        points.push_back({n, count, static_cast<double>(count) / n});
        ++next_cp;
      }
    }
  }
  return points;
}

}  // namespace cayley
