#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "cayley/numbers.hpp"

using namespace cayley;

TEST_CASE("sieves", "[numbers]") {
  CHECK(sieve_primes(10) == std::vector<std::uint32_t>{2, 3, 5, 7});
  CHECK(sieve_primes(1) == std::vector<std::uint32_t>{});

  // pi(10^6) = 78498; spot-check sieve output by trial division
  const auto primes = sieve_primes(1'000'000);
  CHECK(primes.size() == 78498);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, primes.size() - 1);
  for (int rep = 0; rep < 50; ++rep) {
    const std::uint64_t p = primes[pick(rng)];
    bool prime = p >= 2;
    for (std::uint64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) prime = false;
    REQUIRE(prime);
  }

  const auto s = make_sieve(100);
  CHECK(s.spf[91] == 7);
  CHECK(s.spf[97] == 97);
  CHECK(s.primes.size() == 25);

  // segmented and plain routes agree
  CHECK(sieve_primes(20'000'000).size() == 1'270'607);  // pi(2*10^7)
}

TEST_CASE("factorize", "[numbers]") {
  const auto f = factorize(12400);  // 2^4 * 5^2 * 31
  REQUIRE(f.prime_powers.size() == 3);
  CHECK(f.prime_powers[0] == std::pair<std::uint64_t, std::uint32_t>{2, 4});
  CHECK(f.prime_powers[1] == std::pair<std::uint64_t, std::uint32_t>{5, 2});
  CHECK(f.prime_powers[2] == std::pair<std::uint64_t, std::uint32_t>{31, 1});
  CHECK(f.max_exponent() == 4);

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint64_t> pick(1, 1'000'000);
  for (int rep = 0; rep < 200; ++rep) {
    const std::uint64_t n = pick(rng);
    const auto g = factorize(n);
    std::uint64_t prod = 1;
    for (auto& [p, e] : g.prime_powers)
      for (std::uint32_t k = 0; k < e; ++k) prod *= p;
    REQUIRE(prod == n);
  }
}

TEST_CASE("isolated primes: the order-31 fixtures", "[numbers]") {
  CHECK(is_isolated(31, factorize(12400)));        // 2^4 * 5^2 * 31
  CHECK_FALSE(is_isolated(31, factorize(24800)));  // 2^5 * 5^2 * 31
  CHECK_FALSE(is_isolated(31, factorize(62000)));  // 2^4 * 5^3 * 31
  CHECK_THROWS_MATCHES(is_isolated(7, factorize(12400)), NumbersError,
                       Catch::Matchers::Predicate<NumbersError>([](const NumbersError& e) {
                         return e.kind() == NumbersError::Kind::NotADivisor;
                       }));
}

TEST_CASE("isolation is monotone under removing prime powers", "[numbers]") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::uint64_t> pick(2, 100'000);
  for (int rep = 0; rep < 300; ++rep) {
    const std::uint64_t n = pick(rng);
    const auto f = factorize(n);
    for (auto& [p, e] : f.prime_powers) {
      if (!is_isolated(p, f)) continue;
      // drop another prime power entirely; p stays isolated in the divisor
      for (auto& [q, eq] : f.prime_powers) {
        if (q == p) continue;
        std::uint64_t d = n;
        for (std::uint32_t k = 0; k < eq; ++k) d /= q;
        REQUIRE(is_isolated(p, factorize(d)));
      }
    }
  }
}

TEST_CASE("simple group order table", "[numbers]") {
  CHECK(simple_orders_upto(100) == std::vector<std::uint64_t>{60});
  CHECK(simple_orders_upto(1000) ==
        std::vector<std::uint64_t>{60, 168, 360, 504, 660});
  const auto t = simple_orders_upto(30000);
  const std::vector<std::uint64_t> first12{60,   168,  360,  504,  660,  1092,
                                           2448, 2520, 3420, 4080, 5616, 6048};
  REQUIRE(t.size() >= 12);
  CHECK(std::vector<std::uint64_t>(t.begin(), t.begin() + 12) == first12);
  // 20160 = |A_8| = |PSL(3,4)| appears exactly once
  CHECK(std::count(t.begin(), t.end(), 20160) == 1);
  // sporadic orders present once generated far enough
  const auto big = simple_orders_upto(10'000'000);
  CHECK(std::count(big.begin(), big.end(), 7920) == 1);    // M11
  CHECK(std::count(big.begin(), big.end(), 95040) == 1);   // M12
  CHECK(std::count(big.begin(), big.end(), 175560) == 1);  // J1
  CHECK(std::count(big.begin(), big.end(), 29120) == 1);   // Sz(8)
  CHECK(std::is_sorted(big.begin(), big.end()));
  CHECK_THROWS_MATCHES(simple_orders_upto(100'000'000'000ull), NumbersError,
                       Catch::Matchers::Predicate<NumbersError>([](const NumbersError& e) {
                         return e.kind() == NumbersError::Kind::BoundTooLarge;
                       }));
}

TEST_CASE("strongly isolated primes and the large strongly isolated set",
          "[numbers]") {
  CHECK(is_isolated(5, factorize(60)));
  CHECK_FALSE(strongly_isolated(5, factorize(60)));  // |A_5| = 60 divides 60
  CHECK(strongly_isolated(11, factorize(22)));
  CHECK(pi_lsi(factorize(22)) == std::vector<std::uint64_t>{11});
  CHECK(strongly_isolated(3, factorize(15)));
  CHECK(pi_lsi(factorize(15)) == std::vector<std::uint64_t>{3, 5});
  // 780 = 2^2*3*5*13 is divisible by 60, so 5 is isolated but not strongly
  CHECK(is_isolated(5, factorize(780)));
  CHECK_FALSE(strongly_isolated(5, factorize(780)));
  CHECK(pi_lsi(factorize(780)) == std::vector<std::uint64_t>{13});
}

TEST_CASE("exact double-log comparisons", "[numbers]") {
  // p <= log2 log2 n  <=>  2^(2^p) <= n
  CHECK(le_loglog2(2, 16));
  CHECK_FALSE(le_loglog2(2, 15));
  CHECK(le_loglog2(3, 256));
  CHECK_FALSE(le_loglog2(3, 255));
  CHECK_FALSE(le_loglog2(5, 100'000'000));  // needs n >= 2^32

  // omega <= 2 log2 log2 n, including the odd (sqrt) cases
  CHECK(le_twice_loglog2(0, 2));
  CHECK_FALSE(le_twice_loglog2(1, 2));
  CHECK(le_twice_loglog2(1, 3));   // (log2 3)^2 = 2.51 >= 2
  CHECK(le_twice_loglog2(2, 16));  // 2^(2^1) = 4 <= 16
  CHECK_FALSE(le_twice_loglog2(2, 3));
  CHECK_FALSE(le_twice_loglog2(3, 7));  // (log2 7)^2 = 7.88 < 8
  CHECK(le_twice_loglog2(3, 8));        // power of two: 3^2 >= 8
  CHECK_FALSE(le_twice_loglog2(5, 50));  // (log2 50)^2 = 31.85 < 32
  CHECK(le_twice_loglog2(5, 51));        // (log2 51)^2 = 32.17 >= 32
  CHECK(le_twice_loglog2(8, 65536));  // omega/2 = 4: needs n >= 2^16
  CHECK_FALSE(le_twice_loglog2(8, 65535));
  CHECK(le_twice_loglog2(4, 16));  // omega/2 = 2: needs n >= 2^4
  CHECK_FALSE(le_twice_loglog2(4, 15));
}

TEST_CASE("upsilon certificates", "[numbers]") {
  const auto c22 = upsilon_check(22);
  CHECK(c22.member);
  CHECK(c22.a == 2);
  CHECK(c22.b == 11);
  CHECK(c22.big_primes == std::vector<std::uint64_t>{11});

  const auto c21 = upsilon_check(21);
  CHECK_FALSE(c21.member);
  REQUIRE(c21.failing_condition.has_value());
  CHECK(*c21.failing_condition == 'b');  // 3 divides 7 - 1
  CHECK(c21.witness == 3);

  const auto c33 = upsilon_check(33);
  CHECK(c33.member);
  CHECK(c33.a == 1);
  CHECK(c33.b == 33);

  // small-order conventions
  CHECK(upsilon_check(1).member);
  CHECK_FALSE(upsilon_check(2).member);
  CHECK_FALSE(upsilon_check(3).member);

  // assorted members and non-members
  for (std::uint64_t n : {5, 7, 11, 13, 15, 17, 19, 20, 22, 23, 26, 29, 30,
                          33, 44, 46, 86, 118, 286, 291, 323})
    CHECK(upsilon_check(n).member);
  for (std::uint64_t n : {4, 6, 8, 9, 10, 12, 14, 16, 18, 21, 24, 25, 42, 57,
                          110, 155, 210, 310})
    CHECK_FALSE(upsilon_check(n).member);

  // 12400 = 2^4*5^2*31 fails the small prime-power cap (2^4 > log2 n)
  const auto c = upsilon_check(12400);
  CHECK_FALSE(c.member);
  REQUIRE(c.failing_condition.has_value());
  CHECK(*c.failing_condition == 'a');

  // a*b = n always
  for (std::uint64_t n = 1; n <= 10'000; ++n) {
    const auto cert = upsilon_check(n);
    REQUIRE(cert.a * cert.b == n);
  }
}

TEST_CASE("pi_lsi refines the certificate's big part", "[numbers]") {
  for (std::uint64_t n = 2; n <= 3000; ++n) {
    const auto cert = upsilon_check(n);
    if (!cert.member) continue;
    const auto f = factorize(n);
    for (std::uint64_t p : pi_lsi(f)) {
      CHECK(cert.b % p == 0);
      CHECK(n % (p * p) != 0);  // squarefree occurrence
    }
  }
}

TEST_CASE("density counting matches the per-n certificate route", "[numbers]") {
  const auto pts = density(100'000);
  REQUIRE(!pts.empty());
  std::uint64_t count = 0;
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    count += upsilon_check(n).member;
    while (next < pts.size() && pts[next].checkpoint == n) {
      REQUIRE(pts[next].count == count);
      ++next;
    }
  }
  REQUIRE(next == pts.size());

  // a random window, batch vs per-n
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::uint64_t> pick(100'000, 1'000'000);
  const std::uint64_t hi = pick(rng);
  const auto full = density(hi);
  std::uint64_t per_n = 0;
  for (std::uint64_t n = hi - 10'000 + 1; n <= hi; ++n)
    per_n += upsilon_check(n).member;
  const auto prev = density(hi - 10'000);
  CHECK(full.back().count - prev.back().count == per_n);
}

TEST_CASE("density pins and plausibility", "[numbers]") {
  const auto pts = density(1'000'000);
  REQUIRE(pts.back().checkpoint == 1'000'000);
  CHECK(pts.back().count == 738124);  // frozen after first computation
  for (const auto& p : pts) {
    CHECK(p.ratio > 0.0);
    CHECK(p.ratio < 1.0);
  }
  CHECK_THROWS_MATCHES(density(2'000'000'000ull), NumbersError,
                       Catch::Matchers::Predicate<NumbersError>([](const NumbersError& e) {
                         return e.kind() == NumbersError::Kind::ResourceLimit;
                       }));
}

TEST_CASE("density float-comparison mode agrees at this scale", "[numbers]") {
  DensityOptions opt;
  opt.base2_exact = false;
  CHECK(density(100'000, opt).back().count == density(100'000).back().count);
}
