#include <random>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "cayley/table.hpp"
#include "support/corpus.hpp"
#include "support/oracle.hpp"

using namespace cayley;

namespace {

GroupTable from_text(const std::string& text) {
  std::istringstream in(text);
  return parse_table(in);
}

// reduced 5x5 latin square that is not a group (2*2 = 1 forces an element of
// order 2, impossible at order 5); (2*2)*3 = 3 but 2*(2*3) = 5
const char* kLoop5 =
    "5\n"
    "1 2 3 4 5\n"
    "2 1 4 5 3\n"
    "3 4 5 1 2\n"
    "4 5 2 3 1\n"
    "5 3 1 2 4\n";

}  // namespace

TEST_CASE("parse_table accepts the cyclic table of order 3", "[tables]") {
  const auto t = from_text("3\n1 2 3\n2 3 1\n3 1 2\n");
  REQUIRE(t.order() == 3);
  CHECK(t.entry(1, 1) == 2);  // 2*2 = 3, 0-based 1*1 = 2
  CHECK(t == make_cyclic(3));
}

TEST_CASE("parse_table rejects non-reduced and malformed inputs", "[tables]") {
  CHECK_THROWS_MATCHES(from_text("2\n2 1\n1 2\n"), TableError,
                       Catch::Matchers::Predicate<TableError>([](const TableError& e) {
                         return e.kind() == TableError::Kind::NotReduced;
                       }));
  CHECK_THROWS_MATCHES(from_text("3\n1 2 3\n2 3 4\n3 1 2\n"), TableError,
                       Catch::Matchers::Predicate<TableError>([](const TableError& e) {
                         return e.kind() == TableError::Kind::MalformedInput;
                       }));
  CHECK_THROWS_AS(from_text(""), TableError);
  CHECK_THROWS_AS(from_text("2\n1 2\n2 x\n"), TableError);
  CHECK_THROWS_AS(from_text("2\n1 2\n2 1\n7\n"), TableError);  // trailing token
  CHECK_THROWS_AS(from_text("4\n1 2\n2 1\n"), TableError);     // too short
}

TEST_CASE("parse_table skips comments and odd spacing", "[tables]") {
  const auto t = from_text("# cyclic group of order 2\n2\n  1\t2\n# inner\n2 1\n");
  CHECK(t == make_cyclic(2));
}

TEST_CASE("emit then parse is the identity, and emission is canonical",
          "[tables]") {
  const auto t = make_dihedral(6);
  std::ostringstream out1;
  emit_table(t, out1);
  auto t2 = from_text(out1.str());
  CHECK(t == t2);
  std::ostringstream out2;
  emit_table(t2, out2);
  CHECK(out1.str() == out2.str());
  // whitespace-normalized variants parse to the same table
  std::string spaced = "  " + out1.str() + "\n\n";
  CHECK(from_text(spaced) == t);
}

TEST_CASE("latin_defect reports rows, columns, and accepts latin squares",
          "[tables]") {
  CHECK_FALSE(latin_defect(make_cyclic(3)).has_value());

  // duplicate manufactured in row 2 (1-based): copy entry (2,3) over (2,2)
  auto c4 = make_cyclic(4);
  std::vector<std::uint32_t> cells;
  for (std::uint32_t i = 0; i < 4; ++i)
    for (std::uint32_t j = 0; j < 4; ++j) cells.push_back(c4.entry(i, j));
  cells[1 * 4 + 1] = cells[1 * 4 + 2];
  const GroupTable rowdup(4, std::move(cells));
  auto defect = latin_defect(rowdup);
  REQUIRE(defect.has_value());
  CHECK(defect->in_row);
  CHECK(defect->line == 1);
  CHECK(defect->symbol == 3);  // 0-based: the repeated symbol is "4"

  // swapping two entries inside a row keeps the row latin but breaks columns
  cells.clear();
  for (std::uint32_t i = 0; i < 4; ++i)
    for (std::uint32_t j = 0; j < 4; ++j) cells.push_back(c4.entry(i, j));
  std::swap(cells[1 * 4 + 1], cells[1 * 4 + 2]);
  const GroupTable colswap(4, std::move(cells));
  auto cdefect = latin_defect(colswap);
  REQUIRE(cdefect.has_value());
  CHECK_FALSE(cdefect->in_row);

  // a latin square need not be a group: validate_latin must still accept
  const auto loop5 = from_text(kLoop5);
  CHECK_FALSE(latin_defect(loop5).has_value());
  CHECK_FALSE(test::oracle_is_group(loop5));
  CHECK(loop5.entry(1, 1) == 0);  // 2*2 = 1, so 2 would need order 2
}

TEST_CASE("family tables are groups (oracle) with documented layouts",
          "[tables]") {
  // cyclic addition layout
  const auto c6 = make_cyclic(6);
  for (std::uint32_t i = 0; i < 6; ++i)
    for (std::uint32_t j = 0; j < 6; ++j)
      CHECK(c6.entry(i, j) == (i + j) % 6);

  for (std::uint64_t n = 1; n <= 64; ++n)
    CHECK(test::oracle_is_group(make_cyclic(n)));

  const auto d11 = make_dihedral(11);
  REQUIRE(d11.order() == 22);
  CHECK(test::oracle_is_group(d11));
  // trivial center: only the identity commutes with everything
  std::uint32_t central = 0;
  for (std::uint32_t x = 0; x < 22; ++x) {
    bool commutes = true;
    for (std::uint32_t y = 0; y < 22; ++y)
      commutes = commutes && d11.entry(x, y) == d11.entry(y, x);
    central += commutes;
  }
  CHECK(central == 1);

  CHECK(test::oracle_is_group(make_direct_product({2, 4})));
  CHECK(test::oracle_is_group(make_direct_product({2, 2, 3})));
  CHECK(test::oracle_is_group(make_semidirect_cyclic(11, 2, 10)));
  CHECK(test::oracle_is_group(make_semidirect_cyclic(5, 4, 2)));
  CHECK(test::oracle_is_group(make_semidirect_cyclic(97, 3, 35)));
}

TEST_CASE("make_family rejects invalid parameters", "[tables]") {
  CHECK_THROWS_MATCHES(make_semidirect_cyclic(11, 2, 3), TableError,
                       Catch::Matchers::Predicate<TableError>([](const TableError& e) {
                         return e.kind() == TableError::Kind::InvalidParams;
                       }));
  CHECK_THROWS_AS(make_semidirect_cyclic(10, 2, 9), TableError);  // q not prime
  CHECK_THROWS_AS(make_cyclic(0), TableError);
  CHECK_THROWS_AS(make_family({FamilySpec::Kind::DirectProduct, {}}),
                  TableError);
}

TEST_CASE("relabel transports the table and round-trips", "[tables]") {
  const auto c3 = make_cyclic(3);
  CHECK(relabel(c3, {0, 1, 2}) == c3);

  // swapping the two generators of C3 is inversion, an automorphism: the
  // relabeled table is the same table
  const auto swapped = relabel(c3, {0, 2, 1});
  CHECK(test::oracle_is_group(swapped));
  CHECK(swapped == c3);
  // a non-automorphism relabeling of C4 produces a genuinely different table
  const auto c4 = make_cyclic(4);
  CHECK_FALSE(relabel(c4, {0, 2, 1, 3}) == c4);
  CHECK(test::oracle_is_group(relabel(c4, {0, 2, 1, 3})));

  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const auto t = make_dihedral(7);
    const auto sigma = test::random_relabel_perm(t.order(), rng);
    std::vector<std::uint32_t> inv(sigma.size());
    for (std::uint32_t i = 0; i < sigma.size(); ++i) inv[sigma[i]] = i;
    CHECK(relabel(relabel(t, sigma), inv) == t);
    CHECK(test::oracle_is_group(relabel(t, sigma)));
  }

  CHECK_THROWS_MATCHES(relabel(c3, {1, 0, 2}), TableError,
                       Catch::Matchers::Predicate<TableError>([](const TableError& e) {
                         return e.kind() == TableError::Kind::InvalidPermutation;
                       }));
  CHECK_THROWS_AS(relabel(c3, {0, 1}), TableError);
  CHECK_THROWS_AS(relabel(c3, {0, 1, 1}), TableError);
}

TEST_CASE("accepted latin squares have each symbol once per line", "[tables]") {
  std::mt19937_64 rng(11);
  for (std::uint32_t n : {5u, 9u, 16u}) {
    for (int rep = 0; rep < 10; ++rep) {
      const auto t = test::random_reduced_latin(n, rng);
      REQUIRE_FALSE(latin_defect(t).has_value());
      REQUIRE(t.is_reduced());
      for (std::uint32_t i = 0; i < n; ++i) {
        std::vector<int> row_count(n, 0), col_count(n, 0);
        for (std::uint32_t j = 0; j < n; ++j) {
          row_count[t.entry(i, j)]++;
          col_count[t.entry(j, i)]++;
        }
        for (std::uint32_t s = 0; s < n; ++s) {
          REQUIRE(row_count[s] == 1);
          REQUIRE(col_count[s] == 1);
        }
      }
    }
  }
}
