#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "dstree/uniformity.hpp"
#include "helpers.hpp"

using namespace dstree;

namespace {

Colouring constant(const Tree& t, std::size_t cap, std::uint64_t palette = 1) {
  return Colouring::from_function(t, Arity::up_to, cap, palette,
                                  [](const Tuple&) { return 0; });
}

// Equal colours on similar pairs only; tells pairs apart by their first
// element's head entry.
Colouring pair_head_colouring() {
  return Colouring::from_function(full_tree(3), Arity::up_to, 2, 4, [](const Tuple& u) {
    return u.size() == 2 ? u[0][0].as_natural() : 0;
  });
}

// Tells singletons apart by their head entry; constant elsewhere.
Colouring head_colouring() {
  return Colouring::from_function(full_tree(2), Arity::up_to, 2, 2, [](const Tuple& u) {
    if (u.size() != 1 || u[0].empty()) return std::uint64_t{0};
    return u[0][0].as_natural();
  });
}

}  // namespace

TEST_SUITE_BEGIN("uniformity");

TEST_CASE("tuple enumeration is complete and canonically ordered") {
  auto small = enumerate_tuples(full_tree(2), Arity::up_to, 2);
  CHECK(small.size() == 11);
  CHECK(small.front().str() == "-");
  CHECK(small[1].str() == "0");
  CHECK(small.back().str() == "1|()");
  TupleLess less;
  for (std::size_t i = 0; i + 1 < small.size(); ++i) CHECK(less(small[i], small[i + 1]));

  CHECK(enumerate_tuples(full_tree(3), Arity::up_to, 3).size() == 93);
  CHECK(enumerate_tuples(full_tree(3), Arity::exact, 2).size() == 28);
  CHECK(enumerate_tuples(full_tree(2), Arity::exact, 0).size() == 1);
  CHECK(enumerate_tuples(full_tree(2), Arity::up_to, 9).size() == 16);
}

TEST_CASE("table construction polices the domain") {
  Tree t2 = full_tree(2);
  auto domain = enumerate_tuples(t2, Arity::up_to, 1);
  std::map<Tuple, std::uint64_t, TupleLess> table;
  for (const auto& u : domain) table.emplace(u, 0);

  CHECK(Colouring::from_table(t2, Arity::up_to, 1, 1, table).table().size() == 5);

  auto missing = table;
  missing.erase(tup("1,0"));
  CHECK_THROWS_WITH_AS(Colouring::from_table(t2, Arity::up_to, 1, 1, missing),
                       doctest::Contains("the domain tuple 1,0 is missing"), input_error);

  auto extra = table;
  extra.emplace(tup("0|1"), 0);
  CHECK_THROWS_WITH_AS(Colouring::from_table(t2, Arity::up_to, 1, 1, extra),
                       doctest::Contains("0|1 is outside the colouring domain"), input_error);

  auto loud = table;
  loud[tup("0")] = 7;
  CHECK_THROWS_WITH_AS(Colouring::from_table(t2, Arity::up_to, 1, 3, loud),
                       doctest::Contains("colour 7 of tuple 0 exceeds the palette"), input_error);

  CHECK_THROWS_AS(Colouring::from_table(t2, Arity::up_to, 1, 0, table), input_error);

  Colouring c = Colouring::from_table(t2, Arity::up_to, 1, 1, table);
  CHECK(c.at(tup("()")) == 0);
  CHECK_THROWS_WITH_AS(c.at(tup("0|1")), doctest::Contains("outside the colouring domain"),
                       input_error);
}

TEST_CASE("colouring files round-trip") {
  Tree t2 = full_tree(2);
  Colouring c = random_colouring(t2, Arity::up_to, 2, 5, 42);
  std::ostringstream out;
  c.save(out);
  std::istringstream in(out.str());
  Colouring back = Colouring::load(in, t2);
  CHECK(back.table() == c.table());
  CHECK(back.palette() == 5);
  CHECK(back.policy() == Arity::up_to);
  CHECK(back.arity() == 2);
}

TEST_CASE("colouring files name their defects by line") {
  Tree t2 = full_tree(2);
  std::istringstream no_header("-;0\n");
  CHECK_THROWS_WITH_AS(Colouring::load(no_header, t2),
                       doctest::Contains("expected \"palette N\" first"), input_error);
  std::istringstream empty("");
  CHECK_THROWS_WITH_AS(Colouring::load(empty, t2),
                       doctest::Contains("missing \"palette N\" header"), input_error);
  std::istringstream bad_arity("palette 2\narity often\n");
  CHECK_THROWS_WITH_AS(Colouring::load(bad_arity, t2),
                       doctest::Contains("arity must be \"upto:K\" or \"exact:K\""), input_error);
  std::istringstream bad_tuple("palette 2\narity upto:1\n0,,1;0\n");
  CHECK_THROWS_WITH_AS(Colouring::load(bad_tuple, t2), doctest::Contains("line 3"), input_error);
  std::istringstream twice("palette 1\narity exact:1\n0;0\n0;0\n");
  CHECK_THROWS_WITH_AS(Colouring::load(twice, t2),
                       doctest::Contains("line 4: tuple listed twice"), input_error);
  std::istringstream bad_colour("palette 2\n# comment\n-;x\n");
  CHECK_THROWS_WITH_AS(Colouring::load(bad_colour, t2),
                       doctest::Contains("colour must be a number"), input_error);
}

TEST_CASE("a missing arity line means up to the largest size present") {
  Tree t2 = full_tree(2);
  Colouring c = constant(t2, 2);
  std::ostringstream out;
  c.save(out);
  std::string text = out.str();
  auto arity_line = text.find("arity ");
  text.erase(arity_line, text.find('\n', arity_line) + 1 - arity_line);
  std::istringstream in(text);
  Colouring back = Colouring::load(in, t2);
  CHECK(back.policy() == Arity::up_to);
  CHECK(back.arity() == 2);
  CHECK(back.table() == c.table());
}

TEST_CASE("seeded colourings replay the generator stream") {
  Tree t2 = full_tree(2);
  Colouring c = random_colouring(t2, Arity::up_to, 2, 5, 42);
  std::mt19937_64 rng(42);
  for (const Tuple& u : enumerate_tuples(t2, Arity::up_to, 2)) {
    CHECK(c.at(u) == rng() % 5);
  }
  Colouring again = random_colouring(t2, Arity::up_to, 2, 5, 42);
  CHECK(again.table() == c.table());
  Colouring other = random_colouring(t2, Arity::up_to, 2, 5, 43);
  CHECK(other.table() != c.table());
}

TEST_CASE("a constant colouring passes every test") {
  Colouring c = constant(full_tree(3), 2);
  CHECK(is_uniform(c).ok);
  CHECK(is_end_uniform(c).ok);
  for (std::size_t n = 1; n <= 3; ++n) CHECK(is_n_end_uniform(c, n).ok);
  CHECK_THROWS_WITH_AS(is_n_end_uniform(c, 0), doctest::Contains("must be positive"),
                       input_error);
  CHECK(is_uniform(constant(full_tree(2), 2)).pairs_checked == 2);
}

TEST_CASE("end-uniform but not uniform") {
  Colouring c = pair_head_colouring();
  CHECK(is_end_uniform(c).ok);
  CHECK(is_n_end_uniform(c, 1).ok);
  CHECK(is_n_end_uniform(c, 3).ok);  // nothing shares all but three elements

  auto rep = is_uniform(c);
  REQUIRE(!rep.ok);
  CHECK(similar(rep.first, rep.second));
  CHECK(c.at(rep.first) != c.at(rep.second));
  CHECK(TupleLess{}(rep.first, rep.second));
  CHECK(rep.describe().find("different colours") != std::string::npos);

  auto rep2 = is_n_end_uniform(c, 2);
  REQUIRE(!rep2.ok);
  CHECK(similar(rep2.first, rep2.second));
  CHECK(rep2.first.size() == 2);
  CHECK(c.at(rep2.first) != c.at(rep2.second));
}

TEST_CASE("two-end-uniform but not end-uniform") {
  Colouring c = head_colouring();
  CHECK(is_n_end_uniform(c, 2).ok);
  auto rep = is_end_uniform(c);
  REQUIRE(!rep.ok);
  CHECK(rep.first.size() == 1);
  CHECK(rep.second.size() == 1);
  CHECK(rep.first[0].size() == rep.second[0].size());
  CHECK(!is_n_end_uniform(c, 1).ok);
}

TEST_CASE("end-uniformity coincides with sharing all but the last element") {
  std::vector<Colouring> pool{constant(full_tree(3), 2), pair_head_colouring(),
                              head_colouring()};
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    pool.push_back(random_colouring(full_tree(3), Arity::up_to, 2, 2 + seed % 2, seed));
  }
  for (const Colouring& c : pool) {
    CHECK(is_end_uniform(c).ok == is_n_end_uniform(c, 1).ok);
    if (is_uniform(c).ok) {
      CHECK(is_end_uniform(c).ok);
      for (std::size_t n = 1; n <= 3; ++n) CHECK(is_n_end_uniform(c, n).ok);
    }
  }
}

TEST_CASE("the derived table lists extension colours by class") {
  Colouring c = constant(full_tree(2), 2);
  auto dc = derived_colouring(c);
  REQUIRE(dc.size() == 5);
  CHECK(dc.at(Tuple()) == DerivedVector{{1, 0}, {2, 0}, {3, 0}});
  CHECK(dc.at(tup("1")) == DerivedVector{{5, 0}});
  CHECK(dc.at(tup("()")).empty());
  for (const auto& [u, v] : dc) CHECK(u.size() <= 1);

  CHECK_THROWS_WITH_AS(derived_colouring(constant(full_tree(2), 0)),
                       doctest::Contains("inclusive size cap of at least 1"), input_error);
  Colouring exact = Colouring::from_function(full_tree(2), Arity::exact, 1, 1,
                                             [](const Tuple&) { return 0; });
  CHECK_THROWS_AS(derived_colouring(exact), input_error);
  CHECK_THROWS_WITH_AS(derived_colouring(head_colouring()),
                       doctest::Contains("not end-uniform: tuples"), input_error);
}

TEST_CASE("derived vector codes are small and reversible") {
  CHECK(encode_vector({}) == 0);
  CHECK(encode_vector({{0, 0}}) == 1);
  CHECK(encode_vector({{0, 1}}) == 8);

  std::vector<DerivedVector> vectors{{},
                                     {{0, 0}},
                                     {{0, 1}},
                                     {{3, 1}},
                                     {{5, 7}, {9, 2}},
                                     {{1, 0}, {2, 0}, {3, 0}},
                                     {{0, 2}, {7, 1}, {8, 0}, {40, 3}}};
  std::set<std::string> codes;
  for (const auto& v : vectors) {
    u128 code = encode_vector(v);
    CHECK(decode_vector(code) == v);
    codes.insert(u128_str(code));
  }
  CHECK(codes.size() == vectors.size());
}

TEST_CASE("oversized codes are refused in both directions") {
  const std::uint64_t big = std::numeric_limits<std::uint64_t>::max();
  CHECK_THROWS_WITH_AS(encode_vector({{big, big}}), doctest::Contains("128 bits"), budget_error);
  u128 w = u128{1} << 64;
  CHECK_THROWS_WITH_AS(decode_vector((w / 2) * (w + 1)),
                       doctest::Contains("does not denote a class table"), input_error);
}

TEST_CASE("decimal form of wide integers") {
  CHECK(u128_str(0) == "0");
  CHECK(u128_str(12345) == "12345");
  CHECK(u128_str(~u128{0}) == "340282366920938463463374607431768211455");
}

TEST_CASE("pulling a colouring back along a copy") {
  Tree t2 = full_tree(2);
  Tree t3 = full_tree(3);
  TreeMap f = find_copies_of(t2, t3)[1];
  REQUIRE(f.apply(seq("1,0")) == seq("2,0"));

  Colouring c = random_colouring(t3, Arity::up_to, 2, 4, 7);
  Colouring pf = pushforward(f, c);
  CHECK(pf.base().size() == 4);
  CHECK(pf.palette() == 4);
  CHECK(pf.arity() == 2);
  CHECK(pf.at(tup("0|1")) == c.at(tup("0|2")));
  CHECK(pf.at(tup("1,0")) == c.at(tup("2,0")));
  CHECK(pf.at(Tuple()) == c.at(Tuple()));

  Colouring eu = pair_head_colouring();
  CHECK(is_end_uniform(pushforward(f, eu)).ok);

  TreeMap level = TreeMap({{seq("()"), seq("()")},
                           {seq("0"), seq("1,0")},
                           {seq("1"), seq("1")},
                           {seq("1,0"), seq("2,0")}});
  CHECK_THROWS_WITH_AS(pushforward(level, c), doctest::Contains("not an embedding"),
                       input_error);
  TreeMap rootless = TreeMap({{seq("0"), seq("0")}});
  CHECK_THROWS_AS(pushforward(rootless, c), input_error);
}

TEST_CASE("the stepping-up stage renumbers vectors densely") {
  Colouring c = constant(full_tree(2), 2);
  Colouring d = derived_encoded_colouring(c);
  CHECK(d.arity() == 1);
  CHECK(d.policy() == Arity::up_to);
  CHECK(d.palette() == 5);
  CHECK(d.at(Tuple()) == 0);
  CHECK(d.at(tup("0")) == 1);
  CHECK(d.at(tup("1,0")) == 2);
  CHECK(d.at(tup("1")) == 3);
  CHECK(d.at(tup("()")) == 4);

  CHECK_THROWS_WITH_AS(derived_encoded_colouring(head_colouring()),
                       doctest::Contains("not end-uniform"), input_error);

  // Vectors agree exactly when the stage colours agree.
  auto dc = derived_colouring(c);
  for (const auto& [u, v] : dc) {
    for (const auto& [w, x] : dc) {
      CHECK((encode_vector(v) == encode_vector(x)) == (d.at(u) == d.at(w)));
    }
  }
}
