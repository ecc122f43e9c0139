#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <vector>

#include "dstree/partition_search.hpp"
#include "helpers.hpp"

using namespace dstree;

namespace {

Colouring constant(const Tree& t, std::size_t cap, std::uint64_t palette = 1) {
  return Colouring::from_function(t, Arity::up_to, cap, palette,
                                  [](const Tuple&) { return 0; });
}

// Lexicographically first canonical level colouring of host that leaves every
// depth-2 copy with differently coloured level-one images, checked at the
// leaves only. Small hosts only.
std::optional<std::vector<std::uint64_t>> brute_level_adversary(const Tree& host,
                                                                std::uint64_t palette) {
  auto slots = enumerate_tuples(host, Arity::exact, 1);
  auto slot_of = [&](const DecSeq& node) {
    Tuple u{std::vector<DecSeq>{node}};
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i] == u) return i;
    }
    REQUIRE(false);
    return std::size_t{0};
  };
  std::vector<std::array<std::size_t, 2>> pairs;
  for (const TreeMap& f : find_copies(host, 2)) {
    pairs.push_back({slot_of(f.apply(seq("0"))), slot_of(f.apply(seq("1")))});
  }
  std::vector<std::uint64_t> colour(slots.size(), 0);
  std::function<bool(std::size_t, std::uint64_t)> dfs = [&](std::size_t d, std::uint64_t used) {
    if (d == slots.size()) {
      for (const auto& p : pairs) {
        if (colour[p[0]] == colour[p[1]]) return false;
      }
      return true;
    }
    std::uint64_t top = std::min(used + 1, palette);
    for (std::uint64_t col = 0; col < top; ++col) {
      colour[d] = col;
      if (dfs(d + 1, std::max(used, col + 1))) return true;
    }
    return false;
  };
  if (!dfs(0, 0)) return std::nullopt;
  return colour;
}

}  // namespace

TEST_SUITE_BEGIN("partition search");

TEST_CASE("mode tokens") {
  CHECK(SearchMode::parse("end").kind == SearchMode::Kind::end_uniform);
  CHECK(SearchMode::parse("level").kind == SearchMode::Kind::level_unary);
  SearchMode nend = SearchMode::parse("nend:2");
  CHECK(nend.kind == SearchMode::Kind::n_end_uniform);
  CHECK(nend.n == 2);
  for (const char* token : {"end", "level", "nend:1", "nend:7"}) {
    CHECK(SearchMode::parse(token).str() == token);
  }
  CHECK_THROWS_WITH_AS(SearchMode::parse("nend:"), doctest::Contains("needs a number"),
                       input_error);
  CHECK_THROWS_AS(SearchMode::parse("nend:x"), input_error);
  CHECK_THROWS_WITH_AS(SearchMode::parse("nend:0"), doctest::Contains("must be positive"),
                       input_error);
  CHECK_THROWS_WITH_AS(SearchMode::parse("END"), doctest::Contains("unknown mode"), input_error);
}

TEST_CASE("the level predicate reads singleton colours per level") {
  Tree t2 = full_tree(2);
  SearchMode level = SearchMode::parse("level");

  Colouring root_odd = Colouring::from_function(t2, Arity::exact, 1, 2, [](const Tuple& u) {
    return u[0].empty() ? std::uint64_t{1} : std::uint64_t{0};
  });
  CHECK(mode_predicate(level, root_odd).ok);  // the root is unconstrained

  Colouring by_head = Colouring::from_function(t2, Arity::up_to, 2, 2, [](const Tuple& u) {
    if (u.size() != 1 || u[0].empty()) return std::uint64_t{0};
    return u[0][0].as_natural();
  });
  auto rep = mode_predicate(level, by_head);
  REQUIRE(!rep.ok);
  CHECK(rep.first.size() == 1);
  CHECK(rep.first[0].size() == rep.second[0].size());

  CHECK_THROWS_WITH_AS(mode_predicate(level, constant(t2, 0)),
                       doctest::Contains("needs singleton colours"), input_error);
  CHECK(mode_predicate(SearchMode::parse("end"), constant(t2, 2)).ok);
  CHECK(mode_predicate(SearchMode::parse("nend:2"), constant(t2, 2)).ok);
}

TEST_CASE("certificate files round-trip") {
  Certificate cert{SearchMode::parse("nend:2"), 2, 4, find_copies_of(full_tree(2), full_tree(3))[2],
                   0};
  std::ostringstream out;
  cert.save(out);
  std::istringstream in("# note\n\n" + out.str());
  Certificate back = Certificate::load(in);
  CHECK(back.mode == cert.mode);
  CHECK(back.m == 2);
  CHECK(back.palette == 4);
  CHECK(back.map == cert.map);

  std::istringstream two_parts("end;2\n");
  CHECK_THROWS_WITH_AS(Certificate::load(two_parts),
                       doctest::Contains("certificate header"), input_error);
  std::istringstream bad_m("end;two;3\n");
  CHECK_THROWS_AS(Certificate::load(bad_m), input_error);
}

TEST_CASE("the first fitting copy wins") {
  Tree t3 = full_tree(3);
  auto copies = find_copies_of(full_tree(2), t3);

  auto cert = find_uniform_copy(constant(t3, 2), 2, SearchMode::parse("end"));
  REQUIRE(cert.has_value());
  CHECK(cert->map == copies[0]);
  CHECK(cert->m == 2);
  CHECK(cert->palette == 1);
  CHECK(verify_certificate(t3, constant(t3, 2), *cert).ok);

  // Level colouring built to fail the first three copies.
  Colouring picky = Colouring::from_function(t3, Arity::exact, 1, 2, [](const Tuple& u) {
    if (u[0].size() != 1) return std::uint64_t{0};
    return u[0][0].as_natural() == 0 ? std::uint64_t{0} : std::uint64_t{1};
  });
  auto skipped = find_uniform_copy(picky, 2, SearchMode::parse("level"));
  REQUIRE(skipped.has_value());
  CHECK(skipped->map == copies[3]);
  CHECK(verify_certificate(t3, picky, *skipped).ok);

  CHECK_THROWS_WITH_AS(find_uniform_copy(constant(full_tree(2), 2), 3, SearchMode::parse("end")),
                       doctest::Contains("below the requested 3"), input_error);
  CHECK_THROWS_WITH_AS(find_uniform_copy(constant(t3, 2), 2, SearchMode::parse("end"), 0),
                       doctest::Contains("exceeded the budget after"), budget_error);
}

TEST_CASE("the copy scan matches an independent replay") {
  Tree t3 = full_tree(3);
  auto copies = find_copies_of(full_tree(2), t3);
  SearchMode end = SearchMode::parse("end");
  SearchMode nend1 = SearchMode::parse("nend:1");
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Colouring c = random_colouring(t3, Arity::up_to, 2, 2, seed);
    std::optional<TreeMap> expected;
    for (const TreeMap& f : copies) {
      if (is_end_uniform(pushforward(f, c)).ok) {
        expected = f;
        break;
      }
    }
    auto got = find_uniform_copy(c, 2, end);
    CHECK(got.has_value() == expected.has_value());
    if (got && expected) CHECK(got->map == *expected);
    auto via_nend = find_uniform_copy(c, 2, nend1);
    CHECK(got.has_value() == via_nend.has_value());
    if (got && via_nend) CHECK(got->map == via_nend->map);
  }
}

TEST_CASE("adversary colourings are first in canonical order") {
  SearchMode level = SearchMode::parse("level");
  auto adv = adversary_search(2, 2, level, 2);
  REQUIRE(adv.has_value());
  CHECK(adv->policy() == Arity::exact);
  CHECK(adv->arity() == 1);
  CHECK(adv->at(tup("0")) == 0);
  CHECK(adv->at(tup("1,0")) == 0);
  CHECK(adv->at(tup("1")) == 1);
  CHECK(adv->at(tup("()")) == 0);

  // No copy of the depth-2 tree survives the colouring.
  for (const TreeMap& f : find_copies(adv->base(), 2)) {
    CHECK(!mode_predicate(level, pushforward(f, *adv)).ok);
  }

  // Leaf-level replay of the whole walk.
  const std::vector<std::pair<unsigned, std::uint64_t>> cases{{2, 2}, {3, 2}, {3, 3}};
  for (auto [host_n, palette] : cases) {
    auto fast = adversary_search(host_n, 2, level, palette);
    auto slow = brute_level_adversary(full_tree(host_n), palette);
    REQUIRE(fast.has_value() == slow.has_value());
    if (!fast) continue;
    auto slots = enumerate_tuples(full_tree(host_n), Arity::exact, 1);
    for (std::size_t i = 0; i < slots.size(); ++i) {
      CHECK(fast->at(slots[i]) == (*slow)[i]);
    }
  }
}

TEST_CASE("degenerate adversary searches") {
  CHECK(!adversary_search(2, 1, SearchMode::parse("end"), 5).has_value());
  CHECK(!adversary_search(2, 1, SearchMode::parse("level"), 2).has_value());

  // The target does not fit at all, so the all-zero colouring wins.
  auto adv = adversary_search(1, 2, SearchMode::parse("end"), 2);
  REQUIRE(adv.has_value());
  for (const auto& [u, col] : adv->table()) CHECK(col == 0);

  CHECK_THROWS_AS(adversary_search(2, 2, SearchMode::parse("level"), 0), input_error);
  CHECK_THROWS_WITH_AS(adversary_search(2, 2, SearchMode::parse("level"), 2, 0),
                       doctest::Contains("exceeded the budget"), budget_error);
}

TEST_CASE("thread count changes nothing") {
  SearchMode level = SearchMode::parse("level");
  auto one = adversary_search(2, 2, level, 2, default_search_budget, 1);
  auto four = adversary_search(2, 2, level, 2, default_search_budget, 4);
  REQUIRE(one.has_value());
  REQUIRE(four.has_value());
  CHECK(one->table() == four->table());

  SearchMode end = SearchMode::parse("end");
  CHECK(!adversary_search(3, 2, end, 2, default_search_budget, 1).has_value());
  CHECK(!adversary_search(3, 2, end, 2, default_search_budget, 4).has_value());

  // A walk that cannot finish inside the budget is cut identically.
  SearchMode nend1 = SearchMode::parse("nend:1");
  for (unsigned threads : {1u, 4u}) {
    CHECK_THROWS_WITH_AS(adversary_search(4, 3, nend1, 2, 50, threads, 2),
                         doctest::Contains("exceeded the budget"), budget_error);
  }
}

TEST_CASE("least sizes that force a copy") {
  SearchMode level = SearchMode::parse("level");
  CHECK(partition_number(1, level, 7, 3) == 1);
  CHECK(partition_number(2, level, 2, 5) == 3);
  CHECK(partition_number(2, level, 3, 6) == 4);
  CHECK(!partition_number(2, level, 3, 3).has_value());
  CHECK(partition_number(2, SearchMode::parse("end"), 2, 5) == 3);
  CHECK_THROWS_WITH_AS(partition_number(2, level, 2, 5, 0), doctest::Contains("unknown at 2"),
                       budget_error);
}

TEST_CASE("stepping up composes stage maps") {
  Tree t1 = full_tree(1);
  Tree t2 = full_tree(2);
  Tree t3 = full_tree(3);

  Colouring c = constant(t3, 2, 3);
  PipelineOutcome out = run_pipeline({t1, t2, t3}, c, 2);
  REQUIRE(out.certificate.has_value());
  const Certificate& cert = *out.certificate;
  CHECK(cert.mode == SearchMode::parse("nend:2"));
  CHECK(cert.m == 1);
  CHECK(cert.palette == 3);
  CHECK(cert.map.apply(seq("()")) == seq("()"));
  CHECK(cert.map.apply(seq("0")) == seq("0"));
  CHECK(verify_certificate(t3, c, cert).ok);

  PipelineOutcome one = run_pipeline({t2, t3}, constant(t3, 1), 1);
  REQUIRE(one.certificate.has_value());
  CHECK(one.certificate->map == find_copies_of(t2, t3)[0]);
}

TEST_CASE("stepping up rejects ill-posed requests") {
  Tree t2 = full_tree(2);
  Tree t3 = full_tree(3);
  Colouring c = constant(t3, 2);
  CHECK_THROWS_WITH_AS(run_pipeline({t2, t3}, c, 0), doctest::Contains("positive n"),
                       input_error);
  CHECK_THROWS_WITH_AS(run_pipeline({t3}, c, 1),
                       doctest::Contains("a chain of 1 trees steps up 0 times, not 1"),
                       input_error);
  CHECK_THROWS_WITH_AS(run_pipeline({t2, t2}, c, 1),
                       doctest::Contains("must live on the last tree"), input_error);
  CHECK_THROWS_WITH_AS(run_pipeline({t2, t3}, constant(t3, 0), 1),
                       doctest::Contains("inclusive size cap of at least 1"), input_error);
  Colouring exact = Colouring::from_function(t3, Arity::exact, 2, 1,
                                             [](const Tuple&) { return 0; });
  CHECK_THROWS_AS(run_pipeline({t2, t3}, exact, 1), input_error);
  CHECK_THROWS_WITH_AS(run_pipeline({t2, t3}, c, 1, 0),
                       doctest::Contains("budget at stage 1"), budget_error);
}

TEST_CASE("a stage with no fitting copy reports its position") {
  Tree t2 = full_tree(2);
  Tree t3 = full_tree(3);
  Colouring spread = Colouring::from_function(t3, Arity::up_to, 1, 3, [](const Tuple& u) {
    if (u.size() != 1 || u[0].size() != 1) return std::uint64_t{0};
    return u[0][0].as_natural();
  });
  PipelineOutcome out = run_pipeline({t2, t3}, spread, 1);
  CHECK(!out.certificate.has_value());
  CHECK(out.failed_stage == 1);
  CHECK(out.detail == "no end-uniform copy of chain tree 0 in chain tree 1");
}

TEST_CASE("certificates are re-derived, not trusted") {
  Tree t3 = full_tree(3);
  Colouring c = constant(t3, 2);
  Certificate good = *find_uniform_copy(c, 2, SearchMode::parse("end"));
  REQUIRE(verify_certificate(t3, c, good).ok);

  Certificate wrong_m = good;
  wrong_m.m = 3;
  auto res = verify_certificate(t3, c, wrong_m);
  CHECK(!res.ok);
  CHECK(res.reason.find("depth") != std::string::npos);

  Certificate wrong_palette = good;
  wrong_palette.palette = 2;
  res = verify_certificate(t3, c, wrong_palette);
  CHECK(!res.ok);
  CHECK(res.reason.find("palette") != std::string::npos);

  Certificate crossed = good;
  crossed.map = TreeMap({{seq("()"), seq("()")},
                         {seq("0"), seq("2")},
                         {seq("1"), seq("1")},
                         {seq("1,0"), seq("1,0")}});
  res = verify_certificate(t3, c, crossed);
  CHECK(!res.ok);
  CHECK(res.reason.find("order lost") != std::string::npos);

  Certificate rootless = good;
  rootless.map = TreeMap({{seq("0"), seq("0")}});
  res = verify_certificate(t3, c, rootless);
  CHECK(!res.ok);
  CHECK(res.reason.find("lacks its parent") != std::string::npos);

  Colouring spread = Colouring::from_function(t3, Arity::up_to, 1, 3, [](const Tuple& u) {
    if (u.size() != 1 || u[0].size() != 1) return std::uint64_t{0};
    return u[0][0].as_natural();
  });
  Certificate lying{SearchMode::parse("end"), 3, 3,
                    find_copies_of(t3, t3)[0], 0};
  res = verify_certificate(t3, spread, lying);
  CHECK(!res.ok);
  CHECK(res.reason.find("the mode predicate fails") != std::string::npos);
}
