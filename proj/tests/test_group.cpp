#include "heatcount/group.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "heatcount/errors.hpp"

using namespace heatcount;

namespace {

// Exhaustive group-axiom check for small groups, randomized spot check above.
void check_axioms(const FiniteGroup& g) {
  int64_t n = g.order();
  for (Element x = 0; x < n; ++x) {
    CHECK(g.multiply(0, x) == x);
    CHECK(g.multiply(x, 0) == x);
    CHECK(g.multiply(x, g.inverse(x)) == 0);
    CHECK(g.multiply(g.inverse(x), x) == 0);
  }
  if (n <= 64) {
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b)
        for (Element c = 0; c < n; ++c)
          REQUIRE(g.multiply(g.multiply(a, b), c) == g.multiply(a, g.multiply(b, c)));
  } else {
    uint64_t s = 0x243f6a8885a308d3ull;
    auto next = [&]() {
      s ^= s << 13;
      s ^= s >> 7;
      s ^= s << 17;
      return s;
    };
    for (int i = 0; i < 10000; ++i) {
      Element a = static_cast<Element>(next() % n);
      Element b = static_cast<Element>(next() % n);
      Element c = static_cast<Element>(next() % n);
      REQUIRE(g.multiply(g.multiply(a, b), c) == g.multiply(a, g.multiply(b, c)));
    }
  }
}

std::multiset<int64_t> class_sizes(const FiniteGroup& g) {
  std::multiset<int64_t> sizes;
  for (const auto& c : g.classes()) sizes.insert(c.size());
  return sizes;
}

}  // namespace

TEST_CASE("named group orders") {
  CHECK(build_group("cyclic:1").order() == 1);
  CHECK(build_group("cyclic:6").order() == 6);
  CHECK(build_group("symmetric:3").order() == 6);
  CHECK(build_group("symmetric:4").order() == 24);
  CHECK(build_group("alternating:4").order() == 12);
  CHECK(build_group("alternating:5").order() == 60);
  CHECK(build_group("dihedral:4").order() == 8);
  CHECK(build_group("quaternion8").order() == 8);
  CHECK(build_group("product:cyclic:2|cyclic:3").order() == 6);
}

TEST_CASE("group axioms hold for the test families") {
  for (const char* spec : {"cyclic:5", "symmetric:3", "symmetric:4", "alternating:4",
                           "dihedral:4", "quaternion8", "product:cyclic:2|symmetric:3"}) {
    CAPTURE(spec);
    check_axioms(build_group(spec));
  }
}

TEST_CASE("large groups use the non-dense path and stay consistent") {
  FiniteGroup s7 = build_group("symmetric:7");
  CHECK(s7.order() == 5040);
  CHECK(s7.dense_table() == nullptr);
  check_axioms(s7);
  CHECK(s7.class_count() == 15);  // partitions of 7

  FiniteGroup s6 = build_group("symmetric:6");
  CHECK(s6.dense_table() != nullptr);
  CHECK(s6.class_count() == 11);
}

TEST_CASE("conjugacy classes of symmetric:3") {
  FiniteGroup g = build_group("symmetric:3");
  REQUIRE(g.class_count() == 3);
  // class 0 is {e}; remaining sizes are {3, 2} (transpositions, 3-cycles)
  CHECK(g.classes()[0].representative == 0);
  CHECK(g.classes()[0].size() == 1);
  CHECK(class_sizes(g) == std::multiset<int64_t>{1, 2, 3});
  for (const auto& c : g.classes()) {
    CHECK(c.size() * c.centralizer_order == g.order());
    CHECK(c.centralizer_order == centralizer_order_direct(g, c.representative));
    CHECK(std::is_sorted(c.members.begin(), c.members.end()));
    CHECK(c.representative == c.members.front());
  }
}

TEST_CASE("conjugacy classes of quaternion8") {
  FiniteGroup g = build_group("quaternion8");
  REQUIRE(g.class_count() == 5);
  CHECK(class_sizes(g) == std::multiset<int64_t>{1, 1, 2, 2, 2});
  for (const auto& c : g.classes())
    CHECK(c.centralizer_order == centralizer_order_direct(g, c.representative));
}

TEST_CASE("class partition invariants") {
  for (const char* spec : {"symmetric:4", "alternating:4", "dihedral:6", "cyclic:12",
                           "product:cyclic:2|dihedral:4"}) {
    CAPTURE(spec);
    FiniteGroup g = build_group(spec);
    int64_t total = 0;
    for (const auto& c : g.classes()) total += c.size();
    CHECK(total == g.order());
    // class_of is consistent and conjugation-stable
    for (int ci = 0; ci < g.class_count(); ++ci)
      for (Element x : g.classes()[ci].members) CHECK(g.class_of(x) == ci);
    for (Element x = 0; x < g.order(); ++x) {
      Element u = static_cast<Element>((x * 7 + 3) % g.order());
      Element conj = g.multiply(g.multiply(u, x), g.inverse(u));
      CHECK(g.class_of(conj) == g.class_of(x));
    }
    // inverse/square class maps
    for (int ci = 0; ci < g.class_count(); ++ci) {
      Element r = g.classes()[ci].representative;
      CHECK(g.inverse_class(ci) == g.class_of(g.inverse(r)));
      CHECK(g.square_class(ci) == g.class_of(g.multiply(r, r)));
    }
  }
}

TEST_CASE("perm spec matches symmetric:3 up to relabeling") {
  FiniteGroup g = build_group("perm:[(1,2),(1,2,3)]");
  CHECK(g.order() == 6);
  CHECK(class_sizes(g) == class_sizes(build_group("symmetric:3")));
}

TEST_CASE("perm spec with multi-cycle generator") {
  // (1,2)(3,4) and (1,3)(2,4) generate the Klein four group
  FiniteGroup g = build_group("perm:[(1,2)(3,4),(1,3)(2,4)]");
  CHECK(g.order() == 4);
  CHECK(g.class_count() == 4);
}

TEST_CASE("direct products") {
  FiniteGroup g = build_group("product:cyclic:2|cyclic:2");
  CHECK(g.order() == 4);
  CHECK(g.class_count() == 4);  // abelian
  FiniteGroup h = build_group("product:symmetric:3|cyclic:2");
  CHECK(h.order() == 12);
  CHECK(h.class_count() == 6);
  check_axioms(h);
}

TEST_CASE("subgroup closure") {
  FiniteGroup g = build_group("symmetric:3");
  // element 1 is a generator from the canonical set; closure of any
  // transposition has order 2, of any 3-cycle order 3
  std::map<int64_t, int> by_order;
  for (Element x = 0; x < g.order(); ++x) by_order[subgroup_from_generators(g, {x}).order()]++;
  CHECK(by_order[1] == 1);
  CHECK(by_order[2] == 3);
  CHECK(by_order[3] == 2);
  Subgroup whole = subgroup_from_generators(g, {1, 2, 3, 4, 5});
  CHECK(whole.order() == 6);
  CHECK(subgroup_from_generators(g, {}).order() == 1);
}

TEST_CASE("canonical generators") {
  FiniteGroup s4 = build_group("symmetric:4");
  CHECK(s4.canonical_generators().size() == 6);  // all transpositions
  for (Element t : s4.canonical_generators()) CHECK(s4.multiply(t, t) == 0);
  FiniteGroup q8 = build_group("quaternion8");
  CHECK(subgroup_from_generators(q8, q8.canonical_generators()).order() == 8);
  for (const char* spec : {"cyclic:6", "dihedral:5", "alternating:4", "symmetric:5"}) {
    CAPTURE(spec);
    FiniteGroup g = build_group(spec);
    CHECK(subgroup_from_generators(g, g.canonical_generators()).order() == g.order());
    // closed under inversion
    for (Element s : g.canonical_generators()) {
      Element si = g.inverse(s);
      CHECK(std::count(g.canonical_generators().begin(), g.canonical_generators().end(), si) == 1);
    }
  }
}

TEST_CASE("spec errors") {
  CHECK_THROWS_AS(build_group("sporadic:1"), UsageError);
  CHECK_THROWS_AS(build_group("cyclic:0"), UsageError);
  CHECK_THROWS_AS(build_group("cyclic:x"), UsageError);
  CHECK_THROWS_AS(build_group("perm:[(1,1)]"), UsageError);
  CHECK_THROWS_AS(build_group("perm:(1,2)"), UsageError);
  CHECK_THROWS_AS(build_group("product:cyclic:2"), UsageError);
  CHECK_THROWS_AS(build_group("symmetric:8"), DomainError);       // 40320 > cap
  CHECK_THROWS_AS(build_group("cyclic:20000"), DomainError);      // order cap
  CHECK_THROWS_AS(subgroup_from_generators(build_group("cyclic:2"), {7}), UsageError);
}

TEST_CASE("resource cap is adjustable") {
  CHECK_THROWS_AS(build_group("symmetric:5", 100), DomainError);
  CHECK(build_group("symmetric:5", 120).order() == 120);
}
