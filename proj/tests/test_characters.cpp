#include "heatcount/characters.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "heatcount/errors.hpp"

using namespace heatcount;

namespace {

std::multiset<int64_t> dims(const CharacterTable& t) {
  std::multiset<int64_t> out;
  for (const Irrep& r : t.irreps) out.insert(r.dim);
  return out;
}

int class_of_size(const FiniteGroup& g, int64_t size) {
  for (int c = 0; c < g.class_count(); ++c)
    if (g.classes()[c].size() == size) return c;
  REQUIRE(false);
  return -1;
}

int irrep_of_dim(const CharacterTable& t, int64_t d) {
  for (int i = 0; i < t.irrep_count(); ++i)
    if (t.irreps[i].dim == d) return i;
  REQUIRE(false);
  return -1;
}

int64_t count_involutions(const FiniteGroup& g) {  // includes the identity
  int64_t n = 0;
  for (Element x = 0; x < g.order(); ++x)
    if (g.multiply(x, x) == 0) n++;
  return n;
}

}  // namespace

TEST_CASE("irrep dimensions of the standard families") {
  CHECK(dims(character_table(build_group("symmetric:3"))) == std::multiset<int64_t>{1, 1, 2});
  CHECK(dims(character_table(build_group("quaternion8"))) ==
        std::multiset<int64_t>{1, 1, 1, 1, 2});
  CHECK(dims(character_table(build_group("dihedral:4"))) ==
        std::multiset<int64_t>{1, 1, 1, 1, 2});
  CHECK(dims(character_table(build_group("alternating:4"))) ==
        std::multiset<int64_t>{1, 1, 1, 3});
  CHECK(dims(character_table(build_group("symmetric:4"))) ==
        std::multiset<int64_t>{1, 1, 2, 3, 3});
  CHECK(dims(character_table(build_group("cyclic:6"))) ==
        std::multiset<int64_t>{1, 1, 1, 1, 1, 1});
  CHECK(dims(character_table(build_group("alternating:5"))) ==
        std::multiset<int64_t>{1, 3, 3, 4, 5});
}

TEST_CASE("symmetric:3 two-dimensional character values") {
  CharacterTable t = character_table(build_group("symmetric:3"));
  int std2 = irrep_of_dim(t, 2);
  int transp = class_of_size(t.group, 3);
  int threecyc = class_of_size(t.group, 2);
  CHECK(std::abs(t.value(std2, transp) - 0.0) < 1e-10);
  CHECK(std::abs(t.value(std2, threecyc) - (-1.0)) < 1e-10);
  CHECK(t.value(std2, 0) == Complex(2.0));
}

TEST_CASE("certification accepts every test family, including larger groups") {
  for (const char* spec : {"cyclic:2", "cyclic:3", "cyclic:4", "cyclic:5", "cyclic:6",
                           "symmetric:3", "symmetric:4", "symmetric:5", "symmetric:6",
                           "dihedral:4", "dihedral:6", "quaternion8", "alternating:4",
                           "alternating:5", "product:cyclic:2|symmetric:3"}) {
    CAPTURE(spec);
    CharacterTable t = character_table(build_group(spec));
    CHECK_NOTHROW(certify_character_table(t));
    CHECK(t.irreps[t.trivial_index()].values[0] == Complex(1.0));
  }
}

TEST_CASE("table construction is deterministic") {
  FiniteGroup g = build_group("alternating:4");
  CHECK(character_table_to_csv(character_table(g)) ==
        character_table_to_csv(character_table(g)));
}

TEST_CASE("frobenius-schur indicators") {
  CharacterTable s3 = character_table(build_group("symmetric:3"));
  CHECK(frobenius_schur(s3, irrep_of_dim(s3, 2)) == 1);
  CHECK(frobenius_schur(s3, s3.trivial_index()) == 1);

  CharacterTable q8 = character_table(build_group("quaternion8"));
  CHECK(frobenius_schur(q8, irrep_of_dim(q8, 2)) == -1);

  CharacterTable d4 = character_table(build_group("dihedral:4"));
  CHECK(frobenius_schur(d4, irrep_of_dim(d4, 2)) == 1);

  CharacterTable c3 = character_table(build_group("cyclic:3"));
  int nontrivial = (c3.trivial_index() == 0) ? 1 : 0;
  CHECK(frobenius_schur(c3, nontrivial) == 0);
}

TEST_CASE("frobenius-schur sum identity counts involutions") {
  for (const char* spec : {"cyclic:4", "symmetric:3", "symmetric:4", "dihedral:4", "dihedral:5",
                           "quaternion8", "alternating:4", "alternating:5"}) {
    CAPTURE(spec);
    CharacterTable t = character_table(build_group(spec));
    int64_t sum = 0;
    for (int i = 0; i < t.irrep_count(); ++i) sum += frobenius_schur(t, i) * t.irreps[i].dim;
    CHECK(sum == count_involutions(t.group));
  }
}

TEST_CASE("tensor decomposition of symmetric:3") {
  CharacterTable t = character_table(build_group("symmetric:3"));
  int std2 = irrep_of_dim(t, 2);
  std::vector<int64_t> mult = tensor_decompose(t, std2, std2);
  // std (x) std = trivial + sign + std
  std::multiset<int64_t> ms(mult.begin(), mult.end());
  CHECK(ms == std::multiset<int64_t>{1, 1, 1});
  CHECK(mult[std2] == 1);

  // trivial acts as identity on every irrep
  for (int i = 0; i < t.irrep_count(); ++i) {
    std::vector<int64_t> m = tensor_decompose(t, t.trivial_index(), i);
    for (int j = 0; j < t.irrep_count(); ++j) CHECK(m[j] == (i == j ? 1 : 0));
  }
}

TEST_CASE("tensor decomposition respects dimensions on random pairs") {
  for (const char* spec : {"symmetric:4", "quaternion8", "alternating:5"}) {
    CAPTURE(spec);
    CharacterTable t = character_table(build_group(spec));
    for (int a = 0; a < t.irrep_count(); ++a)
      for (int b = 0; b < t.irrep_count(); ++b) CHECK_NOTHROW(tensor_decompose(t, a, b));
  }
}

TEST_CASE("subgroup character sums") {
  CharacterTable t = character_table(build_group("symmetric:3"));
  // any order-2 subgroup is generated by a transposition
  int transp_class = class_of_size(t.group, 3);
  Element transp = t.group.classes()[transp_class].representative;
  Subgroup h = subgroup_from_generators(t.group, {transp});
  REQUIRE(h.order() == 2);
  CHECK(std::abs(subgroup_character_sum(t, h, irrep_of_dim(t, 2)) - Complex(2.0)) < 1e-10);
  CHECK(std::abs(subgroup_character_sum(t, h, t.trivial_index()) - Complex(2.0)) < 1e-10);

  // summing over the whole group kills every nontrivial irrep
  Subgroup whole = subgroup_from_generators(t.group, {1, 2, 3, 4, 5});
  for (int i = 0; i < t.irrep_count(); ++i) {
    Complex want = (i == t.trivial_index()) ? Complex(6.0) : Complex(0.0);
    CHECK(std::abs(subgroup_character_sum(t, whole, i) - want) < 1e-9);
  }
}

TEST_CASE("csv round trip is exact") {
  for (const char* spec : {"symmetric:4", "alternating:4", "cyclic:5"}) {
    CAPTURE(spec);
    CharacterTable t = character_table(build_group(spec));
    std::string csv = character_table_to_csv(t);
    CharacterTable back = character_table_from_csv(t.group, csv);
    CHECK(character_table_to_csv(back) == csv);
  }
}

TEST_CASE("csv import rejects corrupted tables") {
  CharacterTable t = character_table(build_group("symmetric:3"));
  std::string csv = character_table_to_csv(t);

  std::string wrong_header = csv;
  size_t sz = wrong_header.find(":1");
  REQUIRE(sz != std::string::npos);
  wrong_header.replace(sz, 2, ":7");  // clobber a class size
  CHECK_THROWS_AS(character_table_from_csv(t.group, wrong_header), UsageError);

  // tamper with one character value: certification must fail
  size_t pos = csv.rfind("-1:");
  REQUIRE(pos != std::string::npos);
  std::string tampered = csv;
  tampered.replace(pos, 3, "-2:");
  CHECK_THROWS_AS(character_table_from_csv(t.group, tampered), ConsistencyError);

  CHECK_THROWS_AS(character_table_from_csv(build_group("cyclic:6"), csv), UsageError);
}
