#include "heatcount/counting.hpp"

#include <cmath>
#include <string>

#include "doctest.h"
#include "heatcount/errors.hpp"

using namespace heatcount;

namespace {

int64_t oracle(const FiniteGroup& g, const std::string& word,
               const std::vector<Subgroup>& subs = {}, int threads = 1) {
  BruteForceOptions opts;
  opts.threads = threads;
  return brute_force_count(g, parse_word(word), subs, opts);
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

const char* kCommutator1 = "inv(x1)*inv(y1)*x1*y1";
const char* kCommutator2 = "inv(x1)*inv(y1)*x1*y1*inv(x2)*inv(y2)*x2*y2";
const char* kNested3 = "inv(x2)*inv(x1)*x2*x1*inv(x3)*inv(x1)*inv(x2)*x1*x2*x3";

}  // namespace

TEST_CASE("word parser") {
  WordEquation eq = parse_word(" inv(x1) * y2 * z1@4 * u1@H0 * c:3 => 2 ");
  CHECK(eq.letters.size() == 5);
  CHECK(eq.variables.size() == 4);
  CHECK(eq.target == 2);
  CHECK(eq.letters[0].inverted);
  CHECK(eq.variables[0].family == 'x');
  CHECK(eq.variables[2].constraint == 4);
  CHECK(eq.variables[3].constraint == 0);
  CHECK(eq.letters[4].var == -1);
  CHECK(eq.letters[4].constant == 3);

  // repeated variables share a slot; the domain may be repeated or omitted
  WordEquation rep = parse_word("z1@5*z1*z1@5");
  CHECK(rep.variables.size() == 1);
  CHECK(rep.letters.size() == 3);

  CHECK_THROWS_AS(parse_word(""), UsageError);
  CHECK_THROWS_AS(parse_word("x1**y1"), UsageError);
  CHECK_THROWS_AS(parse_word("w1"), UsageError);
  CHECK_THROWS_AS(parse_word("x"), UsageError);
  CHECK_THROWS_AS(parse_word("x1@3"), UsageError);
  CHECK_THROWS_AS(parse_word("z1"), UsageError);              // never given a domain
  CHECK_THROWS_AS(parse_word("z1@2*z1@3"), UsageError);       // conflicting domains
  CHECK_THROWS_AS(parse_word("u1@3"), UsageError);            // subgroup needs H
  CHECK_THROWS_AS(parse_word("x1 => -1"), UsageError);
  CHECK_THROWS_AS(parse_word("inv()"), UsageError);
}

TEST_CASE("brute force oracle on elementary words") {
  for (const char* spec : {"symmetric:3", "quaternion8", "cyclic:5"}) {
    CAPTURE(spec);
    FiniteGroup g = build_group(spec);
    CHECK(oracle(g, "x1*y1") == g.order());              // y determined by x
    CHECK(oracle(g, "x1*inv(x1)") == g.order());         // always identity
    CHECK(oracle(g, "x1") == 1);                         // only x = e
    int64_t commuting = 0;
    for (int c = 0; c < g.class_count(); ++c)
      commuting += g.classes()[c].size() * (g.order() / g.classes()[c].size());
    CHECK(oracle(g, kCommutator1) == commuting);         // sum of centralizer orders
  }

  FiniteGroup s3 = build_group("symmetric:3");
  Element transp = s3.classes()[class_of_size(s3, 3)].representative;
  // constants: c:v * x = e has exactly one solution
  CHECK(oracle(s3, "c:" + std::to_string(transp) + "*x1") == 1);
  // class-constrained square: transpositions square to e
  CHECK(oracle(s3, "z1@" + std::to_string(transp) + "*z1") == 3);
  // subgroup variable alone: only h = e
  Subgroup h = subgroup_from_generators(s3, {transp});
  CHECK(oracle(s3, "u1@H0", {h}) == 1);
  CHECK(oracle(s3, "u1@H0*u1", {h}) == 2);  // both members square to e

  CHECK_THROWS_AS(oracle(s3, "x1 => 6"), UsageError);
  CHECK_THROWS_AS(oracle(s3, "c:9*x1"), UsageError);
  CHECK_THROWS_AS(oracle(s3, "u1@H0"), UsageError);  // no subgroup supplied
}

TEST_CASE("brute force cap and threads") {
  FiniteGroup s5 = build_group("symmetric:5");
  CHECK_THROWS_AS(oracle(s5, "x1*y1*x2*y2"), DomainError);  // 120^4 evaluations

  FiniteGroup s3 = build_group("symmetric:3");
  BruteForceOptions tight;
  tight.cap = 10;
  CHECK_THROWS_AS(brute_force_count(s3, parse_word(kCommutator1), {}, tight), DomainError);

  CHECK(oracle(s3, kCommutator2, {}, 4) == oracle(s3, kCommutator2, {}, 1));
  CHECK(oracle(s3, kCommutator1, {}, 16) == 18);  // more threads than useful chunks
}

TEST_CASE("surface counts match the oracle") {
  for (const char* spec : {"symmetric:3", "quaternion8", "dihedral:4", "cyclic:6",
                           "alternating:4"}) {
    CAPTURE(spec);
    CharacterTable t = character_table(build_group(spec));
    const FiniteGroup& g = t.group;

    // genus 0: empty relator equals the identity only
    for (int c = 0; c < g.class_count(); ++c)
      CHECK(count_surface(t, 0, {}, c).count == (c == 0 ? 1 : 0));

    // genus 1 and 2, identity target
    CHECK(count_surface(t, 1, {}).count == oracle(g, kCommutator1));
    if (g.order() <= 12) CHECK(count_surface(t, 2, {}).count == oracle(g, kCommutator2));

    // genus 1, every target class
    for (int c = 0; c < g.class_count(); ++c) {
      Element rep = g.classes()[c].representative;
      CHECK(count_surface(t, 1, {}, c).count ==
            oracle(g, std::string(kCommutator1) + " => " + std::to_string(rep)));
    }

    // genus 0 with two punctures: z1 z2 = e pairs inverse classes
    for (int c = 0; c < g.class_count(); ++c) {
      Element rep = g.classes()[c].representative;
      std::string w = "z1@" + std::to_string(rep) + "*z2@" +
                      std::to_string(g.inverse(rep));
      CHECK(count_surface(t, 0, {c, g.inverse_class(c)}).count == oracle(g, w));
      CHECK(count_surface(t, 0, {c, g.inverse_class(c)}).count == g.classes()[c].size());
    }

    // genus 1 with one puncture, identity and non-identity targets
    for (int c = 0; c < g.class_count(); ++c) {
      Element rep = g.classes()[c].representative;
      std::string w = std::string(kCommutator1) + "*z1@" + std::to_string(rep);
      CHECK(count_surface(t, 1, {c}).count == oracle(g, w));
      CHECK(count_surface(t, 1, {c}, g.class_count() - 1).count ==
            oracle(g, w + " => " +
                          std::to_string(g.classes()[g.class_count() - 1].representative)));
    }
  }
}

TEST_CASE("surface count frozen values and mass identity") {
  CharacterTable s3 = character_table(build_group("symmetric:3"));
  CHECK(count_surface(s3, 1, {}).count == 18);  // |G| * (number of classes)

  std::vector<CountResult> pf = pushforward_counts(s3, 1, {});
  CHECK(pf[0].count == 18);
  CHECK(pf[class_of_size(s3.group, 3)].count == 0);  // commutators are even
  CHECK(pf[class_of_size(s3.group, 2)].count == 9);

  for (const char* spec : {"symmetric:3", "symmetric:4", "quaternion8", "alternating:4"}) {
    CAPTURE(spec);
    CharacterTable t = character_table(build_group(spec));
    for (int genus : {1, 2}) {
      std::vector<CountResult> n = pushforward_counts(t, genus, {});
      long double total = 0;
      for (int c = 0; c < t.group.class_count(); ++c)
        total += static_cast<long double>(n[c].count) * t.group.classes()[c].size();
      long double want = 1;
      for (int e = 0; e < 2 * genus; ++e) want *= t.group.order();
      CHECK(total == want);
    }
  }

  // per-irrep terms sum to the full count
  CharacterTable s4 = character_table(build_group("symmetric:4"));
  for (int c = 0; c < s4.group.class_count(); ++c) {
    Complex sum = 0;
    for (Complex term : surface_terms(s4, 2, {1}, c)) sum += term;
    CHECK(std::abs(sum.real() - count_surface(s4, 2, {1}, c).raw) < 1e-6);
    CHECK(std::abs(sum.imag()) < 1e-6);
  }
}

TEST_CASE("iterated commutator counts") {
  CharacterTable s3 = character_table(build_group("symmetric:3"));
  CHECK(count_n_commutator(s3, 2, 0).count == 18);
  CHECK(count_n_commutator(s3, 3, 0).count == 162);
  for (int c = 0; c < 3; ++c) CHECK(count_n_commutator(s3, 1, c).count == 1);

  for (const char* spec : {"symmetric:3", "quaternion8", "alternating:4"}) {
    CAPTURE(spec);
    CharacterTable t = character_table(build_group(spec));
    const FiniteGroup& g = t.group;
    for (int c = 0; c < g.class_count(); ++c) {
      Element rep = g.classes()[c].representative;
      std::string suffix = " => " + std::to_string(rep);
      CHECK(count_n_commutator(t, 2, c).count == oracle(g, kCommutator1 + suffix));
      CHECK(count_n_commutator(t, 3, c).count == oracle(g, kNested3 + suffix));
    }
    // mass: every tuple lands somewhere
    for (int n : {2, 3, 4}) {
      long double total = 0;
      for (int c = 0; c < g.class_count(); ++c)
        total += static_cast<long double>(count_n_commutator(t, n, c).count) *
                 g.classes()[c].size();
      long double want = 1;
      for (int e = 0; e < n; ++e) want *= g.order();
      CHECK(total == want);
    }
  }
  CHECK_THROWS_AS(count_n_commutator(s3, 0, 0), UsageError);
}

TEST_CASE("products of conjugated subgroup elements") {
  CharacterTable s3 = character_table(build_group("symmetric:3"));
  Element transp = s3.group.classes()[class_of_size(s3.group, 3)].representative;
  Element rot = s3.group.classes()[class_of_size(s3.group, 2)].representative;
  Subgroup h2 = subgroup_from_generators(s3.group, {transp});
  Subgroup h3 = subgroup_from_generators(s3.group, {rot});

  CHECK(count_conjugate_subgroup_product(s3, {h2, h2}).count == 48);
  CHECK(count_conjugate_subgroup_product(s3, {h2}).count == 6);
  CHECK(count_conjugate_subgroup_product(s3, {h2, h2}).count ==
        oracle(s3.group, "x1*u1@H0*inv(x1)*x2*u2@H1*inv(x2)", {h2, h2}));
  CHECK(count_conjugate_subgroup_product(s3, {h2, h3}).count ==
        oracle(s3.group, "x1*u1@H0*inv(x1)*x2*u2@H1*inv(x2)", {h2, h3}));
  CHECK(count_conjugate_subgroup_product(s3, {h2, h2, h3}).count ==
        oracle(s3.group, "x1*u1@H0*inv(x1)*x2*u2@H1*inv(x2)*x3*u3@H2*inv(x3)", {h2, h2, h3}));

  CharacterTable c2 = character_table(build_group("cyclic:2"));
  Subgroup whole = subgroup_from_generators(c2.group, {1});
  CHECK(count_conjugate_subgroup_product(c2, {whole, whole}).count == 8);

  CHECK_THROWS_AS(count_conjugate_subgroup_product(s3, {}), UsageError);
}

TEST_CASE("counts with a squared variable") {
  CharacterTable c2 = character_table(build_group("cyclic:2"));
  CharacterTable s3 = character_table(build_group("symmetric:3"));
  CharacterTable q8 = character_table(build_group("quaternion8"));
  CHECK(count_with_square(c2, 0).count == 2);
  CHECK(count_with_square(s3, 0).count == 4);
  CHECK(count_with_square(s3, 1).count == 90);
  CHECK(count_with_square(q8, 1).count == 224);

  for (const char* spec : {"symmetric:3", "quaternion8", "dihedral:4", "alternating:4"}) {
    CAPTURE(spec);
    CharacterTable t = character_table(build_group(spec));
    CHECK(count_with_square(t, 0).count == oracle(t.group, "x1*x1"));
    CHECK(count_with_square(t, 1).count ==
          oracle(t.group, "x1*x1*inv(x2)*inv(y2)*x2*y2"));
  }
}

TEST_CASE("klein-type counts") {
  CharacterTable c2 = character_table(build_group("cyclic:2"));
  CharacterTable s3 = character_table(build_group("symmetric:3"));
  CHECK(count_klein(c2, 0).count == 4);
  CHECK(count_klein(s3, 0).count == 18);

  for (const char* spec : {"cyclic:2", "symmetric:3", "quaternion8", "dihedral:4",
                           "alternating:4"}) {
    CAPTURE(spec);
    CharacterTable t = character_table(build_group(spec));
    CHECK(count_klein(t, 0).count == oracle(t.group, "x1*y1*inv(x1)*y1"));
    if (t.group.order() <= 8)
      CHECK(count_klein(t, 1).count ==
            oracle(t.group, "x1*y1*inv(x1)*y1*inv(x2)*inv(y2)*x2*y2"));

    // agreement with the indicator-square character sum
    for (int genus : {0, 1, 2}) {
      long double want = 0;
      for (int i = 0; i < t.irrep_count(); ++i) {
        long double term = static_cast<long double>(frobenius_schur(t, i));
        term *= term;
        for (int e = 0; e < 2 * genus; ++e) term /= t.irreps[i].dim;
        want += term;
      }
      for (int e = 0; e < 2 * genus + 1; ++e) want *= t.group.order();
      CHECK(static_cast<long double>(count_klein(t, genus).count) == want);
    }
  }
}

TEST_CASE("character-weighted counts match weighted enumeration") {
  CharacterTable s3 = character_table(build_group("symmetric:3"));
  int std2 = irrep_of_dim(s3, 2);
  int threecyc = class_of_size(s3.group, 2);

  CHECK(weighted_count(s3, 1, {std2}, {}).value.real() == doctest::Approx(6.0));
  CHECK(weighted_count(s3, 1, {s3.trivial_index()}, {}).value.real() == doctest::Approx(18.0));
  CHECK(weighted_count(s3, 1, {std2}, {threecyc}).value.real() == doctest::Approx(-6.0));
  CHECK(weighted_count(s3, 2, {std2, std2}, {}).value.real() == doctest::Approx(54.0));

  CharacterTable c2 = character_table(build_group("cyclic:2"));
  CHECK(weighted_count(c2, 2, {1 - c2.trivial_index()}, {}).value.real() ==
        doctest::Approx(0.0));

  // oracle: sum chi_mu over the b-variable of the first handle
  for (const char* spec : {"symmetric:3", "quaternion8", "alternating:4"}) {
    CAPTURE(spec);
    CharacterTable t = character_table(build_group(spec));
    const FiniteGroup& g = t.group;
    WordEquation eq = parse_word(kCommutator1);  // variables: x1, y1
    for (int mu = 0; mu < t.irrep_count(); ++mu) {
      CAPTURE(mu);
      auto weight = [&](const std::vector<Element>& val) {
        return t.value(mu, g.class_of(val[1]));
      };
      Complex want = brute_force_weighted(g, eq, {}, weight);
      Complex got = weighted_count(t, 1, {mu}, {}).value;
      CHECK(std::abs(got - want) < 1e-6);
    }
  }

  // two weighted handles, punctures, and a non-identity target
  {
    const FiniteGroup& g = s3.group;
    Element rot = g.classes()[threecyc].representative;
    WordEquation eq =
        parse_word(std::string(kCommutator2) + "*z1@" + std::to_string(rot) +
                   " => " + std::to_string(rot));
    auto weight = [&](const std::vector<Element>& val) {
      return s3.value(std2, g.class_of(val[1])) * s3.value(std2, g.class_of(val[3]));
    };
    Complex want = brute_force_weighted(g, eq, {}, weight);
    Complex got = weighted_count(s3, 2, {std2, std2}, {threecyc}, threecyc).value;
    CHECK(std::abs(got - want) < 1e-6);
  }

  CHECK_THROWS_AS(weighted_count(s3, 1, {0, 0}, {}), UsageError);
  CHECK_THROWS_AS(weighted_count(s3, 1, {9}, {}), UsageError);
}
