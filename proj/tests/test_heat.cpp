#include "heatcount/heat.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "heatcount/counting.hpp"
#include "heatcount/errors.hpp"

using namespace heatcount;

TEST_CASE("cayley weights on small groups") {
  CharacterTable c2 = character_table(build_group("cyclic:2"));
  SpectralWeight w = cayley_weight(c2, {1});
  CHECK(w.p[c2.trivial_index()] == 0.0);
  CHECK(w.p[1 - c2.trivial_index()] == doctest::Approx(2.0));

  CharacterTable s3 = character_table(build_group("symmetric:3"));
  SpectralWeight ws3 = cayley_weight(s3, s3.group.canonical_generators());
  CHECK(ws3.p[s3.trivial_index()] == 0.0);
  for (int i = 0; i < s3.irrep_count(); ++i)
    if (i != s3.trivial_index()) CHECK(ws3.p[i] > 0.0);

  // S = G minus the identity: all nontrivial exponents equal |G|
  for (const char* spec : {"symmetric:3", "quaternion8", "cyclic:5"}) {
    CAPTURE(spec);
    CharacterTable t = character_table(build_group(spec));
    std::vector<Element> all;
    for (Element e = 1; e < t.group.order(); ++e) all.push_back(e);
    SpectralWeight wa = cayley_weight(t, all);
    for (int i = 0; i < t.irrep_count(); ++i)
      if (i != t.trivial_index())
        CHECK(wa.p[i] == doctest::Approx(t.group.order()).epsilon(1e-9));
    CHECK(spectral_gap(t, wa) == doctest::Approx(t.group.order()));
  }

  // a single transposition generates only an order-2 subgroup
  Element transp = 0;
  for (Element e = 1; e < s3.group.order(); ++e)
    if (s3.group.multiply(e, e) == 0) { transp = e; break; }
  CHECK_THROWS_AS(cayley_weight(s3, {transp}), DomainError);
  // a lone rotation is not inverse-closed
  Element rot = 0;
  for (Element e = 1; e < s3.group.order(); ++e)
    if (s3.group.inverse(e) != e) { rot = e; break; }
  CHECK_THROWS_AS(cayley_weight(s3, {rot}), DomainError);
  CHECK_THROWS_AS(cayley_weight(s3, {rot, s3.group.inverse(rot)}), DomainError);
  CHECK_THROWS_AS(cayley_weight(s3, {}), DomainError);
  CHECK_THROWS_AS(cayley_weight(s3, {9}), UsageError);

  CHECK_THROWS_AS(user_weight(s3, {0.0, 1.0}), UsageError);
  std::vector<double> bad(3, 1.0);
  CHECK_THROWS_AS(user_weight(s3, bad), UsageError);  // trivial exponent nonzero
}

TEST_CASE("heat kernel delta at time zero and closed form on cyclic:2") {
  CharacterTable c2 = character_table(build_group("cyclic:2"));
  SpectralWeight w = cayley_weight(c2, {1});
  for (double t : {0.01, 0.3, 1.0, 7.0}) {
    CHECK(heat_kernel(c2, w, t, 0, 0) ==
          doctest::Approx((1 + std::exp(-2 * t)) / 2).epsilon(1e-12));
    CHECK(heat_kernel(c2, w, t, 1, 0) ==
          doctest::Approx((1 - std::exp(-2 * t)) / 2).epsilon(1e-12));
  }

  for (const char* spec : {"symmetric:3", "quaternion8", "alternating:4"}) {
    CAPTURE(spec);
    CharacterTable t = character_table(build_group(spec));
    SpectralWeight wt = cayley_weight(t, t.group.canonical_generators());
    for (Element x = 0; x < t.group.order(); ++x)
      for (Element y = 0; y < t.group.order(); ++y)
        CHECK(heat_kernel(t, wt, 0.0, x, y) == (x == y ? 1.0 : 0.0));
  }
}

TEST_CASE("heat kernel semigroup, mass, positivity, invariance") {
  std::mt19937_64 rng(42);
  for (const char* spec : {"symmetric:3", "quaternion8", "dihedral:4", "cyclic:6"}) {
    CAPTURE(spec);
    CharacterTable t = character_table(build_group(spec));
    const FiniteGroup& g = t.group;
    SpectralWeight w = cayley_weight(t, g.canonical_generators());
    std::uniform_real_distribution<double> ud(0.01, 3.0);
    std::uniform_int_distribution<Element> ug(0, g.order() - 1);

    for (int trial = 0; trial < 100; ++trial) {
      double ts = ud(rng), ss = ud(rng);
      Element x = ug(rng), y = ug(rng), z = ug(rng);
      double conv = 0;
      for (Element m = 0; m < g.order(); ++m)
        conv += heat_kernel(t, w, ts, x, m) * heat_kernel(t, w, ss, m, y);
      CHECK(conv == doctest::Approx(heat_kernel(t, w, ts + ss, x, y)).epsilon(1e-9));

      // left invariance: the kernel only sees the class of x y^-1
      CHECK(heat_kernel(t, w, ts, g.multiply(z, x), g.multiply(z, y)) ==
            doctest::Approx(heat_kernel(t, w, ts, x, y)).epsilon(1e-12));
    }

    for (double ts : {0.0, 0.01, 0.5, 2.0, 10.0}) {
      for (Element y = 0; y < g.order(); ++y) {
        double mass = 0;
        for (Element x = 0; x < g.order(); ++x) {
          double h = heat_kernel(t, w, ts, x, y);
          CHECK(h >= -1e-12);
          mass += h;
        }
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }

  // large time: uniform distribution dominates
  CharacterTable s3 = character_table(build_group("symmetric:3"));
  SpectralWeight w = cayley_weight(s3, s3.group.canonical_generators());
  for (Element x = 0; x < 6; ++x)
    CHECK(std::abs(heat_kernel(s3, w, 10.0, x, 0) - 1.0 / 6.0) < 1e-8);
}

TEST_CASE("damped counts recover exact counts at time zero") {
  CharacterTable s3 = character_table(build_group("symmetric:3"));
  SpectralWeight w = cayley_weight(s3, s3.group.canonical_generators());

  std::vector<Complex> terms = surface_terms(s3, 1, {});
  std::vector<double> path = heat_damped_counts(s3, w, terms, {0.0, 0.01, 0.1, 1.0, 10.0});
  CHECK(path[0] == doctest::Approx(18.0).epsilon(1e-12));
  // every irrep contributes a positive multiple of exp(-tp): monotone decrease
  for (size_t i = 1; i < path.size(); ++i) CHECK(path[i] < path[i - 1] + 1e-12);
  // large-time limit: only the trivial irrep survives
  CHECK(path.back() == doctest::Approx(6.0).epsilon(1e-8));

  // abelian case: I(t) = |G| sum_lambda exp(-tp)
  CharacterTable c6 = character_table(build_group("cyclic:6"));
  SpectralWeight w6 = cayley_weight(c6, c6.group.canonical_generators());
  std::vector<Complex> t6 = surface_terms(c6, 1, {});
  for (double time : {0.0, 0.2, 1.0}) {
    double direct = 0;
    for (int i = 0; i < c6.irrep_count(); ++i) direct += 6 * std::exp(-time * w6.p[i]);
    CHECK(heat_damped_counts(c6, w6, t6, {time})[0] == doctest::Approx(direct).epsilon(1e-12));
  }
  CHECK(heat_damped_counts(c6, w6, t6, {0.0})[0] == doctest::Approx(36.0));

  // all three counting families hit their exact counts at t = 0
  for (const char* spec : {"symmetric:3", "quaternion8", "alternating:4"}) {
    CAPTURE(spec);
    CharacterTable t = character_table(build_group(spec));
    SpectralWeight wt = cayley_weight(t, t.group.canonical_generators());
    for (int c = 0; c < t.group.class_count(); ++c) {
      CHECK(heat_damped_counts(t, wt, surface_terms(t, 2, {}, c), {0.0})[0] ==
            doctest::Approx(static_cast<double>(count_surface(t, 2, {}, c).count)));
      CHECK(heat_damped_counts(t, wt, n_commutator_terms(t, 3, c), {0.0})[0] ==
            doctest::Approx(static_cast<double>(count_n_commutator(t, 3, c).count)));
    }
    Subgroup h = subgroup_from_generators(t.group, {t.group.canonical_generators()[0]});
    CHECK(heat_damped_counts(t, wt, conjugate_subgroup_terms(t, {h, h}), {0.0})[0] ==
          doctest::Approx(
              static_cast<double>(count_conjugate_subgroup_product(t, {h, h}).count)));
  }
}

TEST_CASE("damping envelope bounds the deviation from the exact count") {
  for (const char* spec : {"symmetric:3", "symmetric:4", "quaternion8", "alternating:4"}) {
    CAPTURE(spec);
    CharacterTable t = character_table(build_group(spec));
    SpectralWeight w = cayley_weight(t, t.group.canonical_generators());
    double gap = spectral_gap(t, w);
    CHECK(gap > 0);

    std::vector<Complex> terms = surface_terms(t, 1, {});
    double exact = static_cast<double>(count_surface(t, 1, {}).count);
    double tail = 0;
    for (int i = 0; i < t.irrep_count(); ++i)
      if (i != t.trivial_index()) tail += std::abs(terms[i]);
    double big_c = std::exp(gap * 1.0) * tail;  // valid constant for all times <= 1

    for (double time : {1.0, 0.1, 0.01, 0.003}) {
      double damped = heat_damped_counts(t, w, terms, {time})[0];
      double dev = std::abs(damped - exact);
      CHECK(dev <= heat_damping_envelope(t, w, terms, time) + 1e-9);
      CHECK(dev <= big_c * std::exp(-gap * time) + 1e-9);
    }
  }
}
