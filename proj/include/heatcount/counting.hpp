#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "heatcount/characters.hpp"
#include "heatcount/group.hpp"

namespace heatcount {

// ---- word equations and the exhaustive counting oracle ----
//
// A word is a '*'-separated product of letters, optionally followed by
// "=> <element>" giving the required product (default: identity).
// Letters:
//   x<k>, y<k>      free variables ranging over the whole group
//   z<k>@<element>  variable ranging over the conjugacy class of <element>
//   u<k>@H<j>       variable ranging over the j-th supplied subgroup
//   c:<element>     a fixed element
//   inv(<letter>)   inverse of any of the above
// A repeated variable name reuses the same value; its domain marker may be
// repeated (consistently) or omitted after the first occurrence.

struct WordVariable {
  std::string name;
  char family = 'x';    // x, y, z, or u
  int constraint = -1;  // z: element whose class is the domain; u: subgroup index
};

struct WordLetter {
  int var = -1;          // index into variables, or -1 for a constant
  Element constant = 0;  // used when var == -1
  bool inverted = false;
};

struct WordEquation {
  std::vector<WordLetter> letters;
  std::vector<WordVariable> variables;
  Element target = 0;
};

WordEquation parse_word(const std::string& text);

struct BruteForceOptions {
  int64_t cap = 100000000;  // maximum number of assignments to enumerate
  int threads = 1;
};

// Number of assignments satisfying the equation, by exhaustive enumeration.
int64_t brute_force_count(const FiniteGroup& g, const WordEquation& eq,
                          const std::vector<Subgroup>& subgroups = {},
                          const BruteForceOptions& opts = {});

// Sum of weight(assignment) over satisfying assignments; assignment[i] is the
// value of eq.variables[i].
Complex brute_force_weighted(const FiniteGroup& g, const WordEquation& eq,
                             const std::vector<Subgroup>& subgroups,
                             const std::function<Complex(const std::vector<Element>&)>& weight,
                             const BruteForceOptions& opts = {});

// ---- exact character-sum counts ----

struct CountResult {
  int64_t count = 0;    // rounded value
  double raw = 0.0;     // value of the character sum before rounding
  double residue = 0.0; // distance from raw (incl. imaginary part) to count
};

// Solutions of [a1,b1]...[ag,bg] z1...zn = target with zj ranging over the
// given conjugacy classes (class indices).
CountResult count_surface(const CharacterTable& t, int genus,
                          const std::vector<int>& puncture_classes, int target_class = 0);

// count_surface for every target class at once.
std::vector<CountResult> pushforward_counts(const CharacterTable& t, int genus,
                                            const std::vector<int>& puncture_classes);

// Per-irrep contributions; their sum is count_surface(...).raw.
std::vector<Complex> surface_terms(const CharacterTable& t, int genus,
                                   const std::vector<int>& puncture_classes, int target_class = 0);

// Solutions of the left-nested iterated commutator [[...[v1,v2],...],vn] = target.
CountResult count_n_commutator(const CharacterTable& t, int n, int target_class = 0);
std::vector<Complex> n_commutator_terms(const CharacterTable& t, int n, int target_class = 0);

// Solutions of (g1 h1 g1^-1)...(gn hn gn^-1) = e with gj in G, hj in Hj.
CountResult count_conjugate_subgroup_product(const CharacterTable& t,
                                             const std::vector<Subgroup>& subgroups);
std::vector<Complex> conjugate_subgroup_terms(const CharacterTable& t,
                                              const std::vector<Subgroup>& subgroups);

// Solutions of x^2 [a1,b1]...[ag,bg] = e.
CountResult count_with_square(const CharacterTable& t, int genus);

// Solutions of w z w^-1 z [a1,b1]...[ag,bg] = e, evaluated by summing the
// genus-g class function over all pairs (w, z).
CountResult count_klein(const CharacterTable& t, int genus);

struct WeightedResult {
  Complex value;
  double residue = 0.0;  // distance to the nearest Gaussian integer
};

// Character-weighted surface count: over solutions of
// [a1,b1]...[ag,bg] z1...zn = target, sums prod_j chi_{mu_j}(b_j) where the
// first weight_irreps.size() <= genus handles carry the given irreps.
WeightedResult weighted_count(const CharacterTable& t, int genus,
                              const std::vector<int>& weight_irreps,
                              const std::vector<int>& puncture_classes, int target_class = 0);

}  // namespace heatcount
