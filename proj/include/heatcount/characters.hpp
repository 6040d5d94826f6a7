#pragma once

#include <complex>
#include <string>
#include <vector>

#include "heatcount/group.hpp"

namespace heatcount {

using Complex = std::complex<double>;

struct Irrep {
  std::string label;   // "X0", "X1", ... in table order
  int64_t dim = 1;     // certified integer dimension
  std::vector<Complex> values;  // one per conjugacy class; values[0] == dim
};

// Complete complex character table of a finite group. Rows are ordered by
// dimension, then lexicographically by rounded values, so tables are
// reproducible across runs.
struct CharacterTable {
  FiniteGroup group;
  std::vector<Irrep> irreps;

  int irrep_count() const { return static_cast<int>(irreps.size()); }
  const Complex& value(int irrep, int cls) const { return irreps[irrep].values[cls]; }
  // index of the trivial representation (all values 1)
  int trivial_index() const;
};

// Builds the table by diagonalizing a random real combination of the class
// multiplication matrices (up to `attempts` retries on eigenvalue collision
// within 1e-8), then certifies it: integer dimensions with residue < 1e-6,
// sum of squared dimensions equals |G| exactly, row and column orthogonality
// within 1e-9. Throws ConsistencyError if certification keeps failing and
// DomainError if the class count exceeds the supported size.
CharacterTable character_table(const FiniteGroup& g, int attempts = 8);

// Certification used after construction and after CSV import.
void certify_character_table(const CharacterTable& t);

// Frobenius-Schur indicator (1/|G|) sum_x chi(x^2): one of {-1, 0, 1}.
int frobenius_schur(const CharacterTable& t, int irrep);

// Multiplicities c^nu_{mu,lambda} of each irrep nu in the tensor product
// mu (x) lambda, certified to be nonnegative integers.
std::vector<int64_t> tensor_decompose(const CharacterTable& t, int mu, int lambda);

// sum_{z in H} chi_lambda(z)
Complex subgroup_character_sum(const CharacterTable& t, const Subgroup& h, int irrep);

// CSV round-trip. The header row carries class representatives and sizes;
// every following row is "label,d,re:im,re:im,...", 12 significant digits.
std::string character_table_to_csv(const CharacterTable& t);
void write_character_table_csv(const CharacterTable& t, const std::string& path);
// Parses a CSV produced by the functions above for the given group and
// re-certifies all invariants before returning.
CharacterTable character_table_from_csv(const FiniteGroup& g, const std::string& csv);
CharacterTable read_character_table_csv(const FiniteGroup& g, const std::string& path);

}  // namespace heatcount
