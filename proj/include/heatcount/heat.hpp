#pragma once

#include <string>
#include <vector>

#include "heatcount/characters.hpp"
#include "heatcount/group.hpp"

namespace heatcount {

// One nonnegative exponent per irrep; the heat kernel damps irrep lambda by
// exp(-t * p[lambda]).
struct SpectralWeight {
  std::vector<double> p;
  std::string provenance;  // "cayley:k=<set size>" or "user"
};

// Random-walk (Cayley graph laplacian) weight for a symmetric generating set:
// p(lambda) = |S| - Re(sum_{s in S} chi_lambda(s)) / d_lambda.
// Rejects sets that are not inverse-closed or do not generate the group.
SpectralWeight cayley_weight(const CharacterTable& t, const std::vector<Element>& generators);

// User-supplied exponents; must be nonnegative, one per irrep, 0 on the
// trivial irrep.
SpectralWeight user_weight(const CharacterTable& t, std::vector<double> p);

// Smallest exponent over nontrivial irreps.
double spectral_gap(const CharacterTable& t, const SpectralWeight& w);

// H(t,x,y) = (1/|G|) sum_lambda d_lambda chi_lambda(x y^-1) exp(-t p(lambda)).
// t = 0 returns the exact point-mass delta(x,y).
double heat_kernel(const CharacterTable& t, const SpectralWeight& w, double time, Element x,
                   Element y);

// Damped count sum_lambda terms[lambda] * exp(-time * p[lambda]) for each
// requested time; terms come from surface_terms / n_commutator_terms /
// conjugate_subgroup_terms, so time = 0 reproduces the exact count.
std::vector<double> heat_damped_counts(const CharacterTable& t, const SpectralWeight& w,
                                       const std::vector<Complex>& terms,
                                       const std::vector<double>& times);

// Proven envelope: |damped count at time - exact count| never exceeds
// sum over nontrivial irreps of |terms[lambda]| * (1 - exp(-time * p)).
double heat_damping_envelope(const CharacterTable& t, const SpectralWeight& w,
                             const std::vector<Complex>& terms, double time);

}  // namespace heatcount
