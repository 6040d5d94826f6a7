#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace heatcount {

// Root data for A1 (SU(2)) and A2 (SU(3)) in ambient coordinates R^{rank+1}
// with the standard dot product (long roots have squared length 2). Volumes
// are Riemannian volumes under this normalization.

enum class RootSystemType { A1, A2 };

RootSystemType parse_root_system(const std::string& tag);

struct RootSystem {
  RootSystemType type;
  int rank = 1;
  int ambient = 2;
  std::vector<std::vector<double>> positive_roots;
  std::vector<std::vector<double>> fundamental_weights;
  std::vector<double> weyl_vector;  // rho = half sum of positive roots
  std::vector<std::vector<int>> weyl_perms;  // coordinate permutations
  std::vector<int> weyl_signs;               // det(w) of each permutation
  int center_order = 2;   // |Z(G)|
  int dim_group = 3;      // dim G
  double group_volume = 0;
  double torus_volume = 0;
};

RootSystem root_system(RootSystemType type);

struct DominantWeight {
  std::vector<int> coords;  // fundamental-weight coordinates
  int64_t dim = 1;
  double casimir = 0;       // |lambda+rho|^2 - |rho|^2
};

double casimir_value(const RootSystem& rs, const std::vector<int>& coords);
int64_t weyl_dimension(const RootSystem& rs, const std::vector<int>& coords);

// All dominant weights with casimir <= cutoff, ordered by (casimir, coords).
std::vector<DominantWeight> dominant_weights(const RootSystem& rs, double casimir_cutoff);

// Point exp(C) of the maximal torus, one angle per rank.
// Text form: "A1:theta=<radians>" or "A2:t1=<r>,t2=<r>".
struct TorusPoint {
  RootSystemType type;
  std::vector<double> angles;
};

TorusPoint parse_torus_point(const std::string& text);
TorusPoint torus_inverse(const TorusPoint& x);

double weyl_denominator_magnitude(const RootSystem& rs, const TorusPoint& x);
bool near_identity(const RootSystem& rs, const TorusPoint& x, double tol = 1e-8);
bool is_central(const RootSystem& rs, const TorusPoint& x, double tol = 1e-8);

// Weyl quotient at a regular point; the identity limit returns the dimension;
// any other singular point is rejected.
std::complex<double> weyl_character(const RootSystem& rs, const std::vector<int>& coords,
                                    const TorusPoint& x);

// |j(c)| = prod over positive roots of |1 - e^{i alpha(C)}|; 0 at central c.
double orbit_jacobian_magnitude(const RootSystem& rs, const TorusPoint& x);

// Dimension of the zero-weight space of the irrep (Kostant partition sum for
// A2, parity for A1).
int64_t zero_weight_multiplicity(const RootSystem& rs, const std::vector<int>& coords);

struct SeriesResult {
  double value = 0;
  int64_t terms_used = 0;
  double tail_bound = 0;
  std::string cutoff;
  bool conditionally_convergent = false;
};

// sum over dominant lambda of d_lambda^{-s}. Auto mode (max_terms = 0) grows
// the cutoff until tail_bound < tolerance; otherwise sums at most max_terms
// terms and reports the analytic tail bound at the reached cutoff.
SeriesResult witten_zeta_partial(const RootSystem& rs, double s, double tolerance,
                                 int64_t max_terms = 0);
// Plain truncated sum (no correction terms); monotone in max_terms.
double witten_zeta_raw_partial(const RootSystem& rs, double s, int64_t max_terms);

struct ModuliVolume {
  SeriesResult series;  // sum of prod_j chi_lambda(c_j) e^{-t p} / d^{2g+n-2}
  double prefactor = 0;
  double volume = 0;    // prefactor * series.value
  double complex_dim = 0;
  bool central_marked_point = false;
};

ModuliVolume moduli_volume_series(const RootSystem& rs, int genus,
                                  const std::vector<TorusPoint>& marked, double t,
                                  double tolerance);

// Push-forward density of the product-of-commutators map at x, with respect
// to normalized Haar measure: sum chi_lambda(x^-1) e^{-t p} / d^{2g-1}.
SeriesResult commutator_density(const RootSystem& rs, const TorusPoint& x, int genus, double t,
                                double tolerance);

enum class SlotKind { Torus, FullGroup, Trivial };
SlotKind parse_slot(const std::string& tag);

// Density of the product of conjugated subgroup elements, one slot per factor:
// sum over lambda of prod_j f_j(lambda) chi_lambda(x^-1) e^{-t p} / d^{n-1},
// where f_j is the zero-weight multiplicity (torus slot), delta on the
// trivial irrep (full-group slot), or d_lambda (trivial-subgroup slot).
SeriesResult subgroup_pushforward_density(const RootSystem& rs,
                                          const std::vector<SlotKind>& slots,
                                          const TorusPoint& x, double t, double tolerance);

// Iterated-commutator density on SU(2) via the torus-quadrature recursion;
// n = 2 reduces to commutator_density at genus 1.
double lie_n_commutator_density(const RootSystem& rs, int n, const TorusPoint& x, double t,
                                int quadrature_points, double tolerance);

struct VanishingSequence {
  std::vector<SeriesResult> values;  // sum d_lambda chi_lambda(c) e^{-t p} per time
  bool at_identity = false;
};

VanishingSequence vanishing_limit(const RootSystem& rs, const TorusPoint& c,
                                  const std::vector<double>& times, double tolerance);

struct Histogram {
  std::vector<int64_t> counts;  // uniform bins over [0, pi]
  int64_t samples = 0;
  uint64_t seed = 0;
};

// Commutator angles of Haar-random SU(2) pairs (or the angle of a single
// Haar-random element when identity_map is set), binned over [0, pi].
// Deterministic for a given seed regardless of thread count.
Histogram mc_commutator_histogram(uint64_t seed, int64_t samples, int bins, int threads = 1,
                                  bool identity_map = false);

// Model bin masses over [0, pi]: the commutator density (genus 1, given t)
// integrated against the Weyl measure (2/pi) sin^2, and the Weyl measure
// itself.
std::vector<double> a1_commutator_bin_masses(int bins, double t, double tolerance);
std::vector<double> weyl_measure_bin_masses(int bins);

}  // namespace heatcount
