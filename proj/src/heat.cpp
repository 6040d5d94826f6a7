#include "heatcount/heat.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "heatcount/errors.hpp"

namespace heatcount {

SpectralWeight cayley_weight(const CharacterTable& t, const std::vector<Element>& generators) {
  const FiniteGroup& g = t.group;
  std::set<Element> s;
  for (Element e : generators) {
    if (e < 0 || e >= g.order()) throw UsageError("generator out of range");
    s.insert(e);
  }
  if (s.empty()) throw DomainError("empty generating set");
  for (Element e : s)
    if (!s.count(g.inverse(e)))
      throw DomainError("generating set is not closed under inverses");
  if (subgroup_from_generators(g, {s.begin(), s.end()}).order() != g.order())
    throw DomainError("set does not generate the group");

  SpectralWeight w;
  w.provenance = "cayley:k=" + std::to_string(s.size());
  w.p.resize(t.irrep_count());
  for (int i = 0; i < t.irrep_count(); ++i) {
    double re = 0;
    for (Element e : s) re += t.value(i, g.class_of(e)).real();
    double p = static_cast<double>(s.size()) - re / static_cast<double>(t.irreps[i].dim);
    if (i == t.trivial_index()) p = 0.0;  // exact: all chi(s) = 1
    if (p < 0 && p > -1e-9) p = 0.0;
    if (p < 0) throw ConsistencyError("negative spectral exponent from a symmetric set");
    w.p[i] = p;
  }
  if (spectral_gap(t, w) <= 0)
    throw ConsistencyError("zero spectral gap despite a generating set");
  return w;
}

SpectralWeight user_weight(const CharacterTable& t, std::vector<double> p) {
  if (static_cast<int>(p.size()) != t.irrep_count())
    throw UsageError("need one exponent per irrep");
  for (double v : p)
    if (!(v >= 0)) throw UsageError("spectral exponents must be nonnegative");
  if (p[t.trivial_index()] != 0.0)
    throw UsageError("trivial irrep must carry exponent 0");
  SpectralWeight w;
  w.p = std::move(p);
  w.provenance = "user";
  return w;
}

double spectral_gap(const CharacterTable& t, const SpectralWeight& w) {
  if (static_cast<int>(w.p.size()) != t.irrep_count())
    throw UsageError("weight does not match the table");
  double gap = -1;
  for (int i = 0; i < t.irrep_count(); ++i) {
    if (i == t.trivial_index()) continue;
    if (gap < 0 || w.p[i] < gap) gap = w.p[i];
  }
  if (gap < 0) throw DomainError("group has a single irrep");
  return gap;
}

double heat_kernel(const CharacterTable& t, const SpectralWeight& w, double time, Element x,
                   Element y) {
  if (static_cast<int>(w.p.size()) != t.irrep_count())
    throw UsageError("weight does not match the table");
  if (!(time >= 0)) throw UsageError("time must be nonnegative");
  const FiniteGroup& g = t.group;
  if (x < 0 || x >= g.order() || y < 0 || y >= g.order())
    throw UsageError("element out of range");
  int cls = g.class_of(g.multiply(x, g.inverse(y)));

  std::complex<long double> sum = 0;
  for (int i = 0; i < t.irrep_count(); ++i) {
    Complex chi = t.value(i, cls);
    long double damp = std::exp(static_cast<long double>(-time * w.p[i]));
    sum += static_cast<long double>(t.irreps[i].dim) *
           std::complex<long double>(chi.real(), chi.imag()) * damp;
  }
  sum /= static_cast<long double>(g.order());
  if (std::abs(sum.imag()) > 1e-9L * std::max<long double>(1.0L, std::abs(sum.real())))
    throw ConsistencyError("heat kernel value has an imaginary residue");
  if (time == 0.0) {  // column orthogonality gives the exact point mass
    long double rounded = std::round(sum.real());
    if (std::abs(sum.real() - rounded) > 1e-6L)
      throw ConsistencyError("delta limit is not integral");
    return static_cast<double>(rounded);
  }
  return static_cast<double>(sum.real());
}

std::vector<double> heat_damped_counts(const CharacterTable& t, const SpectralWeight& w,
                                       const std::vector<Complex>& terms,
                                       const std::vector<double>& times) {
  if (static_cast<int>(w.p.size()) != t.irrep_count() ||
      terms.size() != w.p.size())
    throw UsageError("terms and weight must match the table");
  std::vector<double> out;
  for (double time : times) {
    if (!(time >= 0)) throw UsageError("time must be nonnegative");
    std::complex<long double> sum = 0;
    for (int i = 0; i < t.irrep_count(); ++i)
      sum += std::complex<long double>(terms[i].real(), terms[i].imag()) *
             std::exp(static_cast<long double>(-time * w.p[i]));
    if (std::abs(sum.imag()) > 1e-9L * std::max<long double>(1.0L, std::abs(sum.real())))
      throw ConsistencyError("damped count has an imaginary residue");
    out.push_back(static_cast<double>(sum.real()));
  }
  return out;
}

double heat_damping_envelope(const CharacterTable& t, const SpectralWeight& w,
                             const std::vector<Complex>& terms, double time) {
  if (static_cast<int>(w.p.size()) != t.irrep_count() ||
      terms.size() != w.p.size())
    throw UsageError("terms and weight must match the table");
  long double bound = 0;
  for (int i = 0; i < t.irrep_count(); ++i) {
    if (i == t.trivial_index()) continue;
    bound += std::abs(std::complex<long double>(terms[i].real(), terms[i].imag())) *
             (1.0L - std::exp(static_cast<long double>(-time * w.p[i])));
  }
  return static_cast<double>(bound);
}

}  // namespace heatcount
