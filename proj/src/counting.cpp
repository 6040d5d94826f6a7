#include "heatcount/counting.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <thread>

#include "heatcount/errors.hpp"

namespace heatcount {

namespace {

using LC = std::complex<long double>;

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

int parse_int(const std::string& s, const char* what) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || v < 0)
    throw UsageError(std::string("bad ") + what + ": '" + s + "'");
  return v;
}

}  // namespace

WordEquation parse_word(const std::string& text) {
  WordEquation eq;
  std::string body = text;
  size_t arrow = body.find("=>");
  if (arrow != std::string::npos) {
    eq.target = parse_int(trim(body.substr(arrow + 2)), "target element");
    body = body.substr(0, arrow);
  }
  body = trim(body);
  if (body.empty()) throw UsageError("empty word");

  auto find_var = [&](const std::string& name, char family, int constraint) {
    for (size_t i = 0; i < eq.variables.size(); ++i) {
      if (eq.variables[i].name != name) continue;
      WordVariable& v = eq.variables[i];
      if (constraint >= 0) {
        if (v.constraint >= 0 && v.constraint != constraint)
          throw UsageError("conflicting domains for variable " + name);
        v.constraint = constraint;
      }
      return static_cast<int>(i);
    }
    eq.variables.push_back({name, family, constraint});
    return static_cast<int>(eq.variables.size() - 1);
  };

  size_t pos = 0;
  while (pos <= body.size()) {
    size_t star = body.find('*', pos);
    std::string tok = trim(body.substr(pos, star == std::string::npos ? std::string::npos
                                                                      : star - pos));
    pos = (star == std::string::npos) ? body.size() + 1 : star + 1;
    if (tok.empty()) throw UsageError("empty letter in word");

    WordLetter letter;
    if (tok.size() > 4 && tok.rfind("inv(", 0) == 0 && tok.back() == ')') {
      letter.inverted = true;
      tok = trim(tok.substr(4, tok.size() - 5));
      if (tok.empty()) throw UsageError("empty letter inside inv()");
    }

    if (tok.rfind("c:", 0) == 0) {
      letter.constant = parse_int(tok.substr(2), "constant element");
    } else if (tok[0] == 'x' || tok[0] == 'y' || tok[0] == 'z' || tok[0] == 'u') {
      char family = tok[0];
      std::string name = tok;
      int constraint = -1;
      size_t at = tok.find('@');
      if (at != std::string::npos) {
        if (family == 'x' || family == 'y')
          throw UsageError("free variable cannot carry a domain: '" + tok + "'");
        std::string dom = tok.substr(at + 1);
        name = tok.substr(0, at);
        if (family == 'u') {
          if (dom.empty() || dom[0] != 'H')
            throw UsageError("subgroup domain must look like H0: '" + tok + "'");
          constraint = parse_int(dom.substr(1), "subgroup index");
        } else {
          constraint = parse_int(dom, "class element");
        }
      }
      if (name.size() < 2) throw UsageError("bad letter: '" + tok + "'");
      for (size_t i = 1; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i])))
          throw UsageError("bad letter: '" + tok + "'");
      letter.var = find_var(name, family, constraint);
    } else {
      throw UsageError("bad letter: '" + tok + "'");
    }
    eq.letters.push_back(letter);
  }

  for (const WordVariable& v : eq.variables)
    if ((v.family == 'z' || v.family == 'u') && v.constraint < 0)
      throw UsageError("variable " + v.name + " never given a domain");
  return eq;
}

namespace {

struct ResolvedDomains {
  std::vector<std::vector<Element>> domains;  // per variable
  int64_t total = 1;
};

ResolvedDomains resolve_domains(const FiniteGroup& g, const WordEquation& eq,
                                const std::vector<Subgroup>& subgroups, int64_t cap) {
  ResolvedDomains r;
  if (eq.target < 0 || eq.target >= g.order()) throw UsageError("target element out of range");
  for (const WordLetter& l : eq.letters)
    if (l.var < 0 && (l.constant < 0 || l.constant >= g.order()))
      throw UsageError("constant element out of range");
  for (const WordVariable& v : eq.variables) {
    std::vector<Element> dom;
    if (v.family == 'x' || v.family == 'y') {
      dom.resize(g.order());
      for (Element e = 0; e < g.order(); ++e) dom[e] = e;
    } else if (v.family == 'z') {
      if (v.constraint >= g.order()) throw UsageError("class element out of range");
      dom = g.classes()[g.class_of(v.constraint)].members;
    } else {
      if (v.constraint >= static_cast<int>(subgroups.size()))
        throw UsageError("subgroup index out of range for variable " + v.name);
      dom = subgroups[v.constraint].members;
    }
    if (dom.empty()) throw ConsistencyError("empty variable domain");
    if (r.total > cap / static_cast<int64_t>(dom.size()))
      throw DomainError("brute force domain exceeds evaluation cap");
    r.total *= static_cast<int64_t>(dom.size());
    r.domains.push_back(std::move(dom));
  }
  return r;
}

// Enumerates assignments with variable 0 restricted to [lo, hi) of its domain.
template <typename Visit>
void enumerate_range(const FiniteGroup& g, const WordEquation& eq,
                     const ResolvedDomains& doms, size_t lo, size_t hi, Visit&& visit) {
  size_t nv = eq.variables.size();
  std::vector<size_t> idx(nv, 0);
  std::vector<Element> val(nv, 0);
  if (nv > 0) {
    idx[0] = lo;
    for (size_t i = 0; i < nv; ++i) val[i] = doms.domains[i][idx[i]];
    if (lo >= hi) return;
  }
  for (;;) {
    Element p = 0;
    for (const WordLetter& l : eq.letters) {
      Element e = (l.var >= 0) ? val[l.var] : l.constant;
      if (l.inverted) e = g.inverse(e);
      p = g.multiply(p, e);
    }
    if (p == eq.target) visit(val);
    if (nv == 0) return;
    size_t k = nv;
    while (k > 0) {
      --k;
      size_t limit = (k == 0) ? hi : doms.domains[k].size();
      if (++idx[k] < limit) {
        val[k] = doms.domains[k][idx[k]];
        break;
      }
      if (k == 0) return;
      idx[k] = 0;
      val[k] = doms.domains[k][0];
    }
  }
}

}  // namespace

int64_t brute_force_count(const FiniteGroup& g, const WordEquation& eq,
                          const std::vector<Subgroup>& subgroups, const BruteForceOptions& opts) {
  ResolvedDomains doms = resolve_domains(g, eq, subgroups, opts.cap);
  size_t outer = eq.variables.empty() ? 1 : doms.domains[0].size();
  int nthreads = std::max(1, opts.threads);
  if (eq.variables.empty() || outer < 2 * static_cast<size_t>(nthreads) || nthreads == 1) {
    int64_t n = 0;
    enumerate_range(g, eq, doms, 0, outer, [&](const std::vector<Element>&) { n++; });
    return n;
  }
  std::vector<int64_t> partial(nthreads, 0);
  std::vector<std::thread> pool;
  for (int tid = 0; tid < nthreads; ++tid) {
    size_t lo = outer * tid / nthreads, hi = outer * (tid + 1) / nthreads;
    pool.emplace_back([&, tid, lo, hi] {
      enumerate_range(g, eq, doms, lo, hi, [&](const std::vector<Element>&) { partial[tid]++; });
    });
  }
  for (std::thread& th : pool) th.join();
  int64_t n = 0;
  for (int64_t p : partial) n += p;
  return n;
}

Complex brute_force_weighted(const FiniteGroup& g, const WordEquation& eq,
                             const std::vector<Subgroup>& subgroups,
                             const std::function<Complex(const std::vector<Element>&)>& weight,
                             const BruteForceOptions& opts) {
  ResolvedDomains doms = resolve_domains(g, eq, subgroups, opts.cap);
  size_t outer = eq.variables.empty() ? 1 : doms.domains[0].size();
  LC sum = 0;
  enumerate_range(g, eq, doms, 0, outer,
                  [&](const std::vector<Element>& val) { sum += LC(weight(val)); });
  return Complex(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
}

namespace {

long double pow_i(long double base, int exp) {
  long double r = 1.0L;
  for (int e = 0; e < (exp >= 0 ? exp : -exp); ++e) r *= base;
  return exp >= 0 ? r : 1.0L / r;
}

LC value_lc(const CharacterTable& t, int irrep, int cls) {
  Complex v = t.value(irrep, cls);
  return LC(v.real(), v.imag());
}

CountResult finalize_count(LC raw) {
  long double re = raw.real();
  if (std::abs(re) > 9.0e18L) throw DomainError("count exceeds 64-bit range");
  int64_t n = static_cast<int64_t>(std::llround(re));
  long double resid = std::abs(raw - LC(static_cast<long double>(n)));
  CountResult r;
  r.count = n;
  r.raw = static_cast<double>(re);
  r.residue = static_cast<double>(resid);
  if (resid > 1e-6L * std::max<long double>(1.0L, std::abs(raw)))
    throw ConsistencyError("character sum is not close to an integer");
  return r;
}

void check_classes(const CharacterTable& t, const std::vector<int>& classes, int target_class) {
  int k = t.group.class_count();
  if (target_class < 0 || target_class >= k) throw UsageError("target class out of range");
  for (int c : classes)
    if (c < 0 || c >= k) throw UsageError("puncture class out of range");
}

}  // namespace

std::vector<Complex> surface_terms(const CharacterTable& t, int genus,
                                   const std::vector<int>& puncture_classes, int target_class) {
  if (genus < 0) throw UsageError("genus must be nonnegative");
  check_classes(t, puncture_classes, target_class);
  const FiniteGroup& g = t.group;
  int n = static_cast<int>(puncture_classes.size());
  long double scale = pow_i(g.order(), 2 * genus - 1);
  for (int c : puncture_classes) scale *= t.group.classes()[c].size();
  int inv_target = g.inverse_class(target_class);

  std::vector<Complex> terms(t.irrep_count());
  for (int i = 0; i < t.irrep_count(); ++i) {
    LC term = scale;
    for (int c : puncture_classes) term *= value_lc(t, i, c);
    term *= value_lc(t, i, inv_target);
    term /= pow_i(t.irreps[i].dim, 2 * genus + n - 1);
    terms[i] = Complex(static_cast<double>(term.real()), static_cast<double>(term.imag()));
  }
  return terms;
}

CountResult count_surface(const CharacterTable& t, int genus,
                          const std::vector<int>& puncture_classes, int target_class) {
  LC sum = 0;
  for (Complex term : surface_terms(t, genus, puncture_classes, target_class))
    sum += LC(term.real(), term.imag());
  return finalize_count(sum);
}

std::vector<CountResult> pushforward_counts(const CharacterTable& t, int genus,
                                            const std::vector<int>& puncture_classes) {
  std::vector<CountResult> out;
  for (int c = 0; c < t.group.class_count(); ++c)
    out.push_back(count_surface(t, genus, puncture_classes, c));
  return out;
}

std::vector<Complex> n_commutator_terms(const CharacterTable& t, int n, int target_class) {
  if (n < 1) throw UsageError("commutator depth must be at least 1");
  check_classes(t, {}, target_class);
  const FiniteGroup& g = t.group;
  int k = g.class_count();
  std::vector<Complex> terms(t.irrep_count(), 0.0);
  if (n == 1) {  // the identity map: only the trivial irrep carries mass
    terms[t.trivial_index()] = 1.0;
    return terms;
  }
  std::vector<LC> q(k, 1.0L);
  for (int step = 3; step <= n; ++step) {
    std::vector<LC> s(t.irrep_count(), 0.0L);
    for (int i = 0; i < t.irrep_count(); ++i)
      for (int c = 0; c < k; ++c)
        s[i] += static_cast<long double>(g.classes()[c].size()) * value_lc(t, i, c) *
                value_lc(t, i, g.inverse_class(c)) * q[c];
    std::vector<LC> next(k, 0.0L);
    for (int w = 0; w < k; ++w)
      for (int i = 0; i < t.irrep_count(); ++i)
        next[w] += value_lc(t, i, g.inverse_class(w)) / static_cast<long double>(t.irreps[i].dim) *
                   s[i];
    q = std::move(next);
  }
  for (int i = 0; i < t.irrep_count(); ++i) {
    LC s = 0;
    for (int c = 0; c < k; ++c)
      s += static_cast<long double>(g.classes()[c].size()) * value_lc(t, i, c) *
           value_lc(t, i, g.inverse_class(c)) * q[c];
    LC term = value_lc(t, i, g.inverse_class(target_class)) * s /
              static_cast<long double>(t.irreps[i].dim);
    terms[i] = Complex(static_cast<double>(term.real()), static_cast<double>(term.imag()));
  }
  return terms;
}

CountResult count_n_commutator(const CharacterTable& t, int n, int target_class) {
  LC sum = 0;
  for (Complex term : n_commutator_terms(t, n, target_class)) sum += LC(term.real(), term.imag());
  return finalize_count(sum);
}

std::vector<Complex> conjugate_subgroup_terms(const CharacterTable& t,
                                              const std::vector<Subgroup>& subgroups) {
  if (subgroups.empty()) throw UsageError("need at least one subgroup");
  int n = static_cast<int>(subgroups.size());
  long double scale = pow_i(t.group.order(), n - 1);
  std::vector<Complex> terms(t.irrep_count());
  for (int i = 0; i < t.irrep_count(); ++i) {
    LC term = scale;
    for (const Subgroup& h : subgroups) {
      Complex s = subgroup_character_sum(t, h, i);
      term *= LC(s.real(), s.imag());
    }
    term /= pow_i(t.irreps[i].dim, n - 2);
    terms[i] = Complex(static_cast<double>(term.real()), static_cast<double>(term.imag()));
  }
  return terms;
}

CountResult count_conjugate_subgroup_product(const CharacterTable& t,
                                             const std::vector<Subgroup>& subgroups) {
  LC sum = 0;
  for (Complex term : conjugate_subgroup_terms(t, subgroups))
    sum += LC(term.real(), term.imag());
  return finalize_count(sum);
}

CountResult count_with_square(const CharacterTable& t, int genus) {
  if (genus < 0) throw UsageError("genus must be nonnegative");
  long double scale = pow_i(t.group.order(), 2 * genus);
  LC sum = 0;
  for (int i = 0; i < t.irrep_count(); ++i)
    sum += scale * frobenius_schur(t, i) / pow_i(t.irreps[i].dim, 2 * genus - 1);
  return finalize_count(sum);
}

CountResult count_klein(const CharacterTable& t, int genus) {
  if (genus < 0) throw UsageError("genus must be nonnegative");
  const FiniteGroup& g = t.group;
  int64_t order = g.order();
  if (order > 10000) throw DomainError("group too large for pair enumeration");
  std::vector<CountResult> pf = pushforward_counts(t, genus, {});
  long double sum = 0;
  for (Element w = 0; w < order; ++w) {
    Element wi = g.inverse(w);
    for (Element z = 0; z < order; ++z) {
      Element p = g.multiply(g.multiply(g.multiply(w, z), wi), z);
      sum += static_cast<long double>(pf[g.class_of(g.inverse(p))].count);
    }
  }
  return finalize_count(LC(sum));
}

WeightedResult weighted_count(const CharacterTable& t, int genus,
                              const std::vector<int>& weight_irreps,
                              const std::vector<int>& puncture_classes, int target_class) {
  if (genus < 0) throw UsageError("genus must be nonnegative");
  if (static_cast<int>(weight_irreps.size()) > genus)
    throw UsageError("more weights than handles");
  for (int w : weight_irreps)
    if (w < 0 || w >= t.irrep_count()) throw UsageError("weight irrep out of range");
  check_classes(t, puncture_classes, target_class);

  // multiplicity of irrep i inside i (x) mu, for each weight mu
  std::vector<std::vector<int64_t>> self_mult;
  for (int mu : weight_irreps) {
    std::vector<int64_t> m(t.irrep_count());
    for (int i = 0; i < t.irrep_count(); ++i) m[i] = tensor_decompose(t, i, mu)[i];
    self_mult.push_back(std::move(m));
  }

  const FiniteGroup& g = t.group;
  int n = static_cast<int>(puncture_classes.size());
  long double scale = pow_i(g.order(), 2 * genus - 1);
  for (int c : puncture_classes) scale *= g.classes()[c].size();
  int inv_target = g.inverse_class(target_class);

  LC sum = 0;
  for (int i = 0; i < t.irrep_count(); ++i) {
    LC term = scale;
    for (const std::vector<int64_t>& m : self_mult) term *= static_cast<long double>(m[i]);
    for (int c : puncture_classes) term *= value_lc(t, i, c);
    term *= value_lc(t, i, inv_target);
    term /= pow_i(t.irreps[i].dim, 2 * genus + n - 1);
    sum += term;
  }
  WeightedResult r;
  r.value = Complex(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
  r.residue = static_cast<double>(
      std::abs(sum - LC(std::round(sum.real()), std::round(sum.imag()))));
  return r;
}

}  // namespace heatcount
