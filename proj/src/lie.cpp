#include "heatcount/lie.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "heatcount/errors.hpp"

namespace heatcount {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int64_t kWeightCap = 10000000;  // resource cap on enumerated weights
constexpr double kSingularTol = 1e-12;    // Weyl denominator threshold

using Cplx = std::complex<double>;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> apply_perm(const std::vector<int>& perm, const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[perm[i]];
  return out;
}

// Ambient coordinates of lambda = sum coords[i] * omega_i.
std::vector<double> ambient_weight(const RootSystem& rs, const std::vector<int>& coords) {
  std::vector<double> v(rs.ambient, 0.0);
  for (int i = 0; i < rs.rank; ++i)
    for (int j = 0; j < rs.ambient; ++j) v[j] += coords[i] * rs.fundamental_weights[i][j];
  return v;
}

std::vector<double> torus_phases(const RootSystem& rs, const TorusPoint& x) {
  if (x.type != rs.type) throw UsageError("torus point does not match the root system");
  if ((int)x.angles.size() != rs.rank) throw UsageError("torus point has wrong rank");
  if (rs.type == RootSystemType::A1) return {x.angles[0], -x.angles[0]};
  return {x.angles[0], x.angles[1], -x.angles[0] - x.angles[1]};
}

void check_coords(const RootSystem& rs, const std::vector<int>& coords) {
  if ((int)coords.size() != rs.rank) throw UsageError("weight has wrong rank");
  for (int c : coords)
    if (c < 0) throw UsageError("dominant weight coordinates must be nonnegative");
}

int64_t dim_closed(const RootSystem& rs, const std::vector<int>& coords) {
  if (rs.type == RootSystemType::A1) return coords[0] + 1;
  int64_t m = coords[0] + 1, n = coords[1] + 1;
  return m * n * (m + n) / 2;
}

double casimir_closed(const RootSystem& rs, const std::vector<int>& coords) {
  if (rs.type == RootSystemType::A1) {
    double n = coords[0];
    return 0.5 * n * (n + 2);
  }
  double m = coords[0] + 1, n = coords[1] + 1;
  return (2.0 / 3.0) * (m * m + m * n + n * n) - 2.0;
}

double casimir_a1(double n) { return 0.5 * n * (n + 2); }

double casimir_a2(double a, double b) {
  double m = a + 1, n = b + 1;
  return (2.0 / 3.0) * (m * m + m * n + n * n) - 2.0;
}

// Streams dominant weights with casimir <= cutoff in (a) / (a,b) order.
template <class F>
void for_each_dominant(const RootSystem& rs, double cutoff, F&& f) {
  int64_t seen = 0;
  std::vector<int> c(rs.rank);
  if (rs.type == RootSystemType::A1) {
    for (int n = 0;; ++n) {
      double p = casimir_a1(n);
      if (p > cutoff) break;
      if (++seen > kWeightCap) throw DomainError("weight enumeration exceeds the resource cap");
      c[0] = n;
      f(c, (int64_t)(n + 1), p);
    }
    return;
  }
  for (int a = 0;; ++a) {
    if (casimir_a2(a, 0) > cutoff) break;
    for (int b = 0;; ++b) {
      double p = casimir_a2(a, b);
      if (p > cutoff) break;
      if (++seen > kWeightCap) throw DomainError("weight enumeration exceeds the resource cap");
      int64_t m = a + 1, n = b + 1;
      c[0] = a;
      c[1] = b;
      f(c, m * n * (m + n) / 2, p);
    }
  }
}

int64_t count_dominant(const RootSystem& rs, double cutoff) {
  int64_t n = 0;
  for_each_dominant(rs, cutoff, [&](const std::vector<int>&, int64_t, double) { ++n; });
  return n;
}

// Upper bound on the number of dominant weights with casimir <= x.
double weight_count_bound(const RootSystem& rs, double x) {
  if (rs.type == RootSystemType::A1) return std::sqrt(std::max(0.0, 2 * x + 1)) + 2;
  return (3 * kPi / 8) * (x + 2) + 2 * std::sqrt(1.5 * (x + 2)) + 1;
}

// Rigorous upper bound on sum over casimir(lambda) > X of d^{-sigma} e^{-t p}.
// Returns +inf when the bound machinery needs a larger X.
double tail_bound_sigma(const RootSystem& rs, double sigma, double t, double X) {
  const double inf = std::numeric_limits<double>::infinity();
  if (rs.type == RootSystemType::A1) {
    int n0 = (int)std::ceil(std::sqrt(2 * X + 1) - 1);
    while (n0 > 0 && casimir_a1(n0 - 1) > X) --n0;
    while (casimir_a1(n0) <= X) ++n0;
    auto f = [&](int n) { return std::pow(n + 1.0, -sigma) * std::exp(-t * casimir_a1(n)); };
    if (t == 0) {
      if (sigma <= 1) return inf;
      return f(n0) + std::pow(n0 + 1.0, 1 - sigma) / (sigma - 1);
    }
    double r = std::pow((n0 + 2.0) / (n0 + 1.0), -sigma) * std::exp(-t * (n0 + 1.5));
    if (r >= 1) return inf;
    return f(n0) / (1 - r);
  }
  const double A = 3 * kPi / 8, B = 2 * std::sqrt(1.5);
  if (t == 0) {
    if (sigma <= 1) return inf;
    double c = std::pow(4.0 / 3.0, sigma);
    double part = sigma * A * (std::pow(X, 1 - sigma) / (sigma - 1) + 2 * std::pow(X, -sigma) / sigma);
    part += sigma * B * std::sqrt(1 + 2 / X) * std::pow(X, 0.5 - sigma) / (sigma - 0.5);
    part += std::pow(X, -sigma);
    return c * part;
  }
  const double D = A + B / (2 * std::sqrt(2.0));  // per-unit weight-count increment
  double k0 = std::floor(X);
  double geo = std::exp(-t * k0) / -std::expm1(-t);
  if (sigma >= 0) return std::pow(4.0 / 3.0, sigma) * std::pow(X, -sigma) * D * geo;
  double m = -sigma;  // need d^{m} <= (sqrt(2)/4 (p+2)^{3/2})^{m}
  const double K = std::sqrt(2.0) / 4.0;
  double rho = std::pow((k0 + 4) / (k0 + 3), 1.5 * m) * std::exp(-t);
  if (rho >= 1) return inf;
  return D * std::pow(K, m) * std::pow(k0 + 3, 1.5 * m) * std::exp(-t * k0) / (1 - rho);
}

// Smallest power-of-two-scaled cutoff whose tail bound is below target.
double adaptive_cutoff(const RootSystem& rs, double sigma, double t, double const_bound,
                       double target) {
  if (target <= 0) throw UsageError("tolerance must be positive");
  double X = 64;
  while (const_bound * tail_bound_sigma(rs, sigma, t, X) > target) {
    X *= 2;
    if (weight_count_bound(rs, X) > (double)kWeightCap)
      throw DomainError("series cutoff exceeds the resource cap before reaching the tolerance");
  }
  return X;
}

std::string cutoff_label(double X) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "casimir<=%.6g", X);
  return buf;
}

// Sums term(coords, d, p) over casimir <= X; enforces a real result.
template <class Term>
SeriesResult sum_series(const RootSystem& rs, double X, double tail, Term&& term) {
  Cplx acc(0, 0);
  int64_t used = 0;
  for_each_dominant(rs, X, [&](const std::vector<int>& c, int64_t d, double p) {
    acc += term(c, d, p);
    ++used;
  });
  if (std::abs(acc.imag()) > 1e-9 * std::max(1.0, std::abs(acc.real())))
    throw ConsistencyError("series sum has a non-negligible imaginary part");
  SeriesResult r;
  r.value = acc.real();
  r.terms_used = used;
  r.tail_bound = tail;
  r.cutoff = cutoff_label(X);
  return r;
}

enum class PointClass { Identity, Central, Regular, Singular };

PointClass classify_point(const RootSystem& rs, const TorusPoint& x) {
  if (near_identity(rs, x)) return PointClass::Identity;
  if (is_central(rs, x)) return PointClass::Central;
  if (weyl_denominator_magnitude(rs, x) > kSingularTol) return PointClass::Regular;
  return PointClass::Singular;
}

// Character value usable inside series: handles identity and central points
// exactly; rejects non-central singular points.
Cplx character_value(const RootSystem& rs, const std::vector<int>& coords, const TorusPoint& x,
                     PointClass cls) {
  double d = (double)dim_closed(rs, coords);
  if (cls == PointClass::Identity) return Cplx(d, 0);
  auto phi = torus_phases(rs, x);
  if (cls == PointClass::Central) {
    double ph = dot(ambient_weight(rs, coords), phi);
    return d * Cplx(std::cos(ph), std::sin(ph));
  }
  if (cls == PointClass::Singular)
    throw DomainError("torus point is singular but not central");
  std::vector<double> lr = ambient_weight(rs, coords);
  for (int j = 0; j < rs.ambient; ++j) lr[j] += rs.weyl_vector[j];
  Cplx num(0, 0), den(0, 0);
  for (size_t w = 0; w < rs.weyl_perms.size(); ++w) {
    double s = rs.weyl_signs[w];
    double pn = dot(apply_perm(rs.weyl_perms[w], lr), phi);
    double pd = dot(apply_perm(rs.weyl_perms[w], rs.weyl_vector), phi);
    num += s * Cplx(std::cos(pn), std::sin(pn));
    den += s * Cplx(std::cos(pd), std::sin(pd));
  }
  return num / den;
}

// Per-point bound data for tails: |chi_lambda(x)| <= bound_const * d^{sigma_shift}.
struct CharBound {
  double bound_const = 1;
  double sigma_shift = 0;  // 1 at identity/central points (|chi| <= d)
};

CharBound char_bound(const RootSystem& rs, const TorusPoint& x, PointClass cls) {
  CharBound b;
  if (cls == PointClass::Identity || cls == PointClass::Central) {
    b.sigma_shift = 1;
    return b;
  }
  b.bound_const = (double)rs.weyl_perms.size() / weyl_denominator_magnitude(rs, x);
  return b;
}

double parse_real(const std::string& text) {
  size_t pos = 0;
  double v;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw UsageError("malformed real number '" + text + "'");
  }
  if (pos != text.size()) throw UsageError("malformed real number '" + text + "'");
  if (!std::isfinite(v)) throw UsageError("real number out of range '" + text + "'");
  return v;
}

// Chebyshev U_n(cos theta) row: SU(2) characters chi_0..chi_nmax at theta.
std::vector<double> a1_char_row(double theta, int nmax) {
  std::vector<double> u(nmax + 1);
  double c2 = 2 * std::cos(theta);
  u[0] = 1;
  if (nmax >= 1) u[1] = c2;
  for (int n = 2; n <= nmax; ++n) u[n] = c2 * u[n - 1] - u[n - 2];
  return u;
}

double simpson(const std::vector<double>& vals, double h) {
  // vals over an even number of intervals
  double s = vals.front() + vals.back();
  for (size_t i = 1; i + 1 < vals.size(); ++i) s += vals[i] * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

uint64_t splitmix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Quat {
  double w, x, y, z;
};

Quat qmul(const Quat& a, const Quat& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Quat qconj(const Quat& a) { return {a.w, -a.x, -a.y, -a.z}; }

struct HaarSampler {
  std::mt19937_64 eng;
  explicit HaarSampler(uint64_t seed) : eng(seed) {}

  double uniform01() {  // in (0, 1]
    return ((eng() >> 11) + 1) * (1.0 / 9007199254740992.0);
  }

  void normal_pair(double& z0, double& z1) {
    double u1 = uniform01(), u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    z0 = r * std::cos(2 * kPi * u2);
    z1 = r * std::sin(2 * kPi * u2);
  }

  Quat haar() {
    for (;;) {
      Quat q;
      normal_pair(q.w, q.x);
      normal_pair(q.y, q.z);
      double n = std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
      if (n > 1e-12) return {q.w / n, q.x / n, q.y / n, q.z / n};
    }
  }
};

double angle_of(const Quat& q) {
  return std::acos(std::clamp(q.w, -1.0, 1.0));
}

}  // namespace

RootSystemType parse_root_system(const std::string& tag) {
  if (tag == "A1") return RootSystemType::A1;
  if (tag == "A2") return RootSystemType::A2;
  throw UsageError("unknown root system '" + tag + "' (expected A1 or A2)");
}

RootSystem root_system(RootSystemType type) {
  RootSystem rs;
  rs.type = type;
  if (type == RootSystemType::A1) {
    rs.rank = 1;
    rs.ambient = 2;
    rs.positive_roots = {{1, -1}};
    rs.fundamental_weights = {{0.5, -0.5}};
    rs.weyl_vector = {0.5, -0.5};
    rs.weyl_perms = {{0, 1}, {1, 0}};
    rs.weyl_signs = {1, -1};
    rs.center_order = 2;
    rs.dim_group = 3;
    rs.torus_volume = 2 * std::sqrt(2.0) * kPi;
    rs.group_volume = 4 * std::sqrt(2.0) * kPi * kPi;
    return rs;
  }
  rs.rank = 2;
  rs.ambient = 3;
  rs.positive_roots = {{1, -1, 0}, {0, 1, -1}, {1, 0, -1}};
  rs.fundamental_weights = {{2.0 / 3, -1.0 / 3, -1.0 / 3}, {1.0 / 3, 1.0 / 3, -2.0 / 3}};
  rs.weyl_vector = {1, 0, -1};
  rs.weyl_perms = {{0, 1, 2}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}, {1, 2, 0}, {2, 0, 1}};
  rs.weyl_signs = {1, -1, -1, -1, 1, 1};
  rs.center_order = 3;
  rs.dim_group = 8;
  rs.torus_volume = 4 * kPi * kPi * std::sqrt(3.0);
  rs.group_volume = 16 * std::sqrt(3.0) * std::pow(kPi, 5);
  return rs;
}

double casimir_value(const RootSystem& rs, const std::vector<int>& coords) {
  check_coords(rs, coords);
  return casimir_closed(rs, coords);
}

int64_t weyl_dimension(const RootSystem& rs, const std::vector<int>& coords) {
  check_coords(rs, coords);
  std::vector<double> lr = ambient_weight(rs, coords);
  for (int j = 0; j < rs.ambient; ++j) lr[j] += rs.weyl_vector[j];
  double prod = 1;
  for (const auto& alpha : rs.positive_roots)
    prod *= dot(lr, alpha) / dot(rs.weyl_vector, alpha);
  double rounded = std::round(prod);
  if (std::abs(prod - rounded) > 1e-9)
    throw ConsistencyError("dimension formula residue exceeds 1e-9");
  return (int64_t)rounded;
}

std::vector<DominantWeight> dominant_weights(const RootSystem& rs, double casimir_cutoff) {
  std::vector<DominantWeight> out;
  for_each_dominant(rs, casimir_cutoff, [&](const std::vector<int>& c, int64_t d, double p) {
    out.push_back({c, d, p});
  });
  std::sort(out.begin(), out.end(), [](const DominantWeight& a, const DominantWeight& b) {
    if (a.casimir != b.casimir) return a.casimir < b.casimir;
    return a.coords < b.coords;
  });
  return out;
}

TorusPoint parse_torus_point(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw UsageError("torus point must look like A1:theta=<r> or A2:t1=<r>,t2=<r>");
  RootSystemType type = parse_root_system(text.substr(0, colon));
  std::string rest = text.substr(colon + 1);
  std::vector<std::pair<std::string, double>> kv;
  size_t pos = 0;
  while (pos <= rest.size()) {
    size_t comma = rest.find(',', pos);
    std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw UsageError("malformed torus point component '" + item + "'");
    kv.emplace_back(item.substr(0, eq), parse_real(item.substr(eq + 1)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  TorusPoint x;
  x.type = type;
  if (type == RootSystemType::A1) {
    if (kv.size() != 1 || kv[0].first != "theta")
      throw UsageError("A1 torus point must be A1:theta=<radians>");
    x.angles = {kv[0].second};
  } else {
    if (kv.size() != 2 || kv[0].first != "t1" || kv[1].first != "t2")
      throw UsageError("A2 torus point must be A2:t1=<radians>,t2=<radians>");
    x.angles = {kv[0].second, kv[1].second};
  }
  return x;
}

TorusPoint torus_inverse(const TorusPoint& x) {
  TorusPoint y = x;
  for (double& a : y.angles) a = -a;
  return y;
}

double weyl_denominator_magnitude(const RootSystem& rs, const TorusPoint& x) {
  auto phi = torus_phases(rs, x);
  Cplx den(0, 0);
  for (size_t w = 0; w < rs.weyl_perms.size(); ++w) {
    double ph = dot(apply_perm(rs.weyl_perms[w], rs.weyl_vector), phi);
    den += (double)rs.weyl_signs[w] * Cplx(std::cos(ph), std::sin(ph));
  }
  return std::abs(den);
}

bool near_identity(const RootSystem& rs, const TorusPoint& x, double tol) {
  auto phi = torus_phases(rs, x);
  for (double p : phi)
    if (std::abs(Cplx(std::cos(p), std::sin(p)) - Cplx(1, 0)) > tol) return false;
  return true;
}

bool is_central(const RootSystem& rs, const TorusPoint& x, double tol) {
  auto phi = torus_phases(rs, x);
  for (const auto& alpha : rs.positive_roots) {
    double p = dot(alpha, phi);
    if (std::abs(Cplx(std::cos(p), std::sin(p)) - Cplx(1, 0)) > tol) return false;
  }
  return true;
}

std::complex<double> weyl_character(const RootSystem& rs, const std::vector<int>& coords,
                                    const TorusPoint& x) {
  check_coords(rs, coords);
  if (near_identity(rs, x)) return Cplx((double)dim_closed(rs, coords), 0);
  if (weyl_denominator_magnitude(rs, x) <= kSingularTol)
    throw DomainError("torus point is singular and not within 1e-8 of the identity");
  return character_value(rs, coords, x, PointClass::Regular);
}

double orbit_jacobian_magnitude(const RootSystem& rs, const TorusPoint& x) {
  auto phi = torus_phases(rs, x);
  double m = 1;
  for (const auto& alpha : rs.positive_roots) {
    double p = dot(alpha, phi);
    m *= std::abs(Cplx(1, 0) - Cplx(std::cos(p), std::sin(p)));
  }
  return m;
}

int64_t zero_weight_multiplicity(const RootSystem& rs, const std::vector<int>& coords) {
  check_coords(rs, coords);
  if (rs.type == RootSystemType::A1) return coords[0] % 2 == 0 ? 1 : 0;
  // Kostant: m0 = sum over the Weyl group of det(w) P(w(lambda+rho) - rho),
  // with P the A2 partition count P(x a1 + y a2) = min(x,y)+1 for x,y >= 0.
  std::vector<double> lr = ambient_weight(rs, coords);
  for (int j = 0; j < rs.ambient; ++j) lr[j] += rs.weyl_vector[j];
  int64_t m0 = 0;
  for (size_t w = 0; w < rs.weyl_perms.size(); ++w) {
    auto v = apply_perm(rs.weyl_perms[w], lr);
    for (int j = 0; j < rs.ambient; ++j) v[j] -= rs.weyl_vector[j];
    double xd = v[0], yd = -v[2];
    double xr = std::round(xd), yr = std::round(yd);
    if (std::abs(xd - xr) > 1e-6 || std::abs(yd - yr) > 1e-6) continue;  // off lattice
    if (xr < 0 || yr < 0) continue;
    m0 += rs.weyl_signs[w] * (int64_t)(std::min(xr, yr) + 1);
  }
  if (m0 < 0) throw ConsistencyError("negative zero-weight multiplicity");
  return m0;
}

SeriesResult witten_zeta_partial(const RootSystem& rs, double s, double tolerance,
                                 int64_t max_terms) {
  if (tolerance <= 0) throw UsageError("tolerance must be positive");
  if (max_terms < 0) throw UsageError("max_terms must be nonnegative");
  if (rs.type == RootSystemType::A1) {
    if (s < 2) throw DomainError("series requires s >= 2 for A1");
    // Euler-Maclaurin corrected partial sum of sum_{k>=1} k^{-s}.
    auto em_bound = [&](double N) { return s * (s + 1) * (s + 2) * std::pow(N, -s - 3) / 720.0; };
    int64_t N = max_terms > 0 ? max_terms : 64;
    if (max_terms == 0) {
      while (em_bound((double)N) > tolerance && N < 1000000) N *= 2;
    }
    double partial = 0, comp = 0;  // compensated summation
    for (int64_t k = 1; k <= N; ++k) {
      double y = std::pow((double)k, -s) - comp;
      double t2 = partial + y;
      comp = (t2 - partial) - y;
      partial = t2;
    }
    double Nd = (double)N;
    double value = partial + std::pow(Nd, 1 - s) / (s - 1) - std::pow(Nd, -s) / 2 +
                   s * std::pow(Nd, -s - 1) / 12;
    SeriesResult r;
    r.value = value;
    r.terms_used = N;
    // analytic remainder plus a floating-point accumulation allowance
    r.tail_bound = em_bound(Nd) + 8 * std::numeric_limits<double>::epsilon() * (1 + value);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "terms=%lld", (long long)N);
    r.cutoff = buf;
    return r;
  }
  if (s < 1.2) throw DomainError("series requires s >= 1.2 for A2");
  double X;
  if (max_terms > 0) {
    X = std::max(8.0, (double)max_terms / 0.9);
    while (count_dominant(rs, X) > max_terms) X *= 0.9;
  } else {
    X = adaptive_cutoff(rs, s, 0.0, 1.0, tolerance);
  }
  double tail = tail_bound_sigma(rs, s, 0.0, X);
  double acc = 0;
  int64_t used = 0;
  for_each_dominant(rs, X, [&](const std::vector<int>&, int64_t d, double) {
    acc += std::pow((double)d, -s);
    ++used;
  });
  SeriesResult r;
  r.value = acc;
  r.terms_used = used;
  r.tail_bound = tail;
  r.cutoff = cutoff_label(X);
  return r;
}

double witten_zeta_raw_partial(const RootSystem& rs, double s, int64_t max_terms) {
  if (max_terms <= 0) throw UsageError("max_terms must be positive");
  if (s <= 1) throw DomainError("raw partial sums require s > 1");
  if (rs.type == RootSystemType::A1) {
    double acc = 0;
    for (int64_t k = 1; k <= max_terms; ++k) acc += std::pow((double)k, -s);
    return acc;
  }
  double X = 8;
  while (count_dominant(rs, X) < max_terms) {
    X *= 2;
    if (weight_count_bound(rs, X) > 4.0 * (double)kWeightCap)
      throw DomainError("weight enumeration exceeds the resource cap");
  }
  auto ws = dominant_weights(rs, X);
  double acc = 0;
  for (int64_t i = 0; i < max_terms && i < (int64_t)ws.size(); ++i)
    acc += std::pow((double)ws[i].dim, -s);
  return acc;
}

ModuliVolume moduli_volume_series(const RootSystem& rs, int genus,
                                  const std::vector<TorusPoint>& marked, double t,
                                  double tolerance) {
  if (genus < 2) throw UsageError("genus must be at least 2");
  if (t < 0) throw UsageError("t must be nonnegative");
  if (tolerance <= 0) throw UsageError("tolerance must be positive");
  int n = (int)marked.size();
  double s = 2 * genus + n - 2;

  double sigma = s, const_bound = 1, prefactor_points = 1;
  bool central = false;
  std::vector<PointClass> cls(marked.size());
  for (size_t j = 0; j < marked.size(); ++j) {
    cls[j] = classify_point(rs, marked[j]);
    if (cls[j] == PointClass::Singular)
      throw DomainError("marked point is singular but not central");
    CharBound b = char_bound(rs, marked[j], cls[j]);
    sigma -= b.sigma_shift;
    const_bound *= b.bound_const;
    if (cls[j] == PointClass::Identity || cls[j] == PointClass::Central) {
      central = true;
      // centralizer is the whole group; j(c) = 0 kills the prefactor
      prefactor_points *= orbit_jacobian_magnitude(rs, marked[j]) * rs.group_volume /
                          rs.group_volume;
    } else {
      prefactor_points *= orbit_jacobian_magnitude(rs, marked[j]) * rs.group_volume /
                          rs.torus_volume;
    }
  }
  double min_sigma = rs.type == RootSystemType::A1 ? 2.0 : 1.2;
  if (t == 0 && sigma < min_sigma)
    throw DomainError("series diverges at t = 0 for this genus and marked-point data");

  double X = adaptive_cutoff(rs, sigma, t, const_bound, tolerance / 2);
  double tail = const_bound * tail_bound_sigma(rs, sigma, t, X);
  SeriesResult series = sum_series(rs, X, tail, [&](const std::vector<int>& c, int64_t d,
                                                    double p) {
    Cplx term = std::exp(-t * p) / std::pow((double)d, s);
    for (size_t j = 0; j < marked.size(); ++j) term *= character_value(rs, c, marked[j], cls[j]);
    return term;
  });

  ModuliVolume mv;
  mv.series = series;
  mv.complex_dim = (genus - 1) * rs.dim_group + n * (double)rs.positive_roots.size();
  mv.central_marked_point = central;
  mv.prefactor = rs.center_order * std::pow(rs.group_volume, 2 * genus - 2) * prefactor_points /
                 std::pow(2 * kPi, 2 * mv.complex_dim);
  mv.volume = mv.prefactor * series.value;
  return mv;
}

SeriesResult commutator_density(const RootSystem& rs, const TorusPoint& x, int genus, double t,
                                double tolerance) {
  if (genus < 1) throw UsageError("genus must be at least 1");
  if (t < 0) throw UsageError("t must be nonnegative");
  if (t == 0 && genus == 1)
    throw DomainError("the genus-1 series at t = 0 is only conditionally convergent; use t > 0");
  PointClass cls = classify_point(rs, x);
  if (cls == PointClass::Singular) throw DomainError("torus point is singular but not central");
  CharBound b = char_bound(rs, x, cls);
  double sigma = (2 * genus - 1) - b.sigma_shift;
  double min_sigma = rs.type == RootSystemType::A1 ? 2.0 : 1.2;
  if (t == 0 && sigma < min_sigma)
    throw DomainError("series diverges at t = 0 for this genus and point");
  TorusPoint xi = torus_inverse(x);
  double X = adaptive_cutoff(rs, sigma, t, b.bound_const, tolerance / 2);
  double tail = b.bound_const * tail_bound_sigma(rs, sigma, t, X);
  return sum_series(rs, X, tail, [&](const std::vector<int>& c, int64_t d, double p) {
    return character_value(rs, c, xi, cls) * std::exp(-t * p) /
           std::pow((double)d, 2.0 * genus - 1);
  });
}

SlotKind parse_slot(const std::string& tag) {
  if (tag == "torus") return SlotKind::Torus;
  if (tag == "full" || tag == "full-group") return SlotKind::FullGroup;
  if (tag == "trivial") return SlotKind::Trivial;
  throw UsageError("unknown subgroup slot '" + tag + "' (expected torus, full, or trivial)");
}

SeriesResult subgroup_pushforward_density(const RootSystem& rs,
                                          const std::vector<SlotKind>& slots,
                                          const TorusPoint& x, double t, double tolerance) {
  if (slots.empty()) throw UsageError("at least one subgroup slot is required");
  if (t < 0) throw UsageError("t must be nonnegative");
  if (tolerance <= 0) throw UsageError("tolerance must be positive");
  int n = (int)slots.size();
  PointClass cls = classify_point(rs, x);
  if (cls == PointClass::Singular) throw DomainError("torus point is singular but not central");

  bool has_full = false;
  int trivial_slots = 0, torus_slots = 0;
  for (SlotKind k : slots) {
    if (k == SlotKind::FullGroup) has_full = true;
    if (k == SlotKind::Trivial) ++trivial_slots;
    if (k == SlotKind::Torus) ++torus_slots;
  }
  if (has_full) {
    // only the trivial irrep survives: the density is identically 1
    SeriesResult r;
    r.value = 1;
    r.terms_used = 1;
    r.tail_bound = 0;
    r.cutoff = "exact";
    return r;
  }

  CharBound b = char_bound(rs, x, cls);
  double sigma = (n - 1) - trivial_slots - b.sigma_shift;
  if (rs.type == RootSystemType::A2) sigma -= 0.5 * torus_slots;  // m0 <= sqrt(d)
  double min_sigma = rs.type == RootSystemType::A1 ? 2.0 : 1.2;
  if (t == 0 && sigma < min_sigma)
    throw DomainError("series diverges at t = 0 for these slots; use t > 0");
  TorusPoint xi = torus_inverse(x);
  double X = adaptive_cutoff(rs, sigma, t, b.bound_const, tolerance / 2);
  double tail = b.bound_const * tail_bound_sigma(rs, sigma, t, X);
  return sum_series(rs, X, tail, [&](const std::vector<int>& c, int64_t d, double p) {
    double factors = 1;
    for (SlotKind k : slots) {
      if (k == SlotKind::Torus) factors *= (double)zero_weight_multiplicity(rs, c);
      else factors *= (double)d;  // trivial subgroup
      if (factors == 0) break;
    }
    if (factors == 0) return Cplx(0, 0);
    return factors * character_value(rs, c, xi, cls) * std::exp(-t * p) /
           std::pow((double)d, n - 1.0);
  });
}

double lie_n_commutator_density(const RootSystem& rs, int n, const TorusPoint& x, double t,
                                int quadrature_points, double tolerance) {
  if (rs.type != RootSystemType::A1)
    throw UsageError("iterated-commutator densities are implemented for A1 only");
  if (n != 2 && n != 3) throw UsageError("n must be 2 or 3");
  if (t <= 0) throw DomainError("the iterated-commutator series requires t > 0");
  if (quadrature_points < 200) throw UsageError("at least 200 quadrature points are required");
  if (tolerance <= 0) throw UsageError("tolerance must be positive");
  if (x.type != RootSystemType::A1 || x.angles.size() != 1)
    throw UsageError("torus point must be an A1 point");

  // |Q_{n-1}| peaks at the identity where it equals sum e^{-t p}; by character
  // orthonormality under the Weyl measure |b_lambda| <= that sup, and
  // |chi(x)| <= d, so sigma = 0 covers the tail with this constant.
  double sup_q = 0;
  for (int j = 0;; ++j) {
    double term = std::exp(-t * casimir_a1(j));
    sup_q += term;
    if (term < 1e-16 * sup_q) break;
  }
  double target = tolerance / (8 * (1 + sup_q));
  double X = adaptive_cutoff(rs, 0.0, t, n == 3 ? sup_q : 1.0, target);
  int nmax = 0;
  while (casimir_a1(nmax + 1) <= X) ++nmax;

  double theta_x = x.angles[0];
  auto eval = [&](int intervals) {
    int m = intervals % 2 ? intervals + 1 : intervals;
    double h = kPi / m;
    // Q_{n-1} at the quadrature nodes: 1 for n = 2, else the genus-1 series.
    std::vector<double> qprev(m + 1, 1.0);
    if (n == 3) {
      for (int k = 0; k <= m; ++k) {
        auto row = a1_char_row(k * h, nmax);
        double acc = 0;
        for (int j = 0; j <= nmax; ++j)
          acc += std::exp(-t * casimir_a1(j)) * row[j] / (j + 1.0);
        qprev[k] = acc;
      }
    }
    // b_j = (2/pi) int chi_j^2 Q_{n-1} sin^2, then the damped outer series.
    std::vector<std::vector<double>> rows(m + 1);
    for (int k = 0; k <= m; ++k) rows[k] = a1_char_row(k * h, nmax);
    auto xrow = a1_char_row(theta_x, nmax);
    double out = 0;
    for (int j = 0; j <= nmax; ++j) {
      std::vector<double> vals(m + 1);
      for (int k = 0; k <= m; ++k) {
        double s = std::sin(k * h);
        vals[k] = rows[k][j] * rows[k][j] * qprev[k] * s * s;
      }
      double bj = (2 / kPi) * simpson(vals, h);
      out += std::exp(-t * casimir_a1(j)) * xrow[j] * bj / (j + 1.0);
    }
    return out;
  };

  double coarse = eval(quadrature_points);
  double fine = eval(2 * quadrature_points);
  if (std::abs(coarse - fine) > tolerance)
    throw ConsistencyError("quadrature refinement changed the result beyond the tolerance");
  return fine;
}

VanishingSequence vanishing_limit(const RootSystem& rs, const TorusPoint& c,
                                  const std::vector<double>& times, double tolerance) {
  if (times.empty()) throw UsageError("at least one time is required");
  for (size_t i = 0; i < times.size(); ++i) {
    if (times[i] <= 0) throw UsageError("all times must be positive");
    if (i > 0 && times[i] >= times[i - 1]) throw UsageError("times must be strictly decreasing");
  }
  PointClass cls = classify_point(rs, c);
  if (cls == PointClass::Singular) throw DomainError("torus point is singular but not central");
  CharBound b = char_bound(rs, c, cls);
  double sigma = -1 - b.sigma_shift;  // terms are d * chi * e^{-tp}
  VanishingSequence seq;
  seq.at_identity = cls == PointClass::Identity;
  for (double t : times) {
    double X = adaptive_cutoff(rs, sigma, t, b.bound_const, tolerance / 2);
    double tail = b.bound_const * tail_bound_sigma(rs, sigma, t, X);
    seq.values.push_back(sum_series(rs, X, tail, [&](const std::vector<int>& cc, int64_t d,
                                                     double p) {
      return (double)d * character_value(rs, cc, c, cls) * std::exp(-t * p);
    }));
  }
  return seq;
}

Histogram mc_commutator_histogram(uint64_t seed, int64_t samples, int bins, int threads,
                                  bool identity_map) {
  if (samples < 10000) throw UsageError("at least 10000 samples are required");
  if (bins < 1) throw UsageError("at least one bin is required");
  if (threads < 1) throw UsageError("thread count must be positive");

  constexpr int kShards = 64;
  std::vector<std::vector<int64_t>> local(kShards, std::vector<int64_t>(bins, 0));
  auto run_shard = [&](int i) {
    int64_t count = samples / kShards + (i < samples % kShards ? 1 : 0);
    HaarSampler sampler(splitmix64(seed + (uint64_t)(i + 1) * 0x9e3779b97f4a7c15ULL));
    for (int64_t k = 0; k < count; ++k) {
      double theta;
      if (identity_map) {
        theta = angle_of(sampler.haar());
      } else {
        Quat a = sampler.haar(), bq = sampler.haar();
        theta = angle_of(qmul(qmul(a, bq), qmul(qconj(a), qconj(bq))));
      }
      int bin = std::min(bins - 1, (int)(theta / kPi * bins));
      local[i][std::max(0, bin)]++;
    }
  };

  int workers = std::min(threads, kShards);
  if (workers == 1) {
    for (int i = 0; i < kShards; ++i) run_shard(i);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int i = w; i < kShards; i += workers) run_shard(i);
      });
    for (auto& th : pool) th.join();
  }

  Histogram h;
  h.counts.assign(bins, 0);
  for (int i = 0; i < kShards; ++i)
    for (int b = 0; b < bins; ++b) h.counts[b] += local[i][b];
  h.samples = samples;
  h.seed = seed;
  return h;
}

std::vector<double> a1_commutator_bin_masses(int bins, double t, double tolerance) {
  if (bins < 1) throw UsageError("at least one bin is required");
  RootSystem rs = root_system(RootSystemType::A1);
  std::vector<double> masses(bins, 0.0);
  const int kIntervals = 16;
  for (int b = 0; b < bins; ++b) {
    double a = kPi * b / bins, c = kPi * (b + 1) / bins;
    double h = (c - a) / kIntervals;
    std::vector<double> vals(kIntervals + 1);
    for (int k = 0; k <= kIntervals; ++k) {
      double theta = a + k * h;
      TorusPoint x{RootSystemType::A1, {theta}};
      double rho = commutator_density(rs, x, 1, t, tolerance).value;
      double s = std::sin(theta);
      vals[k] = rho * (2 / kPi) * s * s;
    }
    masses[b] = simpson(vals, h);
  }
  return masses;
}

std::vector<double> weyl_measure_bin_masses(int bins) {
  if (bins < 1) throw UsageError("at least one bin is required");
  auto F = [](double x) { return (x - std::sin(x) * std::cos(x)) / kPi; };
  std::vector<double> masses(bins);
  for (int b = 0; b < bins; ++b)
    masses[b] = F(kPi * (b + 1) / bins) - F(kPi * b / bins);
  return masses;
}

}  // namespace heatcount
