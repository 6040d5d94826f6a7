#include "heatcount/characters.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "heatcount/errors.hpp"

namespace heatcount {

namespace {

constexpr double kEigCollisionTol = 1e-8;
constexpr double kOrthTol = 1e-9;
constexpr double kRoundTol = 1e-6;

// Class multiplication structure constants a[i][j][m] =
// #{(x,y) in C_i x C_j : x*y = rep_m}. One pass over G per class m.
std::vector<std::vector<std::vector<double>>> structure_constants(const FiniteGroup& g) {
  int k = g.class_count();
  std::vector invs(static_cast<size_t>(g.order()), Element{0});
  for (Element x = 0; x < g.order(); ++x) invs[x] = g.inverse(x);
  std::vector a(k, std::vector(k, std::vector<double>(k, 0.0)));
  for (int m = 0; m < k; ++m) {
    Element zm = g.classes()[m].representative;
    for (Element x = 0; x < g.order(); ++x) {
      Element y = g.multiply(invs[x], zm);
      a[g.class_of(x)][g.class_of(y)][m] += 1.0;
    }
  }
  return a;
}

double round_residue(double v) { return std::abs(v - std::round(v)); }

struct RawRow {
  int64_t dim;
  std::vector<Complex> values;
};

bool extract_rows(const FiniteGroup& g,
                  const std::vector<std::vector<std::vector<double>>>& a, uint64_t seed,
                  std::vector<RawRow>& out) {
  int k = g.class_count();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    double r = unif(rng);
    for (int j = 0; j < k; ++j)
      for (int c = 0; c < k; ++c) m(j, c) += r * a[i][j][c];
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) return false;
  Eigen::VectorXcd eig = solver.eigenvalues();
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (std::abs(eig(i) - eig(j)) < kEigCollisionTol) return false;

  out.clear();
  for (int col = 0; col < k; ++col) {
    Eigen::VectorXcd v = solver.eigenvectors().col(col);
    if (std::abs(v(0)) < 1e-12 * v.norm()) return false;
    // v(0) belongs to the class of the identity, where every central
    // character equals 1; rescaling pins the normalization.
    Eigen::VectorXcd u = v / v(0);
    double inv_norm = 0.0;
    for (int c = 0; c < k; ++c) inv_norm += std::norm(u(c)) / g.classes()[c].size();
    double d_raw = std::sqrt(static_cast<double>(g.order()) / inv_norm);
    if (round_residue(d_raw) > kRoundTol || d_raw < 0.5) return false;
    RawRow row;
    row.dim = static_cast<int64_t>(std::llround(d_raw));
    row.values.resize(k);
    for (int c = 0; c < k; ++c)
      row.values[c] = static_cast<double>(row.dim) * u(c) / static_cast<double>(g.classes()[c].size());
    row.values[0] = static_cast<double>(row.dim);
    out.push_back(std::move(row));
  }
  return true;
}

// Deterministic row order: dimension first, then lexicographic comparison of
// values rounded to 1e-6.
bool row_less(const RawRow& x, const RawRow& y) {
  if (x.dim != y.dim) return x.dim < y.dim;
  for (size_t c = 0; c < x.values.size(); ++c) {
    auto key = [](const Complex& z) {
      return std::pair(std::round(z.real() * 1e6), std::round(z.imag() * 1e6));
    };
    auto kx = key(x.values[c]), ky = key(y.values[c]);
    if (kx != ky) return kx < ky;
  }
  return false;
}

}  // namespace

int CharacterTable::trivial_index() const {
  for (int i = 0; i < irrep_count(); ++i) {
    if (irreps[i].dim != 1) continue;
    bool all_one = true;
    for (const Complex& v : irreps[i].values)
      if (std::abs(v - 1.0) > kRoundTol) all_one = false;
    if (all_one) return i;
  }
  throw ConsistencyError("character table has no trivial row");
}

void certify_character_table(const CharacterTable& t) {
  const FiniteGroup& g = t.group;
  int k = g.class_count();
  if (t.irrep_count() != k)
    throw ConsistencyError("irrep count differs from class count");
  int64_t dim_sq = 0;
  for (const Irrep& r : t.irreps) {
    if (static_cast<int>(r.values.size()) != k)
      throw ConsistencyError("character row has wrong length");
    if (r.dim < 1 || std::abs(r.values[0] - static_cast<double>(r.dim)) > kRoundTol)
      throw ConsistencyError("character at the identity does not equal the dimension");
    dim_sq += r.dim * r.dim;
  }
  if (dim_sq != g.order())
    throw ConsistencyError("sum of squared dimensions does not equal the group order");

  for (int x = 0; x < k; ++x) {
    for (int y = 0; y < k; ++y) {
      Complex s = 0.0;
      for (int c = 0; c < k; ++c)
        s += static_cast<double>(g.classes()[c].size()) * t.value(x, c) * std::conj(t.value(y, c));
      s /= static_cast<double>(g.order());
      if (std::abs(s - (x == y ? 1.0 : 0.0)) > kOrthTol)
        throw ConsistencyError("row orthogonality failed");
    }
  }
  for (int c = 0; c < k; ++c) {
    for (int c2 = 0; c2 < k; ++c2) {
      Complex s = 0.0;
      for (int l = 0; l < k; ++l) s += t.value(l, c) * std::conj(t.value(l, c2));
      double want = (c == c2) ? static_cast<double>(g.classes()[c].centralizer_order) : 0.0;
      if (std::abs(s - want) > kOrthTol * static_cast<double>(g.order()))
        throw ConsistencyError("column orthogonality failed");
    }
  }
}

CharacterTable character_table(const FiniteGroup& g, int attempts) {
  int k = g.class_count();
  if (k > 512) throw DomainError("class count exceeds the character solver cap (512)");
  auto a = structure_constants(g);
  std::vector<RawRow> rows;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (!extract_rows(g, a, 0x9e3779b97f4a7c15ull + static_cast<uint64_t>(attempt), rows))
      continue;
    std::sort(rows.begin(), rows.end(), row_less);
    CharacterTable t;
    t.group = g;
    for (size_t i = 0; i < rows.size(); ++i)
      t.irreps.push_back({"X" + std::to_string(i), rows[i].dim, std::move(rows[i].values)});
    // Snap the trivial row (always present, always exactly one) to exact 1s.
    for (Irrep& r : t.irreps) {
      if (r.dim != 1) continue;
      bool all_one = true;
      for (const Complex& v : r.values)
        if (std::abs(v - 1.0) > kRoundTol) all_one = false;
      if (all_one) {
        std::fill(r.values.begin(), r.values.end(), Complex(1.0));
        break;
      }
    }
    try {
      certify_character_table(t);
    } catch (const ConsistencyError&) {
      continue;
    }
    return t;
  }
  throw ConsistencyError("character table eigenspace splitting failed after retries");
}

int frobenius_schur(const CharacterTable& t, int irrep) {
  const FiniteGroup& g = t.group;
  Complex s = 0.0;
  for (int c = 0; c < g.class_count(); ++c)
    s += static_cast<double>(g.classes()[c].size()) * t.value(irrep, g.square_class(c));
  s /= static_cast<double>(g.order());
  if (std::abs(s.imag()) > kRoundTol || round_residue(s.real()) > kRoundTol)
    throw ConsistencyError("frobenius-schur indicator is not an integer");
  int64_t v = std::llround(s.real());
  if (v < -1 || v > 1)
    throw ConsistencyError("frobenius-schur indicator outside {-1,0,1}");
  return static_cast<int>(v);
}

std::vector<int64_t> tensor_decompose(const CharacterTable& t, int mu, int lambda) {
  const FiniteGroup& g = t.group;
  int k = g.class_count();
  std::vector<int64_t> mult(k, 0);
  for (int nu = 0; nu < k; ++nu) {
    Complex s = 0.0;
    for (int c = 0; c < k; ++c)
      s += static_cast<double>(g.classes()[c].size()) * t.value(mu, c) * t.value(lambda, c) *
           std::conj(t.value(nu, c));
    s /= static_cast<double>(g.order());
    if (std::abs(s.imag()) > kRoundTol || round_residue(s.real()) > kRoundTol)
      throw ConsistencyError("tensor multiplicity is not an integer");
    int64_t v = std::llround(s.real());
    if (v < 0) throw ConsistencyError("negative tensor multiplicity");
    mult[nu] = v;
  }
  int64_t total = 0;
  for (int nu = 0; nu < k; ++nu) total += mult[nu] * t.irreps[nu].dim;
  if (total != t.irreps[mu].dim * t.irreps[lambda].dim)
    throw ConsistencyError("tensor decomposition does not preserve dimension");
  return mult;
}

Complex subgroup_character_sum(const CharacterTable& t, const Subgroup& h, int irrep) {
  Complex s = 0.0;
  for (Element z : h.members) s += t.value(irrep, t.group.class_of(z));
  return s;
}

namespace {

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::string character_table_to_csv(const CharacterTable& t) {
  std::ostringstream out;
  out << "classes";
  for (const ConjugacyClass& c : t.group.classes())
    out << "," << c.representative << ":" << c.size();
  out << "\n";
  for (const Irrep& r : t.irreps) {
    out << r.label << "," << r.dim;
    for (const Complex& v : r.values)
      out << "," << fmt_real(v.real()) << ":" << fmt_real(v.imag());
    out << "\n";
  }
  return out.str();
}

void write_character_table_csv(const CharacterTable& t, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw DomainError("cannot open '" + path + "' for writing");
  f << character_table_to_csv(t);
}

CharacterTable character_table_from_csv(const FiniteGroup& g, const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw UsageError("empty character CSV");
  {
    std::istringstream hdr(line);
    std::string tok;
    if (!std::getline(hdr, tok, ',') || tok != "classes")
      throw UsageError("character CSV must start with a 'classes' header");
    int c = 0;
    while (std::getline(hdr, tok, ',')) {
      size_t colon = tok.find(':');
      if (colon == std::string::npos) throw UsageError("malformed class header entry");
      if (c >= g.class_count()) throw UsageError("class header longer than class count");
      long rep = std::stol(tok.substr(0, colon));
      long size = std::stol(tok.substr(colon + 1));
      if (rep != g.classes()[c].representative || size != g.classes()[c].size())
        throw UsageError("class header does not match the group's classes");
      c++;
    }
    if (c != g.class_count()) throw UsageError("class header shorter than class count");
  }
  CharacterTable t;
  t.group = g;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string tok;
    Irrep r;
    if (!std::getline(row, tok, ',')) throw UsageError("malformed character row");
    r.label = tok;
    if (!std::getline(row, tok, ',')) throw UsageError("character row missing dimension");
    r.dim = std::stoll(tok);
    while (std::getline(row, tok, ',')) {
      size_t colon = tok.find(':');
      if (colon == std::string::npos) throw UsageError("malformed character value");
      r.values.emplace_back(std::stod(tok.substr(0, colon)), std::stod(tok.substr(colon + 1)));
    }
    t.irreps.push_back(std::move(r));
  }
  certify_character_table(t);
  return t;
}

CharacterTable read_character_table_csv(const FiniteGroup& g, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return character_table_from_csv(g, buf.str());
}

}  // namespace heatcount
