#include "heatcount/group.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <mutex>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "heatcount/errors.hpp"

namespace heatcount {
namespace detail {

class GroupBackend {
 public:
  virtual ~GroupBackend() = default;
  virtual int64_t order() const = 0;
  virtual Element mul(Element a, Element b) const = 0;
  virtual Element inv(Element a) const = 0;
  virtual const Element* dense_table() const { return nullptr; }
};

namespace {

class DenseBackend : public GroupBackend {
 public:
  DenseBackend(int64_t n, std::vector<Element> table) : n_(n), table_(std::move(table)) {
    invs_.assign(n_, -1);
    for (Element a = 0; a < n_; ++a) {
      for (Element b = 0; b < n_; ++b) {
        if (table_[static_cast<size_t>(a) * n_ + b] == 0) {
          invs_[a] = b;
          break;
        }
      }
      if (invs_[a] < 0) throw ConsistencyError("element without inverse in multiplication table");
    }
  }
  int64_t order() const override { return n_; }
  Element mul(Element a, Element b) const override {
    return table_[static_cast<size_t>(a) * n_ + b];
  }
  Element inv(Element a) const override { return invs_[a]; }
  const Element* dense_table() const override { return table_.data(); }

 private:
  int64_t n_;
  std::vector<Element> table_;
  std::vector<Element> invs_;
};

class CyclicBackend : public GroupBackend {
 public:
  explicit CyclicBackend(int64_t n) : n_(n) {}
  int64_t order() const override { return n_; }
  Element mul(Element a, Element b) const override {
    int64_t s = static_cast<int64_t>(a) + b;
    if (s >= n_) s -= n_;
    return static_cast<Element>(s);
  }
  Element inv(Element a) const override { return a == 0 ? 0 : static_cast<Element>(n_ - a); }

 private:
  int64_t n_;
};

// Elements r^a s^b encoded as a + n*b with s r s^-1 = r^-1.
class DihedralBackend : public GroupBackend {
 public:
  explicit DihedralBackend(int64_t n) : n_(n) {}
  int64_t order() const override { return 2 * n_; }
  Element mul(Element x, Element y) const override {
    int64_t a1 = x % n_, b1 = x / n_, a2 = y % n_, b2 = y / n_;
    int64_t a = b1 ? (a1 - a2 + n_) % n_ : (a1 + a2) % n_;
    return static_cast<Element>(a + n_ * ((b1 + b2) & 1));
  }
  Element inv(Element x) const override {
    int64_t a = x % n_, b = x / n_;
    if (b) return x;  // reflections are involutions
    return a == 0 ? 0 : static_cast<Element>(n_ - a);
  }

 private:
  int64_t n_;
};

using Perm = std::vector<uint16_t>;

std::string perm_key(const Perm& p) {
  return std::string(reinterpret_cast<const char*>(p.data()), p.size() * sizeof(uint16_t));
}

Perm compose(const Perm& p, const Perm& q) {  // (p*q)(i) = p(q(i))
  Perm r(p.size());
  for (size_t i = 0; i < p.size(); ++i) r[i] = p[q[i]];
  return r;
}

// Enumerates the closure of `gens` by breadth-first right multiplication,
// identity first. Deterministic element order.
struct PermEnumeration {
  std::vector<Perm> elements;
  std::unordered_map<std::string, Element> index;
};

PermEnumeration enumerate_perm_group(int points, const std::vector<Perm>& gens, int64_t max_order) {
  PermEnumeration e;
  Perm id(points);
  std::iota(id.begin(), id.end(), 0);
  e.elements.push_back(id);
  e.index.emplace(perm_key(id), 0);
  std::queue<Element> pending;
  pending.push(0);
  while (!pending.empty()) {
    Element cur = pending.front();
    pending.pop();
    for (const Perm& g : gens) {
      Perm next = compose(e.elements[cur], g);
      std::string key = perm_key(next);
      auto [it, inserted] = e.index.emplace(std::move(key), static_cast<Element>(e.elements.size()));
      if (inserted) {
        if (static_cast<int64_t>(e.elements.size()) >= max_order)
          throw DomainError("group order exceeds configured resource cap");
        e.elements.push_back(std::move(next));
        pending.push(it->second);
      }
    }
  }
  return e;
}

class PermBackend : public GroupBackend {
 public:
  explicit PermBackend(PermEnumeration e)
      : elements_(std::move(e.elements)), index_(std::move(e.index)) {
    n_ = static_cast<int64_t>(elements_.size());
    invs_.resize(n_);
    for (Element a = 0; a < n_; ++a) {
      const Perm& p = elements_[a];
      Perm q(p.size());
      for (size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<uint16_t>(i);
      invs_[a] = index_.at(perm_key(q));
    }
    rows_ = std::vector<std::atomic<Element*>>(n_);
    for (auto& r : rows_) r.store(nullptr, std::memory_order_relaxed);
  }
  ~PermBackend() override {
    for (auto& r : rows_) delete[] r.load(std::memory_order_relaxed);
  }

  int64_t order() const override { return n_; }

  Element mul(Element a, Element b) const override {
    Element* row = rows_[a].load(std::memory_order_acquire);
    if (!row) row = try_alloc_row(a);
    if (row) {
      std::atomic_ref<Element> cell(row[b]);
      Element v = cell.load(std::memory_order_relaxed);
      if (v >= 0) return v;
      v = lookup(a, b);
      cell.store(v, std::memory_order_relaxed);
      return v;
    }
    return lookup(a, b);
  }

  Element inv(Element a) const override { return invs_[a]; }

 private:
  Element lookup(Element a, Element b) const {
    return index_.at(perm_key(compose(elements_[a], elements_[b])));
  }

  Element* try_alloc_row(Element a) const {
    std::lock_guard<std::mutex> lock(row_mutex_);
    Element* row = rows_[a].load(std::memory_order_relaxed);
    if (row) return row;
    if (memo_budget_ < n_) return nullptr;
    memo_budget_ -= n_;
    row = new Element[n_];
    std::fill(row, row + n_, -1);
    rows_[a].store(row, std::memory_order_release);
    return row;
  }

  int64_t n_;
  std::vector<Perm> elements_;
  std::unordered_map<std::string, Element> index_;
  std::vector<Element> invs_;
  mutable std::vector<std::atomic<Element*>> rows_;
  mutable std::mutex row_mutex_;
  mutable int64_t memo_budget_ = 16'000'000;
};

std::shared_ptr<const GroupBackend> densify_if_small(std::shared_ptr<const GroupBackend> b) {
  int64_t n = b->order();
  if (n > 4096 || b->dense_table()) return b;
  std::vector<Element> table(static_cast<size_t>(n) * n);
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y) table[static_cast<size_t>(x) * n + y] = b->mul(x, y);
  return std::make_shared<DenseBackend>(n, std::move(table));
}

}  // namespace
}  // namespace detail

Element FiniteGroup::multiply(Element a, Element b) const { return backend_->mul(a, b); }
Element FiniteGroup::inverse(Element a) const { return backend_->inv(a); }
const Element* FiniteGroup::dense_table() const { return backend_->dense_table(); }

FiniteGroup make_group(std::shared_ptr<const detail::GroupBackend> backend,
                       std::string description, std::vector<Element> canonical_gens) {
  backend = detail::densify_if_small(std::move(backend));
  FiniteGroup g;
  g.backend_ = backend;
  g.order_ = backend->order();
  g.description_ = std::move(description);

  std::sort(canonical_gens.begin(), canonical_gens.end());
  canonical_gens.erase(std::unique(canonical_gens.begin(), canonical_gens.end()),
                       canonical_gens.end());
  g.canonical_gens_ = std::move(canonical_gens);

  int64_t n = g.order_;
  std::vector<Element> invs(n);
  for (Element x = 0; x < n; ++x) invs[x] = backend->inv(x);

  g.class_of_.assign(n, -1);
  std::vector<char> seen(n);
  for (Element x = 0; x < n; ++x) {
    if (g.class_of_[x] >= 0) continue;
    int ci = static_cast<int>(g.classes_.size());
    std::fill(seen.begin(), seen.end(), 0);
    for (Element u = 0; u < n; ++u) seen[backend->mul(backend->mul(u, x), invs[u])] = 1;
    ConjugacyClass cls;
    cls.representative = x;
    for (Element y = 0; y < n; ++y) {
      if (seen[y]) {
        cls.members.push_back(y);
        g.class_of_[y] = ci;
      }
    }
    if (n % cls.size() != 0)
      throw ConsistencyError("conjugacy class size does not divide group order");
    cls.centralizer_order = n / cls.size();
    g.classes_.push_back(std::move(cls));
  }

  for (const ConjugacyClass& c : g.classes_) {
    g.inverse_class_.push_back(g.class_of_[invs[c.representative]]);
    g.square_class_.push_back(g.class_of_[backend->mul(c.representative, c.representative)]);
  }
  return g;
}

namespace {

int64_t parse_count(const std::string& s, const char* what) {
  int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || v < 1)
    throw UsageError(std::string("invalid ") + what + ": '" + s + "'");
  return v;
}

std::vector<detail::Perm> parse_cycle_generators(const std::string& body, int& points) {
  // body looks like "(1,2),(1,2,3)" or "(1,2)(3,4),(1,3)"; generators are
  // separated by commas outside parentheses.
  std::vector<std::string> gen_texts;
  std::string cur;
  int depth = 0;
  for (char ch : body) {
    if (ch == '(') depth++;
    if (ch == ')') depth--;
    if (depth < 0) throw UsageError("unbalanced parentheses in perm spec");
    if (ch == ',' && depth == 0) {
      gen_texts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (depth != 0) throw UsageError("unbalanced parentheses in perm spec");
  gen_texts.push_back(cur);

  std::vector<std::vector<std::vector<int>>> gens_cycles;
  points = 0;
  for (const std::string& text : gen_texts) {
    std::vector<std::vector<int>> cycles;
    size_t i = 0;
    while (i < text.size()) {
      if (text[i] != '(') throw UsageError("expected '(' in perm spec");
      size_t close = text.find(')', i);
      if (close == std::string::npos) throw UsageError("expected ')' in perm spec");
      std::string inside = text.substr(i + 1, close - i - 1);
      std::vector<int> cycle;
      size_t start = 0;
      while (start <= inside.size()) {
        size_t comma = inside.find(',', start);
        std::string tok = inside.substr(start, comma == std::string::npos ? std::string::npos
                                                                          : comma - start);
        cycle.push_back(static_cast<int>(parse_count(tok, "point")));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      if (cycle.size() < 2) throw UsageError("cycles need at least two points");
      for (int pt : cycle) points = std::max(points, pt);
      std::vector<int> sorted = cycle;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw UsageError("repeated point inside a cycle");
      cycles.push_back(std::move(cycle));
      i = close + 1;
    }
    if (cycles.empty()) throw UsageError("empty generator in perm spec");
    gens_cycles.push_back(std::move(cycles));
  }
  if (points > 10000) throw DomainError("permutation degree exceeds resource cap");

  std::vector<detail::Perm> gens;
  for (const auto& cycles : gens_cycles) {
    detail::Perm p(points);
    std::iota(p.begin(), p.end(), 0);
    for (const auto& cycle : cycles) {
      // apply cycle (a,b,c): a->b->c->a on 1-based points
      detail::Perm q(points);
      std::iota(q.begin(), q.end(), 0);
      for (size_t k = 0; k < cycle.size(); ++k) {
        int from = cycle[k] - 1;
        int to = cycle[(k + 1) % cycle.size()] - 1;
        q[from] = static_cast<uint16_t>(to);
      }
      p = detail::compose(q, p);
    }
    gens.push_back(std::move(p));
  }
  return gens;
}

bool is_transposition(const detail::Perm& p) {
  int moved = 0;
  for (size_t i = 0; i < p.size(); ++i)
    if (p[i] != i) moved++;
  return moved == 2;
}

FiniteGroup build_from_perm_gens(const std::vector<detail::Perm>& gens, const std::string& desc,
                                 int64_t max_order, bool all_transpositions) {
  int points = gens.empty() ? 1 : static_cast<int>(gens[0].size());
  detail::PermEnumeration e = detail::enumerate_perm_group(points, gens, max_order);
  std::vector<Element> canonical;
  if (all_transpositions) {
    for (Element i = 0; i < static_cast<Element>(e.elements.size()); ++i)
      if (is_transposition(e.elements[i])) canonical.push_back(i);
  } else {
    for (const detail::Perm& gp : gens) {
      Element i = e.index.at(detail::perm_key(gp));
      canonical.push_back(i);
      detail::Perm q(gp.size());
      for (size_t k = 0; k < gp.size(); ++k) q[gp[k]] = static_cast<uint16_t>(k);
      canonical.push_back(e.index.at(detail::perm_key(q)));
    }
  }
  auto backend = std::make_shared<detail::PermBackend>(std::move(e));
  return make_group(backend, desc, std::move(canonical));
}

detail::Perm cycle_perm(int points, const std::vector<int>& cycle) {
  detail::Perm p(points);
  std::iota(p.begin(), p.end(), 0);
  for (size_t k = 0; k < cycle.size(); ++k)
    p[cycle[k] - 1] = static_cast<uint16_t>(cycle[(k + 1) % cycle.size()] - 1);
  return p;
}

FiniteGroup build_quaternion8() {
  // element order: 1, -1, i, -i, j, -j, k, -k
  // axis table: product of the units e,i,j,k with sign
  static const int axis[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  // sign[u][v] gives the sign of unit_u * unit_v where units are e,i,j,k:
  //   i*i = -e, i*j = k, j*i = -k, etc.
  std::vector<Element> table(64);
  auto decode = [](Element x, int& u, int& s) {
    u = x / 2;
    s = (x % 2) ? -1 : 1;
  };
  auto encode = [](int u, int s) { return static_cast<Element>(2 * u + (s < 0 ? 1 : 0)); };
  for (Element x = 0; x < 8; ++x) {
    for (Element y = 0; y < 8; ++y) {
      int ux, sx, uy, sy;
      decode(x, ux, sx);
      decode(y, uy, sy);
      table[static_cast<size_t>(x) * 8 + y] = encode(axis[ux][uy], sx * sy * sign[ux][uy]);
    }
  }
  auto backend = std::make_shared<detail::DenseBackend>(8, std::move(table));
  return make_group(backend, "quaternion8", {2, 3, 4, 5});
}

}  // namespace

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b, int64_t max_order) {
  if (a.order() * b.order() > max_order)
    throw DomainError("group order exceeds configured resource cap");
  // Recover backends via a small shim enumeration: multiply through the
  // public interface.
  class Shim : public detail::GroupBackend {
   public:
    Shim(FiniteGroup a, FiniteGroup b) : a_(std::move(a)), b_(std::move(b)), nb_(b_.order()) {}
    int64_t order() const override { return a_.order() * nb_; }
    Element mul(Element x, Element y) const override {
      return static_cast<Element>(
          a_.multiply(static_cast<Element>(x / nb_), static_cast<Element>(y / nb_)) * nb_ +
          b_.multiply(static_cast<Element>(x % nb_), static_cast<Element>(y % nb_)));
    }
    Element inv(Element x) const override {
      return static_cast<Element>(a_.inverse(static_cast<Element>(x / nb_)) * nb_ +
                                  b_.inverse(static_cast<Element>(x % nb_)));
    }

   private:
    FiniteGroup a_, b_;
    int64_t nb_;
  };
  std::vector<Element> canonical;
  int64_t nb = b.order();
  for (Element g : a.canonical_generators()) canonical.push_back(static_cast<Element>(g * nb));
  for (Element h : b.canonical_generators()) canonical.push_back(h);
  auto backend = std::make_shared<Shim>(a, b);
  return make_group(backend, "product:" + a.description() + "|" + b.description(),
                    std::move(canonical));
}

FiniteGroup build_group(const std::string& spec, int64_t max_order) {
  auto starts_with = [&](const char* prefix) { return spec.rfind(prefix, 0) == 0; };

  if (spec == "quaternion8") return build_quaternion8();

  if (starts_with("cyclic:")) {
    int64_t n = parse_count(spec.substr(7), "cyclic order");
    if (n > max_order) throw DomainError("group order exceeds configured resource cap");
    auto backend = std::make_shared<detail::CyclicBackend>(n);
    std::vector<Element> gens;
    if (n > 1) {
      gens.push_back(1);
      gens.push_back(static_cast<Element>(n - 1));
    }
    return make_group(backend, spec, std::move(gens));
  }

  if (starts_with("dihedral:")) {
    int64_t n = parse_count(spec.substr(9), "dihedral parameter");
    if (2 * n > max_order) throw DomainError("group order exceeds configured resource cap");
    auto backend = std::make_shared<detail::DihedralBackend>(n);
    std::vector<Element> gens;
    if (n > 1) {
      gens.push_back(1);
      gens.push_back(static_cast<Element>(n - 1));
    }
    gens.push_back(static_cast<Element>(n));  // a reflection
    return make_group(backend, spec, std::move(gens));
  }

  if (starts_with("symmetric:")) {
    int64_t n = parse_count(spec.substr(10), "symmetric degree");
    if (n > 10000) throw DomainError("permutation degree exceeds resource cap");
    std::vector<detail::Perm> gens;
    int points = static_cast<int>(std::max<int64_t>(n, 1));
    if (n >= 2) {
      gens.push_back(cycle_perm(points, {1, 2}));
      std::vector<int> full(n);
      std::iota(full.begin(), full.end(), 1);
      if (n >= 3) gens.push_back(cycle_perm(points, full));
    }
    return build_from_perm_gens(gens, spec, max_order, /*all_transpositions=*/true);
  }

  if (starts_with("alternating:")) {
    int64_t n = parse_count(spec.substr(12), "alternating degree");
    if (n > 10000) throw DomainError("permutation degree exceeds resource cap");
    std::vector<detail::Perm> gens;
    int points = static_cast<int>(std::max<int64_t>(n, 1));
    if (n >= 3) {
      gens.push_back(cycle_perm(points, {1, 2, 3}));
      std::vector<int> cyc;
      for (int i = (n % 2 == 1) ? 1 : 2; i <= n; ++i) cyc.push_back(i);
      if (static_cast<int>(cyc.size()) >= 3) gens.push_back(cycle_perm(points, cyc));
    }
    return build_from_perm_gens(gens, spec, max_order, /*all_transpositions=*/false);
  }

  if (starts_with("perm:")) {
    std::string body = spec.substr(5);
    if (body.size() < 2 || body.front() != '[' || body.back() != ']')
      throw UsageError("perm spec must look like perm:[(1,2),(1,2,3)]");
    int points = 0;
    std::vector<detail::Perm> gens = parse_cycle_generators(body.substr(1, body.size() - 2), points);
    return build_from_perm_gens(gens, spec, max_order, /*all_transpositions=*/false);
  }

  if (starts_with("product:")) {
    std::string body = spec.substr(8);
    size_t bar = body.rfind('|');  // left-associative: last separator splits
    if (bar == std::string::npos) throw UsageError("product spec needs '|': product:<a>|<b>");
    FiniteGroup a = build_group(body.substr(0, bar), max_order);
    FiniteGroup b = build_group(body.substr(bar + 1), max_order);
    return direct_product(a, b, max_order);
  }

  throw UsageError("unknown group spec: '" + spec + "'");
}

Subgroup subgroup_from_generators(const FiniteGroup& g, const std::vector<Element>& generators) {
  for (Element x : generators)
    if (x < 0 || x >= g.order()) throw UsageError("subgroup generator index out of range");
  std::vector<char> in(g.order(), 0);
  in[0] = 1;
  std::vector<Element> queue{0};
  std::vector<Element> gens_closed;
  for (Element x : generators) {
    gens_closed.push_back(x);
    gens_closed.push_back(g.inverse(x));
  }
  for (size_t head = 0; head < queue.size(); ++head) {
    Element cur = queue[head];
    for (Element s : gens_closed) {
      Element next = g.multiply(cur, s);
      if (!in[next]) {
        in[next] = 1;
        queue.push_back(next);
      }
    }
  }
  Subgroup h;
  h.generators = generators;
  for (Element x = 0; x < g.order(); ++x)
    if (in[x]) h.members.push_back(x);
  if (g.order() % h.order() != 0)
    throw ConsistencyError("subgroup order does not divide group order");
  return h;
}

int64_t centralizer_order_direct(const FiniteGroup& g, Element x) {
  int64_t count = 0;
  for (Element u = 0; u < g.order(); ++u)
    if (g.multiply(u, x) == g.multiply(x, u)) count++;
  return count;
}

}  // namespace heatcount
