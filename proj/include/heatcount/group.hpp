#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace heatcount {

// Group elements are dense indices 0..order-1; index 0 is always the identity.
using Element = int32_t;

struct ConjugacyClass {
  Element representative = 0;  // smallest element index in the class
  std::vector<Element> members;  // sorted ascending
  int64_t centralizer_order = 0;  // |G| / |class|
  int64_t size() const { return static_cast<int64_t>(members.size()); }
};

namespace detail {
class GroupBackend;
}

// Immutable finite group with precomputed conjugacy data. Multiplication is
// table-backed for order <= 4096 and permutation/composition-backed above
// (with memoized rows under a shared budget). All queries are pure and
// thread-safe.
class FiniteGroup {
 public:
  int64_t order() const { return order_; }
  Element multiply(Element a, Element b) const;
  Element inverse(Element a) const;
  // Dense row-major multiplication table, or nullptr for large groups.
  const Element* dense_table() const;

  const std::string& description() const { return description_; }
  // Generating set used for the default cayley-laplacian weight
  // (all transpositions for symmetric:n, standard generators otherwise;
  // always closed under inversion).
  const std::vector<Element>& canonical_generators() const { return canonical_gens_; }

  const std::vector<ConjugacyClass>& classes() const { return classes_; }
  int class_count() const { return static_cast<int>(classes_.size()); }
  int class_of(Element x) const { return class_of_[x]; }
  // class index of the inverses / squares of a class
  int inverse_class(int c) const { return inverse_class_[c]; }
  int square_class(int c) const { return square_class_[c]; }

 private:
  friend FiniteGroup make_group(std::shared_ptr<const detail::GroupBackend> backend,
                                std::string description,
                                std::vector<Element> canonical_gens);
  std::shared_ptr<const detail::GroupBackend> backend_;
  int64_t order_ = 1;
  std::string description_;
  std::vector<Element> canonical_gens_;
  std::vector<ConjugacyClass> classes_;
  std::vector<int> class_of_;
  std::vector<int> inverse_class_;
  std::vector<int> square_class_;
};

// Parses a group spec and constructs the group. Grammar:
//   symmetric:<n> | alternating:<n> | cyclic:<n> | dihedral:<n>   (order 2n)
//   quaternion8
//   perm:[<cycle-list>,<cycle-list>,...]   cycles like (1,2,3) on points 1..k
//   product:<spec>|<spec>
// Throws UsageError on malformed specs and DomainError when the resulting
// order exceeds `max_order`.
FiniteGroup build_group(const std::string& spec, int64_t max_order = 10000);

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b,
                           int64_t max_order = 10000);

struct Subgroup {
  std::vector<Element> generators;
  std::vector<Element> members;  // sorted, closed, contains 0
  int64_t order() const { return static_cast<int64_t>(members.size()); }
};

// Closure of `generators` inside `g`.
Subgroup subgroup_from_generators(const FiniteGroup& g, const std::vector<Element>& generators);

// |{g in G : g x g^-1 = x}|, counted directly (used as an oracle for
// centralizer_order stored on classes).
int64_t centralizer_order_direct(const FiniteGroup& g, Element x);

}  // namespace heatcount
