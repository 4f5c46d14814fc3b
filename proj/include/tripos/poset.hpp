#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tripos/verdict.hpp"

namespace tripos {

/// Index of an element inside one fiber.
using Elem = std::uint32_t;

class FinPoset;

/// Partial lattice structure of a finite poset. Each operation is present only
/// when its universal property holds for every argument; binary tables are
/// stored row-major (`meet[a * n + b]`).
struct LatticeOps {
  std::size_t n = 0;
  std::optional<Elem> top;
  std::optional<Elem> bottom;
  std::optional<std::vector<Elem>> meet;
  std::optional<std::vector<Elem>> join;
  std::optional<std::vector<Elem>> implication;

  Elem meet_of(Elem a, Elem b) const { return (*meet)[a * n + b]; }
  Elem join_of(Elem a, Elem b) const { return (*join)[a * n + b]; }
  Elem implies(Elem a, Elem b) const { return (*implication)[a * n + b]; }

  bool is_heyting() const { return top && bottom && meet && join && implication; }
};

/// Finite partial order on {0, ..., n-1}. Immutable; copies share the lazily
/// computed lattice operations.
class FinPoset {
 public:
  FinPoset();

  /// Builds the poset whose order is exactly `leq`. No closure is applied;
  /// use `validate` to confirm the relation is a partial order.
  template <class Pred>
  static FinPoset from_relation(std::size_t n, Pred&& leq, std::vector<std::string> labels = {}) {
    std::vector<std::uint8_t> rel(n * n, 0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        rel[a * n + b] = leq(static_cast<Elem>(a), static_cast<Elem>(b)) ? 1 : 0;
    return FinPoset(n, std::move(rel), std::move(labels));
  }

  /// Reflexive-transitive closure of the given pairs.
  static FinPoset from_pairs(std::size_t n, std::span<const std::pair<Elem, Elem>> pairs,
                             std::vector<std::string> labels = {});

  static FinPoset chain(std::size_t n);
  static FinPoset antichain(std::size_t n);

  std::size_t size() const { return n_; }
  bool leq(Elem a, Elem b) const { return rel_[a * n_ + b] != 0; }
  const std::string& label(Elem a) const { return labels_[a]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<Elem> find(std::string_view label) const;

  /// Same carrier, opposite order.
  FinPoset reversed() const;

  /// Reflexivity, transitivity and antisymmetry.
  Verdict validate() const;

  /// Covering pairs (a < b with nothing strictly between), sorted.
  std::vector<std::pair<Elem, Elem>> covers() const;

  const LatticeOps& ops() const;

  bool same_order(const FinPoset& other) const { return n_ == other.n_ && rel_ == other.rel_; }

 private:
  FinPoset(std::size_t n, std::vector<std::uint8_t> rel, std::vector<std::string> labels);

  struct Cache;
  std::size_t n_ = 0;
  std::vector<std::uint8_t> rel_;
  std::vector<std::string> labels_;
  std::shared_ptr<Cache> cache_;
};

const LatticeOps& lattice_ops(const FinPoset& p);

/// Least / greatest element satisfying `pred`, if one exists.
template <class Pred>
std::optional<Elem> least_such_that(const FinPoset& p, Pred&& pred) {
  std::optional<Elem> best;
  for (Elem c = 0; c < p.size(); ++c)
    if (pred(c) && (!best || p.leq(c, *best))) best = c;
  if (!best) return std::nullopt;
  for (Elem c = 0; c < p.size(); ++c)
    if (pred(c) && !p.leq(*best, c)) return std::nullopt;
  return best;
}

template <class Pred>
std::optional<Elem> greatest_such_that(const FinPoset& p, Pred&& pred) {
  std::optional<Elem> best;
  for (Elem c = 0; c < p.size(); ++c)
    if (pred(c) && (!best || p.leq(*best, c))) best = c;
  if (!best) return std::nullopt;
  for (Elem c = 0; c < p.size(); ++c)
    if (pred(c) && !p.leq(c, *best)) return std::nullopt;
  return best;
}

/// A function between two finite posets, stored as a table.
struct MonotoneMap {
  std::shared_ptr<const FinPoset> source;
  std::shared_ptr<const FinPoset> target;
  std::vector<Elem> table;

  Elem operator()(Elem x) const { return table[x]; }

  static MonotoneMap identity(std::shared_ptr<const FinPoset> p);

  /// First pair x <= y with m(x) not <= m(y), if any.
  std::optional<std::pair<Elem, Elem>> monotonicity_violation() const;
};

/// `after ∘ before`.
MonotoneMap compose(const MonotoneMap& after, const MonotoneMap& before);

/// L with `a <= u(b)  iff  L(a) <= b`, computed as the least solution.
std::optional<MonotoneMap> left_adjoint(const MonotoneMap& u);
/// R with `u(b) <= a  iff  b <= R(a)`, computed as the greatest solution.
std::optional<MonotoneMap> right_adjoint(const MonotoneMap& u);

/// Preservation of binary meets and (when both sides have one) the top.
/// Throws StructureMissing if either side lacks binary meets.
Verdict is_msl_hom(const MonotoneMap& m);
/// Preservation of the full Heyting signature. Throws StructureMissing if
/// either side is not a Heyting algebra.
Verdict is_heyting_hom(const MonotoneMap& m);

}  // namespace tripos
