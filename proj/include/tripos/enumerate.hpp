#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tripos/theorems.hpp"

namespace tripos {

/// Partial orders on 1..max_size elements, one per isomorphism class, in a
/// fixed order (size, then canonical code).
const std::vector<FinPoset>& fiber_posets(std::size_t max_size);

/// Order-preserving bijections of p, identity first.
std::vector<std::vector<Elem>> automorphisms(const FinPoset& p);

/// All monotone maps dom -> cod as tables, lexicographic.
std::vector<std::vector<Elem>> monotone_maps(const FinPoset& dom, const FinPoset& cod);

/// Boolean filter over classification checks.
///
///   expr  := term ('|' term)*
///   term  := unary ('&' unary)*
///   unary := '!' unary | '(' expr ')' | atom
///   atom  := check name or alias, "hyp:<theorem>", "concl:<theorem>",
///            "true"
///
/// A check atom is true when the check holds. "hyp:T" is true when every
/// hypothesis of T holds, "concl:T" when they hold and so does the
/// conclusion.
class Filter {
 public:
  /// Throws std::invalid_argument with the offending position.
  static Filter parse(const std::string& text);
  bool eval(const Classifier& c) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

/// Alias table used by the filter (e.g. full_comp -> full_comprehension).
std::string resolve_check_alias(const std::string& name);

struct NamedLattice {
  std::string name;
  FinPoset lattice;  // finite meet-semilattice with top
};

struct EnumerationParams {
  std::vector<NamedLattice> bases;
  std::size_t max_fiber = 3;
  /// Candidate doctrines examined before stopping.
  std::size_t budget = 100000;
  std::string filter;  // empty = accept all
};

struct EnumerationStats {
  std::size_t candidates = 0;  // reindexing assignments generated
  std::size_t canonical = 0;   // survivors of isomorphism pruning
  std::size_t emitted = 0;     // canonical and passing the filter
  bool budget_exhausted = false;
};

/// Three-element and smaller chains c0 < c1 < ..., named chain1..chain3.
std::vector<NamedLattice> default_bases();
/// 10^5, or the value of TRIPOS_BUDGET when set.
std::size_t budget_ceiling();

/// Streams pairwise non-isomorphic doctrines over each base: one fiber
/// poset per object (up to isomorphism), one monotone table per covering
/// pair, longer arrows by composition. Candidates that break functoriality
/// are dropped. The sink returns false to stop early.
using DoctrineSink = std::function<bool(const Doctrine&, const Classifier&)>;
EnumerationStats enumerate_doctrines(const EnumerationParams& params, const DoctrineSink& sink);

}  // namespace tripos
