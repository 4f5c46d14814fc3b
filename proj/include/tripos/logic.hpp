#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <vector>

#include "tripos/doctrine.hpp"

namespace tripos {

/// A search result: the verdict of the existence claim and, when it holds,
/// the chosen witness.
template <class W>
struct Found {
  Verdict verdict;
  std::optional<W> witness;
};

struct EqualityWitness {
  std::map<ObjId, Elem> delta;  // δ_A ∈ fiber(A × A)
};

struct PowerObjectWitness {
  ObjId object;  // A
  ObjId power;   // ℙ(A)
  Elem member;   // ∈_A ∈ fiber(A × ℙ(A))
  std::map<std::pair<ObjId, Elem>, ArrId> chi;  // (Y, φ) -> χ_φ
};

struct NegationTable {
  std::map<ObjId, std::vector<Elem>> neg;
};

struct EpsilonTable {
  std::map<std::tuple<ObjId, ObjId, Elem>, ArrId> eps;  // (Γ, A, ψ) -> ε_ψ
};

/// Binary operation per fiber; nullopt where undefined.
using ImplProvider = std::function<std::optional<Elem>(ObjId, Elem, Elem)>;

/// Memoizing view of a doctrine for the witness searches. Thread safe;
/// witnesses are the canonical-order ones.
class Analysis {
 public:
  explicit Analysis(Doctrine d);

  const Doctrine& doctrine() const { return d_; }
  const Base& base() const { return d_.base(); }

  /// ⌊α⌋ for α ∈ fiber(a). `a` may be any materialized object; universality
  /// is tested against every window object.
  std::optional<ArrId> comprehension(ObjId a, Elem alpha) const;
  /// ⌈α⌉, the same search with ⊥ in place of ⊤.
  std::optional<ArrId> cocomprehension(ObjId a, Elem alpha) const;

  /// δ_A validating the elementary adjunction over every window X.
  const Found<Elem>& delta(ObjId a) const;

  /// First arrow e: Γ -> A with ⟨id, e⟩*ψ = Σ_{π_Γ} ψ.
  std::optional<ArrId> epsilon(ObjId gamma, ObjId a, Elem psi) const;

  /// Π_{⌊φ⌋} ⌊φ⌋* ψ.
  std::optional<Elem> derived_implication(ObjId a, Elem phi, Elem psi) const;

  /// Fiberwise pseudocomplements, required to commute with reindexing.
  const Found<NegationTable>& negation() const;

 private:
  struct Memo;
  Doctrine d_;
  std::shared_ptr<Memo> memo_;
};

// Equality.
Found<EqualityWitness> find_equality(const Analysis& an);
Verdict is_elementary(const Analysis& an);
Verdict check_substitutive(const Analysis& an, const EqualityWitness& w);
/// Tripos clause iii: δ_X with ⊤_X ≤ Δ*α iff δ_X ≤ α, for every window X.
Found<EqualityWitness> find_tripos_equality(const Analysis& an);

// Comprehension and co-comprehension, over window objects.
/// m*α is ⊤ (⊥ when `co`) and every window arrow with that property factors
/// uniquely through m.
bool is_comprehension_arrow(const Doctrine& d, const ArrId& m, Elem alpha, bool co);
Verdict has_comprehension(const Analysis& an);
Verdict is_full_comprehension(const Analysis& an);
ArrowClass comprehension_class(const Analysis& an);
Verdict has_cocomprehension(const Analysis& an);
Verdict is_full_cocomprehension(const Analysis& an);
ArrowClass cocomprehension_class(const Analysis& an);

// Negation.
Verdict has_negation(const Analysis& an);
Verdict is_classical(const Analysis& an);

// Implication.
ImplProvider heyting_provider(const Doctrine& d);
ImplProvider derived_provider(const Analysis& an);
/// Laws iv-a..d over window fibers, then stability (ii) under window
/// reindexing, then the Π-exchange law (iii) along window projections.
Verdict implication_axioms(const Analysis& an, const ImplProvider& impl);

// Weak power objects.
Found<PowerObjectWitness> weak_power_object(const Analysis& an, ObjId a);
Verdict is_higher_order(const Analysis& an);

// Choice.
Found<EpsilonTable> ac_check(const Analysis& an);

// Triposes.
struct TriposParts {
  Verdict propositional, sigma, pi, equality, higher_order;
};
struct CharacterizationParts {
  Verdict pi, implicational, higher_order;
};
TriposParts tripos_parts(const Analysis& an);
/// The first refuted clause, else the first inapplicable one, else holds.
Verdict combine(const TriposParts& p);
Verdict combine(const CharacterizationParts& p);
Verdict is_tripos(const Analysis& an);
/// Uses `impl` when given, else the Heyting implication when every fiber
/// has one, else the comprehension-derived implication.
Verdict is_tripos_via_characterization(const Analysis& an, const ImplProvider& impl = {});
ImplProvider characterization_provider(const Analysis& an);

}  // namespace tripos
