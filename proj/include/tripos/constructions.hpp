#pragma once

#include <optional>

#include "tripos/logic.hpp"

namespace tripos {

/// Σ_f α = Σ_{π_B}[(f × id_B)*δ_B ∧ π_A*α] for f: A -> B. nullopt when δ_B,
/// Σ_{π_B} or the meet is missing.
std::optional<Elem> derived_sigma(const Analysis& an, const ArrId& f, Elem alpha);
/// The formula agrees with the adjoint-computed Σ_f on every window arrow.
/// Not applicable unless the doctrine is elementary and existential.
Verdict check_derived_sigma(const Analysis& an);

/// Π_{⌊φ⌋} ⌊φ⌋* ψ.
std::optional<Elem> derived_implication(const Analysis& an, ObjId a, Elem phi, Elem psi);
/// The derived implication equals the fiberwise Heyting implication.
Verdict derived_implication_is_heyting(const Analysis& an);

/// ⌈α⌉ built as ⌊¬α⌋.
std::optional<ArrId> cocomp_from_negation(const Analysis& an, ObjId a, Elem alpha);
/// Every ⌊¬α⌋ passes the co-comprehension universal property.
Verdict check_cocomp_from_negation(const Analysis& an);

/// 𝒢(f) = (f × id_A)*δ_A ∈ fiber(X × A) for f: X -> A.
std::optional<Elem> graph(const Analysis& an, const ArrId& f);

Doctrine dualize(const Doctrine& d);

/// The value ⟨ε_{𝒢(⌈α⌉)}, id_A⟩*𝒢(⌈α⌉) ∈ fiber(A). When the domain of ⌈α⌉
/// is stable initial it is Σ_{π_A} 𝒢(⌈α⌉) instead.
std::optional<Elem> eaco_side(const Analysis& an, ObjId a, Elem alpha);
/// f*(side at α) = side at f*α.
Verdict eaco_compat(const Analysis& an, const ArrId& f, Elem alpha);
/// eaco_compat for every window arrow and every α.
Verdict is_eaco_compatible(const Analysis& an);

struct HeacoChecklist {
  Verdict elementary, full_cocomprehension, choice, compatible, higher_order;
};
HeacoChecklist heaco_checklist(const Analysis& an);
/// The first clause that does not hold, as a not-applicable verdict naming it.
Verdict eaco_verdict(const HeacoChecklist& h);
Verdict heaco_verdict(const HeacoChecklist& h);

struct HeacoResult {
  Doctrine dual;
  Verdict checklist;
  Verdict restricted_sigma_co;  // restricted Σ(𝒞_P°) on the input
  Verdict tripos;               // on the dual
  Verdict characterization;     // on the dual
  Verdict full_comprehension;   // on the dual
};
HeacoResult heaco_to_tripos(const Analysis& an);

}  // namespace tripos
