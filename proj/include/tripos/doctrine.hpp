#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tripos/fincat.hpp"
#include "tripos/poset.hpp"
#include "tripos/verdict.hpp"

namespace tripos {

/// Source of fibers and reindexing tables. Reindexing along f: a -> b is a
/// table from fiber(b) to fiber(a).
class FiberModel {
 public:
  virtual ~FiberModel() = default;
  virtual std::string kind() const = 0;
  virtual FinPoset fiber(const Base& base, ObjId a) const = 0;
  virtual std::vector<Elem> reindex(const Base& base, const ArrId& f) const = 0;
};

/// Open-set frames with preimage; needs a SpaceWindow base.
class OpensModel : public FiberModel {
 public:
  std::string kind() const override { return "opens"; }
  FinPoset fiber(const Base& base, ObjId a) const override;
  std::vector<Elem> reindex(const Base& base, const ArrId& f) const override;
};

/// One-element fibers.
class TrivialModel : public FiberModel {
 public:
  std::string kind() const override { return "trivial"; }
  FinPoset fiber(const Base& base, ObjId a) const override;
  std::vector<Elem> reindex(const Base& base, const ArrId& f) const override;
};

/// Fibers and tables given outright. Missing tables for identities default
/// to the identity; any other missing table is a MalformedInstance.
class ExplicitModel : public FiberModel {
 public:
  ExplicitModel(std::vector<FinPoset> fibers, std::map<ArrId, std::vector<Elem>> tables)
      : fibers_(std::move(fibers)), tables_(std::move(tables)) {}
  std::string kind() const override { return "explicit"; }
  FinPoset fiber(const Base& base, ObjId a) const override;
  std::vector<Elem> reindex(const Base& base, const ArrId& f) const override;

  const std::vector<FinPoset>& fibers() const { return fibers_; }
  const std::map<ArrId, std::vector<Elem>>& tables() const { return tables_; }

 private:
  std::vector<FinPoset> fibers_;
  std::map<ArrId, std::vector<Elem>> tables_;
};

/// Replaces the tables of some arrows of an inner model. Used for fault
/// injection and for reindex blocks on generated fibers.
class OverrideModel : public FiberModel {
 public:
  OverrideModel(std::shared_ptr<const FiberModel> inner, std::map<ArrId, std::vector<Elem>> tables)
      : inner_(std::move(inner)), tables_(std::move(tables)) {}
  std::string kind() const override { return inner_->kind(); }
  FinPoset fiber(const Base& base, ObjId a) const override { return inner_->fiber(base, a); }
  std::vector<Elem> reindex(const Base& base, const ArrId& f) const override;

  const FiberModel& inner() const { return *inner_; }
  std::shared_ptr<const FiberModel> inner_ptr() const { return inner_; }
  const std::map<ArrId, std::vector<Elem>>& tables() const { return tables_; }

 private:
  std::shared_ptr<const FiberModel> inner_;
  std::map<ArrId, std::vector<Elem>> tables_;
};

/// A functor C^op -> Pos on a finite base. Immutable; fibers, reindexing
/// tables and fiberwise adjoints are computed on first use and shared by
/// copies.
class Doctrine {
 public:
  Doctrine(std::shared_ptr<const Base> base, std::shared_ptr<const FiberModel> model,
           std::string name = "", bool dual = false, json declared = nullptr);

  const Base& base() const { return *base_; }
  const std::shared_ptr<const Base>& base_ptr() const { return base_; }
  const FiberModel& model() const { return *model_; }
  const std::shared_ptr<const FiberModel>& model_ptr() const { return model_; }
  const std::string& name() const { return name_; }
  bool dual() const { return dual_; }
  const json& declared() const { return declared_; }

  const FinPoset& fiber(ObjId a) const { return *fiber_ptr(a); }
  std::shared_ptr<const FinPoset> fiber_ptr(ObjId a) const;
  const LatticeOps& ops(ObjId a) const { return fiber(a).ops(); }

  /// f*: fiber(cod f) -> fiber(dom f). Throws MalformedInstance when the
  /// model's table has the wrong shape.
  const std::vector<Elem>& reindex_table(const ArrId& f) const;
  Elem reindex(const ArrId& f, Elem x) const { return reindex_table(f)[x]; }
  MonotoneMap reindex_map(const ArrId& f) const;

  /// Σ_f and Π_f as tables fiber(dom f) -> fiber(cod f), when they exist.
  const std::optional<std::vector<Elem>>& sigma(const ArrId& f) const;
  const std::optional<std::vector<Elem>>& pi(const ArrId& f) const;

  /// Same base and tables, every fiber order-reversed.
  Doctrine dualized() const;
  Doctrine with_reindex_override(const ArrId& f, std::vector<Elem> table) const;
  Doctrine with_name(std::string name) const;
  Doctrine with_declared(json declared) const;

  std::string label(ObjId a, Elem x) const { return fiber(a).label(x); }
  std::string arrow_name(const ArrId& f) const { return base_->arrow_name(f); }
  std::string object_name(ObjId a) const { return base_->object_name(a); }

 private:
  struct Cache;
  std::shared_ptr<const Base> base_;
  std::shared_ptr<const FiberModel> model_;
  std::string name_;
  bool dual_ = false;
  json declared_;
  std::shared_ptr<Cache> cache_;
};

/// Functor laws and monotonicity over the window.
Verdict validate_doctrine(const Doctrine& d);

/// Every window fiber has a top (resp. bottom) preserved by reindexing.
Verdict has_tops(const Doctrine& d);
Verdict has_bottoms(const Doctrine& d);
/// Binary meets in every window fiber, preserved by reindexing.
Verdict is_primary(const Doctrine& d);
/// Heyting fibers and Heyting reindexing.
Verdict is_propositional(const Doctrine& d);

enum class Side { left, right };

/// Beck-Chevalley for Σ (left) or Π (right) adjoints along the arrows of
/// `cls`, over every window pullback of a member. `restricted` limits γ to
/// f*ξ.
Verdict beck_chevalley(const Doctrine& d, const ArrowClass& cls, Side side, bool restricted);
Verdict is_sigma_doctrine(const Doctrine& d, const ArrowClass& cls, bool restricted = false);
Verdict is_pi_doctrine(const Doctrine& d, const ArrowClass& cls, bool restricted = false);

/// Σ_f(α ∧ f*β) = β ∧ Σ_f α along every member. When `supplied` is given it
/// provides Σ_f and is first checked against the computed left adjoint.
using SigmaProvider = std::function<std::optional<std::vector<Elem>>(const ArrId&)>;
Verdict frobenius(const Doctrine& d, const ArrowClass& cls, const SigmaProvider& supplied = {});
Verdict is_existential(const Doctrine& d);

/// Label-based payload helpers.
json elem_json(const Doctrine& d, ObjId a, Elem x);

}  // namespace tripos
