#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tripos/poset.hpp"
#include "tripos/verdict.hpp"

namespace tripos {

struct ObjId {
  std::uint32_t value = 0;
  auto operator<=>(const ObjId&) const = default;
};

/// Arrows are ordered by (dom, cod, code); this is the canonical order used
/// by every witness search.
struct ArrId {
  ObjId dom;
  ObjId cod;
  std::uint64_t code = 0;
  auto operator<=>(const ArrId&) const = default;
};

struct ProductEntry {
  ObjId object;
  ArrId first;
  ArrId second;
};

/// Pullback of f: A -> B along h: X -> B, i.e. h ∘ pulled = f ∘ lifted.
struct PullbackSquare {
  ObjId apex;
  ArrId pulled;  // apex -> X
  ArrId lifted;  // apex -> A
};

}  // namespace tripos

template <>
struct std::hash<tripos::ObjId> {
  std::size_t operator()(const tripos::ObjId& o) const noexcept { return o.value; }
};

template <>
struct std::hash<tripos::ArrId> {
  std::size_t operator()(const tripos::ArrId& a) const noexcept {
    std::size_t h = a.code * 0x9e3779b97f4a7c15ULL;
    h ^= (std::size_t(a.dom.value) << 32) ^ a.cod.value;
    return h * 0xff51afd7ed558ccdULL;
  }
};

namespace tripos {

/// A finite category with chosen finite products.
///
/// `objects()` is the quantification window W: every "for all X" in the
/// checks ranges over it. `materialized()` is the larger set M of objects
/// that products and pullbacks of window objects may land in.
class Base {
 public:
  virtual ~Base() = default;

  virtual const std::vector<ObjId>& objects() const = 0;
  virtual const std::vector<ObjId>& materialized() const = 0;
  /// Objects A for which weak power objects are required.
  virtual std::vector<ObjId> power_domain() const { return objects(); }

  virtual std::string object_name(ObjId a) const = 0;
  virtual std::optional<ObjId> find_object(std::string_view name) const = 0;
  virtual std::string arrow_name(const ArrId& f) const = 0;
  virtual std::optional<ArrId> parse_arrow(std::string_view name) const = 0;

  virtual ArrId identity(ObjId a) const = 0;
  /// g ∘ f, or nullopt when the table has no entry.
  virtual std::optional<ArrId> try_compose(const ArrId& g, const ArrId& f) const = 0;
  /// g ∘ f; throws MalformedInstance on a missing composite.
  ArrId compose(const ArrId& g, const ArrId& f) const;

  /// All arrows a -> b in canonical order.
  virtual const std::vector<ArrId>& hom(ObjId a, ObjId b) const = 0;

  virtual ProductEntry product(ObjId a, ObjId b) const = 0;
  /// The unique ⟨f, g⟩ into the chosen product of cod f and cod g.
  virtual ArrId pair(const ArrId& f, const ArrId& g) const = 0;
  virtual ObjId terminal() const = 0;

  /// f × g between chosen products.
  ArrId cross(const ArrId& f, const ArrId& g) const;
  /// The diagonal ⟨id, id⟩.
  ArrId diagonal(ObjId a) const;
  /// The symmetry a × b -> b × a.
  ArrId swap(ObjId a, ObjId b) const;
  /// The unique arrow into the terminal object.
  ArrId bang(ObjId a) const;

  /// First limiting square over the window in canonical order. Uniqueness of
  /// mediating arrows is checked against every window object.
  virtual std::optional<PullbackSquare> pullback(const ArrId& f, const ArrId& h) const;

  /// Two-sided inverse, if any.
  virtual std::optional<ArrId> inverse(const ArrId& f) const;
  /// First isomorphism a -> b with its inverse.
  virtual std::optional<std::pair<ArrId, ArrId>> isomorphism(ObjId a, ObjId b) const;

  /// Number of global elements 1 -> a.
  std::size_t points(ObjId a) const { return hom(terminal(), a).size(); }

  bool in_window(ObjId a) const;

  /// Whether W = M and every universal property holds outright.
  virtual bool complete() const = 0;
  virtual std::string window() const = 0;
  virtual json presentation() const = 0;
};

/// Table presentation of a base category. Names are user supplied; after
/// construction objects, arrows and triples are sorted by name.
struct ExplicitBaseSpec {
  struct Arrow {
    std::string name, dom, cod;
  };
  struct Product {
    std::string a, b, object, first, second;
  };
  std::vector<std::string> objects;
  std::vector<Arrow> arrows;
  std::map<std::string, std::string> identity;
  std::vector<std::array<std::string, 3>> compose;  // g, f, g∘f
  std::vector<Product> products;
  std::string terminal;
};

class ExplicitBase : public Base {
 public:
  explicit ExplicitBase(ExplicitBaseSpec spec);

  const std::vector<ObjId>& objects() const override { return objs_; }
  const std::vector<ObjId>& materialized() const override { return objs_; }
  std::string object_name(ObjId a) const override { return spec_.objects.at(a.value); }
  std::optional<ObjId> find_object(std::string_view name) const override;
  std::string arrow_name(const ArrId& f) const override { return spec_.arrows.at(f.code).name; }
  std::optional<ArrId> parse_arrow(std::string_view name) const override;
  ArrId identity(ObjId a) const override { return ids_.at(a.value); }
  std::optional<ArrId> try_compose(const ArrId& g, const ArrId& f) const override;
  const std::vector<ArrId>& hom(ObjId a, ObjId b) const override;
  ProductEntry product(ObjId a, ObjId b) const override;
  ArrId pair(const ArrId& f, const ArrId& g) const override;
  ObjId terminal() const override { return terminal_; }
  bool complete() const override { return true; }
  std::string window() const override;
  json presentation() const override;

  const ExplicitBaseSpec& spec() const { return spec_; }
  const std::vector<ArrId>& arrows() const { return arrs_; }
  ArrId arrow(std::size_t index) const { return arrs_.at(index); }

 protected:
  ExplicitBaseSpec spec_;
  std::vector<ObjId> objs_;
  std::vector<ArrId> arrs_;
  std::vector<ArrId> ids_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> comp_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, ProductEntry> prod_;
  std::vector<std::vector<std::vector<ArrId>>> hom_;
  ObjId terminal_;
};

/// A finite meet-semilattice with top viewed as a thin category: one arrow
/// u -> v (named "u-v") when u <= v, product = meet, terminal = top.
class ThinBase : public ExplicitBase {
 public:
  ThinBase(ExplicitBaseSpec spec, std::shared_ptr<const FinPoset> order);

  std::optional<PullbackSquare> pullback(const ArrId& f, const ArrId& h) const override;
  std::optional<ArrId> inverse(const ArrId& f) const override;
  json presentation() const override;

  const FinPoset& order() const { return *order_; }
  /// Object for lattice element e, and back.
  ObjId object_of(Elem e) const { return ObjId{obj_of_elem_[e]}; }
  Elem element_of(ObjId a) const { return elem_of_obj_[a.value]; }
  std::optional<ArrId> arrow_between(ObjId a, ObjId b) const;

 private:
  std::shared_ptr<const FinPoset> order_;
  std::vector<std::uint32_t> obj_of_elem_;
  std::vector<Elem> elem_of_obj_;
};

/// Builds the thin base of a finite meet-semilattice with a top element.
/// Throws MalformedInstance if `lattice` lacks binary meets or a top.
std::shared_ptr<const ThinBase> thin_base(const FinPoset& lattice);

/// A finite topological space: sorted point labels and the opens as sorted
/// bitmasks over point indices.
struct FiniteSpace {
  std::string name;
  std::vector<std::string> points;
  std::vector<std::uint64_t> opens;

  std::size_t size() const { return points.size(); }
  /// Throws MalformedInstance unless ∅ and the whole set are open and the
  /// opens are closed under ∪ and ∩.
  void check_topology() const;
  bool is_open(std::uint64_t mask) const;
  static FiniteSpace discrete(std::size_t n);
};

struct SpaceWindowSpec {
  std::vector<FiniteSpace> spaces;
  std::size_t cap = 8;
  /// Names of the objects that need weak power objects; empty = all of W.
  std::vector<std::string> power_domain;
};

/// Finite spaces with all continuous maps. W is the declared spaces plus the
/// empty and one-point spaces; M closes W under subspaces and binary products
/// up to `cap` points.
class SpaceWindow : public Base {
 public:
  explicit SpaceWindow(SpaceWindowSpec spec);

  const std::vector<ObjId>& objects() const override { return window_; }
  const std::vector<ObjId>& materialized() const override { return all_; }
  std::vector<ObjId> power_domain() const override;
  std::string object_name(ObjId a) const override { return spaces_.at(a.value).name; }
  std::optional<ObjId> find_object(std::string_view name) const override;
  std::string arrow_name(const ArrId& f) const override;
  std::optional<ArrId> parse_arrow(std::string_view name) const override;
  ArrId identity(ObjId a) const override;
  std::optional<ArrId> try_compose(const ArrId& g, const ArrId& f) const override;
  const std::vector<ArrId>& hom(ObjId a, ObjId b) const override;
  ProductEntry product(ObjId a, ObjId b) const override;
  ArrId pair(const ArrId& f, const ArrId& g) const override;
  ObjId terminal() const override { return ObjId{1}; }
  std::optional<PullbackSquare> pullback(const ArrId& f, const ArrId& h) const override;
  std::optional<ArrId> inverse(const ArrId& f) const override;
  std::optional<std::pair<ArrId, ArrId>> isomorphism(ObjId a, ObjId b) const override;
  bool complete() const override { return false; }
  std::string window() const override;
  json presentation() const override;

  const FiniteSpace& space(ObjId a) const { return spaces_.at(a.value); }
  const SpaceWindowSpec& spec() const { return spec_; }

  /// The function table of an arrow (point index -> point index).
  std::vector<std::uint32_t> table(const ArrId& f) const;
  ArrId arrow_from_table(ObjId dom, ObjId cod, const std::vector<std::uint32_t>& t) const;
  /// Preimage of a point set.
  std::uint64_t preimage(const ArrId& f, std::uint64_t mask) const;

 private:
  std::optional<ObjId> lookup(std::size_t n, const std::vector<std::uint64_t>& opens) const;
  ObjId intern(FiniteSpace s);
  FiniteSpace product_space(const FiniteSpace& a, const FiniteSpace& b) const;
  FiniteSpace subspace(const FiniteSpace& a, std::uint64_t mask) const;

  SpaceWindowSpec spec_;
  std::vector<FiniteSpace> spaces_;
  std::map<std::pair<std::size_t, std::vector<std::uint64_t>>, std::uint32_t> index_;
  std::vector<ObjId> window_;
  std::vector<ObjId> all_;
  mutable std::mutex product_mutex_;
  mutable std::map<std::pair<std::uint32_t, std::uint32_t>, ProductEntry> products_;

  mutable std::mutex hom_mutex_;
  mutable std::map<std::pair<std::uint32_t, std::uint32_t>, std::unique_ptr<std::vector<ArrId>>> homs_;
};

// Category-level checks. All quantify over the window.

/// Identity and associativity laws. Throws MalformedInstance("incomplete
/// table ...") when a composite is missing.
Verdict validate_category(const Base& c);
/// Pairing is the unique mediator and the terminal object is terminal.
Verdict validate_products(const Base& c);

Verdict is_monic(const Base& c, const ArrId& f);
bool is_iso(const Base& c, const ArrId& f);
Verdict is_stable_initial(const Base& c, ObjId a);
/// First window object that is stable initial.
std::optional<ObjId> stable_initial(const Base& c);

struct ArrowClass {
  std::string name;
  std::vector<ArrId> members;  // sorted, no duplicates
  bool closure_verified = false;

  /// Membership up to isomorphism of the domain: g = m ∘ i with m a member
  /// and i an isomorphism.
  bool contains(const Base& c, const ArrId& g) const;
};

/// Chosen projections of window pairs, plus window arrows isomorphic to them
/// over the same codomain.
ArrowClass projection_class(const Base& c);
/// Every pullback of a member along a window arrow is again in the class.
Verdict is_pullback_stable(const Base& c, const ArrowClass& cls);

struct SubobjectPoset {
  FinPoset order;
  std::vector<ArrId> representatives;  // least arrow of each class
};

/// Monics from window objects into `a`, modulo mutual factorization.
SubobjectPoset subobject_poset(const Base& c, ObjId a);

/// Does f factor through m (f = m ∘ k for some k)?
std::optional<ArrId> factor_through(const Base& c, const ArrId& f, const ArrId& m);

}  // namespace tripos
