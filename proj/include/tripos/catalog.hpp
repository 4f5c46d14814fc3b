#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tripos/doctrine.hpp"

namespace tripos {

/// fiber(U) = the principal down-set of U in a thin base, reindexing along
/// V <= U is meet with V.
class DownsetModel : public FiberModel {
 public:
  std::string kind() const override { return "downsets"; }
  FinPoset fiber(const Base& base, ObjId a) const override;
  std::vector<Elem> reindex(const Base& base, const ArrId& f) const override;
};

/// Finite sets {0..n-1} for n in the window with all functions, powerset
/// fibers and preimage reindexing. The window holds the sizes 0..max_size
/// closed `power_depth` times under n -> 2^n; weak power objects are required
/// for the sizes reached before the last step. Throws WindowExceeded when a
/// size exceeds `cap`.
Doctrine powerset_finset(std::size_t max_size, std::size_t power_depth, std::size_t cap = 8);

/// Open-set doctrine over the given spaces and their continuous maps.
Doctrine openset_space(std::vector<FiniteSpace> spaces, std::size_t cap = 8, std::string name = "");

/// The two-point space with one non-trivial open {a}.
FiniteSpace sierpinski();

/// One-element fibers over any base.
Doctrine trivial_fiber(std::shared_ptr<const Base> base, std::string name = "");

/// Down-set fibers over a finite meet-semilattice with top.
Doctrine subsets_over_semilattice(const FinPoset& lattice, std::string name = "");

/// The chain c0 < c1 < ... < c(n-1).
FinPoset labeled_chain(std::size_t n);

/// One-object, one-arrow base.
std::shared_ptr<const Base> point_base();

struct CatalogEntry {
  std::string id;
  std::string description;
  std::function<Doctrine()> make;
};

const std::vector<CatalogEntry>& catalog();
/// Throws std::invalid_argument for unknown ids.
Doctrine catalog_instance(const std::string& id);

}  // namespace tripos
