#include "tripos/catalog.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace tripos {

namespace {

const ThinBase& thin_of(const Base& base) {
  auto* t = dynamic_cast<const ThinBase*>(&base);
  if (!t) throw MalformedInstance("down-set fibers need a thin base");
  return *t;
}

// Elements of ↓U in lattice order.
std::vector<Elem> below(const FinPoset& l, Elem u) {
  std::vector<Elem> out;
  for (Elem w = 0; w < l.size(); ++w)
    if (l.leq(w, u)) out.push_back(w);
  return out;
}

}  // namespace

FinPoset DownsetModel::fiber(const Base& base, ObjId a) const {
  const ThinBase& t = thin_of(base);
  const FinPoset& l = t.order();
  const auto els = below(l, t.element_of(a));
  std::vector<std::string> labels;
  for (Elem w : els) labels.push_back(l.label(w));
  return FinPoset::from_relation(
      els.size(), [&](Elem x, Elem y) { return l.leq(els[x], els[y]); }, std::move(labels));
}

std::vector<Elem> DownsetModel::reindex(const Base& base, const ArrId& f) const {
  const ThinBase& t = thin_of(base);
  const FinPoset& l = t.order();
  const auto& ops = l.ops();
  const Elem v = t.element_of(f.dom);
  const auto dom = below(l, v);
  std::vector<Elem> table;
  for (Elem w : below(l, t.element_of(f.cod))) {
    const Elem m = ops.meet_of(w, v);
    table.push_back(static_cast<Elem>(std::find(dom.begin(), dom.end(), m) - dom.begin()));
  }
  return table;
}

Doctrine powerset_finset(std::size_t max_size, std::size_t power_depth, std::size_t cap) {
  if (max_size < 1) throw MalformedInstance("powerset window needs max_size >= 1");
  std::set<std::size_t> sizes, before;
  for (std::size_t n = 0; n <= max_size; ++n) sizes.insert(n);
  for (std::size_t k = 0; k < power_depth; ++k) {
    before = sizes;
    for (std::size_t n : before) {
      if (n >= 63 || (std::size_t(1) << n) > cap)
        throw WindowExceeded("powerset of a " + std::to_string(n) + "-element set exceeds the cap");
      sizes.insert(std::size_t(1) << n);
    }
  }
  SpaceWindowSpec spec;
  spec.cap = cap;
  for (std::size_t n : sizes) {
    if (n > cap) throw WindowExceeded("set size above the cap");
    spec.spaces.push_back(FiniteSpace::discrete(n));
  }
  if (power_depth > 0)
    for (std::size_t n : before) spec.power_domain.push_back(std::to_string(n));
  auto base = std::make_shared<const SpaceWindow>(std::move(spec));
  return Doctrine(base, std::make_shared<OpensModel>(),
                  "PS(" + std::to_string(max_size) + "," + std::to_string(power_depth) + ")");
}

Doctrine openset_space(std::vector<FiniteSpace> spaces, std::size_t cap, std::string name) {
  SpaceWindowSpec spec;
  spec.spaces = std::move(spaces);
  spec.cap = cap;
  return Doctrine(std::make_shared<const SpaceWindow>(std::move(spec)),
                  std::make_shared<OpensModel>(), std::move(name));
}

FiniteSpace sierpinski() { return FiniteSpace{"S", {"a", "b"}, {0b00, 0b01, 0b11}}; }

Doctrine trivial_fiber(std::shared_ptr<const Base> base, std::string name) {
  return Doctrine(std::move(base), std::make_shared<TrivialModel>(), std::move(name));
}

Doctrine subsets_over_semilattice(const FinPoset& lattice, std::string name) {
  return Doctrine(thin_base(lattice), std::make_shared<DownsetModel>(), std::move(name));
}

std::shared_ptr<const Base> point_base() {
  ExplicitBaseSpec spec;
  spec.objects = {"1"};
  spec.arrows = {{"id", "1", "1"}};
  spec.identity = {{"1", "id"}};
  spec.products = {{"1", "1", "1", "id", "id"}};
  spec.terminal = "1";
  return std::make_shared<const ExplicitBase>(std::move(spec));
}

FinPoset labeled_chain(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("c" + std::to_string(i));
  return FinPoset::from_relation(n, [](Elem a, Elem b) { return a <= b; }, labels);
}

namespace {

FinPoset diamond() {
  const std::pair<Elem, Elem> covers[] = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  return FinPoset::from_pairs(4, covers, {"bot", "l", "r", "top"});
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"discrete2", "open sets of the discrete two-point space",
       [] { return openset_space({FiniteSpace::discrete(2)}, 8, "discrete2"); }},
      {"ps-1-0", "powersets of sets up to size 1",
       [] { return powerset_finset(1, 0).with_name("ps-1-0"); }},
      {"ps-1-1", "powersets of sets up to size 1, closed under one powerset step",
       [] { return powerset_finset(1, 1).with_name("ps-1-1"); }},
      {"ps-2-0", "powersets of sets up to size 2",
       [] { return powerset_finset(2, 0).with_name("ps-2-0"); }},
      {"sier", "open sets of the Sierpinski space",
       [] { return openset_space({sierpinski()}, 8, "sier"); }},
      {"sl-chain2", "down-sets over the two-element chain",
       [] { return subsets_over_semilattice(labeled_chain(2), "sl-chain2"); }},
      {"sl-chain3", "down-sets over the three-element chain",
       [] { return subsets_over_semilattice(labeled_chain(3), "sl-chain3"); }},
      {"sl-diamond", "down-sets over the four-element Boolean lattice",
       [] { return subsets_over_semilattice(diamond(), "sl-diamond"); }},
      {"triv-chain3", "one-element fibers over the three-element chain",
       [] { return trivial_fiber(thin_base(labeled_chain(3)), "triv-chain3"); }},
      {"triv-point", "one-element fibers over the one-arrow category",
       [] { return trivial_fiber(point_base(), "triv-point"); }},
      {"triv-ps", "one-element fibers over the finite-set window of ps-1-1",
       [] { return trivial_fiber(powerset_finset(1, 1).base_ptr(), "triv-ps"); }},
  };
  return entries;
}

Doctrine catalog_instance(const std::string& id) {
  for (const auto& e : catalog())
    if (e.id == id) return e.make();
  throw std::invalid_argument("unknown catalog id: " + id);
}

}  // namespace tripos
