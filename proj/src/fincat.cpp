#include "tripos/fincat.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace tripos {

// ---------------------------------------------------------------- Base

ArrId Base::compose(const ArrId& g, const ArrId& f) const {
  if (auto gf = try_compose(g, f)) return *gf;
  throw MalformedInstance("incomplete table: no composite " + arrow_name(g) + " o " +
                          arrow_name(f));
}

ArrId Base::cross(const ArrId& f, const ArrId& g) const {
  const ProductEntry src = product(f.dom, g.dom);
  return pair(compose(f, src.first), compose(g, src.second));
}

ArrId Base::diagonal(ObjId a) const { return pair(identity(a), identity(a)); }

ArrId Base::swap(ObjId a, ObjId b) const {
  const ProductEntry p = product(a, b);
  return pair(p.second, p.first);
}

ArrId Base::bang(ObjId a) const {
  const auto& h = hom(a, terminal());
  if (h.size() != 1)
    throw MalformedInstance("terminal object has " + std::to_string(h.size()) +
                            " arrows from " + object_name(a));
  return h.front();
}

bool Base::in_window(ObjId a) const {
  const auto& w = objects();
  return std::find(w.begin(), w.end(), a) != w.end();
}

std::optional<PullbackSquare> Base::pullback(const ArrId& f, const ArrId& h) const {
  if (f.cod != h.cod) throw MalformedInstance("pullback of arrows with different codomains");
  const ObjId x = h.dom, a = f.dom;
  auto limiting = [&](ObjId apex, const ArrId& p, const ArrId& q) {
    for (ObjId z : objects())
      for (const ArrId& zx : hom(z, x))
        for (const ArrId& za : hom(z, a)) {
          if (compose(h, zx) != compose(f, za)) continue;
          int count = 0;
          for (const ArrId& m : hom(z, apex))
            if (compose(p, m) == zx && compose(q, m) == za) ++count;
          if (count != 1) return false;
        }
    return true;
  };
  for (ObjId apex : objects())
    for (const ArrId& p : hom(apex, x))
      for (const ArrId& q : hom(apex, a))
        if (compose(h, p) == compose(f, q) && limiting(apex, p, q))
          return PullbackSquare{apex, p, q};
  return std::nullopt;
}

std::optional<ArrId> Base::inverse(const ArrId& f) const {
  for (const ArrId& g : hom(f.cod, f.dom))
    if (compose(g, f) == identity(f.dom) && compose(f, g) == identity(f.cod)) return g;
  return std::nullopt;
}

std::optional<std::pair<ArrId, ArrId>> Base::isomorphism(ObjId a, ObjId b) const {
  for (const ArrId& f : hom(a, b))
    if (auto g = inverse(f)) return std::pair{f, *g};
  return std::nullopt;
}

// ---------------------------------------------------------------- ExplicitBase

namespace {

template <class T, class Key>
void sort_by(std::vector<T>& v, Key key) {
  std::sort(v.begin(), v.end(), [&](const T& l, const T& r) { return key(l) < key(r); });
}

}  // namespace

ExplicitBase::ExplicitBase(ExplicitBaseSpec spec) : spec_(std::move(spec)) {
  std::sort(spec_.objects.begin(), spec_.objects.end());
  if (std::adjacent_find(spec_.objects.begin(), spec_.objects.end()) != spec_.objects.end())
    throw MalformedInstance("duplicate object name");
  sort_by(spec_.arrows, [](const auto& a) { return a.name; });
  for (std::size_t i = 1; i < spec_.arrows.size(); ++i)
    if (spec_.arrows[i].name == spec_.arrows[i - 1].name)
      throw MalformedInstance("duplicate arrow name " + spec_.arrows[i].name);

  const std::size_t n = spec_.objects.size();
  for (std::uint32_t i = 0; i < n; ++i) objs_.push_back(ObjId{i});
  auto obj = [&](const std::string& name) {
    auto o = find_object(name);
    if (!o) throw MalformedInstance("unknown object " + name);
    return *o;
  };
  for (std::size_t i = 0; i < spec_.arrows.size(); ++i) {
    const auto& a = spec_.arrows[i];
    arrs_.push_back(ArrId{obj(a.dom), obj(a.cod), i});
  }
  auto arr = [&](const std::string& name) {
    auto f = parse_arrow(name);
    if (!f) throw MalformedInstance("unknown arrow " + name);
    return *f;
  };

  ids_.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    auto it = spec_.identity.find(spec_.objects[i]);
    if (it == spec_.identity.end())
      throw MalformedInstance("no identity for object " + spec_.objects[i]);
    ArrId id = arr(it->second);
    if (id.dom.value != i || id.cod.value != i)
      throw MalformedInstance("identity " + it->second + " is not an endo-arrow of " +
                              spec_.objects[i]);
    ids_[i] = id;
  }
  for (const auto& [name, _] : spec_.identity) obj(name);

  for (auto& t : spec_.compose) {
    ArrId g = arr(t[0]), f = arr(t[1]), gf = arr(t[2]);
    if (f.cod != g.dom)
      throw MalformedInstance("composite " + t[0] + " o " + t[1] + " of non-composable arrows");
    if (gf.dom != f.dom || gf.cod != g.cod)
      throw MalformedInstance("composite " + t[2] + " has the wrong domain or codomain");
    auto [it, fresh] = comp_.emplace(std::pair{g.code, f.code}, gf.code);
    if (!fresh && it->second != gf.code)
      throw MalformedInstance("composite " + t[0] + " o " + t[1] + " given twice");
  }
  std::sort(spec_.compose.begin(), spec_.compose.end());
  // Composites with identities default to the other factor.
  for (const ArrId& f : arrs_) {
    comp_.emplace(std::pair{ids_[f.cod.value].code, f.code}, f.code);
    comp_.emplace(std::pair{f.code, ids_[f.dom.value].code}, f.code);
  }

  for (const auto& p : spec_.products) {
    ProductEntry e{obj(p.object), arr(p.first), arr(p.second)};
    ObjId a = obj(p.a), b = obj(p.b);
    if (e.first.dom != e.object || e.first.cod != a || e.second.dom != e.object ||
        e.second.cod != b)
      throw MalformedInstance("projections of product " + p.a + " x " + p.b +
                              " have the wrong shape");
    if (!prod_.emplace(std::pair{a.value, b.value}, e).second)
      throw MalformedInstance("product " + p.a + " x " + p.b + " given twice");
  }
  sort_by(spec_.products, [](const auto& p) { return std::pair{p.a, p.b}; });
  terminal_ = obj(spec_.terminal);

  hom_.assign(n, std::vector<std::vector<ArrId>>(n));
  for (const ArrId& f : arrs_) hom_[f.dom.value][f.cod.value].push_back(f);
}

std::optional<ObjId> ExplicitBase::find_object(std::string_view name) const {
  auto it = std::lower_bound(spec_.objects.begin(), spec_.objects.end(), name);
  if (it == spec_.objects.end() || *it != name) return std::nullopt;
  return ObjId{static_cast<std::uint32_t>(it - spec_.objects.begin())};
}

std::optional<ArrId> ExplicitBase::parse_arrow(std::string_view name) const {
  auto it = std::lower_bound(spec_.arrows.begin(), spec_.arrows.end(), name,
                             [](const auto& a, std::string_view n) { return a.name < n; });
  if (it == spec_.arrows.end() || it->name != name) return std::nullopt;
  return arrs_.at(static_cast<std::size_t>(it - spec_.arrows.begin()));
}

std::optional<ArrId> ExplicitBase::try_compose(const ArrId& g, const ArrId& f) const {
  if (f.cod != g.dom) return std::nullopt;
  auto it = comp_.find({g.code, f.code});
  if (it == comp_.end()) return std::nullopt;
  return arrs_.at(it->second);
}

const std::vector<ArrId>& ExplicitBase::hom(ObjId a, ObjId b) const {
  return hom_.at(a.value).at(b.value);
}

ProductEntry ExplicitBase::product(ObjId a, ObjId b) const {
  auto it = prod_.find({a.value, b.value});
  if (it == prod_.end())
    throw MalformedInstance("no chosen product " + object_name(a) + " x " + object_name(b));
  return it->second;
}

ArrId ExplicitBase::pair(const ArrId& f, const ArrId& g) const {
  if (f.dom != g.dom) throw MalformedInstance("pairing arrows with different domains");
  const ProductEntry p = product(f.cod, g.cod);
  std::optional<ArrId> found;
  for (const ArrId& h : hom(f.dom, p.object)) {
    if (compose(p.first, h) != f || compose(p.second, h) != g) continue;
    if (found) throw MalformedInstance("not a product: two mediators for <" + arrow_name(f) +
                                       ", " + arrow_name(g) + ">");
    found = h;
  }
  if (!found)
    throw MalformedInstance("not a product: no mediator for <" + arrow_name(f) + ", " +
                            arrow_name(g) + ">");
  return *found;
}

std::string ExplicitBase::window() const {
  return "explicit, " + std::to_string(objs_.size()) + " objects, " +
         std::to_string(arrs_.size()) + " arrows";
}

json ExplicitBase::presentation() const {
  json arrows = json::object();
  for (const auto& a : spec_.arrows) arrows[a.name] = {{"dom", a.dom}, {"cod", a.cod}};
  json compose = json::array();
  for (const auto& t : spec_.compose) {
    ArrId g = *parse_arrow(t[0]), f = *parse_arrow(t[1]);
    // Identity composites are implied.
    if (g == ids_[g.dom.value] || f == ids_[f.dom.value]) continue;
    compose.push_back({t[0], t[1], t[2]});
  }
  json products = json::array();
  for (const auto& p : spec_.products)
    products.push_back({p.a, p.b, p.object, p.first, p.second});
  return {{"presentation", "explicit"},
          {"objects", spec_.objects},
          {"arrows", arrows},
          {"identity", spec_.identity},
          {"compose", compose},
          {"products", products},
          {"terminal", spec_.terminal}};
}

// ---------------------------------------------------------------- ThinBase

ThinBase::ThinBase(ExplicitBaseSpec spec, std::shared_ptr<const FinPoset> order)
    : ExplicitBase(std::move(spec)), order_(std::move(order)) {
  obj_of_elem_.resize(order_->size());
  elem_of_obj_.resize(order_->size());
  for (Elem e = 0; e < order_->size(); ++e) {
    ObjId o = *find_object(order_->label(e));
    obj_of_elem_[e] = o.value;
    elem_of_obj_[o.value] = e;
  }
}

std::optional<ArrId> ThinBase::arrow_between(ObjId a, ObjId b) const {
  const auto& h = hom(a, b);
  if (h.empty()) return std::nullopt;
  return h.front();
}

std::optional<PullbackSquare> ThinBase::pullback(const ArrId& f, const ArrId& h) const {
  if (f.cod != h.cod) throw MalformedInstance("pullback of arrows with different codomains");
  const auto& ops = order_->ops();
  const ObjId apex = object_of(ops.meet_of(element_of(h.dom), element_of(f.dom)));
  return PullbackSquare{apex, *arrow_between(apex, h.dom), *arrow_between(apex, f.dom)};
}

std::optional<ArrId> ThinBase::inverse(const ArrId& f) const {
  if (f.dom == f.cod) return f;
  return std::nullopt;
}

json ThinBase::presentation() const {
  json order = json::array();
  for (auto [a, b] : order_->covers()) order.push_back({order_->label(a), order_->label(b)});
  return {{"presentation", "thin"}, {"elements", order_->labels()}, {"order", order}};
}

std::shared_ptr<const ThinBase> thin_base(const FinPoset& lattice) {
  const auto& ops = lattice.ops();
  if (!ops.meet || !ops.top) throw MalformedInstance("thin base needs binary meets and a top");
  std::set<std::string> seen(lattice.labels().begin(), lattice.labels().end());
  if (seen.size() != lattice.size()) throw MalformedInstance("duplicate element label");

  ExplicitBaseSpec spec;
  const std::size_t n = lattice.size();
  auto name = [&](Elem u, Elem v) { return lattice.label(u) + "-" + lattice.label(v); };
  for (Elem u = 0; u < n; ++u) {
    spec.objects.push_back(lattice.label(u));
    spec.identity[lattice.label(u)] = name(u, u);
    for (Elem v = 0; v < n; ++v)
      if (lattice.leq(u, v)) spec.arrows.push_back({name(u, v), lattice.label(u), lattice.label(v)});
  }
  for (Elem u = 0; u < n; ++u)
    for (Elem v = 0; v < n; ++v)
      for (Elem w = 0; w < n; ++w)
        if (u != v && v != w && lattice.leq(u, v) && lattice.leq(v, w))
          spec.compose.push_back({name(v, w), name(u, v), name(u, w)});
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) {
      Elem m = ops.meet_of(a, b);
      spec.products.push_back(
          {lattice.label(a), lattice.label(b), lattice.label(m), name(m, a), name(m, b)});
    }
  spec.terminal = lattice.label(*ops.top);
  return std::make_shared<const ThinBase>(std::move(spec),
                                          std::make_shared<const FinPoset>(lattice));
}

// ---------------------------------------------------------------- FiniteSpace

bool FiniteSpace::is_open(std::uint64_t mask) const {
  return std::binary_search(opens.begin(), opens.end(), mask);
}

void FiniteSpace::check_topology() const {
  if (points.size() > 12) throw MalformedInstance("space " + name + " has more than 12 points");
  const std::uint64_t all = points.empty() ? 0 : (std::uint64_t(1) << points.size()) - 1;
  if (!is_open(0)) throw MalformedInstance("space " + name + ": empty set is not open");
  if (!is_open(all)) throw MalformedInstance("space " + name + ": whole space is not open");
  for (std::uint64_t u : opens) {
    if (u & ~all) throw MalformedInstance("space " + name + ": open set outside the points");
    for (std::uint64_t v : opens)
      if (!is_open(u | v) || !is_open(u & v))
        throw MalformedInstance("space " + name + ": opens not closed under union and meet");
  }
}

FiniteSpace FiniteSpace::discrete(std::size_t n) {
  FiniteSpace s;
  s.name = std::to_string(n);
  for (std::size_t i = 0; i < n; ++i) s.points.push_back(std::to_string(i));
  for (std::uint64_t m = 0; m < (std::uint64_t(1) << n); ++m) s.opens.push_back(m);
  return s;
}

// ---------------------------------------------------------------- SpaceWindow

namespace {

bool is_discrete(const FiniteSpace& s) {
  return s.opens.size() == (std::size_t(1) << s.points.size());
}

std::string paren(const std::string& name) {
  return name.find('x') != std::string::npos || name.find('|') != std::string::npos
             ? "(" + name + ")"
             : name;
}

std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= b;
  return r;
}

// Re-sort the points of a space by label and rewrite its opens accordingly.
FiniteSpace normalized(FiniteSpace s) {
  std::vector<std::size_t> perm(s.points.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](auto l, auto r) { return s.points[l] < s.points[r]; });
  std::vector<std::size_t> where(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) where[perm[i]] = i;
  std::vector<std::string> pts;
  for (auto i : perm) pts.push_back(s.points[i]);
  std::vector<std::uint64_t> opens;
  for (std::uint64_t u : s.opens) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < where.size(); ++i)
      if (u >> i & 1) v |= std::uint64_t(1) << where[i];
    opens.push_back(v);
  }
  std::sort(opens.begin(), opens.end());
  opens.erase(std::unique(opens.begin(), opens.end()), opens.end());
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i] == pts[i - 1]) throw MalformedInstance("space " + s.name + ": duplicate point");
  s.points = std::move(pts);
  s.opens = std::move(opens);
  return s;
}

}  // namespace

FiniteSpace SpaceWindow::product_space(const FiniteSpace& a, const FiniteSpace& b) const {
  FiniteSpace p;
  p.name = paren(a.name) + "x" + paren(b.name);
  const std::size_t nb = b.size();
  for (const auto& x : a.points)
    for (const auto& y : b.points) p.points.push_back("(" + x + "," + y + ")");
  std::set<std::uint64_t> opens{0};
  for (std::uint64_t u : a.opens)
    for (std::uint64_t v : b.opens) {
      std::uint64_t box = 0;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (u >> i & 1)
          for (std::size_t j = 0; j < nb; ++j)
            if (v >> j & 1) box |= std::uint64_t(1) << (i * nb + j);
      if (box == 0) continue;
      std::vector<std::uint64_t> add;
      for (std::uint64_t o : opens) add.push_back(o | box);
      opens.insert(add.begin(), add.end());
    }
  p.opens.assign(opens.begin(), opens.end());
  return p;
}

FiniteSpace SpaceWindow::subspace(const FiniteSpace& a, std::uint64_t mask) const {
  FiniteSpace s;
  std::ostringstream name;
  name << paren(a.name) << "|{";
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (mask >> i & 1) {
      name << (idx.empty() ? "" : ",") << i;
      idx.push_back(i);
      s.points.push_back(a.points[i]);
    }
  name << "}";
  s.name = name.str();
  std::set<std::uint64_t> opens;
  for (std::uint64_t u : a.opens) {
    std::uint64_t v = 0;
    for (std::size_t k = 0; k < idx.size(); ++k)
      if (u >> idx[k] & 1) v |= std::uint64_t(1) << k;
    opens.insert(v);
  }
  s.opens.assign(opens.begin(), opens.end());
  return s;
}

std::optional<ObjId> SpaceWindow::lookup(std::size_t n, const std::vector<std::uint64_t>& opens) const {
  auto it = index_.find({n, opens});
  if (it == index_.end()) return std::nullopt;
  return ObjId{it->second};
}

ObjId SpaceWindow::intern(FiniteSpace s) {
  if (auto o = lookup(s.size(), s.opens)) return *o;
  if (is_discrete(s)) {
    const std::size_t n = s.size();
    s = FiniteSpace::discrete(n);
  }
  const auto id = static_cast<std::uint32_t>(spaces_.size());
  index_.emplace(std::pair{s.size(), s.opens}, id);
  spaces_.push_back(std::move(s));
  all_.push_back(ObjId{id});
  return ObjId{id};
}

SpaceWindow::SpaceWindow(SpaceWindowSpec spec) : spec_(std::move(spec)) {
  if (spec_.cap > 12) throw MalformedInstance("space window cap above 12 points");
  for (auto& s : spec_.spaces) {
    s = normalized(std::move(s));
    s.check_topology();
  }
  sort_by(spec_.spaces, [](const FiniteSpace& s) { return s.name; });
  for (std::size_t i = 1; i < spec_.spaces.size(); ++i)
    if (spec_.spaces[i].name == spec_.spaces[i - 1].name)
      throw MalformedInstance("duplicate space name " + spec_.spaces[i].name);
  std::sort(spec_.power_domain.begin(), spec_.power_domain.end());

  auto add_window = [&](ObjId o) {
    if (std::find(window_.begin(), window_.end(), o) == window_.end()) window_.push_back(o);
  };
  add_window(intern(FiniteSpace::discrete(0)));
  add_window(intern(FiniteSpace::discrete(1)));
  for (const auto& s : spec_.spaces) {
    if (s.size() > spec_.cap) throw WindowExceeded("space " + s.name + " exceeds the window cap");
    ObjId o = intern(s);
    // Declared names take priority over generated ones.
    if (!is_discrete(s) || s.name != std::to_string(s.size())) spaces_[o.value].name = s.name;
    spaces_[o.value].points = s.points;
    add_window(o);
  }

  auto add_subspaces = [&] {
    const std::size_t n = spaces_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const FiniteSpace base = spaces_[i];
      for (std::uint64_t m = 0; m < (std::uint64_t(1) << base.size()); ++m)
        intern(subspace(base, m));
    }
  };
  add_subspaces();
  for (bool grew = true; grew;) {
    grew = false;
    const std::size_t n = spaces_.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (spaces_[i].size() * spaces_[j].size() > spec_.cap) continue;
        const std::size_t before = spaces_.size();
        intern(product_space(spaces_[i], spaces_[j]));
        grew = grew || spaces_.size() != before;
      }
  }
  add_subspaces();

}

std::vector<ObjId> SpaceWindow::power_domain() const {
  if (spec_.power_domain.empty()) return window_;
  std::vector<ObjId> out;
  for (ObjId o : window_)
    if (std::binary_search(spec_.power_domain.begin(), spec_.power_domain.end(),
                           spaces_[o.value].name))
      out.push_back(o);
  return out;
}

std::optional<ObjId> SpaceWindow::find_object(std::string_view name) const {
  for (std::uint32_t i = 0; i < spaces_.size(); ++i)
    if (spaces_[i].name == name) return ObjId{i};
  return std::nullopt;
}

std::vector<std::uint32_t> SpaceWindow::table(const ArrId& f) const {
  const std::size_t n = spaces_.at(f.dom.value).size();
  const std::uint64_t k = spaces_.at(f.cod.value).size();
  std::vector<std::uint32_t> t(n);
  std::uint64_t code = f.code;
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = static_cast<std::uint32_t>(code % k);
    code /= k;
  }
  return t;
}

ArrId SpaceWindow::arrow_from_table(ObjId dom, ObjId cod, const std::vector<std::uint32_t>& t) const {
  const std::uint64_t k = spaces_.at(cod.value).size();
  std::uint64_t code = 0;
  for (std::size_t i = t.size(); i-- > 0;) code = code * k + t[i];
  return ArrId{dom, cod, code};
}

std::uint64_t SpaceWindow::preimage(const ArrId& f, std::uint64_t mask) const {
  std::uint64_t out = 0;
  const auto t = table(f);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (mask >> t[i] & 1) out |= std::uint64_t(1) << i;
  return out;
}

std::string SpaceWindow::arrow_name(const ArrId& f) const {
  std::string s = object_name(f.dom) + "->" + object_name(f.cod) + ":";
  const auto t = table(f);
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s;
}

std::optional<ArrId> SpaceWindow::parse_arrow(std::string_view name) const {
  const auto colon = name.rfind(':');
  if (colon == std::string_view::npos) return std::nullopt;
  const auto arrow = name.substr(0, colon).find("->");
  if (arrow == std::string_view::npos) return std::nullopt;
  auto dom = find_object(name.substr(0, arrow));
  auto cod = find_object(name.substr(arrow + 2, colon - arrow - 2));
  if (!dom || !cod) return std::nullopt;
  std::vector<std::uint32_t> t;
  std::string_view rest = name.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string tok(rest.substr(0, comma));
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      return std::nullopt;
    t.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    if (t.back() >= space(*cod).size()) return std::nullopt;
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  if (t.size() != space(*dom).size()) return std::nullopt;
  ArrId f = arrow_from_table(*dom, *cod, t);
  for (std::uint64_t u : space(*cod).opens)
    if (!space(*dom).is_open(preimage(f, u))) return std::nullopt;
  return f;
}

ArrId SpaceWindow::identity(ObjId a) const {
  std::vector<std::uint32_t> t(space(a).size());
  std::iota(t.begin(), t.end(), 0);
  return arrow_from_table(a, a, t);
}

std::optional<ArrId> SpaceWindow::try_compose(const ArrId& g, const ArrId& f) const {
  if (f.cod != g.dom) return std::nullopt;
  const auto tf = table(f), tg = table(g);
  std::vector<std::uint32_t> t(tf.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = tg[tf[i]];
  return arrow_from_table(f.dom, g.cod, t);
}

const std::vector<ArrId>& SpaceWindow::hom(ObjId a, ObjId b) const {
  std::lock_guard lock(hom_mutex_);
  auto& slot = homs_[{a.value, b.value}];
  if (slot) return *slot;
  const FiniteSpace& sa = space(a);
  const FiniteSpace& sb = space(b);
  if (sb.size() > 1 && std::log2(double(sb.size())) * double(sa.size()) > 20.0)
    throw WindowExceeded("hom(" + sa.name + ", " + sb.name + ") exceeds 2^20 functions");
  const std::uint64_t total = ipow(sb.size(), sa.size());
  auto out = std::make_unique<std::vector<ArrId>>();
  std::vector<std::uint32_t> t(sa.size(), 0);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (std::size_t i = 0; i < t.size(); ++i) {
      t[i] = static_cast<std::uint32_t>(c % sb.size());
      c /= sb.size();
    }
    bool continuous = true;
    for (std::uint64_t u : sb.opens) {
      std::uint64_t pre = 0;
      for (std::size_t i = 0; i < t.size(); ++i)
        if (u >> t[i] & 1) pre |= std::uint64_t(1) << i;
      if (!sa.is_open(pre)) {
        continuous = false;
        break;
      }
    }
    if (continuous) out->push_back(ArrId{a, b, code});
  }
  slot = std::move(out);
  return *slot;
}

ProductEntry SpaceWindow::product(ObjId a, ObjId b) const {
  {
    std::lock_guard lock(product_mutex_);
    auto it = products_.find({a.value, b.value});
    if (it != products_.end()) return it->second;
  }
  const FiniteSpace& sa = space(a);
  const FiniteSpace& sb = space(b);
  std::optional<ObjId> o;
  if (sa.size() * sb.size() <= spec_.cap) {
    const FiniteSpace p = product_space(sa, sb);
    o = lookup(p.size(), p.opens);
  }
  if (!o)
    throw WindowExceeded("product " + object_name(a) + " x " + object_name(b) +
                         " is outside the window");
  const auto nb = static_cast<std::uint32_t>(sb.size());
  std::vector<std::uint32_t> t1(sa.size() * nb), t2(sa.size() * nb);
  for (std::uint32_t k = 0; k < t1.size(); ++k) {
    t1[k] = k / nb;
    t2[k] = k % nb;
  }
  ProductEntry e{*o, arrow_from_table(*o, a, t1), arrow_from_table(*o, b, t2)};
  std::lock_guard lock(product_mutex_);
  products_.emplace(std::pair{a.value, b.value}, e);
  return e;
}

ArrId SpaceWindow::pair(const ArrId& f, const ArrId& g) const {
  if (f.dom != g.dom) throw MalformedInstance("pairing arrows with different domains");
  const ProductEntry p = product(f.cod, g.cod);
  const auto tf = table(f), tg = table(g);
  const auto nb = static_cast<std::uint32_t>(space(g.cod).size());
  std::vector<std::uint32_t> t(tf.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = tf[i] * nb + tg[i];
  return arrow_from_table(f.dom, p.object, t);
}

std::optional<PullbackSquare> SpaceWindow::pullback(const ArrId& f, const ArrId& h) const {
  if (f.cod != h.cod) throw MalformedInstance("pullback of arrows with different codomains");
  const ProductEntry xa = product(h.dom, f.dom);
  const auto tf = table(f), th = table(h);
  const auto na = static_cast<std::uint32_t>(tf.size());
  std::uint64_t mask = 0;
  for (std::uint32_t x = 0; x < th.size(); ++x)
    for (std::uint32_t a = 0; a < na; ++a)
      if (th[x] == tf[a]) mask |= std::uint64_t(1) << (x * na + a);
  const FiniteSpace sub = subspace(space(xa.object), mask);
  auto apex = lookup(sub.size(), sub.opens);
  if (!apex) throw WindowExceeded("pullback apex " + sub.name + " is outside the window");
  std::vector<std::uint32_t> tp, tq;
  for (std::uint32_t k = 0; k < th.size() * na; ++k)
    if (mask >> k & 1) {
      tp.push_back(k / na);
      tq.push_back(k % na);
    }
  return PullbackSquare{*apex, arrow_from_table(*apex, h.dom, tp),
                        arrow_from_table(*apex, f.dom, tq)};
}

std::optional<ArrId> SpaceWindow::inverse(const ArrId& f) const {
  const auto t = table(f);
  if (t.size() != space(f.cod).size()) return std::nullopt;
  std::vector<std::uint32_t> inv(t.size(), UINT32_MAX);
  for (std::uint32_t i = 0; i < t.size(); ++i) {
    if (inv[t[i]] != UINT32_MAX) return std::nullopt;
    inv[t[i]] = i;
  }
  ArrId g = arrow_from_table(f.cod, f.dom, inv);
  for (std::uint64_t u : space(f.dom).opens)
    if (!space(f.cod).is_open(preimage(g, u))) return std::nullopt;
  return g;
}

std::optional<std::pair<ArrId, ArrId>> SpaceWindow::isomorphism(ObjId a, ObjId b) const {
  const FiniteSpace& sa = space(a);
  const FiniteSpace& sb = space(b);
  if (sa.size() != sb.size() || sa.opens.size() != sb.opens.size()) return std::nullopt;
  std::vector<std::uint32_t> t(sa.size());
  std::iota(t.begin(), t.end(), 0);
  do {
    ArrId f = arrow_from_table(a, b, t);
    bool continuous = true;
    for (std::uint64_t u : sb.opens)
      if (!sa.is_open(preimage(f, u))) {
        continuous = false;
        break;
      }
    // A continuous bijection between spaces with equally many opens is a
    // homeomorphism: preimage is injective on opens.
    if (continuous) return std::pair{f, *inverse(f)};
  } while (std::next_permutation(t.begin(), t.end()));
  return std::nullopt;
}

std::string SpaceWindow::window() const {
  std::string w = "spaces W={";
  for (std::size_t i = 0; i < window_.size(); ++i)
    w += (i ? "," : "") + object_name(window_[i]);
  return w + "} M=" + std::to_string(all_.size()) + " cap=" + std::to_string(spec_.cap);
}

json SpaceWindow::presentation() const {
  json spaces = json::array();
  for (const auto& s : spec_.spaces) {
    json opens = json::array();
    for (std::uint64_t u : s.opens) {
      json o = json::array();
      for (std::size_t i = 0; i < s.size(); ++i)
        if (u >> i & 1) o.push_back(s.points[i]);
      opens.push_back(o);
    }
    spaces.push_back({{"name", s.name}, {"points", s.points}, {"opens", opens}});
  }
  json j = {{"presentation", "spaces"}, {"spaces", spaces}, {"cap", spec_.cap}};
  if (!spec_.power_domain.empty()) j["power_domain"] = spec_.power_domain;
  return j;
}

// ---------------------------------------------------------------- checks

Verdict validate_category(const Base& c) {
  const auto& w = c.objects();
  for (ObjId a : w)
    for (ObjId b : w)
      for (const ArrId& f : c.hom(a, b)) {
        if (c.compose(c.identity(b), f) != f)
          return Verdict::refuted("left identity law fails",
                                  {{"law", "left_identity"}, {"f", c.arrow_name(f)}});
        if (c.compose(f, c.identity(a)) != f)
          return Verdict::refuted("right identity law fails",
                                  {{"law", "right_identity"}, {"f", c.arrow_name(f)}});
      }
  for (ObjId a : w)
    for (ObjId b : w)
      for (const ArrId& f : c.hom(a, b))
        for (ObjId cc : w)
          for (const ArrId& g : c.hom(b, cc)) {
            const ArrId gf = c.compose(g, f);
            for (ObjId d : w)
              for (const ArrId& h : c.hom(cc, d)) {
                const ArrId l = c.compose(h, gf);
                const ArrId r = c.compose(c.compose(h, g), f);
                if (l != r)
                  return Verdict::refuted(
                      "associativity fails",
                      {{"law", "associativity"}, {"h", c.arrow_name(h)}, {"g", c.arrow_name(g)},
                       {"f", c.arrow_name(f)}, {"left", c.arrow_name(l)},
                       {"right", c.arrow_name(r)}});
              }
          }
  return Verdict::holds(c.window());
}

Verdict validate_products(const Base& c) {
  const auto& w = c.objects();
  const ObjId one = c.terminal();
  for (ObjId x : w)
    if (c.hom(x, one).size() != 1)
      return Verdict::refuted("terminal object is not terminal",
                              {{"law", "terminal"}, {"object", c.object_name(x)},
                               {"arrows", c.hom(x, one).size()}});
  for (ObjId a : w)
    for (ObjId b : w) {
      const ProductEntry p = c.product(a, b);
      for (ObjId x : w)
        for (const ArrId& f : c.hom(x, a))
          for (const ArrId& g : c.hom(x, b)) {
            int count = 0;
            for (const ArrId& m : c.hom(x, p.object))
              if (c.compose(p.first, m) == f && c.compose(p.second, m) == g) ++count;
            if (count != 1)
              return Verdict::refuted(
                  "pairing is not unique",
                  {{"law", "product"}, {"a", c.object_name(a)}, {"b", c.object_name(b)},
                   {"f", c.arrow_name(f)}, {"g", c.arrow_name(g)}, {"mediators", count}});
          }
    }
  return Verdict::holds(c.window());
}

Verdict is_monic(const Base& c, const ArrId& f) {
  for (ObjId z : c.objects()) {
    const auto& h = c.hom(z, f.dom);
    for (std::size_t i = 0; i < h.size(); ++i)
      for (std::size_t j = i + 1; j < h.size(); ++j)
        if (c.compose(f, h[i]) == c.compose(f, h[j]))
          return Verdict::refuted("not monic", {{"law", "monic"},
                                                {"f", c.arrow_name(f)},
                                                {"g", c.arrow_name(h[i])},
                                                {"h", c.arrow_name(h[j])}});
  }
  return Verdict::holds(c.window());
}

bool is_iso(const Base& c, const ArrId& f) { return c.inverse(f).has_value(); }

Verdict is_stable_initial(const Base& c, ObjId a) {
  for (ObjId x : c.objects()) {
    const auto n = c.hom(a, x).size();
    if (n != 1)
      return Verdict::refuted("not initial", {{"law", "initial"},
                                              {"object", c.object_name(a)},
                                              {"target", c.object_name(x)},
                                              {"arrows", n}});
  }
  for (ObjId x : c.objects()) {
    const ObjId p = c.product(x, a).object;
    if (!c.isomorphism(p, a))
      return Verdict::refuted("product with the object is not isomorphic to it",
                              {{"law", "stable_initial"},
                               {"object", c.object_name(a)},
                               {"factor", c.object_name(x)}});
  }
  return Verdict::holds(c.window());
}

std::optional<ObjId> stable_initial(const Base& c) {
  for (ObjId a : c.objects())
    if (is_stable_initial(c, a).ok()) return a;
  return std::nullopt;
}

bool ArrowClass::contains(const Base& c, const ArrId& g) const {
  for (const ArrId& m : members) {
    if (m.cod != g.cod) continue;
    if (m == g) return true;
    if (!c.isomorphism(g.dom, m.dom)) continue;
    for (const ArrId& i : c.hom(g.dom, m.dom))
      if (c.compose(m, i) == g && is_iso(c, i)) return true;
  }
  return false;
}

ArrowClass projection_class(const Base& c) {
  ArrowClass cls;
  cls.name = "Prj";
  std::set<ArrId> members;
  for (ObjId a : c.objects())
    for (ObjId b : c.objects()) {
      const ProductEntry p = c.product(a, b);
      members.insert(p.first);
      members.insert(p.second);
    }
  cls.members.assign(members.begin(), members.end());
  std::set<ArrId> extra;
  for (ObjId x : c.objects())
    for (ObjId a : c.objects())
      for (const ArrId& g : c.hom(x, a))
        if (!members.count(g) && cls.contains(c, g)) extra.insert(g);
  members.insert(extra.begin(), extra.end());
  cls.members.assign(members.begin(), members.end());
  return cls;
}

Verdict is_pullback_stable(const Base& c, const ArrowClass& cls) {
  for (const ArrId& f : cls.members)
    for (ObjId x : c.objects())
      for (const ArrId& h : c.hom(x, f.cod)) {
        auto sq = c.pullback(f, h);
        if (!sq) continue;
        if (!cls.contains(c, sq->pulled))
          return Verdict::refuted("pullback leaves the class",
                                  {{"law", "pullback_stable"},
                                   {"class", cls.name},
                                   {"f", c.arrow_name(f)},
                                   {"h", c.arrow_name(h)},
                                   {"pulled", c.arrow_name(sq->pulled)}});
      }
  return Verdict::holds(c.window());
}

std::optional<ArrId> factor_through(const Base& c, const ArrId& f, const ArrId& m) {
  if (f.cod != m.cod) return std::nullopt;
  for (const ArrId& k : c.hom(f.dom, m.dom))
    if (c.compose(m, k) == f) return k;
  return std::nullopt;
}

SubobjectPoset subobject_poset(const Base& c, ObjId a) {
  std::vector<ArrId> reps;
  for (ObjId y : c.objects())
    for (const ArrId& m : c.hom(y, a)) {
      if (!is_monic(c, m).ok()) continue;
      bool known = false;
      for (const ArrId& r : reps)
        if (factor_through(c, m, r) && factor_through(c, r, m)) {
          known = true;
          break;
        }
      if (!known) reps.push_back(m);
    }
  std::vector<std::string> labels;
  for (const ArrId& r : reps) labels.push_back(c.arrow_name(r));
  FinPoset order = FinPoset::from_relation(
      reps.size(), [&](Elem i, Elem j) { return factor_through(c, reps[i], reps[j]).has_value(); },
      labels);
  return SubobjectPoset{std::move(order), std::move(reps)};
}

}  // namespace tripos
