#include "tripos/io.hpp"

#include <cctype>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "tripos/catalog.hpp"

namespace tripos {

namespace {

std::string escape(const std::string& token) {
  std::string out;
  for (char ch : token) {
    if (ch == '~') out += "~0";
    else if (ch == '/') out += "~1";
    else out += ch;
  }
  return out;
}

std::string ptr(const std::string& base, const std::string& token) {
  return base + "/" + escape(token);
}
std::string ptr(const std::string& base, std::size_t i) { return base + "/" + std::to_string(i); }

const json& field(const json& obj, const std::string& at, const char* key) {
  if (!obj.is_object()) throw ParseError(at, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(at, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string str(const json& j, const std::string& at) {
  if (!j.is_string()) throw ParseError(at, "expected a string");
  return j.get<std::string>();
}

const json& arr(const json& j, const std::string& at) {
  if (!j.is_array()) throw ParseError(at, "expected an array");
  return j;
}

const json& obj(const json& j, const std::string& at) {
  if (!j.is_object()) throw ParseError(at, "expected an object");
  return j;
}

// ---------------------------------------------------------------- base

std::shared_ptr<const Base> parse_explicit(const json& b) {
  ExplicitBaseSpec spec;
  std::set<std::string> objects;
  const json& objs = arr(field(b, "/base", "objects"), "/base/objects");
  for (std::size_t i = 0; i < objs.size(); ++i) {
    const std::string o = str(objs[i], ptr("/base/objects", i));
    if (!objects.insert(o).second) throw ParseError(ptr("/base/objects", i), "duplicate object " + o);
    spec.objects.push_back(o);
  }
  auto need_object = [&](const json& j, const std::string& at) {
    const std::string o = str(j, at);
    if (!objects.count(o)) throw ParseError(at, "undeclared object " + o);
    return o;
  };
  std::map<std::string, std::pair<std::string, std::string>> arrows;
  for (const auto& [name, a] : obj(field(b, "/base", "arrows"), "/base/arrows").items()) {
    const std::string at = ptr("/base/arrows", name);
    const std::string dom = need_object(field(a, at, "dom"), at + "/dom");
    const std::string cod = need_object(field(a, at, "cod"), at + "/cod");
    arrows[name] = {dom, cod};
    spec.arrows.push_back({name, dom, cod});
  }
  auto need_arrow = [&](const json& j, const std::string& at) {
    const std::string f = str(j, at);
    if (!arrows.count(f)) throw ParseError(at, "undeclared arrow " + f);
    return f;
  };
  for (const auto& [o, f] : obj(field(b, "/base", "identity"), "/base/identity").items()) {
    const std::string at = ptr("/base/identity", o);
    if (!objects.count(o)) throw ParseError(at, "undeclared object " + o);
    const std::string id = need_arrow(f, at);
    if (arrows[id].first != o || arrows[id].second != o)
      throw ParseError(at, "identity " + id + " is not an endo-arrow of " + o);
    spec.identity[o] = id;
  }
  if (b.contains("compose")) {
    const json& c = arr(b["compose"], "/base/compose");
    for (std::size_t i = 0; i < c.size(); ++i) {
      const std::string at = ptr("/base/compose", i);
      if (!arr(c[i], at).size() || c[i].size() != 3) throw ParseError(at, "expected [g, f, g∘f]");
      std::array<std::string, 3> t;
      for (std::size_t k = 0; k < 3; ++k) t[k] = need_arrow(c[i][k], ptr(at, k));
      if (arrows[t[1]].second != arrows[t[0]].first)
        throw ParseError(at, "cod " + t[1] + " differs from dom " + t[0]);
      if (arrows[t[2]].first != arrows[t[1]].first || arrows[t[2]].second != arrows[t[0]].second)
        throw ParseError(ptr(at, 2), "composite " + t[2] + " has the wrong dom or cod");
      spec.compose.push_back(t);
    }
  }
  const json& ps = arr(field(b, "/base", "products"), "/base/products");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::string at = ptr("/base/products", i);
    if (!arr(ps[i], at).size() || ps[i].size() != 5) throw ParseError(at, "expected [A, B, AxB, p1, p2]");
    spec.products.push_back({need_object(ps[i][0], ptr(at, 0)), need_object(ps[i][1], ptr(at, 1)),
                             need_object(ps[i][2], ptr(at, 2)), need_arrow(ps[i][3], ptr(at, 3)),
                             need_arrow(ps[i][4], ptr(at, 4))});
  }
  spec.terminal = need_object(field(b, "/base", "terminal"), "/base/terminal");
  try {
    return std::make_shared<const ExplicitBase>(std::move(spec));
  } catch (const MalformedInstance& e) {
    throw ParseError("/base", e.what());
  }
}

// Elements plus order pairs, as used by thin bases and explicit fibers.
FinPoset parse_order(const json& elements, const json& order, const std::string& at) {
  std::vector<std::string> labels;
  std::map<std::string, Elem> index;
  const json& els = arr(elements, at + "/elements");
  for (std::size_t i = 0; i < els.size(); ++i) {
    const std::string l = str(els[i], ptr(at + "/elements", i));
    if (!index.emplace(l, static_cast<Elem>(i)).second)
      throw ParseError(ptr(at + "/elements", i), "duplicate element " + l);
    labels.push_back(l);
  }
  std::vector<std::pair<Elem, Elem>> pairs;
  const json& ord = arr(order, at + "/order");
  for (std::size_t i = 0; i < ord.size(); ++i) {
    const std::string pat = ptr(at + "/order", i);
    if (!arr(ord[i], pat).size() || ord[i].size() != 2) throw ParseError(pat, "expected [x, y]");
    Elem xy[2];
    for (std::size_t k = 0; k < 2; ++k) {
      const std::string l = str(ord[i][k], ptr(pat, k));
      auto it = index.find(l);
      if (it == index.end()) throw ParseError(ptr(pat, k), "unknown element " + l);
      xy[k] = it->second;
    }
    pairs.emplace_back(xy[0], xy[1]);
  }
  FinPoset p = FinPoset::from_pairs(labels.size(), pairs, labels);
  Verdict v = p.validate();
  if (!v.ok()) throw ParseError(at + "/order", "not a partial order: " + v.detail);
  return p;
}

std::shared_ptr<const Base> parse_thin(const json& b) {
  FinPoset p = parse_order(field(b, "/base", "elements"), field(b, "/base", "order"), "/base");
  try {
    return thin_base(p);
  } catch (const MalformedInstance& e) {
    throw ParseError("/base", e.what());
  }
}

std::shared_ptr<const Base> parse_spaces(const json& b) {
  SpaceWindowSpec spec;
  const json& ss = arr(field(b, "/base", "spaces"), "/base/spaces");
  for (std::size_t i = 0; i < ss.size(); ++i) {
    const std::string at = ptr("/base/spaces", i);
    FiniteSpace s;
    s.name = str(field(ss[i], at, "name"), at + "/name");
    std::map<std::string, std::size_t> index;
    const json& pts = arr(field(ss[i], at, "points"), at + "/points");
    if (pts.size() > 12) throw ParseError(at + "/points", "more than 12 points");
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const std::string l = str(pts[k], ptr(at + "/points", k));
      if (!index.emplace(l, k).second) throw ParseError(ptr(at + "/points", k), "duplicate point " + l);
      s.points.push_back(l);
    }
    const json& os = arr(field(ss[i], at, "opens"), at + "/opens");
    for (std::size_t k = 0; k < os.size(); ++k) {
      std::uint64_t mask = 0;
      const json& o = arr(os[k], ptr(at + "/opens", k));
      for (std::size_t j = 0; j < o.size(); ++j) {
        const std::string l = str(o[j], ptr(ptr(at + "/opens", k), j));
        auto it = index.find(l);
        if (it == index.end()) throw ParseError(ptr(ptr(at + "/opens", k), j), "unknown point " + l);
        mask |= std::uint64_t(1) << it->second;
      }
      s.opens.push_back(mask);
    }
    try {
      s.check_topology();
    } catch (const MalformedInstance& e) {
      throw ParseError(at + "/opens", e.what());
    }
    spec.spaces.push_back(std::move(s));
  }
  if (b.contains("cap")) {
    if (!b["cap"].is_number_unsigned()) throw ParseError("/base/cap", "expected a count");
    spec.cap = b["cap"].get<std::size_t>();
  }
  if (b.contains("power_domain")) {
    const json& pd = arr(b["power_domain"], "/base/power_domain");
    for (std::size_t i = 0; i < pd.size(); ++i)
      spec.power_domain.push_back(str(pd[i], ptr("/base/power_domain", i)));
  }
  try {
    return std::make_shared<const SpaceWindow>(std::move(spec));
  } catch (const std::runtime_error& e) {
    throw ParseError("/base", e.what());
  }
}

std::shared_ptr<const Base> parse_base(const json& b) {
  const std::string kind = str(field(b, "/base", "presentation"), "/base/presentation");
  if (kind == "explicit") return parse_explicit(b);
  if (kind == "thin") return parse_thin(b);
  if (kind == "spaces") return parse_spaces(b);
  throw ParseError("/base/presentation", "unknown presentation " + kind);
}

// ---------------------------------------------------------------- fibers

std::vector<Elem> parse_table(const json& t, const std::string& at, const FinPoset& dom,
                              const FinPoset& cod) {
  const json& a = arr(t, at);
  if (a.size() != cod.size())
    throw ParseError(at, "table has " + std::to_string(a.size()) + " entries, expected " +
                             std::to_string(cod.size()));
  std::vector<Elem> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string l = str(a[i], ptr(at, i));
    auto e = dom.find(l);
    if (!e) throw ParseError(ptr(at, i), "unknown element " + l);
    out.push_back(*e);
  }
  return out;
}

std::vector<ArrId> all_arrows(const Base& c) {
  std::vector<ArrId> out;
  for (ObjId a : c.objects())
    for (ObjId b : c.objects())
      for (const ArrId& f : c.hom(a, b)) out.push_back(f);
  return out;
}

}  // namespace

Doctrine parse_instance(const json& doc) {
  if (!doc.is_object()) throw ParseError("", "expected an object");
  if (doc.contains("format") && doc["format"] != "tripos-instance")
    throw ParseError("/format", "unknown format");
  auto base = parse_base(field(doc, "", "base"));
  const json& fib = field(doc, "", "fibers");
  const std::string kind = str(field(fib, "/fibers", "kind"), "/fibers/kind");
  bool dual = false;
  if (fib.contains("dual")) {
    if (!fib["dual"].is_boolean()) throw ParseError("/fibers/dual", "expected a boolean");
    dual = fib["dual"].get<bool>();
  }
  std::shared_ptr<const FiberModel> model;
  std::vector<FinPoset> fibers;
  if (kind == "explicit") {
    if (!dynamic_cast<const ExplicitBase*>(base.get()))
      throw ParseError("/fibers/kind", "explicit fibers need an explicit or thin base");
    const json& per = obj(field(fib, "/fibers", "per_object"), "/fibers/per_object");
    for (ObjId a : base->objects()) {
      const std::string name = base->object_name(a);
      const std::string at = ptr("/fibers/per_object", name);
      if (!per.contains(name)) throw ParseError(at, "missing fiber of " + name);
      fibers.push_back(parse_order(field(per[name], at, "elements"), field(per[name], at, "order"), at));
    }
    for (const auto& [name, v] : per.items())
      if (!base->find_object(name))
        throw ParseError(ptr("/fibers/per_object", name), "undeclared object " + name);
  } else if (kind == "opens") {
    if (!dynamic_cast<const SpaceWindow*>(base.get()))
      throw ParseError("/fibers/kind", "open-set fibers need a spaces base");
    model = std::make_shared<OpensModel>();
  } else if (kind == "trivial") {
    model = std::make_shared<TrivialModel>();
  } else if (kind == "downsets") {
    if (!dynamic_cast<const ThinBase*>(base.get()))
      throw ParseError("/fibers/kind", "down-set fibers need a thin base");
    model = std::make_shared<DownsetModel>();
  } else {
    throw ParseError("/fibers/kind", "unknown fiber kind " + kind);
  }

  std::map<ArrId, std::vector<Elem>> tables;
  json reindex = doc.contains("reindex") ? doc["reindex"] : json::object();
  obj(reindex, "/reindex");
  auto fiber_of = [&](ObjId a) {
    return kind == "explicit" ? fibers.at(a.value) : model->fiber(*base, a);
  };
  for (const auto& [name, t] : reindex.items()) {
    const std::string at = ptr("/reindex", name);
    auto f = base->parse_arrow(name);
    if (!f) throw ParseError(at, "undeclared arrow " + name);
    tables[*f] = parse_table(t, at, fiber_of(f->dom), fiber_of(f->cod));
  }
  if (kind == "explicit") {
    for (const ArrId& f : all_arrows(*base))
      if (!tables.count(f) && f != base->identity(f.dom))
        throw ParseError(ptr("/reindex", base->arrow_name(f)), "missing reindexing table");
    model = std::make_shared<ExplicitModel>(std::move(fibers), std::move(tables));
  } else if (!tables.empty()) {
    model = std::make_shared<OverrideModel>(model, std::move(tables));
  }
  std::string name;
  if (doc.contains("meta") && doc["meta"].contains("name"))
    name = str(doc["meta"]["name"], "/meta/name");
  json declared = doc.contains("declared") ? doc["declared"] : json(nullptr);
  return Doctrine(base, model, name, dual, declared);
}

namespace {

struct TextPos {
  std::size_t line = 1, column = 1;
};

TextPos position_of(const std::string& text, std::size_t byte) {
  TextPos p;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++p.line;
      p.column = 1;
    } else {
      ++p.column;
    }
  }
  return p;
}

// Start offset of every value, keyed by JSON pointer. Only run on text the
// JSON parser has already accepted.
class PointerIndex {
 public:
  explicit PointerIndex(const std::string& text) : t_(text) {
    skip();
    value("");
  }
  std::optional<std::size_t> find(std::string pointer) const {
    for (;;) {
      auto it = at_.find(pointer);
      if (it != at_.end()) return it->second;
      if (pointer.empty()) return std::nullopt;
      pointer.erase(pointer.rfind('/'));
    }
  }

 private:
  void skip() {
    while (i_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[i_]))) ++i_;
  }
  std::string string() {
    std::string out;
    ++i_;
    while (i_ < t_.size() && t_[i_] != '"') {
      if (t_[i_] == '\\') {
        ++i_;
        if (t_[i_] == 'u') {
          // key escapes are rare; keep the raw sequence
          out += t_.substr(i_ - 1, 6);
          i_ += 5;
          continue;
        }
        const char c = t_[i_];
        out += c == 'n' ? '\n' : c == 't' ? '\t' : c == 'r' ? '\r' : c == 'b' ? '\b' : c == 'f' ? '\f' : c;
        ++i_;
        continue;
      }
      out += t_[i_++];
    }
    ++i_;
    return out;
  }
  void value(const std::string& at) {
    at_.emplace(at, i_);
    if (t_[i_] == '{') {
      ++i_;
      skip();
      while (t_[i_] != '}') {
        const std::string key = string();
        skip();
        ++i_;  // ':'
        skip();
        value(ptr(at, key));
        skip();
        if (t_[i_] == ',') ++i_;
        skip();
      }
      ++i_;
    } else if (t_[i_] == '[') {
      ++i_;
      skip();
      for (std::size_t k = 0; t_[i_] != ']'; ++k) {
        value(ptr(at, k));
        skip();
        if (t_[i_] == ',') ++i_;
        skip();
      }
      ++i_;
    } else if (t_[i_] == '"') {
      string();
    } else {
      while (i_ < t_.size() && !std::strchr(",]} \t\r\n", t_[i_])) ++i_;
    }
  }

  const std::string& t_;
  std::size_t i_ = 0;
  std::map<std::string, std::size_t> at_;
};

std::string where_text(const TextPos& p) {
  return "line " + std::to_string(p.line) + ", column " + std::to_string(p.column);
}

}  // namespace

Doctrine parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(where_text(position_of(text, e.byte == 0 ? 0 : e.byte - 1)), "syntax error");
  }
  try {
    return parse_instance(doc);
  } catch (const ParseError& e) {
    if (e.where.empty() || e.where[0] != '/') throw;
    const auto at = PointerIndex(text).find(e.where);
    if (!at) throw;
    const std::string what = std::string(e.what()).substr(e.where.size() + 2);
    throw ParseError(where_text(position_of(text, *at)) + " (" + e.where + ")", what);
  }
}

json serialize_instance(const Doctrine& d) {
  const Base& c = d.base();
  const FiberModel* model = &d.model();
  std::map<ArrId, std::vector<Elem>> overrides;
  if (auto* o = dynamic_cast<const OverrideModel*>(model)) {
    overrides = o->tables();
    model = &o->inner();
  }
  json doc;
  doc["format"] = "tripos-instance";
  doc["version"] = 1;
  doc["meta"] = {{"name", d.name()}};
  doc["base"] = c.presentation();
  json fibers = {{"kind", model->kind()}, {"dual", d.dual()}};
  auto label_table = [&](const ArrId& f, const std::vector<Elem>& t) {
    const FinPoset dom = model->fiber(c, f.dom);
    json out = json::array();
    for (Elem x : t) out.push_back(dom.label(x));
    return out;
  };
  json reindex = json::object();
  if (auto* e = dynamic_cast<const ExplicitModel*>(model)) {
    json per = json::object();
    for (ObjId a : c.objects()) {
      const FinPoset& p = e->fibers().at(a.value);
      json order = json::array();
      for (auto [x, y] : p.covers()) order.push_back({p.label(x), p.label(y)});
      per[c.object_name(a)] = {{"elements", p.labels()}, {"order", order}};
    }
    fibers["per_object"] = per;
    for (const ArrId& f : all_arrows(c)) {
      if (overrides.count(f)) continue;
      const auto t = e->reindex(c, f);
      bool identity = f == c.identity(f.dom);
      for (Elem x = 0; identity && x < t.size(); ++x) identity = t[x] == x;
      if (!identity) reindex[c.arrow_name(f)] = label_table(f, t);
    }
  }
  for (const auto& [f, t] : overrides) reindex[c.arrow_name(f)] = label_table(f, t);
  doc["fibers"] = fibers;
  doc["reindex"] = reindex;
  if (!d.declared().is_null()) doc["declared"] = d.declared();
  return doc;
}

std::string dump_instance(const Doctrine& d) { return serialize_instance(d).dump(2) + "\n"; }

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[i] = digits[h & 15];
  return out;
}

std::string instance_hash(const Doctrine& d) { return fnv1a_hex(dump_instance(d)); }

Doctrine load_instance(const std::string& spec) {
  const std::string prefix = "catalog:";
  if (spec.rfind(prefix, 0) == 0) return catalog_instance(spec.substr(prefix.size()));
  std::ifstream in(spec);
  if (!in) throw std::invalid_argument("cannot read " + spec);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

}  // namespace tripos
