#include "tripos/enumerate.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>

#include "tripos/catalog.hpp"

namespace tripos {

// ---------------------------------------------------------------- posets

namespace {

using Code = std::vector<std::uint8_t>;

Code encode(const FinPoset& p, const std::vector<Elem>& perm) {
  const std::size_t n = p.size();
  Code c(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) c[perm[a] * n + perm[b]] = p.leq(a, b);
  return c;
}

std::vector<std::string> index_labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

}  // namespace

const std::vector<FinPoset>& fiber_posets(std::size_t max_size) {
  static std::mutex mutex;
  static std::map<std::size_t, std::vector<FinPoset>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(max_size);
  if (it != cache.end()) return it->second;
  std::vector<FinPoset> out;
  for (std::size_t n = 1; n <= max_size; ++n) {
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (a != b) slots.emplace_back(a, b);
    std::set<Code> classes;
    for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << slots.size()); ++bits) {
      std::vector<std::uint8_t> rel(n * n, 0);
      for (std::size_t a = 0; a < n; ++a) rel[a * n + a] = 1;
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (bits >> s & 1) rel[slots[s].first * n + slots[s].second] = 1;
      const FinPoset p = FinPoset::from_relation(n, [&](Elem a, Elem b) { return rel[a * n + b] != 0; });
      if (!p.validate().ok()) continue;
      std::vector<Elem> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      Code best = encode(p, perm);
      while (std::next_permutation(perm.begin(), perm.end())) best = std::min(best, encode(p, perm));
      classes.insert(best);
    }
    // Larger codes first puts chains before antichains within a size.
    for (auto c = classes.rbegin(); c != classes.rend(); ++c)
      out.push_back(FinPoset::from_relation(
          n, [&](Elem a, Elem b) { return (*c)[a * n + b] != 0; }, index_labels(n)));
  }
  return cache.emplace(max_size, std::move(out)).first->second;
}

std::vector<std::vector<Elem>> automorphisms(const FinPoset& p) {
  const std::size_t n = p.size();
  std::vector<Elem> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<Elem>> out;
  do {
    bool ok = true;
    for (Elem a = 0; a < n && ok; ++a)
      for (Elem b = 0; b < n && ok; ++b) ok = p.leq(a, b) == p.leq(perm[a], perm[b]);
    if (ok) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<std::vector<Elem>> monotone_maps(const FinPoset& dom, const FinPoset& cod) {
  const std::size_t m = dom.size(), n = cod.size();
  std::vector<std::vector<Elem>> out;
  if (n == 0 && m > 0) return out;
  std::vector<Elem> t(m, 0);
  while (true) {
    bool ok = true;
    for (Elem a = 0; a < m && ok; ++a)
      for (Elem b = 0; b < m && ok; ++b)
        if (dom.leq(a, b)) ok = cod.leq(t[a], t[b]);
    if (ok) out.push_back(t);
    std::size_t i = m;
    while (i > 0 && t[i - 1] + 1 == n) t[--i] = 0;
    if (i == 0) break;
    ++t[i - 1];
  }
  return out;
}

// ---------------------------------------------------------------- filter

struct Filter::Node {
  enum Kind { atom, negate, conj, disj, yes } kind = yes;
  std::string name;  // atom: check name, or "hyp:<id>" / "concl:<id>"
  std::vector<std::shared_ptr<const Node>> kids;
};

std::string resolve_check_alias(const std::string& name) {
  static const std::map<std::string, std::string> aliases = {
      {"comp", "comprehension"},
      {"full_comp", "full_comprehension"},
      {"cocomp", "cocomprehension"},
      {"full_cocomp", "full_cocomprehension"},
      {"neg", "negation"},
      {"ho", "higher_order"},
      {"impl", "implicational"},
      {"exist", "existential"},
      {"elem", "elementary"},
      {"prop", "propositional"},
      {"choice", "ac"},
      {"derived_impl", "derived_implication"},
  };
  auto it = aliases.find(name);
  return it == aliases.end() ? name : it->second;
}

namespace {

class FilterParser {
 public:
  explicit FilterParser(const std::string& s) : s_(s) {}

  std::shared_ptr<const Filter::Node> run() {
    auto n = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected character");
    return n;
  }

 private:
  using NodeP = std::shared_ptr<const Filter::Node>;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("filter position " + std::to_string(i_ + 1) + ": " + what);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  NodeP binary(Filter::Node::Kind kind, char op, NodeP (FilterParser::*next)()) {
    auto first = (this->*next)();
    if (!eat(op)) return first;
    auto n = std::make_shared<Filter::Node>();
    n->kind = kind;
    n->kids.push_back(first);
    do n->kids.push_back((this->*next)());
    while (eat(op));
    return n;
  }
  NodeP expr() { return binary(Filter::Node::disj, '|', &FilterParser::term); }
  NodeP term() { return binary(Filter::Node::conj, '&', &FilterParser::unary); }
  NodeP unary() {
    if (eat('!')) {
      auto n = std::make_shared<Filter::Node>();
      n->kind = Filter::Node::negate;
      n->kids.push_back(unary());
      return n;
    }
    if (eat('(')) {
      auto n = expr();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    return atom();
  }
  NodeP atom() {
    skip();
    const std::size_t start = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' ||
                              s_[i_] == ':' || s_[i_] == '-'))
      ++i_;
    if (start == i_) fail("expected a check name");
    const std::string word = s_.substr(start, i_ - start);
    auto n = std::make_shared<Filter::Node>();
    if (word == "true") return n;
    n->kind = Filter::Node::atom;
    for (const char* prefix : {"hyp:", "concl:"})
      if (word.rfind(prefix, 0) == 0) {
        const std::string id = word.substr(std::string(prefix).size());
        try {
          find_theorem(id);
        } catch (const std::invalid_argument&) {
          i_ = start;
          fail("unknown theorem " + id);
        }
        n->name = word;
        return n;
      }
    n->name = resolve_check_alias(word);
    if (!Classifier::known(n->name)) {
      i_ = start;
      fail("unknown check " + word);
    }
    return n;
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

bool eval_node(const Filter::Node& n, const Classifier& c) {
  switch (n.kind) {
    case Filter::Node::yes:
      return true;
    case Filter::Node::negate:
      return !eval_node(*n.kids[0], c);
    case Filter::Node::conj:
      for (const auto& k : n.kids)
        if (!eval_node(*k, c)) return false;
      return true;
    case Filter::Node::disj:
      for (const auto& k : n.kids)
        if (eval_node(*k, c)) return true;
      return false;
    case Filter::Node::atom:
      break;
  }
  if (n.name.rfind("hyp:", 0) == 0) {
    for (const auto& h : find_theorem(n.name.substr(4)).hypotheses)
      if (!c.check(h).ok()) return false;
    return true;
  }
  if (n.name.rfind("concl:", 0) == 0) {
    const auto r = check_theorem(n.name.substr(6), c);
    return r.hypotheses_hold() && r.conclusion.ok();
  }
  return c.check(n.name).ok();
}

}  // namespace

Filter Filter::parse(const std::string& text) {
  Filter f;
  f.text_ = text;
  f.root_ = text.find_first_not_of(" \t") == std::string::npos ? std::make_shared<Node>()
                                                                : FilterParser(text).run();
  return f;
}

bool Filter::eval(const Classifier& c) const { return eval_node(*root_, c); }

// ---------------------------------------------------------------- enumeration

std::vector<NamedLattice> default_bases() {
  return {{"chain1", labeled_chain(1)}, {"chain2", labeled_chain(2)}, {"chain3", labeled_chain(3)}};
}

std::size_t budget_ceiling() {
  if (const char* env = std::getenv("TRIPOS_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 100000;
}

namespace {

using Table = std::vector<Elem>;

// x ↦ a[b[x]]: reindexing along u -> w -> v is (u -> w)* after (w -> v)*.
Table after(const Table& a, const Table& b) {
  Table t(b.size());
  for (std::size_t x = 0; x < b.size(); ++x) t[x] = a[b[x]];
  return t;
}

class LatticeEnumerator {
 public:
  LatticeEnumerator(const NamedLattice& base, std::size_t max_fiber, const Filter& filter,
                    std::size_t budget, EnumerationStats& stats, const DoctrineSink& sink)
      : named_(base),
        lattice_(base.lattice),
        base_(thin_base(base.lattice)),
        posets_(fiber_posets(max_fiber)),
        filter_(filter),
        budget_(budget),
        stats_(stats),
        sink_(sink) {
    const std::size_t k = lattice_.size();
    edges_ = lattice_.covers();
    for (Elem u = 0; u < k; ++u)
      for (Elem v = 0; v < k; ++v)
        if (u != v && lattice_.leq(u, v)) pairs_.emplace_back(u, v);
    // Longer intervals after shorter ones so that compositions are ready.
    std::stable_sort(pairs_.begin(), pairs_.end(), [&](auto a, auto b) { return height(a) < height(b); });
    for (const auto& p : posets_) autos_.push_back(automorphisms(p));
    for (const auto& perm : automorphisms(lattice_)) base_autos_.push_back(perm);
  }

  /// False when the sink asked to stop or the budget ran out.
  bool run() {
    const std::size_t k = lattice_.size();
    std::vector<std::size_t> types(k, 0);
    while (true) {
      if (canonical_types(types) && !tables_for(types)) return false;
      std::size_t i = k;
      while (i > 0 && types[i - 1] + 1 == posets_.size()) types[--i] = 0;
      if (i == 0) return true;
      ++types[i - 1];
    }
  }

 private:
  std::size_t height(std::pair<Elem, Elem> p) const {
    std::size_t h = 0;
    for (Elem w = 0; w < lattice_.size(); ++w)
      if (lattice_.leq(p.first, w) && lattice_.leq(w, p.second)) ++h;
    return h;
  }

  // Type assignment minimal among its images under base automorphisms.
  bool canonical_types(const std::vector<std::size_t>& types) const {
    for (const auto& pi : base_autos_) {
      std::vector<std::size_t> moved(types.size());
      for (Elem u = 0; u < types.size(); ++u) moved[pi[u]] = types[u];
      if (moved < types) return false;
    }
    return true;
  }

  bool tables_for(const std::vector<std::size_t>& types) {
    std::vector<std::vector<Table>> choices;
    for (auto [u, v] : edges_) {
      choices.push_back(monotone_maps(posets_[types[v]], posets_[types[u]]));
      if (choices.back().empty()) return true;
    }
    std::vector<std::size_t> pick(edges_.size(), 0);
    while (true) {
      if (stats_.candidates >= budget_) {
        stats_.budget_exhausted = true;
        return false;
      }
      ++stats_.candidates;
      std::vector<Table> edge_tables;
      for (std::size_t e = 0; e < edges_.size(); ++e) edge_tables.push_back(choices[e][pick[e]]);
      if (auto all = compose(edge_tables); all && canonical(types, edge_tables)) {
        ++stats_.canonical;
        if (!emit(types, *all)) return false;
      }
      std::size_t i = edges_.size();
      while (i > 0 && pick[i - 1] + 1 == choices[i - 1].size()) pick[--i] = 0;
      if (i == 0) return true;
      ++pick[i - 1];
    }
  }

  // Tables for every non-identity arrow, or nullopt when two paths disagree.
  std::optional<std::map<std::pair<Elem, Elem>, Table>> compose(const std::vector<Table>& edge_tables) const {
    std::map<std::pair<Elem, Elem>, Table> t;
    for (std::size_t e = 0; e < edges_.size(); ++e) t[edges_[e]] = edge_tables[e];
    for (auto [u, v] : pairs_) {
      if (t.count({u, v})) continue;
      for (auto [a, w] : edges_)
        if (a == u && lattice_.leq(w, v)) {
          t[{u, v}] = after(t.at({u, w}), t.at({w, v}));
          break;
        }
    }
    for (auto [u, v] : pairs_)
      for (Elem w = 0; w < lattice_.size(); ++w)
        if (w != u && w != v && lattice_.leq(u, w) && lattice_.leq(w, v) &&
            after(t.at({u, w}), t.at({w, v})) != t.at({u, v}))
          return std::nullopt;
    return t;
  }

  // Lexicographically least in its orbit under base and fiber automorphisms.
  bool canonical(const std::vector<std::size_t>& types, const std::vector<Table>& tables) const {
    std::vector<Elem> flat;
    for (const auto& t : tables) flat.insert(flat.end(), t.begin(), t.end());
    const std::size_t k = lattice_.size();
    for (const auto& pi : base_autos_) {
      bool fixes = true;
      for (Elem u = 0; u < k && fixes; ++u) fixes = types[pi[u]] == types[u];
      if (!fixes) continue;
      // Edge e = (u, v) moves to (pi u, pi v).
      std::vector<std::size_t> target(edges_.size());
      for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto moved = std::make_pair(pi[edges_[e].first], pi[edges_[e].second]);
        target[e] = std::find(edges_.begin(), edges_.end(), moved) - edges_.begin();
      }
      std::vector<std::size_t> sigma(k, 0);
      while (true) {
        // σ_{π u} applied after the table, σ_{π v}^{-1} before it.
        std::vector<Table> moved(edges_.size());
        for (std::size_t e = 0; e < edges_.size(); ++e) {
          const auto [u, v] = edges_[e];
          const auto& su = autos_[types[u]][sigma[pi[u]]];
          const auto& sv = autos_[types[v]][sigma[pi[v]]];
          Table t(tables[e].size());
          for (Elem x = 0; x < t.size(); ++x) t[sv[x]] = su[tables[e][x]];
          moved[target[e]] = std::move(t);
        }
        std::vector<Elem> mflat;
        for (const auto& t : moved) mflat.insert(mflat.end(), t.begin(), t.end());
        if (mflat < flat) return false;
        std::size_t i = k;
        while (i > 0 && sigma[i - 1] + 1 == autos_[types[i - 1]].size()) sigma[--i] = 0;
        if (i == 0) break;
        ++sigma[i - 1];
      }
    }
    return true;
  }

  bool emit(const std::vector<std::size_t>& types, const std::map<std::pair<Elem, Elem>, Table>& all) {
    std::vector<FinPoset> fibers(lattice_.size());
    for (Elem u = 0; u < lattice_.size(); ++u) fibers[base_->object_of(u).value] = posets_[types[u]];
    std::map<ArrId, std::vector<Elem>> tables;
    for (const auto& [uv, t] : all)
      tables[*base_->arrow_between(base_->object_of(uv.first), base_->object_of(uv.second))] = t;
    Doctrine d(base_, std::make_shared<ExplicitModel>(std::move(fibers), std::move(tables)),
               named_.name + "#" + std::to_string(stats_.canonical));
    Classifier c(d);
    if (!filter_.eval(c)) return true;
    ++stats_.emitted;
    return sink_(d, c);
  }

  const NamedLattice& named_;
  const FinPoset& lattice_;
  std::shared_ptr<const ThinBase> base_;
  const std::vector<FinPoset>& posets_;
  const Filter& filter_;
  std::size_t budget_;
  EnumerationStats& stats_;
  const DoctrineSink& sink_;
  std::vector<std::pair<Elem, Elem>> edges_;
  std::vector<std::pair<Elem, Elem>> pairs_;
  std::vector<std::vector<std::vector<Elem>>> autos_;
  std::vector<std::vector<Elem>> base_autos_;
};

}  // namespace

EnumerationStats enumerate_doctrines(const EnumerationParams& params, const DoctrineSink& sink) {
  const Filter filter = Filter::parse(params.filter);
  const std::size_t budget = std::min(params.budget, budget_ceiling());
  EnumerationStats stats;
  for (const auto& b : params.bases) {
    LatticeEnumerator e(b, params.max_fiber, filter, budget, stats, sink);
    if (!e.run()) break;
  }
  return stats;
}

}  // namespace tripos
