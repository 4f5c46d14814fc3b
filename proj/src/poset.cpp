#include "tripos/poset.hpp"

#include <algorithm>
#include <mutex>

namespace tripos {

struct FinPoset::Cache {
  std::once_flag once;
  LatticeOps ops;
};

namespace {

std::vector<std::string> default_labels(std::size_t n, std::vector<std::string> labels) {
  if (labels.size() == n) return labels;
  labels.clear();
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return labels;
}

LatticeOps compute_ops(const FinPoset& p) {
  LatticeOps ops;
  const std::size_t n = p.size();
  ops.n = n;
  ops.top = greatest_such_that(p, [](Elem) { return true; });
  ops.bottom = least_such_that(p, [](Elem) { return true; });

  std::vector<Elem> meet(n * n), join(n * n);
  bool meets = true, joins = true;
  for (Elem a = 0; a < n && (meets || joins); ++a) {
    for (Elem b = 0; b < n; ++b) {
      if (meets) {
        auto m = greatest_such_that(p, [&](Elem c) { return p.leq(c, a) && p.leq(c, b); });
        if (m) meet[a * n + b] = *m;
        else meets = false;
      }
      if (joins) {
        auto j = least_such_that(p, [&](Elem c) { return p.leq(a, c) && p.leq(b, c); });
        if (j) join[a * n + b] = *j;
        else joins = false;
      }
    }
  }
  if (meets) ops.meet = std::move(meet);
  if (joins) ops.join = std::move(join);

  if (ops.meet) {
    std::vector<Elem> imp(n * n);
    bool total = true;
    for (Elem a = 0; a < n && total; ++a) {
      for (Elem b = 0; b < n; ++b) {
        auto c = greatest_such_that(p, [&](Elem x) { return p.leq(ops.meet_of(x, a), b); });
        if (!c) {
          total = false;
          break;
        }
        imp[a * n + b] = *c;
      }
    }
    if (total) ops.implication = std::move(imp);
  }
  return ops;
}

}  // namespace

FinPoset::FinPoset() : cache_(std::make_shared<Cache>()) {}

FinPoset::FinPoset(std::size_t n, std::vector<std::uint8_t> rel, std::vector<std::string> labels)
    : n_(n), rel_(std::move(rel)), labels_(default_labels(n, std::move(labels))),
      cache_(std::make_shared<Cache>()) {}

FinPoset FinPoset::from_pairs(std::size_t n, std::span<const std::pair<Elem, Elem>> pairs,
                              std::vector<std::string> labels) {
  std::vector<std::uint8_t> rel(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) rel[a * n + a] = 1;
  for (auto [a, b] : pairs) rel[a * n + b] = 1;
  // Warshall closure.
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (rel[i * n + k])
        for (std::size_t j = 0; j < n; ++j)
          if (rel[k * n + j]) rel[i * n + j] = 1;
  return FinPoset(n, std::move(rel), std::move(labels));
}

FinPoset FinPoset::chain(std::size_t n) {
  return from_relation(n, [](Elem a, Elem b) { return a <= b; });
}

FinPoset FinPoset::antichain(std::size_t n) {
  return from_relation(n, [](Elem a, Elem b) { return a == b; });
}

std::optional<Elem> FinPoset::find(std::string_view label) const {
  for (Elem i = 0; i < n_; ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

FinPoset FinPoset::reversed() const {
  std::vector<std::uint8_t> rel(n_ * n_);
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = 0; b < n_; ++b) rel[a * n_ + b] = rel_[b * n_ + a];
  return FinPoset(n_, std::move(rel), labels_);
}

Verdict FinPoset::validate() const {
  for (Elem a = 0; a < n_; ++a)
    if (!leq(a, a))
      return Verdict::refuted("order is not reflexive", {{"law", "reflexive"}, {"x", labels_[a]}});
  for (Elem a = 0; a < n_; ++a)
    for (Elem b = 0; b < n_; ++b) {
      if (a != b && leq(a, b) && leq(b, a))
        return Verdict::refuted("order is not antisymmetric",
                                {{"law", "antisymmetric"}, {"x", labels_[a]}, {"y", labels_[b]}});
      if (!leq(a, b)) continue;
      for (Elem c = 0; c < n_; ++c)
        if (leq(b, c) && !leq(a, c))
          return Verdict::refuted(
              "order is not transitive",
              {{"law", "transitive"}, {"x", labels_[a]}, {"y", labels_[b]}, {"z", labels_[c]}});
    }
  return Verdict::holds("poset of " + std::to_string(n_) + " elements");
}

std::vector<std::pair<Elem, Elem>> FinPoset::covers() const {
  std::vector<std::pair<Elem, Elem>> out;
  for (Elem a = 0; a < n_; ++a)
    for (Elem b = 0; b < n_; ++b) {
      if (a == b || !leq(a, b)) continue;
      bool between = false;
      for (Elem c = 0; c < n_ && !between; ++c)
        between = c != a && c != b && leq(a, c) && leq(c, b);
      if (!between) out.emplace_back(a, b);
    }
  return out;
}

const LatticeOps& FinPoset::ops() const {
  std::call_once(cache_->once, [this] { cache_->ops = compute_ops(*this); });
  return cache_->ops;
}

const LatticeOps& lattice_ops(const FinPoset& p) { return p.ops(); }

MonotoneMap MonotoneMap::identity(std::shared_ptr<const FinPoset> p) {
  std::vector<Elem> t(p->size());
  for (Elem i = 0; i < t.size(); ++i) t[i] = i;
  return MonotoneMap{p, p, std::move(t)};
}

std::optional<std::pair<Elem, Elem>> MonotoneMap::monotonicity_violation() const {
  for (Elem x = 0; x < source->size(); ++x)
    for (Elem y = 0; y < source->size(); ++y)
      if (source->leq(x, y) && !target->leq(table[x], table[y])) return std::pair{x, y};
  return std::nullopt;
}

MonotoneMap compose(const MonotoneMap& after, const MonotoneMap& before) {
  std::vector<Elem> t(before.table.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = after.table[before.table[i]];
  return MonotoneMap{before.source, after.target, std::move(t)};
}

std::optional<MonotoneMap> left_adjoint(const MonotoneMap& u) {
  const FinPoset& src = *u.source;
  const FinPoset& tgt = *u.target;
  std::vector<Elem> t(tgt.size());
  for (Elem a = 0; a < tgt.size(); ++a) {
    auto l = least_such_that(src, [&](Elem b) { return tgt.leq(a, u(b)); });
    if (!l) return std::nullopt;
    t[a] = *l;
  }
  return MonotoneMap{u.target, u.source, std::move(t)};
}

std::optional<MonotoneMap> right_adjoint(const MonotoneMap& u) {
  const FinPoset& src = *u.source;
  const FinPoset& tgt = *u.target;
  std::vector<Elem> t(tgt.size());
  for (Elem a = 0; a < tgt.size(); ++a) {
    auto r = greatest_such_that(src, [&](Elem b) { return tgt.leq(u(b), a); });
    if (!r) return std::nullopt;
    t[a] = *r;
  }
  return MonotoneMap{u.target, u.source, std::move(t)};
}

namespace {

json pair_payload(const MonotoneMap& m, std::string op, Elem a, Elem b) {
  return {{"law", "preservation"}, {"op", std::move(op)},
          {"a", m.source->label(a)}, {"b", m.source->label(b)}};
}

}  // namespace

Verdict is_msl_hom(const MonotoneMap& m) {
  const auto& s = m.source->ops();
  const auto& t = m.target->ops();
  if (!s.meet || !t.meet) throw StructureMissing("binary meets missing on source or target");
  for (Elem a = 0; a < m.source->size(); ++a)
    for (Elem b = 0; b < m.source->size(); ++b)
      if (m(s.meet_of(a, b)) != t.meet_of(m(a), m(b)))
        return Verdict::refuted("binary meet not preserved", pair_payload(m, "meet", a, b));
  if (s.top && t.top && m(*s.top) != *t.top)
    return Verdict::refuted("top not preserved",
                            {{"law", "preservation"}, {"op", "top"}});
  return Verdict::holds("all elements");
}

Verdict is_heyting_hom(const MonotoneMap& m) {
  const auto& s = m.source->ops();
  const auto& t = m.target->ops();
  if (!s.is_heyting() || !t.is_heyting())
    throw StructureMissing("source or target is not a Heyting algebra");
  if (m(*s.top) != *t.top)
    return Verdict::refuted("top not preserved", {{"law", "preservation"}, {"op", "top"}});
  if (m(*s.bottom) != *t.bottom)
    return Verdict::refuted("bottom not preserved", {{"law", "preservation"}, {"op", "bottom"}});
  for (Elem a = 0; a < m.source->size(); ++a)
    for (Elem b = 0; b < m.source->size(); ++b) {
      if (m(s.meet_of(a, b)) != t.meet_of(m(a), m(b)))
        return Verdict::refuted("meet not preserved", pair_payload(m, "meet", a, b));
      if (m(s.join_of(a, b)) != t.join_of(m(a), m(b)))
        return Verdict::refuted("join not preserved", pair_payload(m, "join", a, b));
      if (m(s.implies(a, b)) != t.implies(m(a), m(b)))
        return Verdict::refuted("implication not preserved", pair_payload(m, "implication", a, b));
    }
  return Verdict::holds("all elements");
}

}  // namespace tripos
