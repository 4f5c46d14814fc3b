#pragma once

// Independent oracles and generators for the test suites. Nothing here calls
// the adjoint, lattice or classification code under test.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "tripos/doctrine.hpp"

namespace oracle {

using tripos::ArrId;
using tripos::Doctrine;
using tripos::Elem;
using tripos::FinPoset;
using tripos::ObjId;
using tripos::SpaceWindow;

inline const SpaceWindow& spaces(const Doctrine& d) { return dynamic_cast<const SpaceWindow&>(d.base()); }

// Fibers of open-set doctrines are the opens of the space, in stored order.
inline std::uint64_t mask(const Doctrine& d, ObjId a, Elem x) { return spaces(d).space(a).opens.at(x); }

inline std::optional<Elem> elem(const Doctrine& d, ObjId a, std::uint64_t m) {
  const auto& opens = spaces(d).space(a).opens;
  for (std::size_t i = 0; i < opens.size(); ++i)
    if (opens[i] == m) return static_cast<Elem>(i);
  return std::nullopt;
}

inline std::uint64_t full(const Doctrine& d, ObjId a) {
  const std::size_t n = spaces(d).space(a).size();
  return n == 64 ? ~0ULL : (1ULL << n) - 1;
}

inline std::vector<std::uint32_t> fn(const Doctrine& d, const ArrId& f) { return spaces(d).table(f); }

inline std::uint64_t preimage(const Doctrine& d, const ArrId& f, std::uint64_t s) {
  const auto t = fn(d, f);
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (s >> t[i] & 1) r |= 1ULL << i;
  return r;
}

inline std::uint64_t image(const Doctrine& d, const ArrId& f, std::uint64_t s) {
  const auto t = fn(d, f);
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (s >> i & 1) r |= 1ULL << t[i];
  return r;
}

// {b | every a with f(a) = b lies in s}
inline std::uint64_t forall_image(const Doctrine& d, const ArrId& f, std::uint64_t s) {
  const auto t = fn(d, f);
  std::uint64_t r = full(d, f.cod);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!(s >> i & 1)) r &= ~(1ULL << t[i]);
  return r;
}

inline bool subset(std::uint64_t a, std::uint64_t b) { return (a & ~b) == 0; }

// Adjoints straight from the definition, by search over all candidates.
inline std::optional<std::vector<Elem>> brute_left(const FinPoset& src, const FinPoset& dst,
                                                   const std::vector<Elem>& u) {
  // u: dst -> src; L: src -> dst with L(a) <= b iff a <= u(b)
  std::vector<Elem> out;
  for (Elem a = 0; a < src.size(); ++a) {
    std::optional<Elem> hit;
    for (Elem l = 0; l < dst.size() && !hit; ++l) {
      bool ok = true;
      for (Elem b = 0; b < dst.size() && ok; ++b) ok = dst.leq(l, b) == src.leq(a, u[b]);
      if (ok) hit = l;
    }
    if (!hit) return std::nullopt;
    out.push_back(*hit);
  }
  return out;
}

inline std::optional<std::vector<Elem>> brute_right(const FinPoset& src, const FinPoset& dst,
                                                    const std::vector<Elem>& u) {
  // R: src -> dst with u(b) <= a iff b <= R(a)
  std::vector<Elem> out;
  for (Elem a = 0; a < src.size(); ++a) {
    std::optional<Elem> hit;
    for (Elem r = 0; r < dst.size() && !hit; ++r) {
      bool ok = true;
      for (Elem b = 0; b < dst.size() && ok; ++b) ok = dst.leq(b, r) == src.leq(u[b], a);
      if (ok) hit = r;
    }
    if (!hit) return std::nullopt;
    out.push_back(*hit);
  }
  return out;
}

inline std::optional<Elem> brute_meet(const FinPoset& p, Elem a, Elem b) {
  for (Elem m = 0; m < p.size(); ++m) {
    if (!p.leq(m, a) || !p.leq(m, b)) continue;
    bool greatest = true;
    for (Elem c = 0; c < p.size() && greatest; ++c)
      if (p.leq(c, a) && p.leq(c, b)) greatest = p.leq(c, m);
    if (greatest) return m;
  }
  return std::nullopt;
}

inline std::optional<Elem> brute_join(const FinPoset& p, Elem a, Elem b) {
  return brute_meet(p.reversed(), a, b);
}

// a => b as the greatest c with c ∧ a <= b
inline std::optional<Elem> brute_implies(const FinPoset& p, Elem a, Elem b) {
  // the greatest c with c ∧ a <= b
  std::vector<Elem> below;
  for (Elem c = 0; c < p.size(); ++c) {
    auto m = brute_meet(p, c, a);
    if (!m) return std::nullopt;
    if (p.leq(*m, b)) below.push_back(c);
  }
  for (Elem c : below) {
    bool greatest = true;
    for (Elem x : below) greatest = greatest && p.leq(x, c);
    if (greatest) return c;
  }
  return std::nullopt;
}

// Generators. A random poset is the transitive closure of a random DAG on
// 0..n-1 whose edges go from lower to higher index.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t size(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  FinPoset poset(std::size_t n, double density = 0.35) {
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) r[i][j] = coin(density);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (r[i][k] && r[k][j]) r[i][j] = true;
    return FinPoset::from_relation(n, [&](Elem a, Elem b) { return r[a][b]; });
  }

  // A random lattice: the down-sets of a random poset, ordered by inclusion.
  FinPoset distributive_lattice(std::size_t n) {
    const FinPoset base = poset(n);
    std::vector<std::uint32_t> downs;
    for (std::uint32_t s = 0; s < (1u << n); ++s) {
      bool closed = true;
      for (Elem a = 0; a < n && closed; ++a)
        for (Elem b = 0; b < n && closed; ++b)
          if ((s >> b & 1) && base.leq(a, b)) closed = (s >> a & 1) != 0;
      if (closed) downs.push_back(s);
    }
    return FinPoset::from_relation(downs.size(), [&](Elem a, Elem b) { return (downs[a] & ~downs[b]) == 0; });
  }

  // Uniform among monotone maps is not needed; a random monotone map is
  // built element by element in a linear extension, retrying on dead ends.
  std::optional<std::vector<Elem>> monotone(const FinPoset& src, const FinPoset& dst, int tries = 50) {
    std::vector<Elem> order(src.size());
    for (Elem i = 0; i < src.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](Elem a, Elem b) { return below_count(src, a) < below_count(src, b); });
    for (int t = 0; t < tries; ++t) {
      std::vector<Elem> m(src.size(), 0);
      bool ok = true;
      for (std::size_t k = 0; k < order.size() && ok; ++k) {
        const Elem x = order[k];
        std::vector<Elem> choices;
        for (Elem y = 0; y < dst.size(); ++y) {
          bool fits = true;
          for (std::size_t j = 0; j < k && fits; ++j) {
            const Elem z = order[j];
            if (src.leq(z, x)) fits = dst.leq(m[z], y);
            if (src.leq(x, z)) fits = fits && dst.leq(y, m[z]);
          }
          if (fits) choices.push_back(y);
        }
        if (choices.empty()) {
          ok = false;
          break;
        }
        m[x] = choices[size(0, choices.size() - 1)];
      }
      if (ok) return m;
    }
    return std::nullopt;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  static std::size_t below_count(const FinPoset& p, Elem a) {
    std::size_t c = 0;
    for (Elem b = 0; b < p.size(); ++b) c += p.leq(b, a);
    return c;
  }
  std::mt19937_64 rng_;
};

}  // namespace oracle
