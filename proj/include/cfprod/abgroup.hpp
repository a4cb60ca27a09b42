#pragma once

// Finite abelian groups Z/n_1 x ... x Z/n_k with a fixed lexicographic element order.
//
// Elements are coefficient vectors; every table in the library is indexed by the
// position of an element in that order (last coordinate varies fastest).

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cfprod/error.hpp"
#include "cfprod/intmat.hpp"
#include "cfprod/phase.hpp"

namespace cfprod {

struct Element {
  std::vector<std::int64_t> coeffs;

  Element() = default;
  explicit Element(std::vector<std::int64_t> c) : coeffs(std::move(c)) {}
  Element(std::initializer_list<std::int64_t> c) : coeffs(c) {}

  [[nodiscard]] std::size_t size() const { return coeffs.size(); }
  std::int64_t operator[](std::size_t i) const { return coeffs[i]; }
  std::int64_t& operator[](std::size_t i) { return coeffs[i]; }

  friend auto operator<=>(const Element&, const Element&) = default;
  friend bool operator==(const Element&, const Element&) = default;

  [[nodiscard]] std::string to_string() const {
    if (coeffs.size() == 1) return std::to_string(coeffs[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(coeffs[i]);
    }
    return s + ")";
  }
};

class FinAbGroup {
 public:
  /// The trivial group.
  FinAbGroup() = default;

  explicit FinAbGroup(std::vector<std::int64_t> factors) : factors_(std::move(factors)) {
    order_ = 1;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (factors_[i] < 2)
        throw ValidationError("invariant factor " + std::to_string(factors_[i]) + " at position " +
                              std::to_string(i) + " is < 2");
      if (__builtin_mul_overflow(order_, static_cast<std::uint64_t>(factors_[i]), &order_))
        throw CapacityError("group order overflows");
    }
    strides_.assign(factors_.size(), 1);
    for (std::size_t i = factors_.size(); i-- > 1;) strides_[i - 1] = strides_[i] * static_cast<std::uint64_t>(factors_[i]);
  }

  [[nodiscard]] const std::vector<std::int64_t>& factors() const { return factors_; }
  [[nodiscard]] std::size_t rank() const { return factors_.size(); }
  [[nodiscard]] std::size_t order() const { return static_cast<std::size_t>(order_); }
  [[nodiscard]] std::int64_t factor(std::size_t i) const { return factors_[i]; }

  [[nodiscard]] Element zero() const { return Element(std::vector<std::int64_t>(rank(), 0)); }

  [[nodiscard]] Element generator(std::size_t i) const {
    Element e = zero();
    e[i] = 1;
    return e;
  }

  [[nodiscard]] Element element(std::size_t index) const {
    Element e = zero();
    for (std::size_t i = rank(); i-- > 0;) {
      e[i] = static_cast<std::int64_t>(index % static_cast<std::size_t>(factors_[i]));
      index /= static_cast<std::size_t>(factors_[i]);
    }
    return e;
  }

  [[nodiscard]] std::size_t index(const Element& e) const {
    check_shape(e);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      if (e[i] < 0 || e[i] >= factors_[i])
        throw ValidationError("element coefficient " + std::to_string(e[i]) + " not reduced mod " +
                              std::to_string(factors_[i]));
      idx += static_cast<std::size_t>(e[i]) * strides_[i];
    }
    return idx;
  }

  [[nodiscard]] bool contains(const Element& e) const {
    if (e.size() != rank()) return false;
    for (std::size_t i = 0; i < rank(); ++i)
      if (e[i] < 0 || e[i] >= factors_[i]) return false;
    return true;
  }

  /// Reduces an arbitrary integer vector into canonical coefficients.
  [[nodiscard]] Element reduce(std::vector<std::int64_t> c) const {
    if (c.size() != rank()) throw ValidationError("element has " + std::to_string(c.size()) + " coefficients, group rank is " + std::to_string(rank()));
    for (std::size_t i = 0; i < rank(); ++i) c[i] = detail::mod_norm(c[i], factors_[i]);
    return Element(std::move(c));
  }

  [[nodiscard]] Element add(const Element& a, const Element& b) const {
    check_shape(a);
    check_shape(b);
    Element r = zero();
    for (std::size_t i = 0; i < rank(); ++i) r[i] = (a[i] + b[i]) % factors_[i];
    return r;
  }
  [[nodiscard]] Element neg(const Element& a) const {
    check_shape(a);
    Element r = zero();
    for (std::size_t i = 0; i < rank(); ++i) r[i] = (factors_[i] - a[i]) % factors_[i];
    return r;
  }
  [[nodiscard]] Element sub(const Element& a, const Element& b) const { return add(a, neg(b)); }
  [[nodiscard]] Element scale(const Element& a, std::int64_t k) const {
    check_shape(a);
    Element r = zero();
    for (std::size_t i = 0; i < rank(); ++i) r[i] = detail::mod_norm((k % factors_[i]) * a[i], factors_[i]);
    return r;
  }

  // Index arithmetic; the hot loops use these.
  [[nodiscard]] std::size_t add(std::size_t a, std::size_t b) const {
    std::size_t r = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      const auto n = static_cast<std::size_t>(factors_[i]);
      const std::size_t ca = (a / strides_[i]) % n, cb = (b / strides_[i]) % n;
      r += ((ca + cb) % n) * strides_[i];
    }
    return r;
  }
  [[nodiscard]] std::size_t neg(std::size_t a) const {
    std::size_t r = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      const auto n = static_cast<std::size_t>(factors_[i]);
      r += ((n - (a / strides_[i]) % n) % n) * strides_[i];
    }
    return r;
  }
  [[nodiscard]] std::size_t sub(std::size_t a, std::size_t b) const { return add(a, neg(b)); }

  [[nodiscard]] std::int64_t element_order(const Element& e) const {
    check_shape(e);
    std::int64_t o = 1;
    for (std::size_t i = 0; i < rank(); ++i) o = std::lcm(o, factors_[i] / std::gcd(e[i], factors_[i]));
    return o;
  }

  /// Exponent: lcm of the invariant factors.
  [[nodiscard]] std::int64_t exponent() const {
    std::int64_t o = 1;
    for (auto n : factors_) o = std::lcm(o, n);
    return o;
  }

  [[nodiscard]] std::string to_string() const {
    if (factors_.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < rank(); ++i) {
      if (i) s += " x ";
      s += "Z/" + std::to_string(factors_[i]);
    }
    return s;
  }

  friend bool operator==(const FinAbGroup& a, const FinAbGroup& b) { return a.factors_ == b.factors_; }

 private:
  void check_shape(const Element& e) const {
    if (e.size() != rank())
      throw ValidationError("element " + e.to_string() + " has wrong shape for " + to_string());
  }

  std::vector<std::int64_t> factors_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t order_ = 1;
};

inline FinAbGroup make_group(std::vector<std::int64_t> factors) { return FinAbGroup(std::move(factors)); }

inline FinAbGroup direct_product(const FinAbGroup& a, const FinAbGroup& b) {
  auto f = a.factors();
  f.insert(f.end(), b.factors().begin(), b.factors().end());
  return FinAbGroup(std::move(f));
}

/// Canonical invariant factors d_1 | d_2 | ... of a group given by any factor list.
inline std::vector<std::int64_t> canonical_factors(const FinAbGroup& g) {
  IntMatrix rel(g.rank(), g.rank());
  for (std::size_t i = 0; i < g.rank(); ++i) rel(i, i) = g.factor(i);
  return invariant_factors_of_relations(rel);
}

inline bool is_isomorphic_group(const FinAbGroup& a, const FinAbGroup& b) {
  return a.order() == b.order() && canonical_factors(a) == canonical_factors(b);
}

/// pairing(a, chi) = sum_i a_i chi_i / n_i mod 1; the dual group uses the same factors.
inline Phase dual_pairing(const FinAbGroup& g, const Element& a, const Element& chi) {
  if (a.size() != g.rank() || chi.size() != g.rank())
    throw ValidationError("dual_pairing: shape mismatch with " + g.to_string());
  Phase p;
  for (std::size_t i = 0; i < g.rank(); ++i) p += Phase(a[i] * chi[i], g.factor(i));
  return p;
}

class Subgroup {
 public:
  Subgroup() = default;

  /// The subgroup generated by `gens` (closure under addition).
  static Subgroup generated(const FinAbGroup& parent, std::vector<Element> gens) {
    Subgroup s;
    s.parent_ = parent;
    s.mask_.assign(parent.order(), false);
    s.mask_[0] = true;
    s.members_ = {0};
    for (auto& g : gens) {
      if (!parent.contains(g)) throw ValidationError("generator " + g.to_string() + " is not in " + parent.to_string());
      s.absorb(parent.index(g));
    }
    s.generators_ = std::move(gens);
    std::sort(s.members_.begin(), s.members_.end());
    return s;
  }

  /// The set {x : pred(x)}, which the caller asserts is a subgroup. Generators are chosen
  /// greedily in enumeration order.
  static Subgroup from_predicate(const FinAbGroup& parent, const std::function<bool(std::size_t)>& pred) {
    std::vector<bool> want(parent.order(), false);
    std::size_t count = 0;
    for (std::size_t i = 0; i < parent.order(); ++i)
      if (pred(i)) {
        want[i] = true;
        ++count;
      }
    Subgroup s;
    s.parent_ = parent;
    s.mask_.assign(parent.order(), false);
    s.mask_[0] = true;
    s.members_ = {0};
    for (std::size_t i = 0; i < parent.order() && s.members_.size() < count; ++i) {
      if (want[i] && !s.mask_[i]) {
        s.absorb(i);
        s.generators_.push_back(parent.element(i));
      }
    }
    for (auto m : s.members_)
      if (!want[m]) throw InternalError("from_predicate: predicate set is not closed under addition");
    if (s.members_.size() != count || !want[0]) throw InternalError("from_predicate: predicate set is not a subgroup");
    std::sort(s.members_.begin(), s.members_.end());
    return s;
  }

  [[nodiscard]] const FinAbGroup& parent() const { return parent_; }
  [[nodiscard]] const std::vector<Element>& generators() const { return generators_; }
  [[nodiscard]] const std::vector<std::size_t>& members() const { return members_; }
  [[nodiscard]] std::size_t order() const { return members_.size(); }
  [[nodiscard]] bool contains(std::size_t idx) const { return idx < mask_.size() && mask_[idx]; }
  [[nodiscard]] bool contains(const Element& e) const { return parent_.contains(e) && mask_[parent_.index(e)]; }

  friend bool operator==(const Subgroup& a, const Subgroup& b) {
    return a.parent_ == b.parent_ && a.members_ == b.members_;
  }

 private:
  void absorb(std::size_t g) {
    if (mask_[g]) return;
    // members_ is a subgroup; adjoin multiples of g coset by coset.
    std::vector<std::size_t> base = members_;
    std::size_t step = g;
    while (!mask_[step]) {
      for (auto b : base) {
        const std::size_t x = parent_.add(b, step);
        if (!mask_[x]) {
          mask_[x] = true;
          members_.push_back(x);
        }
      }
      step = parent_.add(step, g);
    }
  }

  FinAbGroup parent_;
  std::vector<Element> generators_;
  std::vector<std::size_t> members_;
  std::vector<bool> mask_;
};

/// A homomorphism given by the images of the source generators.
class Hom {
 public:
  Hom() = default;

  Hom(FinAbGroup source, FinAbGroup target, std::vector<Element> images)
      : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
    if (images_.size() != source_.rank())
      throw ValidationError("homomorphism needs " + std::to_string(source_.rank()) + " generator images, got " +
                            std::to_string(images_.size()));
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (!target_.contains(images_[i]))
        throw ValidationError("image " + images_[i].to_string() + " of generator " + std::to_string(i) + " is not in " +
                              target_.to_string());
      if (target_.scale(images_[i], source_.factor(i)) != target_.zero())
        throw ValidationError("homomorphism not well defined: " + std::to_string(source_.factor(i)) + " * " +
                              images_[i].to_string() + " != 0");
    }
  }

  static Hom identity(const FinAbGroup& g) {
    std::vector<Element> imgs;
    for (std::size_t i = 0; i < g.rank(); ++i) imgs.push_back(g.generator(i));
    return Hom(g, g, std::move(imgs));
  }

  [[nodiscard]] const FinAbGroup& source() const { return source_; }
  [[nodiscard]] const FinAbGroup& target() const { return target_; }
  [[nodiscard]] const std::vector<Element>& images() const { return images_; }

  [[nodiscard]] Element apply(const Element& x) const {
    if (!source_.contains(x)) throw ValidationError("element " + x.to_string() + " not in source " + source_.to_string());
    std::vector<std::int64_t> acc(target_.rank(), 0);
    for (std::size_t i = 0; i < source_.rank(); ++i)
      for (std::size_t j = 0; j < target_.rank(); ++j) acc[j] = (acc[j] + x[i] * images_[i][j]) % target_.factor(j);
    return Element(std::move(acc));
  }
  [[nodiscard]] std::size_t apply(std::size_t idx) const { return target_.index(apply(source_.element(idx))); }

  /// Full image table indexed by source enumeration.
  [[nodiscard]] std::vector<std::size_t> table() const {
    std::vector<std::size_t> t(source_.order());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = apply(i);
    return t;
  }

  [[nodiscard]] bool is_injective() const {
    for (std::size_t i = 1; i < source_.order(); ++i)
      if (apply(i) == 0) return false;
    return true;
  }
  [[nodiscard]] bool is_bijective() const { return source_.order() == target_.order() && is_injective(); }

  /// Columns are generator images (one integer vector per source generator).
  [[nodiscard]] std::vector<std::vector<std::int64_t>> matrix() const {
    std::vector<std::vector<std::int64_t>> m;
    for (const auto& e : images_) m.push_back(e.coeffs);
    return m;
  }

  [[nodiscard]] Hom compose_after(const Hom& first) const {  // this ∘ first
    if (!(first.target() == source_)) throw ValidationError("compose: target/source mismatch");
    std::vector<Element> imgs;
    for (const auto& e : first.images()) imgs.push_back(apply(e));
    return Hom(first.source(), target_, std::move(imgs));
  }

  friend bool operator==(const Hom&, const Hom&) = default;

 private:
  FinAbGroup source_;
  FinAbGroup target_;
  std::vector<Element> images_;
};

/// A subgroup presented as an abstract group with its inclusion map.
struct SubgroupPresentation {
  FinAbGroup group;
  Hom inclusion;
};

inline SubgroupPresentation present_subgroup(const Subgroup& sub) {
  const FinAbGroup& g = sub.parent();
  const auto& gens = sub.generators();
  const std::size_t r = gens.size(), k = g.rank();
  if (r == 0) return {FinAbGroup{}, Hom(FinAbGroup{}, g, {})};
  // Relations among the generators: kernel of [h_1 .. h_r | diag(n)] over Z.
  IntMatrix a(k, r + k);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < k; ++i) a(i, j) = gens[j][i];
  for (std::size_t i = 0; i < k; ++i) a(i, r + i) = g.factor(i);
  const auto d = smith_normal_form(a);
  std::size_t rank = 0;
  for (auto s : d.diagonal)
    if (s != 0) ++rank;
  IntMatrix rel(r, r + k - rank);
  for (std::size_t c = rank; c < r + k; ++c)
    for (std::size_t j = 0; j < r; ++j) rel(j, c - rank) = d.right(j, c);
  const auto dk = smith_normal_form(rel);
  std::vector<std::int64_t> factors;
  std::vector<Element> images;
  for (std::size_t i = 0; i < r; ++i) {
    const std::int64_t s = i < dk.diagonal.size() ? dk.diagonal[i] : 0;
    if (s == 0) throw InternalError("present_subgroup: infinite relation quotient");
    if (s == 1) continue;
    factors.push_back(s);
    std::vector<std::int64_t> img(k, 0);
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t t = 0; t < k; ++t) img[t] += dk.left_inverse(j, i) * gens[j][t];
    images.push_back(g.reduce(std::move(img)));
  }
  FinAbGroup abstract(std::move(factors));
  Hom inc(abstract, g, std::move(images));
  if (abstract.order() != sub.order() || !inc.is_injective())
    throw InternalError("present_subgroup: presentation does not match the subgroup");
  return {std::move(abstract), std::move(inc)};
}

struct Quotient {
  Subgroup subgroup;
  FinAbGroup group;
  Hom projection;
  /// quotient index -> parent index of the minimal coset member
  std::vector<std::size_t> section;
};

inline Quotient subgroup_quotient(const FinAbGroup& g, const std::vector<Element>& gens) {
  Quotient q;
  q.subgroup = Subgroup::generated(g, gens);
  const std::size_t k = g.rank();
  IntMatrix rel(k, gens.size() + k);
  for (std::size_t j = 0; j < gens.size(); ++j)
    for (std::size_t i = 0; i < k; ++i) rel(i, j) = gens[j][i];
  for (std::size_t i = 0; i < k; ++i) rel(i, gens.size() + i) = g.factor(i);
  const auto d = smith_normal_form(rel);
  std::vector<std::int64_t> factors;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < k; ++i) {
    const std::int64_t s = d.diagonal[i];
    if (s == 0) throw InternalError("subgroup_quotient: infinite quotient");
    if (s != 1) {
      factors.push_back(s);
      kept.push_back(i);
    }
  }
  q.group = FinAbGroup(factors);
  std::vector<Element> images;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<std::int64_t> img;
    for (auto i : kept) img.push_back(d.left(i, j));
    images.push_back(q.group.reduce(std::move(img)));
  }
  q.projection = Hom(g, q.group, std::move(images));
  if (q.group.order() * q.subgroup.order() != g.order())
    throw InternalError("subgroup_quotient: |H| * |G/H| != |G|");
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  q.section.assign(q.group.order(), unset);
  for (std::size_t x = 0; x < g.order(); ++x) {
    const std::size_t c = q.projection.apply(x);
    if (q.section[c] == unset) q.section[c] = x;
  }
  return q;
}

struct IsoSearchOptions {
  std::size_t bound = 256;
  bool first_only = false;
  /// Called with the images (target indices) of generators 0..i; returning false prunes.
  std::function<bool(std::span<const std::size_t>)> prune;
};

/// All isomorphisms G -> H accepted by `accept`, by backtracking over generator images.
inline std::vector<Hom> find_isomorphisms(const FinAbGroup& g, const FinAbGroup& h,
                                          const std::function<bool(const Hom&)>& accept = {},
                                          const IsoSearchOptions& opts = {}) {
  if (g.order() > opts.bound || h.order() > opts.bound)
    throw CapacityError("isomorphism search bound " + std::to_string(opts.bound) + " exceeded (|G|=" +
                        std::to_string(g.order()) + ", |H|=" + std::to_string(h.order()) + ")");
  std::vector<Hom> out;
  if (!is_isomorphic_group(g, h)) return out;

  // Candidate images per generator: elements of the same order.
  std::vector<std::vector<std::size_t>> cands(g.rank());
  for (std::size_t i = 0; i < g.rank(); ++i)
    for (std::size_t y = 0; y < h.order(); ++y)
      if (h.element_order(h.element(y)) == g.factor(i)) cands[i].push_back(y);

  std::vector<std::size_t> chosen;
  std::vector<bool> span(h.order(), false);
  span[0] = true;
  std::vector<std::size_t> span_members{0};

  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == g.rank()) {
      std::vector<Element> imgs;
      for (auto y : chosen) imgs.push_back(h.element(y));
      Hom f(g, h, std::move(imgs));
      if (!accept || accept(f)) {
        out.push_back(std::move(f));
        if (opts.first_only) return true;
      }
      return false;
    }
    for (auto y : cands[i]) {
      // The new generator must meet the current span trivially.
      bool independent = true;
      std::size_t m = y;
      for (std::int64_t c = 1; c < g.factor(i); ++c, m = h.add(m, y))
        if (span[m]) {
          independent = false;
          break;
        }
      if (!independent) continue;
      chosen.push_back(y);
      if (opts.prune && !opts.prune(chosen)) {
        chosen.pop_back();
        continue;
      }
      const std::size_t old = span_members.size();
      std::size_t step = y;
      for (std::int64_t c = 1; c < g.factor(i); ++c, step = h.add(step, y))
        for (std::size_t b = 0; b < old; ++b) {
          const std::size_t x = h.add(span_members[b], step);
          span[x] = true;
          span_members.push_back(x);
        }
      const bool stop = rec(i + 1);
      for (std::size_t b = old; b < span_members.size(); ++b) span[span_members[b]] = false;
      span_members.resize(old);
      chosen.pop_back();
      if (stop) return true;
    }
    return false;
  };
  rec(0);
  return out;
}

/// All finite abelian groups of order n, each with invariant factors d_1 | d_2 | ...
inline std::vector<FinAbGroup> abelian_groups_of_order(std::int64_t n) {
  if (n < 1) throw ValidationError("group order must be positive");
  std::vector<std::pair<std::int64_t, int>> primes;
  std::int64_t m = n;
  for (std::int64_t p = 2; p * p <= m; ++p) {
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e) primes.push_back({p, e});
  }
  if (m > 1) primes.push_back({m, 1});

  auto partitions = [](int e) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int rest, int maxpart) {
      if (rest == 0) {
        out.push_back(cur);
        return;
      }
      for (int p = std::min(rest, maxpart); p >= 1; --p) {
        cur.push_back(p);
        rec(rest - p, p);
        cur.pop_back();
      }
    };
    rec(e, e);
    return out;
  };

  std::vector<std::vector<std::int64_t>> lists{{}};  // descending invariant factors
  for (auto [p, e] : primes) {
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& base : lists)
      for (const auto& part : partitions(e)) {
        std::vector<std::int64_t> f(std::max(base.size(), part.size()), 1);
        for (std::size_t i = 0; i < base.size(); ++i) f[i] = base[i];
        for (std::size_t i = 0; i < part.size(); ++i)
          for (int t = 0; t < part[i]; ++t) f[i] *= p;
        next.push_back(std::move(f));
      }
    lists = std::move(next);
  }
  std::vector<FinAbGroup> out;
  for (auto f : lists) {
    std::reverse(f.begin(), f.end());
    out.emplace_back(std::move(f));
  }
  return out;
}

/// Every subgroup of g, each listed once (enumerated by closing generator sets).
inline std::vector<Subgroup> all_subgroups(const FinAbGroup& g, std::size_t bound = 256) {
  if (g.order() > bound) throw CapacityError("subgroup enumeration bound exceeded");
  std::vector<Subgroup> out{Subgroup::generated(g, {})};
  std::vector<std::vector<std::size_t>> seen{out[0].members()};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t x = 1; x < g.order(); ++x) {
      if (out[i].contains(x)) continue;
      auto gens = out[i].generators();
      gens.push_back(g.element(x));
      auto s = Subgroup::generated(g, gens);
      if (std::find(seen.begin(), seen.end(), s.members()) != seen.end()) continue;
      seen.push_back(s.members());
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace cfprod
