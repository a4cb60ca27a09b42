#pragma once

// Graded fusion rings: basis, grading, unit, duality and structure constants.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfprod/abgroup.hpp"
#include "cfprod/error.hpp"
#include "cfprod/metric.hpp"
#include "cfprod/pointed.hpp"

namespace cfprod {

/// Invertible grade-0 basis elements realizing the dual group of B: labels[phi] is the
/// basis index for phi (phi in enumeration order of the dual group).
struct RingEmbedding {
  FinAbGroup b;
  std::vector<std::size_t> labels;
};

struct FusionRingData {
  std::string name;
  FinAbGroup grading_group;
  std::vector<std::string> basis;
  std::vector<Element> grade;
  std::size_t unit = 0;
  std::vector<std::size_t> dual;
  /// Sparse structure constants (a, b, c, N_ab^c); missing entries are zero.
  std::vector<std::array<std::size_t, 3>> n_index;
  std::vector<std::int64_t> n_value;
  std::optional<RingEmbedding> embedding;

  void set(std::size_t a, std::size_t b, std::size_t c, std::int64_t v) {
    n_index.push_back({a, b, c});
    n_value.push_back(v);
  }
};

class GradedFusionRing;
GradedFusionRing validate_fusion_ring(const FusionRingData& data);

class GradedFusionRing {
 public:
  using Term = std::pair<std::size_t, std::int64_t>;

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] std::size_t rank() const { return basis_.size(); }
  [[nodiscard]] const FinAbGroup& grading_group() const { return grading_; }
  [[nodiscard]] const std::vector<std::string>& basis() const { return basis_; }
  [[nodiscard]] const std::string& label(std::size_t a) const { return basis_[a]; }
  [[nodiscard]] std::size_t index(const std::string& label) const {
    auto it = std::find(basis_.begin(), basis_.end(), label);
    if (it == basis_.end()) throw ValidationError("unknown basis label '" + label + "'");
    return static_cast<std::size_t>(it - basis_.begin());
  }
  [[nodiscard]] const Element& grade(std::size_t a) const { return grade_[a]; }
  [[nodiscard]] std::size_t grade_index(std::size_t a) const { return grading_.index(grade_[a]); }
  [[nodiscard]] std::size_t unit() const { return unit_; }
  [[nodiscard]] std::size_t dual(std::size_t a) const { return dual_[a]; }
  [[nodiscard]] std::int64_t n(std::size_t a, std::size_t b, std::size_t c) const {
    return dense_[(a * rank() + b) * rank() + c];
  }
  /// a (x) b as a list of (c, multiplicity) with multiplicity > 0, ordered by c.
  [[nodiscard]] const std::vector<Term>& product(std::size_t a, std::size_t b) const { return products_[a * rank() + b]; }
  [[nodiscard]] const std::optional<RingEmbedding>& embedding() const { return embedding_; }

  /// For an invertible basis element g, the unique c with g (x) a = c.
  [[nodiscard]] std::size_t shift(std::size_t g, std::size_t a) const {
    const auto& p = product(g, a);
    if (p.size() != 1 || p[0].second != 1) throw ValidationError(label(g) + " is not invertible");
    return p[0].first;
  }
  [[nodiscard]] bool is_invertible(std::size_t a) const {
    const auto& p = product(a, dual(a));
    return p.size() == 1 && p[0].first == unit_ && p[0].second == 1;
  }

  [[nodiscard]] FusionRingData data() const {
    FusionRingData d;
    d.name = name_;
    d.grading_group = grading_;
    d.basis = basis_;
    d.grade = grade_;
    d.unit = unit_;
    d.dual = dual_;
    for (std::size_t a = 0; a < rank(); ++a)
      for (std::size_t b = 0; b < rank(); ++b)
        for (const auto& [c, m] : product(a, b)) d.set(a, b, c, m);
    d.embedding = embedding_;
    return d;
  }

  friend GradedFusionRing validate_fusion_ring(const FusionRingData& data);

 private:
  std::string name_;
  FinAbGroup grading_;
  std::vector<std::string> basis_;
  std::vector<Element> grade_;
  std::size_t unit_ = 0;
  std::vector<std::size_t> dual_;
  std::vector<std::int64_t> dense_;
  std::vector<std::vector<Term>> products_;
  std::optional<RingEmbedding> embedding_;
};

inline GradedFusionRing validate_fusion_ring(const FusionRingData& d) {
  const std::size_t r = d.basis.size();
  if (r == 0) throw ValidationError("fusion ring has an empty basis");
  if (r > 256) throw CapacityError("fusion ring rank too large");
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b)
      if (d.basis[a] == d.basis[b]) throw ValidationError("duplicate basis label '" + d.basis[a] + "'");
  if (d.grade.size() != r) throw ValidationError("grade map does not cover the basis");
  if (d.dual.size() != r) throw ValidationError("dual map does not cover the basis");
  if (d.unit >= r) throw ValidationError("unit is not a basis element");
  if (d.n_index.size() != d.n_value.size()) throw ValidationError("structure constant table is inconsistent");
  for (std::size_t a = 0; a < r; ++a) {
    if (!d.grading_group.contains(d.grade[a]))
      throw ValidationError("grade of '" + d.basis[a] + "' is not in " + d.grading_group.to_string());
    if (d.dual[a] >= r) throw ValidationError("dual of '" + d.basis[a] + "' is not a basis element");
  }
  GradedFusionRing ring;
  ring.name_ = d.name;
  ring.grading_ = d.grading_group;
  ring.basis_ = d.basis;
  ring.grade_ = d.grade;
  ring.unit_ = d.unit;
  ring.dual_ = d.dual;
  ring.dense_.assign(r * r * r, 0);
  std::vector<bool> given(r * r * r, false);
  for (std::size_t i = 0; i < d.n_index.size(); ++i) {
    const auto [a, b, c] = d.n_index[i];
    if (a >= r || b >= r || c >= r) throw ValidationError("structure constant refers to an unknown basis element");
    if (d.n_value[i] < 0)
      throw ValidationError("negative structure constant N(" + d.basis[a] + "," + d.basis[b] + "," + d.basis[c] + ")");
    const std::size_t k = (a * r + b) * r + c;
    if (given[k] && ring.dense_[k] != d.n_value[i])
      throw ValidationError("conflicting entries for N(" + d.basis[a] + "," + d.basis[b] + "," + d.basis[c] + ")");
    given[k] = true;
    ring.dense_[k] = d.n_value[i];
  }
  ring.products_.assign(r * r, {});
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t c = 0; c < r; ++c)
        if (ring.n(a, b, c) != 0) ring.products_[a * r + b].push_back({c, ring.n(a, b, c)});
  const auto& lab = d.basis;
  const std::size_t u = d.unit;
  if (d.grade[u] != ring.grading_.zero()) throw ValidationError("unit '" + lab[u] + "' is not in grade 0");
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t c = 0; c < r; ++c) {
      const std::int64_t want = a == c ? 1 : 0;
      if (ring.n(a, u, c) != want || ring.n(u, a, c) != want)
        throw ValidationError("unit axiom fails: N(" + lab[a] + ", unit, " + lab[c] + ") or N(unit, " + lab[a] + ", " +
                              lab[c] + ") != " + std::to_string(want));
    }
  for (std::size_t a = 0; a < r; ++a) {
    if (d.dual[d.dual[a]] != a) throw ValidationError("dual is not an involution at '" + lab[a] + "'");
    if (ring.grading_.add(d.grade[a], d.grade[d.dual[a]]) != ring.grading_.zero())
      throw ValidationError("grade of dual('" + lab[a] + "') is not minus the grade");
    for (std::size_t b = 0; b < r; ++b) {
      const std::int64_t want = b == d.dual[a] ? 1 : 0;
      if (ring.n(a, b, u) != want)
        throw ValidationError("duality fails: N(" + lab[a] + ", " + lab[b] + ", unit) = " +
                              std::to_string(ring.n(a, b, u)) + ", expected " + std::to_string(want));
    }
  }
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (const auto& [c, m] : ring.product(a, b))
        if (d.grade[c] != ring.grading_.add(d.grade[a], d.grade[b]))
          throw ValidationError("grading fails: " + lab[c] + " appears in " + lab[a] + " (x) " + lab[b]);
  // (a b) c = a (b c), compared as vectors over the basis.
  std::vector<std::int64_t> lhs(r), rhs(r);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t c = 0; c < r; ++c) {
        std::fill(lhs.begin(), lhs.end(), 0);
        std::fill(rhs.begin(), rhs.end(), 0);
        for (const auto& [e, m1] : ring.product(a, b))
          for (const auto& [t, m2] : ring.product(e, c)) lhs[t] += m1 * m2;
        for (const auto& [f, m1] : ring.product(b, c))
          for (const auto& [t, m2] : ring.product(a, f)) rhs[t] += m1 * m2;
        if (lhs != rhs)
          throw ValidationError("associativity fails for (" + lab[a] + ", " + lab[b] + ", " + lab[c] + ")");
      }
  if (d.embedding) {
    const auto& emb = *d.embedding;
    if (emb.labels.size() != emb.b.order())
      throw ValidationError("embedding lists " + std::to_string(emb.labels.size()) + " labels for a group of order " +
                            std::to_string(emb.b.order()));
    for (std::size_t phi = 0; phi < emb.labels.size(); ++phi) {
      const std::size_t a = emb.labels[phi];
      if (a >= r) throw ValidationError("embedding refers to an unknown basis element");
      if (d.grade[a] != ring.grading_.zero()) throw ValidationError("embedded invertible '" + lab[a] + "' is not in grade 0");
      if (!ring.is_invertible(a)) throw ValidationError("embedded element '" + lab[a] + "' is not invertible");
    }
    if (emb.labels[0] != u) throw ValidationError("embedding does not send 0 to the unit");
    for (std::size_t phi = 0; phi < emb.labels.size(); ++phi)
      for (std::size_t psi = 0; psi < emb.labels.size(); ++psi)
        if (ring.shift(emb.labels[phi], emb.labels[psi]) != emb.labels[emb.b.add(phi, psi)])
          throw ValidationError("embedding is not a group homomorphism at (" + emb.b.element(phi).to_string() + ", " +
                                emb.b.element(psi).to_string() + ")");
    std::vector<std::size_t> sorted = emb.labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ValidationError("embedding is not injective");
    ring.embedding_ = emb;
  }
  return ring;
}

/// Group ring of a pre-metric group, trivially graded.
inline GradedFusionRing ring_of_premetric(const PreMetricGroup& p) {
  FusionRingData d;
  d.name = p.name();
  const FinAbGroup& e = p.group();
  for (std::size_t x = 0; x < e.order(); ++x) {
    d.basis.push_back(e.element(x).to_string());
    d.grade.push_back(Element{});
    d.dual.push_back(e.neg(x));
    for (std::size_t y = 0; y < e.order(); ++y) d.set(x, y, e.add(x, y), 1);
  }
  return validate_fusion_ring(d);
}

/// Group ring graded by the canonical grading, with the embedded dual group.
inline GradedFusionRing ring_of_pointed(const PointedCategory& c) {
  FusionRingData d = ring_of_premetric(c.pmg).data();
  d.grading_group = c.b;
  const auto deg = c.grading.table();
  for (std::size_t x = 0; x < c.order(); ++x) d.grade[x] = c.b.element(deg[x]);
  d.embedding = RingEmbedding{c.b, c.iota.table()};
  return validate_fusion_ring(d);
}

/// Group ring of a finite abelian group with labels and a grading homomorphism.
inline GradedFusionRing group_ring(const FinAbGroup& e, const Hom& grading, std::vector<std::string> labels = {},
                                   std::string name = {}) {
  if (!(grading.source() == e)) throw ValidationError("grading must be defined on the group");
  FusionRingData d;
  d.name = std::move(name);
  d.grading_group = grading.target();
  for (std::size_t x = 0; x < e.order(); ++x) {
    d.basis.push_back(labels.empty() ? e.element(x).to_string() : labels.at(x));
    d.grade.push_back(grading.apply(e.element(x)));
    d.dual.push_back(e.neg(x));
    for (std::size_t y = 0; y < e.order(); ++y) d.set(x, y, e.add(x, y), 1);
  }
  return validate_fusion_ring(d);
}

inline GradedFusionRing with_embedding(const GradedFusionRing& r, RingEmbedding emb) {
  auto d = r.data();
  d.embedding = std::move(emb);
  return validate_fusion_ring(d);
}

/// Fiber product over the common grading group. The basis is ordered with the right
/// factor outermost, so pair (c, d) comes before (c', d') when d < d', then c < c'.
struct FiberProductRing {
  GradedFusionRing ring;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // basis index -> (c, d)
};

inline FiberProductRing fiber_product_ring(const GradedFusionRing& c, const GradedFusionRing& d) {
  if (!(c.grading_group() == d.grading_group()))
    throw ValidationError("fiber product needs a common grading group: " + c.grading_group().to_string() + " vs " +
                          d.grading_group().to_string());
  FiberProductRing out;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  for (std::size_t y = 0; y < d.rank(); ++y)
    for (std::size_t x = 0; x < c.rank(); ++x)
      if (c.grade(x) == d.grade(y)) {
        index[{x, y}] = out.pairs.size();
        out.pairs.push_back({x, y});
      }
  FusionRingData fd;
  fd.name = c.name().empty() || d.name().empty() ? "" : c.name() + " [x]^G " + d.name();
  fd.grading_group = c.grading_group();
  for (const auto& [x, y] : out.pairs) {
    fd.basis.push_back("(" + c.label(x) + "," + d.label(y) + ")");
    fd.grade.push_back(c.grade(x));
    fd.dual.push_back(index.at({c.dual(x), d.dual(y)}));
  }
  fd.unit = index.at({c.unit(), d.unit()});
  for (std::size_t i = 0; i < out.pairs.size(); ++i)
    for (std::size_t j = 0; j < out.pairs.size(); ++j) {
      const auto [x1, y1] = out.pairs[i];
      const auto [x2, y2] = out.pairs[j];
      for (const auto& [x3, m1] : c.product(x1, x2))
        for (const auto& [y3, m2] : d.product(y1, y2)) fd.set(i, j, index.at({x3, y3}), m1 * m2);
    }
  if (c.embedding()) {
    RingEmbedding emb{c.embedding()->b, {}};
    for (auto a : c.embedding()->labels) emb.labels.push_back(index.at({a, d.unit()}));
    fd.embedding = std::move(emb);
  }
  out.ring = validate_fusion_ring(fd);
  return out;
}

struct Deequivariantization {
  GradedFusionRing ring;
  std::vector<std::size_t> orbit_of;        // input basis index -> output basis index
  std::vector<std::size_t> representative;  // output basis index -> input basis index
};

namespace detail {

inline std::string orbit_label(const std::string& rep) {
  if (rep.size() >= 2 && rep.front() == '(' && rep.back() == ')') return "[" + rep.substr(1, rep.size() - 2) + "]";
  return "[" + rep + "]";
}

}  // namespace detail

/// Orbits of a free action of invertible grade-0 elements gamma by left multiplication.
/// `representative_order` ranks basis elements when choosing orbit representatives
/// (default: by basis index).
inline Deequivariantization deequivariantize_ring(const GradedFusionRing& r, const std::vector<std::size_t>& gamma,
                                                  const std::vector<std::size_t>& representative_order = {}) {
  const std::size_t n = r.rank();
  std::vector<std::size_t> g = gamma;
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  if (std::find(g.begin(), g.end(), r.unit()) == g.end()) throw ValidationError("acting set must contain the unit");
  for (auto a : g) {
    if (a >= n) throw ValidationError("acting set refers to an unknown basis element");
    if (!r.is_invertible(a)) throw ValidationError("acting element '" + r.label(a) + "' is not invertible");
    if (r.grade(a) != r.grading_group().zero())
      throw ValidationError("acting element '" + r.label(a) + "' is not in grade 0");
  }
  for (auto a : g)
    for (auto b : g)
      if (!std::binary_search(g.begin(), g.end(), r.shift(a, b)))
        throw ValidationError("acting set is not a group: " + r.label(a) + " (x) " + r.label(b) + " is outside it");
  std::vector<std::size_t> rank_of(n);
  for (std::size_t a = 0; a < n; ++a) rank_of[a] = representative_order.empty() ? a : representative_order.at(a);
  Deequivariantization out;
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  out.orbit_of.assign(n, unset);
  std::vector<std::vector<std::size_t>> orbits;
  for (std::size_t a = 0; a < n; ++a) {
    if (out.orbit_of[a] != unset) continue;
    std::vector<std::size_t> orbit;
    for (auto h : g) {
      const std::size_t b = r.shift(h, a);
      if (h != r.unit() && b == a)
        throw MathError("de-equivariantization requires fixed-point-free action: " + r.label(h) + " fixes " + r.label(a));
      orbit.push_back(b);
    }
    std::sort(orbit.begin(), orbit.end());
    if (std::adjacent_find(orbit.begin(), orbit.end()) != orbit.end())
      throw MathError("de-equivariantization requires fixed-point-free action on the orbit of " + r.label(a));
    for (auto b : orbit) out.orbit_of[b] = orbits.size();
    orbits.push_back(std::move(orbit));
  }
  for (const auto& orbit : orbits)
    out.representative.push_back(
        *std::min_element(orbit.begin(), orbit.end(), [&](std::size_t x, std::size_t y) { return rank_of[x] < rank_of[y]; }));
  FusionRingData d;
  d.name = r.name().empty() ? "" : r.name() + " / Gamma";
  d.grading_group = r.grading_group();
  const std::size_t m = orbits.size();
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t a = out.representative[i];
    d.basis.push_back(detail::orbit_label(r.label(a)));
    d.grade.push_back(r.grade(a));
    d.dual.push_back(out.orbit_of[r.dual(a)]);
  }
  d.unit = out.orbit_of[r.unit()];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k) {
        std::int64_t v = 0;
        for (auto h : g) v += r.n(out.representative[i], out.representative[j], r.shift(h, out.representative[k]));
        if (v) d.set(i, j, k, v);
      }
  if (r.embedding()) {
    RingEmbedding emb{r.embedding()->b, {}};
    for (auto a : r.embedding()->labels) emb.labels.push_back(out.orbit_of[a]);
    // Only kept when it stays injective (the acting set may meet the image).
    std::vector<std::size_t> s = emb.labels;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) == s.end()) d.embedding = std::move(emb);
  }
  out.ring = validate_fusion_ring(d);
  return out;
}

struct CfpRing {
  FiberProductRing fiber;
  std::vector<std::size_t> diagonal;  // fiber-product indices of (phi, -phi)
  Deequivariantization quotient;
  [[nodiscard]] const GradedFusionRing& ring() const { return quotient.ring; }
};

inline CfpRing cfp_ring(const GradedFusionRing& c, const GradedFusionRing& d,
                        const std::vector<std::size_t>& representative_order = {}) {
  if (!c.embedding() || !d.embedding()) throw ValidationError("condensed fiber product needs embedded dual groups on both rings");
  const auto& ec = *c.embedding();
  const auto& ed = *d.embedding();
  if (!(ec.b == ed.b)) throw ValidationError("embedded dual groups differ: " + ec.b.to_string() + " vs " + ed.b.to_string());
  CfpRing out;
  out.fiber = fiber_product_ring(c, d);
  const auto& pairs = out.fiber.pairs;
  for (std::size_t phi = 0; phi < ec.b.order(); ++phi) {
    const std::pair<std::size_t, std::size_t> want{ec.labels[phi], ed.labels[ec.b.neg(phi)]};
    auto it = std::find(pairs.begin(), pairs.end(), want);
    if (it == pairs.end()) throw InternalError("diagonal element is missing from the fiber product");
    out.diagonal.push_back(static_cast<std::size_t>(it - pairs.begin()));
  }
  out.quotient = deequivariantize_ring(out.fiber.ring, out.diagonal, representative_order);
  return out;
}

/// Frobenius-Perron dimensions by power iteration on the sum of all fusion matrices.
inline std::vector<double> fp_dimensions(const GradedFusionRing& r, double tol = 1e-13, int max_iter = 100000) {
  const std::size_t n = r.rank();
  std::vector<double> v(n, 1.0), w(n);
  for (int it = 0; it < max_iter; ++it) {
    // w = (I + sum_a L_a) v with (L_a)_{cb} = N_ab^c; the identity shift makes it converge
    for (std::size_t c = 0; c < n; ++c) w[c] = v[c];
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (const auto& [c, m] : r.product(a, b)) w[c] += static_cast<double>(m) * v[b];
    const double s = w[r.unit()];
    double diff = 0;
    for (std::size_t c = 0; c < n; ++c) {
      w[c] /= s;
      diff = std::max(diff, std::abs(w[c] - v[c]));
    }
    v.swap(w);
    if (diff < tol) break;
  }
  return v;
}

inline double fp_dimension(const GradedFusionRing& r) {
  double s = 0;
  for (double d : fp_dimensions(r)) s += d * d;
  return s;
}

/// Is `map` (basis of r -> basis of s) a grade-preserving ring isomorphism?
inline bool is_ring_isomorphism(const GradedFusionRing& r, const GradedFusionRing& s, const std::vector<std::size_t>& map,
                                bool preserve_grades = true) {
  const std::size_t n = r.rank();
  if (s.rank() != n || map.size() != n) return false;
  std::vector<bool> hit(n, false);
  for (auto y : map) {
    if (y >= n || hit[y]) return false;
    hit[y] = true;
  }
  if (map[r.unit()] != s.unit()) return false;
  for (std::size_t a = 0; a < n; ++a) {
    if (preserve_grades && r.grade(a) != s.grade(map[a])) return false;
    if (map[r.dual(a)] != s.dual(map[a])) return false;
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (r.n(a, b, c) != s.n(map[a], map[b], map[c])) return false;
  }
  return true;
}

/// Backtracking search for ring isomorphisms r -> s (grade-preserving unless told otherwise).
inline std::vector<std::vector<std::size_t>> find_ring_isomorphisms(const GradedFusionRing& r, const GradedFusionRing& s,
                                                                    bool preserve_grades = true, bool first_only = true,
                                                                    std::size_t max_rank = 64) {
  std::vector<std::vector<std::size_t>> out;
  const std::size_t n = r.rank();
  if (s.rank() != n) return out;
  if (n > max_rank) throw CapacityError("ring isomorphism search bound exceeded");
  // Cheap invariant per element: number of terms and total multiplicity of a (x) dual(a).
  auto signature = [](const GradedFusionRing& ring, std::size_t a) {
    std::int64_t tot = 0;
    for (const auto& t : ring.product(a, ring.dual(a))) tot += t.second;
    return std::pair<std::size_t, std::int64_t>{ring.product(a, ring.dual(a)).size(), tot};
  };
  std::vector<std::size_t> map(n, static_cast<std::size_t>(-1)), order;
  std::vector<bool> used(n, false);
  order.push_back(r.unit());
  for (std::size_t a = 0; a < n; ++a)
    if (a != r.unit()) order.push_back(a);
  std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
    if (k == n) {
      if (is_ring_isomorphism(r, s, map, preserve_grades)) {
        out.push_back(map);
        return first_only;
      }
      return false;
    }
    const std::size_t a = order[k];
    for (std::size_t y = 0; y < n; ++y) {
      if (used[y]) continue;
      if (k == 0 && y != s.unit()) continue;
      if (preserve_grades && r.grade(a) != s.grade(y)) continue;
      if (signature(r, a) != signature(s, y)) continue;
      map[a] = y;
      bool ok = true;
      for (std::size_t i = 0; i <= k && ok; ++i)
        for (std::size_t j = 0; j <= k && ok; ++j)
          for (std::size_t l = 0; l <= k && ok; ++l) {
            const std::size_t x1 = order[i], x2 = order[j], x3 = order[l];
            if (r.n(x1, x2, x3) != s.n(map[x1], map[x2], map[x3])) ok = false;
          }
      if (ok) {
        used[y] = true;
        if (rec(k + 1)) return true;
        used[y] = false;
      }
      map[a] = static_cast<std::size_t>(-1);
    }
    return false;
  };
  rec(0);
  return out;
}

}  // namespace cfprod
