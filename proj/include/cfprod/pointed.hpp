#pragma once

// Pointed categories over a transparent pointed subcategory B_z: the symmetric
// category on the dual group of B with q_z(phi) = pairing(phi, z). The dual group is
// always represented with the same invariant factors as B.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <future>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfprod/abgroup.hpp"
#include "cfprod/error.hpp"
#include "cfprod/metric.hpp"
#include "cfprod/phase.hpp"

namespace cfprod {

struct PointedCategory {
  PreMetricGroup pmg;
  FinAbGroup b;
  Element z;
  Hom iota;     // dual of B -> E
  Hom grading;  // E -> B

  [[nodiscard]] const FinAbGroup& group() const { return pmg.group(); }
  [[nodiscard]] const std::string& name() const { return pmg.name(); }
  [[nodiscard]] std::size_t order() const { return pmg.order(); }
  /// Non-degenerate of order |B|^2: a minimal modular extension of B_z.
  [[nodiscard]] bool is_minimal_modular() const {
    return is_nondegenerate(pmg) && pmg.order() == b.order() * b.order();
  }
};

inline void check_z(const FinAbGroup& b, const Element& z) {
  if (!b.contains(z)) throw ValidationError("z = " + z.to_string() + " is not an element of B = " + b.to_string());
  if (b.scale(z, 2) != b.zero()) throw ValidationError("z = " + z.to_string() + " does not satisfy 2z = 0");
}

inline PointedCategory make_pointed(PreMetricGroup pmg, FinAbGroup b, Element z, Hom iota) {
  check_z(b, z);
  PointedCategory c;
  c.grading = canonical_grading(pmg, iota, b, z);
  c.pmg = std::move(pmg);
  c.b = std::move(b);
  c.z = std::move(z);
  c.iota = std::move(iota);
  return c;
}

inline Phase qz(const FinAbGroup& b, const Element& z, const Element& phi) { return dual_pairing(b, phi, z); }

/// B_z itself: the dual group with q_z, embedded by the identity.
inline PointedCategory make_Bz(const FinAbGroup& b, const Element& z) {
  check_z(b, z);
  std::vector<Phase> t(b.order());
  for (std::size_t phi = 0; phi < b.order(); ++phi) t[phi] = qz(b, z, b.element(phi));
  auto pmg = validate_premetric(b, std::move(t), "B_z");
  return make_pointed(std::move(pmg), b, z, Hom::identity(b));
}

/// The Drinfeld center of B_z: dual(B) x B with Q(phi, b) = pairing(phi, b) + pairing(phi, z),
/// with B_z embedded as dual(B) x {0}.
inline PointedCategory center_of_Bz(const FinAbGroup& b, const Element& z) {
  check_z(b, z);
  FinAbGroup e = direct_product(b, b);
  std::vector<Phase> t(e.order());
  for (std::size_t phi = 0; phi < b.order(); ++phi)
    for (std::size_t x = 0; x < b.order(); ++x)
      t[phi * b.order() + x] = dual_pairing(b, b.element(x), b.element(phi)) + qz(b, z, b.element(phi));
  auto pmg = validate_premetric(e, std::move(t), "Z(B_z)");
  std::vector<Element> images;
  for (std::size_t j = 0; j < b.rank(); ++j) {
    std::vector<std::int64_t> c(2 * b.rank(), 0);
    c[j] = 1;
    images.emplace_back(std::move(c));
  }
  Hom iota(b, e, std::move(images));
  return make_pointed(std::move(pmg), b, z, std::move(iota));
}

inline void check_same_base(const PointedCategory& c, const PointedCategory& d) {
  if (!(c.b == d.b) || c.z != d.z)
    throw ValidationError("categories are over different (B, z): (" + c.b.to_string() + ", " + c.z.to_string() +
                          ") vs (" + d.b.to_string() + ", " + d.z.to_string() + ")");
}

/// The graded part of the Deligne product where both gradings agree.
struct FiberProduct {
  PreMetricGroup ambient;  // Deligne product C [x] D
  Subgroup members;        // {(x, y) : deg x = deg y} inside ambient
  PreMetricGroup pmg;      // members presented as an abstract group
  Hom inclusion;           // pmg group -> ambient group
  Hom grading;             // pmg group -> B
  Hom iota_left;           // dual(B) -> pmg group, phi -> (iota_C phi, 0)
  Hom iota_right;          // dual(B) -> pmg group, phi -> (0, iota_D phi)
};

inline std::size_t pair_index(const PointedCategory& d, std::size_t x, std::size_t y) {
  return x * d.order() + y;
}

inline FiberProduct fiber_product_pointed(const PointedCategory& c, const PointedCategory& d) {
  check_same_base(c, d);
  FiberProduct f;
  f.ambient = deligne_product(c.pmg, d.pmg);
  const auto gc = c.grading.table(), gd = d.grading.table();
  const std::size_t nd = d.order();
  f.members = Subgroup::from_predicate(f.ambient.group(), [&](std::size_t xy) { return gc[xy / nd] == gd[xy % nd]; });
  const auto pres = present_subgroup(f.members);
  f.inclusion = pres.inclusion;
  const auto inc = f.inclusion.table();
  std::vector<Phase> t(inc.size());
  for (std::size_t a = 0; a < inc.size(); ++a) t[a] = f.ambient.q(inc[a]);
  const std::string name = c.name().empty() || d.name().empty() ? "" : c.name() + " [x]^B " + d.name();
  f.pmg = validate_premetric(pres.group, std::move(t), name);
  std::vector<std::size_t> local(f.ambient.order(), static_cast<std::size_t>(-1));
  for (std::size_t a = 0; a < inc.size(); ++a) local[inc[a]] = a;
  const FinAbGroup& g = f.pmg.group();
  std::vector<Element> deg, left, right;
  for (std::size_t k = 0; k < g.rank(); ++k) deg.push_back(c.b.element(gc[inc[g.index(g.generator(k))] / nd]));
  for (std::size_t j = 0; j < c.b.rank(); ++j) {
    const std::size_t phi = c.b.index(c.b.generator(j));
    left.push_back(g.element(local[pair_index(d, c.iota.apply(phi), 0)]));
    right.push_back(g.element(local[pair_index(d, 0, d.iota.apply(phi))]));
  }
  f.grading = Hom(g, c.b, std::move(deg));
  f.iota_left = Hom(c.b, g, std::move(left));
  f.iota_right = Hom(c.b, g, std::move(right));
  return f;
}

/// The diagonal {(iota_C phi, iota_D(-phi))} inside the Deligne product; isotropic.
inline Subgroup nabla(const PointedCategory& c, const PointedCategory& d) {
  check_same_base(c, d);
  FinAbGroup e = direct_product(c.group(), d.group());
  std::vector<Element> gens;
  for (std::size_t j = 0; j < c.b.rank(); ++j) {
    const Element phi = c.b.generator(j);
    const Element x = c.iota.apply(phi), y = d.iota.apply(c.b.neg(phi));
    std::vector<std::int64_t> v(x.coeffs);
    v.insert(v.end(), y.coeffs.begin(), y.coeffs.end());
    gens.emplace_back(std::move(v));
  }
  auto h = Subgroup::generated(e, std::move(gens));
  if (h.order() != c.b.order()) throw InternalError("diagonal subgroup does not have order |B|");
  for (auto xy : h.members())
    if (!(c.pmg.q(xy / d.order()) + d.pmg.q(xy % d.order())).is_zero())
      throw InternalError("diagonal subgroup is not isotropic; the embeddings are invalid");
  return h;
}

struct CondensedFiberProduct {
  PointedCategory category;
  Condensation condensation;  // of the Deligne product by the diagonal
  /// result index -> (x, y) of the minimal coset representative
  std::vector<std::pair<std::size_t, std::size_t>> representative;
};

inline CondensedFiberProduct condensed_fiber_product(const PointedCategory& c, const PointedCategory& d) {
  check_same_base(c, d);
  CondensedFiberProduct out;
  const PreMetricGroup ambient = deligne_product(c.pmg, d.pmg);
  const Subgroup h = nabla(c, d);
  out.condensation = condense(ambient, h);
  const auto gc = c.grading.table(), gd = d.grading.table();
  for (std::size_t xy = 0; xy < ambient.order(); ++xy) {
    const bool graded = gc[xy / d.order()] == gd[xy % d.order()];
    if (graded != out.condensation.centralizer.contains(xy))
      throw InternalError("orthogonal complement of the diagonal is not the fiber product");
  }
  for (auto r : out.condensation.representative) out.representative.emplace_back(r / d.order(), r % d.order());
  const auto& res = out.condensation.result;
  std::vector<Element> images;
  for (std::size_t j = 0; j < c.b.rank(); ++j) {
    const std::size_t x = c.iota.apply(c.b.index(c.b.generator(j)));
    images.push_back(res.group().element(out.condensation.label[pair_index(d, x, 0)]));
  }
  PreMetricGroup pmg = res;
  pmg.set_name(c.name().empty() || d.name().empty() ? "" : "cfp(" + c.name() + ", " + d.name() + ")");
  Hom iota(c.b, pmg.group(), std::move(images));
  out.category = make_pointed(std::move(pmg), c.b, c.z, std::move(iota));
  if (is_nondegenerate(c.pmg) && is_nondegenerate(d.pmg)) {
    if (!is_nondegenerate(out.category.pmg)) throw InternalError("condensed fiber product is degenerate");
    if (out.category.order() * c.b.order() * c.b.order() != c.order() * d.order())
      throw InternalError("condensed fiber product has the wrong order");
  }
  return out;
}

/// Braided equivalence f: C -> D; unless relaxed, f must carry iota_C(dual B) onto
/// iota_D(dual B), which is the same as f o iota_C = iota_D o alpha for an
/// automorphism alpha of the dual group preserving q_z.
inline std::optional<Hom> pointed_equivalence(const PointedCategory& c, const PointedCategory& d, bool relaxed = false,
                                              std::size_t bound = 256) {
  PremetricIsoOptions opts;
  opts.bound = bound;
  if (!relaxed) {
    check_same_base(c, d);
    std::vector<bool> target(d.order(), false);
    for (auto y : d.iota.table()) target[y] = true;
    const auto src = c.iota.table();
    opts.accept = [src, target](const Hom& f) {
      return std::all_of(src.begin(), src.end(), [&](std::size_t x) { return target[f.apply(x)]; });
    };
  }
  return premetric_isomorphic(c.pmg, d.pmg, opts);
}

/// Injective homomorphisms dual(B) -> E realizing q_z.
inline std::vector<Hom> bz_embeddings(const PreMetricGroup& p, const FinAbGroup& b, const Element& z) {
  const FinAbGroup& e = p.group();
  std::vector<std::vector<std::size_t>> cands(b.rank());
  for (std::size_t j = 0; j < b.rank(); ++j)
    for (std::size_t y = 0; y < e.order(); ++y)
      if (e.scale(e.element(y), b.factor(j)) == e.zero()) cands[j].push_back(y);
  std::vector<Hom> out;
  std::vector<Element> imgs(b.rank());
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == b.rank()) {
      Hom f(b, e, imgs);
      if (!f.is_injective()) return;
      for (std::size_t phi = 0; phi < b.order(); ++phi)
        if (p.q(f.apply(phi)) != qz(b, z, b.element(phi))) return;
      out.push_back(std::move(f));
      return;
    }
    for (auto y : cands[j]) {
      imgs[j] = e.element(y);
      rec(j + 1);
    }
  };
  rec(0);
  return out;
}

struct MmeOptions {
  bool relaxed = false;  // plain braided equivalence instead of iota-compatible
  std::size_t max_b = 4;
  unsigned jobs = 1;
};

namespace detail {

inline std::vector<PreMetricGroup> nondegenerate_form_classes(const FinAbGroup& e) {
  FormEnumerator fe(e);
  FormClassifier cls(e);
  std::vector<PreMetricGroup> reps;
  fe.for_each([&](const FormView& v) {
    if (!v.nondegenerate) return;
    if (cls.insert(*v.values, v.denominator).second) reps.push_back(fe.materialize(v));
  });
  return reps;
}

}  // namespace detail

/// All pointed minimal modular extensions of B_z up to equivalence.
inline std::vector<PointedCategory> enumerate_pointed_mme(const FinAbGroup& b, const Element& z,
                                                          const MmeOptions& opts = {}) {
  check_z(b, z);
  if (b.order() > opts.max_b)
    throw CapacityError("minimal modular extension enumeration supports |B| <= " + std::to_string(opts.max_b));
  const auto n = static_cast<std::int64_t>(b.order() * b.order());
  const auto groups = abelian_groups_of_order(n);
  std::vector<std::vector<PreMetricGroup>> per_group(groups.size());
  if (opts.jobs > 1) {
    std::vector<std::future<std::vector<PreMetricGroup>>> futs;
    for (const auto& g : groups)
      futs.push_back(std::async(std::launch::async, [g] { return detail::nondegenerate_form_classes(g); }));
    for (std::size_t i = 0; i < futs.size(); ++i) per_group[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < groups.size(); ++i) per_group[i] = detail::nondegenerate_form_classes(groups[i]);
  }
  std::vector<PointedCategory> out;
  for (const auto& classes : per_group)
    for (const auto& p : classes) {
      auto embeddings = bz_embeddings(p, b, z);
      if (embeddings.empty()) continue;
      if (opts.relaxed) {
        out.push_back(make_pointed(p, b, z, embeddings.front()));
        continue;
      }
      // Classes are orbits of Aut(E, q) on the image subgroups.
      PremetricIsoOptions all;
      const FinAbGroup& e = p.group();
      std::vector<std::size_t> gen(e.rank());
      for (std::size_t k = 0; k < e.rank(); ++k) gen[k] = e.index(e.generator(k));
      IsoSearchOptions so;
      so.prune = [&](std::span<const std::size_t> imgs) {
        const std::size_t i = imgs.size() - 1;
        if (p.q(imgs[i]) != p.q(gen[i])) return false;
        for (std::size_t j = 0; j < i; ++j)
          if (p.b(imgs[i], imgs[j]) != p.b(gen[i], gen[j])) return false;
        return true;
      };
      const auto autos = find_isomorphisms(e, e, {}, so);
      std::vector<std::vector<std::size_t>> seen;
      for (const auto& iota : embeddings) {
        auto image = iota.table();
        std::sort(image.begin(), image.end());
        if (std::find(seen.begin(), seen.end(), image) != seen.end()) continue;
        for (const auto& f : autos) {
          std::vector<std::size_t> moved;
          for (auto x : image) moved.push_back(f.apply(x));
          std::sort(moved.begin(), moved.end());
          if (std::find(seen.begin(), seen.end(), moved) == seen.end()) seen.push_back(std::move(moved));
        }
        out.push_back(make_pointed(p, b, z, iota));
      }
    }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].pmg.set_name("mme" + std::to_string(i));
  return out;
}

/// Exponent form of the modular data of a non-degenerate pointed category:
/// T_x = exp(2 pi i t[x]), S_xy = exp(-2 pi i s[x][y]) / sqrt(|E|).
struct PointedModularData {
  std::vector<Phase> t;
  std::vector<std::vector<Phase>> s;
  double normalization = 1.0;  // 1 / sqrt(|E|)
  std::optional<bool> relations_hold;
};

inline PointedModularData modular_data_pointed(const PreMetricGroup& p, bool check_relations = false) {
  if (!is_nondegenerate(p)) throw MathError("modular data requires a non-degenerate form");
  PointedModularData m;
  const std::size_t n = p.order();
  m.t = p.table();
  m.s.assign(n, std::vector<Phase>(n));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) m.s[x][y] = p.b(x, y);
  m.normalization = 1.0 / std::sqrt(static_cast<double>(n));
  if (check_relations) {
    // (S T)^3 = (Gauss sum / sqrt|E|) S^2 and S^2 is the charge conjugation x -> -x.
    using C = std::complex<double>;
    auto ex = [](const Phase& ph, double sign) { return std::polar(1.0, sign * 2.0 * std::numbers::pi * ph.to_double()); };
    std::vector<C> s(n * n), st(n * n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        s[x * n + y] = ex(m.s[x][y], -1.0) * m.normalization;
        st[x * n + y] = s[x * n + y] * ex(m.t[y], 1.0);
      }
    auto mul = [n](const std::vector<C>& a, const std::vector<C>& b) {
      std::vector<C> r(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t j = 0; j < n; ++j) r[i * n + j] += a[i * n + k] * b[k * n + j];
      return r;
    };
    const auto st3 = mul(mul(st, st), st);
    const auto s2 = mul(s, s);
    const C theta = gauss_sum(p) * m.normalization;
    bool ok = true;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        if (std::abs(st3[x * n + y] - theta * s2[x * n + y]) > 1e-9) ok = false;
        const double conj = p.group().neg(x) == y ? 1.0 : 0.0;
        if (std::abs(s2[x * n + y] - conj) > 1e-9) ok = false;
      }
    m.relations_hold = ok;
  }
  return m;
}

/// Element indices sorted by (grade, index).
inline std::vector<std::size_t> graded_order(const PointedCategory& c) {
  const auto deg = c.grading.table();
  std::vector<std::size_t> idx(c.order());
  for (std::size_t x = 0; x < idx.size(); ++x) idx[x] = x;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return deg[a] < deg[b]; });
  return idx;
}

/// Twists listed grade by grade.
inline std::vector<Phase> twist_sequence(const PointedCategory& c) {
  std::vector<Phase> out;
  for (auto x : graded_order(c)) out.push_back(c.pmg.q(x));
  return out;
}

}  // namespace cfprod
