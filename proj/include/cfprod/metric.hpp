#pragma once

// Pre-metric groups (E, q): the model of a pointed braided fusion category up to
// braided equivalence. Twists are theta(x) = q(x); the double braiding of x and y
// is exp(2 pi i b(x, y)) with b the polarization of q.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfprod/abgroup.hpp"
#include "cfprod/error.hpp"
#include "cfprod/phase.hpp"

namespace cfprod {

class PreMetricGroup;
PreMetricGroup validate_premetric(FinAbGroup e, std::vector<Phase> table, std::string name);

class PreMetricGroup {
 public:
  PreMetricGroup() : q_{Phase{}} {}

  [[nodiscard]] const FinAbGroup& group() const { return group_; }
  [[nodiscard]] const std::vector<Phase>& table() const { return q_; }
  [[nodiscard]] const Phase& q(std::size_t idx) const { return q_[idx]; }
  [[nodiscard]] const Phase& q(const Element& x) const { return q_[group_.index(x)]; }
  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] std::size_t order() const { return group_.order(); }

  /// b(x, y) = q(x + y) - q(x) - q(y)
  [[nodiscard]] Phase b(std::size_t x, std::size_t y) const { return q_[group_.add(x, y)] - q_[x] - q_[y]; }
  [[nodiscard]] Phase b(const Element& x, const Element& y) const { return b(group_.index(x), group_.index(y)); }

  void set_name(std::string n) { name_ = std::move(n); }

  friend PreMetricGroup validate_premetric(FinAbGroup e, std::vector<Phase> table, std::string name);

 private:
  FinAbGroup group_;
  std::vector<Phase> q_;
  std::string name_;
};

/// Checks q(0) = 0, q(-x) = q(x) and additivity of the polarization in its first
/// argument along every generator, which gives full bilinearity.
inline PreMetricGroup validate_premetric(FinAbGroup e, std::vector<Phase> table, std::string name = {}) {
  if (table.size() != e.order())
    throw ValidationError("quadratic form table has " + std::to_string(table.size()) + " entries, group " +
                          e.to_string() + " has order " + std::to_string(e.order()));
  if (!table[0].is_zero()) throw ValidationError("q(0) = " + table[0].to_string() + " != 0");
  for (std::size_t x = 0; x < e.order(); ++x)
    if (table[e.neg(x)] != table[x])
      throw ValidationError("q(-x) != q(x) at x=" + e.element(x).to_string() + ": " + table[e.neg(x)].to_string() +
                            " vs " + table[x].to_string());
  // Work with numerators over a common denominator; the checks are O(rank |E|^2).
  std::int64_t den = 1;
  for (const auto& ph : table) {
    den = std::lcm(den, ph.den());
    if (den > (std::int64_t{1} << 40)) throw CapacityError("quadratic form denominators too large");
  }
  std::vector<std::int64_t> v(table.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = table[x].num() * (den / table[x].den());
  const std::size_t n = e.order();
  std::vector<std::size_t> shift(n), sum;
  const bool tabulate = n <= 2048;
  if (tabulate) {
    sum.resize(n * n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) sum[x * n + y] = e.add(x, y);
  }
  auto b = [&](std::size_t x, std::size_t y) {
    std::int64_t r = (v[tabulate ? sum[x * n + y] : e.add(x, y)] - v[x] - v[y]) % den;
    return r < 0 ? r + den : r;
  };
  for (std::size_t k = 0; k < e.rank(); ++k) {
    const std::size_t g = e.index(e.generator(k));
    for (std::size_t x = 0; x < n; ++x) shift[x] = e.add(x, g);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (b(shift[x], y) != (b(x, y) + b(g, y)) % den)
          throw ValidationError("polarization not bilinear: b(x+e" + std::to_string(k) + ", y) != b(x,y) + b(e" +
                                std::to_string(k) + ",y) at x=" + e.element(x).to_string() +
                                ", y=" + e.element(y).to_string());
  }
  PreMetricGroup p;
  p.group_ = std::move(e);
  p.q_ = std::move(table);
  p.name_ = std::move(name);
  return p;
}

inline Phase bilinear_form(const PreMetricGroup& p, const Element& x, const Element& y) { return p.b(x, y); }

/// Deligne product: direct sum of pre-metric groups, q(x, y) = q_1(x) + q_2(y).
inline PreMetricGroup deligne_product(const PreMetricGroup& a, const PreMetricGroup& b) {
  FinAbGroup e = direct_product(a.group(), b.group());
  std::vector<Phase> t(e.order());
  for (std::size_t i = 0; i < a.order(); ++i)
    for (std::size_t j = 0; j < b.order(); ++j) t[i * b.order() + j] = a.q(i) + b.q(j);
  std::string name = a.name().empty() || b.name().empty() ? std::string{} : a.name() + " [x] " + b.name();
  return validate_premetric(std::move(e), std::move(t), std::move(name));
}

/// {x : b(x, h) = 0 for all h in H}
inline Subgroup orthogonal_complement(const PreMetricGroup& p, const Subgroup& h) {
  std::vector<std::size_t> gens;
  for (const auto& g : h.generators()) gens.push_back(p.group().index(g));
  return Subgroup::from_predicate(p.group(), [&](std::size_t x) {
    return std::all_of(gens.begin(), gens.end(), [&](std::size_t g) { return p.b(x, g).is_zero(); });
  });
}

inline Subgroup radical(const PreMetricGroup& p) {
  std::vector<Element> gens;
  for (std::size_t k = 0; k < p.group().rank(); ++k) gens.push_back(p.group().generator(k));
  return orthogonal_complement(p, Subgroup::generated(p.group(), gens));
}

inline bool is_nondegenerate(const PreMetricGroup& p) { return radical(p).order() == 1; }

inline bool is_isotropic(const PreMetricGroup& p, const Subgroup& h) {
  return std::all_of(h.members().begin(), h.members().end(), [&](std::size_t x) { return p.q(x).is_zero(); });
}

/// Result of condensing an isotropic subgroup H: the pre-metric group H^perp / H
/// together with the coset bookkeeping.
struct Condensation {
  PreMetricGroup result;
  Subgroup condensed;      // H
  Subgroup centralizer;    // H^perp
  /// result index -> minimal member (in E's order) of the coset
  std::vector<std::size_t> representative;
  /// E index -> result index, or npos for x outside H^perp
  std::vector<std::size_t> label;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

inline Condensation condense(const PreMetricGroup& p, const Subgroup& h) {
  if (!(h.parent() == p.group())) throw ValidationError("condense: subgroup lives in a different group");
  for (auto x : h.members())
    if (!p.q(x).is_zero())
      throw MathError("not condensable: q(" + p.group().element(x).to_string() + ") = " + p.q(x).to_string() +
                      " != 0 on the subgroup");
  Condensation c;
  c.condensed = h;
  c.centralizer = orthogonal_complement(p, h);
  const auto pres = present_subgroup(c.centralizer);
  const auto inc = pres.inclusion.table();
  std::vector<std::size_t> local_of(p.order(), Condensation::npos);
  for (std::size_t a = 0; a < inc.size(); ++a) local_of[inc[a]] = a;
  std::vector<Element> hgens;
  for (auto x : h.members()) {
    if (local_of[x] == Condensation::npos) throw InternalError("condense: H is not inside its orthogonal complement");
    hgens.push_back(pres.group.element(local_of[x]));
  }
  const auto quot = subgroup_quotient(pres.group, hgens);
  c.representative.assign(quot.group.order(), Condensation::npos);
  c.label.assign(p.order(), Condensation::npos);
  for (std::size_t x = 0; x < p.order(); ++x) {
    if (local_of[x] == Condensation::npos) continue;
    const std::size_t cls = quot.projection.apply(local_of[x]);
    c.label[x] = cls;
    if (c.representative[cls] == Condensation::npos) c.representative[cls] = x;
  }
  std::vector<Phase> t(quot.group.order());
  for (std::size_t cls = 0; cls < t.size(); ++cls) t[cls] = p.q(c.representative[cls]);
  for (std::size_t x = 0; x < p.order(); ++x)
    if (c.label[x] != Condensation::npos && p.q(x) != t[c.label[x]])
      throw InternalError("condense: q is not constant on the coset of " + p.group().element(x).to_string());
  c.result = validate_premetric(quot.group, std::move(t), p.name().empty() ? "" : "[" + p.name() + "]");
  return c;
}

inline std::complex<double> gauss_sum(const PreMetricGroup& p) {
  std::complex<double> s{0.0, 0.0};
  for (const auto& ph : p.table()) s += std::polar(1.0, 2.0 * std::numbers::pi * ph.to_double());
  return s;
}

struct CentralChargeTolerance {
  double magnitude = 1e-9;
  double snap = 1e-6;
};

/// Index sigma in Z/8 with Gauss sum / |Gauss sum| = exp(2 pi i sigma / 8).
inline int central_charge(const PreMetricGroup& p, CentralChargeTolerance tol = {}) {
  if (!is_nondegenerate(p)) throw MathError("central charge requires a non-degenerate form");
  const auto s = gauss_sum(p);
  const double expect = std::sqrt(static_cast<double>(p.order()));
  if (std::abs(std::abs(s) - expect) > tol.magnitude)
    throw InternalError("Gauss sum magnitude " + std::to_string(std::abs(s)) + " != sqrt(|E|)");
  const auto unit = s / std::abs(s);
  const double turns = std::arg(unit) / (2.0 * std::numbers::pi);
  const int sigma = static_cast<int>(std::lround(turns * 8.0)) % 8;
  const int norm = (sigma + 8) % 8;
  if (std::abs(unit - std::polar(1.0, 2.0 * std::numbers::pi * norm / 8.0)) > tol.snap)
    throw InternalError("normalized Gauss sum is not an 8th root of unity");
  return norm;
}

/// Sorted multiset of q values.
inline std::vector<Phase> twist_multiset(const PreMetricGroup& p) {
  auto t = p.table();
  std::sort(t.begin(), t.end());
  return t;
}

/// The canonical grading deg: E -> B determined by b(x, iota(phi)) = pairing(phi, deg x),
/// returned as a homomorphism. iota maps the dual of B (same factors) into E and must
/// realize q_z: q(iota(phi)) = pairing(phi, z).
inline Hom canonical_grading(const PreMetricGroup& p, const Hom& iota, const FinAbGroup& b_group, const Element& z) {
  if (!(iota.source() == b_group)) throw ValidationError("embedding source must be the dual of B (" + b_group.to_string() + ")");
  if (!(iota.target() == p.group())) throw ValidationError("embedding target is not the category's group");
  if (!b_group.contains(z)) throw ValidationError("z = " + z.to_string() + " is not in B");
  if (!iota.is_injective()) throw ValidationError("embedding of the dual group is not injective");
  for (std::size_t phi = 0; phi < b_group.order(); ++phi) {
    const Phase want = dual_pairing(b_group, b_group.element(phi), z);
    const Phase got = p.q(iota.apply(phi));
    if (want != got)
      throw ValidationError("embedding does not realize q_z: q(iota(" + b_group.element(phi).to_string() + ")) = " +
                            got.to_string() + ", expected " + want.to_string());
  }
  const FinAbGroup& e = p.group();
  std::vector<std::size_t> iota_gen(b_group.rank());
  for (std::size_t j = 0; j < b_group.rank(); ++j) iota_gen[j] = e.index(iota.images()[j]);
  auto degree = [&](std::size_t x) {
    std::vector<std::int64_t> d(b_group.rank());
    for (std::size_t j = 0; j < b_group.rank(); ++j) {
      const Phase v = p.b(x, iota_gen[j]);
      const std::int64_t n = b_group.factor(j);
      if ((v.num() * n) % v.den() != 0) throw InternalError("grading value outside (1/n)Z/Z");
      d[j] = (v.num() * n / v.den()) % n;
    }
    return Element(std::move(d));
  };
  std::vector<Element> images;
  for (std::size_t k = 0; k < e.rank(); ++k) images.push_back(degree(e.index(e.generator(k))));
  Hom deg(e, b_group, std::move(images));
  for (std::size_t x = 0; x < e.order(); ++x)
    if (deg.apply(e.element(x)) != degree(x)) throw InternalError("canonical grading is not a homomorphism");
  return deg;
}

struct PremetricIsoOptions {
  std::size_t bound = 256;
  /// Extra condition on the witness (e.g. compatibility with embeddings).
  std::function<bool(const Hom&)> accept;
};

/// An isomorphism f with q_Q(f(x)) = q_P(x), or nullopt.
inline std::optional<Hom> premetric_isomorphic(const PreMetricGroup& p, const PreMetricGroup& q,
                                               const PremetricIsoOptions& opts = {}) {
  if (p.order() != q.order()) return std::nullopt;
  if (p.order() > opts.bound || q.order() > opts.bound) throw CapacityError("premetric_isomorphic: bound exceeded");
  if (twist_multiset(p) != twist_multiset(q)) return std::nullopt;
  const FinAbGroup& e = p.group();
  std::vector<std::size_t> gen(e.rank());
  for (std::size_t k = 0; k < e.rank(); ++k) gen[k] = e.index(e.generator(k));
  IsoSearchOptions so;
  so.bound = opts.bound;
  so.first_only = true;
  so.prune = [&](std::span<const std::size_t> imgs) {
    const std::size_t i = imgs.size() - 1;
    if (q.q(imgs[i]) != p.q(gen[i])) return false;
    for (std::size_t j = 0; j < i; ++j)
      if (q.b(imgs[i], imgs[j]) != p.b(gen[i], gen[j])) return false;
    return true;
  };
  auto found = find_isomorphisms(e, q.group(), opts.accept, so);
  if (found.empty()) return std::nullopt;
  for (std::size_t x = 0; x < e.order(); ++x)
    if (q.q(found[0].apply(x)) != p.q(x)) throw InternalError("premetric_isomorphic: witness does not preserve q");
  return found[0];
}

// ---------------------------------------------------------------------------
// Fast enumeration of all quadratic forms on a group.
//
// A form is fixed by q(e_i) in (1/(2 n_i))Z/Z (n_i even) or (1/n_i)Z/Z (n_i odd)
// and b(e_i, e_j) in (1/gcd(n_i, n_j))Z/Z for i < j:
//   q(x) = sum_i x_i^2 q(e_i) + sum_{i<j} x_i x_j b(e_i, e_j).
// Values are integers mod `denominator`.
// ---------------------------------------------------------------------------

struct FormView {
  std::int64_t denominator;
  const std::vector<std::int32_t>* values;    // indexed by element
  const std::vector<std::int64_t>* gen_q;     // q(e_i) numerators
  const std::vector<std::int64_t>* gram;      // rank x rank, b(e_i, e_j) numerators (diagonal 2 q(e_i))
  bool nondegenerate;
};

struct GaussView {
  std::int64_t denominator;
  const std::vector<std::int64_t>* gen_q;
  const std::vector<std::int64_t>* gram;
  bool nondegenerate;
  std::complex<double> gauss;
};

class FormEnumerator {
 public:
  explicit FormEnumerator(FinAbGroup e) : e_(std::move(e)) {
    const std::size_t k = e_.rank();
    l_ = 1;
    for (auto n : e_.factors()) l_ = std::lcm(l_, 2 * n);
    if (l_ > std::numeric_limits<std::int32_t>::max() / 4) throw CapacityError("form denominator too large");
    qchoices_.resize(k);
    for (std::size_t i = 0; i < k; ++i) qchoices_[i] = e_.factor(i) % 2 == 0 ? 2 * e_.factor(i) : e_.factor(i);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) pairs_.push_back({i, j});
    contrib_.resize(k);
    std::size_t stride = 1;
    for (std::size_t i = k; i-- > 0;) {
      for (std::int64_t d = 0; d < qchoices_[i]; ++d) {
        const std::int64_t twice = 2 * d * (l_ / qchoices_[i]);
        contrib_[i].push_back(static_cast<std::size_t>((twice / (l_ / e_.factor(i))) % e_.factor(i)) * stride);
      }
      stride *= static_cast<std::size_t>(e_.factor(i));
    }
    coords_.resize(e_.order());
    for (std::size_t x = 0; x < e_.order(); ++x) coords_[x] = e_.element(x).coeffs;
  }

  [[nodiscard]] std::int64_t denominator() const { return l_; }

  [[nodiscard]] std::uint64_t count() const {
    std::uint64_t c = 1;
    for (auto q : qchoices_) c *= static_cast<std::uint64_t>(q);
    for (auto [i, j] : pairs_) c *= static_cast<std::uint64_t>(std::gcd(e_.factor(i), e_.factor(j)));
    return c;
  }

  /// Calls fn(const FormView&) once per form. Non-degeneracy is computed from the Gram
  /// matrix and cached per (off-diagonal, diagonal) class.
  template <class Fn>
  void for_each(Fn&& fn) const {
    const std::size_t k = e_.rank(), n = e_.order();
    std::vector<std::int32_t> values(n, 0);
    std::vector<std::int64_t> gen_q(k, 0), gram(k * k, 0);
    if (k == 0) {
      FormView v{l_, &values, &gen_q, &gram, true};
      fn(v);
      return;
    }
    // Linear-in-q part for every choice vector, computed once.
    std::uint64_t nq = 1;
    for (auto c : qchoices_) nq *= static_cast<std::uint64_t>(c);
    std::vector<std::int32_t> lin(nq * n);
    std::vector<std::int64_t> qv(k, 0);
    for (std::uint64_t t = 0; t < nq; ++t) {
      std::uint64_t r = t;
      for (std::size_t i = k; i-- > 0;) {
        qv[i] = static_cast<std::int64_t>(r % static_cast<std::uint64_t>(qchoices_[i])) * (l_ / qchoices_[i]);
        r /= static_cast<std::uint64_t>(qchoices_[i]);
      }
      for (std::size_t x = 0; x < n; ++x) {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < k; ++i) s += coords_[x][i] * coords_[x][i] % (2 * e_.factor(i)) * qv[i];
        lin[t * n + x] = static_cast<std::int32_t>(s % l_);
      }
    }
    std::vector<std::int64_t> bvals(pairs_.size(), 0);
    std::vector<std::int32_t> cross(n);
    std::vector<std::int64_t> offlin(n * k);
    std::vector<std::int8_t> nd_cache(n);
    for (;;) {
      for (std::size_t x = 0; x < n; ++x) {
        std::int64_t s = 0;
        for (std::size_t p = 0; p < pairs_.size(); ++p)
          s += coords_[x][pairs_[p].first] * coords_[x][pairs_[p].second] * bvals[p];
        cross[x] = static_cast<std::int32_t>(s % l_);
      }
      std::fill(gram.begin(), gram.end(), 0);
      for (std::size_t p = 0; p < pairs_.size(); ++p) {
        gram[pairs_[p].first * k + pairs_[p].second] = bvals[p];
        gram[pairs_[p].second * k + pairs_[p].first] = bvals[p];
      }
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t c = 0; c < k; ++c) {
          std::int64_t s = 0;
          for (std::size_t j = 0; j < k; ++j)
            if (j != c) s += coords_[x][j] * gram[j * k + c];
          offlin[x * k + c] = s % l_;
        }
      std::fill(nd_cache.begin(), nd_cache.end(), -1);
      DiagCursor diag(*this, gen_q, gram);
      for (std::uint64_t t = 0; t < nq; ++t, diag.advance()) {
        const std::size_t diag_key = diag.key();
        if (nd_cache[diag_key] < 0) nd_cache[diag_key] = radical_trivial(gram, offlin) ? 1 : 0;
        const std::int32_t* lt = &lin[t * n];
        for (std::size_t x = 0; x < n; ++x) {
          std::int32_t v = lt[x] + cross[x];
          if (v >= l_) v -= static_cast<std::int32_t>(l_);
          values[x] = v;
        }
        FormView view{l_, &values, &gen_q, &gram, nd_cache[diag_key] == 1};
        fn(view);
      }
      // next off-diagonal assignment
      std::size_t p = 0;
      for (; p < pairs_.size(); ++p) {
        const std::int64_t g = std::gcd(e_.factor(pairs_[p].first), e_.factor(pairs_[p].second));
        bvals[p] += l_ / g;
        if (bvals[p] < l_) break;
        bvals[p] = 0;
      }
      if (p == pairs_.size()) break;
    }
  }

  /// Like for_each, but without the value table: each call receives the Gauss sum
  /// sum_x exp(2 pi i q(x)) of the form. For a fixed off-diagonal part the sums for all
  /// diagonal choices come out of one separable transform, one axis at a time.
  template <class Fn>
  void for_each_gauss(Fn&& fn) const {
    const std::size_t k = e_.rank(), n = e_.order();
    std::vector<std::int64_t> gen_q(k, 0), gram(k * k, 0);
    if (k == 0) {
      fn(GaussView{l_, &gen_q, &gram, true, {1.0, 0.0}});
      return;
    }
    std::vector<std::complex<double>> root(static_cast<std::size_t>(l_));
    for (std::int64_t r = 0; r < l_; ++r)
      root[static_cast<std::size_t>(r)] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(l_));
    // per axis: weight[t][x] = exp(2 pi i x^2 t / c_i)
    std::vector<std::vector<std::complex<double>>> weight(k);
    for (std::size_t i = 0; i < k; ++i) {
      const std::int64_t ni = e_.factor(i), ci = qchoices_[i];
      weight[i].resize(static_cast<std::size_t>(ci * ni));
      for (std::int64_t t = 0; t < ci; ++t)
        for (std::int64_t x = 0; x < ni; ++x)
          weight[i][static_cast<std::size_t>(t * ni + x)] = root[static_cast<std::size_t>((x * x % ci) * t % ci * (l_ / ci))];
    }
    std::uint64_t nq = 1;
    for (auto c : qchoices_) nq *= static_cast<std::uint64_t>(c);
    std::vector<std::int64_t> bvals(pairs_.size(), 0);
    std::vector<std::int64_t> offlin(n * k);
    std::vector<std::int8_t> nd_cache(n);
    std::vector<std::complex<double>> cur, next;
    std::vector<std::int64_t> shape(e_.factors());
    for (;;) {
      cur.assign(n, {});
      for (std::size_t x = 0; x < n; ++x) {
        std::int64_t s = 0;
        for (std::size_t p = 0; p < pairs_.size(); ++p)
          s += coords_[x][pairs_[p].first] * coords_[x][pairs_[p].second] * bvals[p];
        cur[x] = root[static_cast<std::size_t>(s % l_)];
      }
      shape = e_.factors();
      for (std::size_t i = 0; i < k; ++i) {
        std::size_t outer = 1, inner = 1;
        for (std::size_t j = 0; j < i; ++j) outer *= static_cast<std::size_t>(shape[j]);
        for (std::size_t j = i + 1; j < k; ++j) inner *= static_cast<std::size_t>(shape[j]);
        const auto ni = static_cast<std::size_t>(e_.factor(i)), ci = static_cast<std::size_t>(qchoices_[i]);
        next.assign(outer * ci * inner, {});
        for (std::size_t o = 0; o < outer; ++o)
          for (std::size_t t = 0; t < ci; ++t) {
            auto* dst = &next[(o * ci + t) * inner];
            for (std::size_t x = 0; x < ni; ++x) {
              // spelled out: std::complex operator* carries NaN handling that dominates here
              const double wr = weight[i][t * ni + x].real(), wi = weight[i][t * ni + x].imag();
              const auto* src = &cur[(o * ni + x) * inner];
              for (std::size_t r = 0; r < inner; ++r)
                dst[r] += std::complex<double>(wr * src[r].real() - wi * src[r].imag(),
                                               wr * src[r].imag() + wi * src[r].real());
            }
          }
        cur.swap(next);
        shape[i] = qchoices_[i];
      }
      std::fill(gram.begin(), gram.end(), 0);
      for (std::size_t p = 0; p < pairs_.size(); ++p) {
        gram[pairs_[p].first * k + pairs_[p].second] = bvals[p];
        gram[pairs_[p].second * k + pairs_[p].first] = bvals[p];
      }
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t c = 0; c < k; ++c) {
          std::int64_t s = 0;
          for (std::size_t j = 0; j < k; ++j)
            if (j != c) s += coords_[x][j] * gram[j * k + c];
          offlin[x * k + c] = s % l_;
        }
      std::fill(nd_cache.begin(), nd_cache.end(), -1);
      DiagCursor diag(*this, gen_q, gram);
      for (std::uint64_t t = 0; t < nq; ++t, diag.advance()) {
        const std::size_t diag_key = diag.key();
        if (nd_cache[diag_key] < 0) nd_cache[diag_key] = radical_trivial(gram, offlin) ? 1 : 0;
        fn(GaussView{l_, &gen_q, &gram, nd_cache[diag_key] == 1, cur[t]});
      }
      std::size_t p = 0;
      for (; p < pairs_.size(); ++p) {
        const std::int64_t g = std::gcd(e_.factor(pairs_[p].first), e_.factor(pairs_[p].second));
        bvals[p] += l_ / g;
        if (bvals[p] < l_) break;
        bvals[p] = 0;
      }
      if (p == pairs_.size()) break;
    }
  }

  /// Value table of the form with the given generator data, as numerators over denominator().
  [[nodiscard]] std::vector<std::int32_t> values_of(const std::vector<std::int64_t>& gen_q,
                                                    const std::vector<std::int64_t>& gram) const {
    const std::size_t k = e_.rank();
    std::vector<std::int32_t> v(e_.order());
    for (std::size_t x = 0; x < v.size(); ++x) {
      std::int64_t s = 0;
      for (std::size_t i = 0; i < k; ++i) {
        s += coords_[x][i] * coords_[x][i] % (2 * e_.factor(i)) * gen_q[i];
        for (std::size_t j = i + 1; j < k; ++j) s += coords_[x][i] * coords_[x][j] % l_ * gram[i * k + j];
        s %= l_;
      }
      v[x] = static_cast<std::int32_t>(s);
    }
    return v;
  }

  /// Builds the validated pre-metric group for a view produced by for_each.
  [[nodiscard]] PreMetricGroup materialize(const FormView& v, std::string name = {}) const {
    std::vector<Phase> t(v.values->size());
    for (std::size_t x = 0; x < t.size(); ++x) t[x] = Phase((*v.values)[x], v.denominator);
    return validate_premetric(e_, std::move(t), std::move(name));
  }

  [[nodiscard]] const FinAbGroup& group() const { return e_; }

 private:
  bool radical_trivial(const std::vector<std::int64_t>& gram, const std::vector<std::int64_t>& offlin) const {
    const std::size_t k = e_.rank();
    for (std::size_t x = 1; x < e_.order(); ++x) {
      bool in_radical = true;
      for (std::size_t c = 0; c < k && in_radical; ++c)
        if ((offlin[x * k + c] + coords_[x][c] * gram[c * k + c]) % l_ != 0) in_radical = false;
      if (in_radical) return false;
    }
    return true;
  }

  // Walks the diagonal choices q(e_i) in enumeration order (last generator fastest),
  // keeping gen_q, the Gram diagonal and the class key of 2 q(e_i) up to date.
  class DiagCursor {
   public:
    DiagCursor(const FormEnumerator& fe, std::vector<std::int64_t>& gen_q, std::vector<std::int64_t>& gram)
        : fe_(fe), gen_q_(gen_q), gram_(gram), digits_(fe.e_.rank(), 0) {
      const std::size_t k = digits_.size();
      for (std::size_t i = 0; i < k; ++i) {
        gen_q_[i] = 0;
        gram_[i * k + i] = 0;
      }
    }
    [[nodiscard]] std::size_t key() const { return key_; }
    void advance() {
      const std::size_t k = digits_.size();
      for (std::size_t i = k; i-- > 0;) {
        key_ -= fe_.contrib_[i][static_cast<std::size_t>(digits_[i])];
        if (++digits_[i] == fe_.qchoices_[i]) digits_[i] = 0;
        key_ += fe_.contrib_[i][static_cast<std::size_t>(digits_[i])];
        gen_q_[i] = digits_[i] * (fe_.l_ / fe_.qchoices_[i]);
        gram_[i * k + i] = (2 * gen_q_[i]) % fe_.l_;
        if (digits_[i] != 0) break;
      }
    }

   private:
    const FormEnumerator& fe_;
    std::vector<std::int64_t>& gen_q_;
    std::vector<std::int64_t>& gram_;
    std::vector<std::int64_t> digits_;
    std::size_t key_ = 0;
  };

  FinAbGroup e_;
  std::vector<std::vector<std::size_t>> contrib_;
  std::int64_t l_ = 1;
  std::vector<std::int64_t> qchoices_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::vector<std::vector<std::int64_t>> coords_;
};


/// Sorts integer value tables on a fixed group into isomorphism classes of forms.
/// Tables must share one denominator (as produced by one FormEnumerator).
class FormClassifier {
 public:
  explicit FormClassifier(FinAbGroup e) : e_(std::move(e)) {
    const std::size_t n = e_.order();
    add_.resize(n * n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) add_[x * n + y] = static_cast<std::uint32_t>(e_.add(x, y));
    order_.resize(n);
    for (std::size_t x = 0; x < n; ++x) order_[x] = e_.element_order(e_.element(x));
    for (std::size_t k = 0; k < e_.rank(); ++k) gen_.push_back(e_.index(e_.generator(k)));
  }

  /// Stores the table as a new class unless it is isomorphic to a stored one.
  /// Returns the class index and whether it was new.
  std::pair<std::size_t, bool> insert(const std::vector<std::int32_t>& values, std::int64_t denominator) {
    auto key = values;
    std::sort(key.begin(), key.end());
    auto& bucket = buckets_[key];
    for (auto c : bucket)
      if (isomorphic(classes_[c], values, denominator)) return {c, false};
    bucket.push_back(classes_.size());
    classes_.push_back(values);
    return {classes_.size() - 1, true};
  }

  [[nodiscard]] const std::vector<std::vector<std::int32_t>>& classes() const { return classes_; }

  /// True if some automorphism f has b[f(x)] = a[x] for all x.
  [[nodiscard]] bool isomorphic(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b,
                                std::int64_t den) const {
    const std::size_t n = e_.order(), k = gen_.size();
    auto form = [&](const std::vector<std::int32_t>& v, std::size_t x, std::size_t y) {
      std::int64_t r = (static_cast<std::int64_t>(v[add_[x * n + y]]) - v[x] - v[y]) % den;
      return r < 0 ? r + den : r;
    };
    std::vector<std::vector<std::size_t>> cands(k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t y = 0; y < n; ++y)
        if (order_[y] == e_.factor(i) && b[y] == a[gen_[i]]) cands[i].push_back(y);
    std::vector<std::size_t> chosen;
    std::vector<char> span(n, 0);
    span[0] = 1;
    std::vector<std::size_t> members{0};
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
      if (i == k) return true;
      for (auto y : cands[i]) {
        bool ok = true;
        for (std::size_t j = 0; j < i && ok; ++j)
          if (form(b, y, chosen[j]) != form(a, gen_[i], gen_[j])) ok = false;
        std::size_t m = y;
        for (std::int64_t c = 1; c < e_.factor(i) && ok; ++c, m = add_[m * n + y])
          if (span[m]) ok = false;
        if (!ok) continue;
        const std::size_t old = members.size();
        std::size_t step = y;
        for (std::int64_t c = 1; c < e_.factor(i); ++c, step = add_[step * n + y])
          for (std::size_t t = 0; t < old; ++t) {
            const std::size_t x = add_[members[t] * n + step];
            span[x] = 1;
            members.push_back(x);
          }
        chosen.push_back(y);
        if (rec(i + 1)) return true;
        chosen.pop_back();
        for (std::size_t t = old; t < members.size(); ++t) span[members[t]] = 0;
        members.resize(old);
      }
      return false;
    };
    return rec(0);
  }

 private:
  FinAbGroup e_;
  std::vector<std::uint32_t> add_;
  std::vector<std::int64_t> order_;
  std::vector<std::size_t> gen_;
  std::map<std::vector<std::int32_t>, std::vector<std::size_t>> buckets_;
  std::vector<std::vector<std::int32_t>> classes_;
};

}  // namespace cfprod
