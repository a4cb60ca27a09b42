#pragma once

// Brute-force reference computations for the tests. Nothing here calls into the
// library's algorithms: groups are mixed-radix tuples with their own addition, forms
// are integer tables over a common denominator, isomorphisms are found by trying
// every assignment of generator images.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

namespace oracle {

struct Grp {
  std::vector<std::int64_t> n;  // cyclic factors
  std::size_t order = 1;
  std::vector<std::vector<std::int64_t>> el;  // index -> coordinates, last coordinate fastest
  std::vector<std::size_t> add;               // order x order
  std::vector<std::size_t> neg;

  explicit Grp(std::vector<std::int64_t> factors) : n(std::move(factors)) {
    for (auto f : n) order *= static_cast<std::size_t>(f);
    el.resize(order);
    for (std::size_t i = 0; i < order; ++i) {
      std::vector<std::int64_t> c(n.size());
      std::size_t r = i;
      for (std::size_t k = n.size(); k-- > 0;) {
        c[k] = static_cast<std::int64_t>(r % static_cast<std::size_t>(n[k]));
        r /= static_cast<std::size_t>(n[k]);
      }
      el[i] = c;
    }
    add.resize(order * order);
    neg.resize(order);
    for (std::size_t i = 0; i < order; ++i) {
      std::vector<std::int64_t> m(n.size());
      for (std::size_t k = 0; k < n.size(); ++k) m[k] = (n[k] - el[i][k]) % n[k];
      neg[i] = index(m);
      for (std::size_t j = 0; j < order; ++j) {
        std::vector<std::int64_t> s(n.size());
        for (std::size_t k = 0; k < n.size(); ++k) s[k] = (el[i][k] + el[j][k]) % n[k];
        add[i * order + j] = index(s);
      }
    }
  }

  [[nodiscard]] std::size_t index(const std::vector<std::int64_t>& c) const {
    std::size_t i = 0;
    for (std::size_t k = 0; k < n.size(); ++k) i = i * static_cast<std::size_t>(n[k]) + static_cast<std::size_t>(((c[k] % n[k]) + n[k]) % n[k]);
    return i;
  }
  [[nodiscard]] std::size_t plus(std::size_t a, std::size_t b) const { return add[a * order + b]; }
  [[nodiscard]] std::size_t times(std::size_t a, std::int64_t k) const {
    std::size_t r = 0;
    for (std::int64_t i = 0; i < k; ++i) r = plus(r, a);
    return r;
  }
  [[nodiscard]] std::int64_t element_order(std::size_t a) const {
    std::int64_t k = 1;
    for (std::size_t r = a; r != 0; r = plus(r, a)) ++k;
    return k;
  }
  [[nodiscard]] std::size_t gen(std::size_t k) const {
    std::vector<std::int64_t> c(n.size(), 0);
    c[k] = 1;
    return index(c);
  }
};

/// A form as integer numerators over den.
struct Form {
  std::int64_t den = 1;
  std::vector<std::int64_t> q;

  [[nodiscard]] std::int64_t b(const Grp& g, std::size_t x, std::size_t y) const {
    return (((q[g.plus(x, y)] - q[x] - q[y]) % den) + den) % den;
  }
};

inline bool is_quadratic(const Grp& g, const Form& f) {
  if (f.q[0] % f.den != 0) return false;
  for (std::size_t x = 0; x < g.order; ++x)
    if (f.q[g.neg[x]] != f.q[x]) return false;
  for (std::size_t x = 0; x < g.order; ++x)
    for (std::size_t y = 0; y < g.order; ++y)
      for (std::size_t w = 0; w < g.order; ++w)
        if (f.b(g, g.plus(x, y), w) != (f.b(g, x, w) + f.b(g, y, w)) % f.den) return false;
  return true;
}

inline std::size_t radical_size(const Grp& g, const Form& f) {
  std::size_t r = 0;
  for (std::size_t x = 0; x < g.order; ++x) {
    bool in = true;
    for (std::size_t y = 0; y < g.order && in; ++y)
      if (f.b(g, x, y) != 0) in = false;
    r += in ? 1 : 0;
  }
  return r;
}

inline std::complex<double> gauss(const Form& f) {
  std::complex<double> s{0, 0};
  for (auto v : f.q) s += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(v) / static_cast<double>(f.den));
  return s;
}

/// sigma in Z/8 from the Gauss sum, or -1 if it is not sqrt|E| times an 8th root of unity.
inline int sigma(const Form& f, double mag_tol = 1e-9, double snap_tol = 1e-6) {
  const auto s = gauss(f);
  const double root = std::sqrt(static_cast<double>(f.q.size()));
  if (std::abs(std::abs(s) - root) > mag_tol) return -1;
  for (int k = 0; k < 8; ++k)
    if (std::abs(s / root - std::polar(1.0, 2.0 * std::numbers::pi * k / 8.0)) < snap_tol) return k;
  return -1;
}

/// All homomorphisms g -> h given by generator images, as full tables.
inline void for_each_hom(const Grp& g, const Grp& h, const std::function<bool(const std::vector<std::size_t>&)>& fn) {
  const std::size_t k = g.n.size();
  std::vector<std::vector<std::size_t>> cand(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t y = 0; y < h.order; ++y)
      if (h.times(y, g.n[i]) == 0) cand[i].push_back(y);
  std::vector<std::size_t> pick(k, 0);
  for (;;) {
    std::vector<std::size_t> table(g.order);
    for (std::size_t x = 0; x < g.order; ++x) {
      std::size_t img = 0;
      for (std::size_t i = 0; i < k; ++i) img = h.plus(img, h.times(cand[i][pick[i]], g.el[x][i]));
      table[x] = img;
    }
    if (fn(table)) return;
    std::size_t i = 0;
    for (; i < k; ++i) {
      if (++pick[i] < cand[i].size()) break;
      pick[i] = 0;
    }
    if (i == k) return;
  }
}

inline bool is_bijective(const std::vector<std::size_t>& t) {
  std::vector<bool> seen(t.size(), false);
  for (auto y : t) {
    if (y >= t.size() || seen[y]) return false;
    seen[y] = true;
  }
  return true;
}

/// An isomorphism f : g -> h with b.q[f(x)] * (D / b.den) = a.q[x] * (D / a.den); the optional
/// predicate filters witnesses.
inline bool isomorphic(const Grp& g, const Form& a, const Grp& h, const Form& b,
                       const std::function<bool(const std::vector<std::size_t>&)>& accept = {}) {
  if (g.order != h.order) return false;
  const std::int64_t d = std::lcm(a.den, b.den);
  bool found = false;
  for_each_hom(g, h, [&](const std::vector<std::size_t>& t) {
    if (!is_bijective(t)) return false;
    for (std::size_t x = 0; x < g.order; ++x)
      if (b.q[t[x]] * (d / b.den) % d != a.q[x] * (d / a.den) % d) return false;
    if (accept && !accept(t)) return false;
    found = true;
    return true;
  });
  return found;
}

/// Calls fn on every table with q(0) = 0 and q(-x) = q(x), values in (1/den)Z/Z.
inline void for_each_symmetric_table(const Grp& g, std::int64_t den, const std::function<void(const Form&)>& fn) {
  std::vector<std::size_t> reps;
  for (std::size_t x = 1; x < g.order; ++x)
    if (g.neg[x] >= x) reps.push_back(x);
  Form f{den, std::vector<std::int64_t>(g.order, 0)};
  std::vector<std::int64_t> digit(reps.size(), 0);
  for (;;) {
    for (std::size_t i = 0; i < reps.size(); ++i) f.q[reps[i]] = f.q[g.neg[reps[i]]] = digit[i];
    fn(f);
    std::size_t i = 0;
    for (; i < digit.size(); ++i) {
      if (++digit[i] < den) break;
      digit[i] = 0;
    }
    if (i == digit.size()) break;
  }
}

/// Every quadratic form on g with values in (1/den)Z/Z.
inline std::vector<Form> all_forms(const Grp& g, std::int64_t den) {
  std::vector<Form> out;
  for_each_symmetric_table(g, den, [&](const Form& f) {
    if (is_quadratic(g, f)) out.push_back(f);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Cohomology with trivial action by listing cochains.
// ---------------------------------------------------------------------------

/// Slot of (g_1..g_n) is sum g_i |G|^(n-i).
inline std::vector<std::size_t> tuple_of(std::size_t slot, std::size_t order, int n) {
  std::vector<std::size_t> t(static_cast<std::size_t>(n));
  for (int i = n; i-- > 0;) {
    t[static_cast<std::size_t>(i)] = slot % order;
    slot /= order;
  }
  return t;
}

inline std::size_t slot_of(const std::vector<std::size_t>& t, std::size_t order) {
  std::size_t s = 0;
  for (auto a : t) s = s * order + a;
  return s;
}

inline std::size_t pow_size(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

/// Coboundary of an n-cochain g^n -> m (values are m-indices).
inline std::vector<std::size_t> coboundary(const Grp& g, const Grp& m, const std::vector<std::size_t>& c, int n) {
  const std::size_t o = g.order, size = pow_size(o, n + 1);
  std::vector<std::size_t> out(size);
  std::size_t t[8];
  for (std::size_t s = 0; s < size; ++s) {
    std::size_t r = s;
    for (int i = n + 1; i-- > 0;) {
      t[i] = r % o;
      r /= o;
    }
    std::size_t acc = 0;
    for (int i = 0; i <= n + 1; ++i) {
      // face i: drop t[0] (i = 0), merge t[i-1], t[i] (1 <= i <= n), drop t[n] (i = n + 1)
      std::size_t f = 0;
      for (int j = 0; j <= n; ++j) {
        if ((i == 0 && j == 0) || (i == n + 1 && j == n) || (i > 0 && i <= n && j == i)) continue;
        const std::size_t v = (i > 0 && i <= n && j == i - 1) ? g.plus(t[j], t[j + 1]) : t[j];
        f = f * o + v;
      }
      const std::size_t v = c[f];
      acc = (i % 2 == 0) ? m.plus(acc, v) : m.plus(acc, m.neg[v]);
    }
    out[s] = acc;
  }
  return out;
}

struct Counts {
  std::uint64_t cocycles = 0;
  std::uint64_t coboundaries = 0;
};

/// Lists every normalized n-cochain (and (n-1)-cochain for the coboundaries).
inline Counts cohomology_by_listing(const Grp& g, const Grp& m, int n) {
  auto normalized_slots = [&](int deg) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < pow_size(g.order, deg); ++i) {
      const auto t = tuple_of(i, g.order, deg);
      if (std::find(t.begin(), t.end(), 0) == t.end()) s.push_back(i);
    }
    return s;
  };
  auto each = [&](int deg, const std::function<void(const std::vector<std::size_t>&)>& fn) {
    const auto slots = normalized_slots(deg);
    std::vector<std::size_t> c(pow_size(g.order, deg), 0);
    for (;;) {
      fn(c);
      std::size_t i = 0;
      for (; i < slots.size(); ++i) {
        if (++c[slots[i]] < m.order) break;
        c[slots[i]] = 0;
      }
      if (i == slots.size()) break;
    }
  };
  Counts out;
  each(n, [&](const std::vector<std::size_t>& c) {
    const auto d = coboundary(g, m, c, n);
    if (std::all_of(d.begin(), d.end(), [](std::size_t v) { return v == 0; })) ++out.cocycles;
  });
  std::set<std::vector<std::size_t>> images;
  if (n == 1)
    images.insert(std::vector<std::size_t>(g.order, 0));
  else
    each(n - 1, [&](const std::vector<std::size_t>& c) { images.insert(coboundary(g, m, c, n - 1)); });
  out.coboundaries = images.size();
  return out;
}

/// Degree-3 cocycles with Z/2 coefficients by a Gray-code walk over all normalized
/// 3-cochains; the coboundary is kept as a bit mask over normalized 4-tuples.
inline Counts cohomology3_z2_gray(const Grp& g) {
  const std::size_t o = g.order;
  std::vector<std::size_t> slots3, slots4;
  std::map<std::size_t, std::size_t> pos4;
  for (std::size_t i = 0; i < pow_size(o, 3); ++i) {
    auto t = tuple_of(i, o, 3);
    if (std::find(t.begin(), t.end(), 0) == t.end()) slots3.push_back(i);
  }
  for (std::size_t i = 0; i < pow_size(o, 4); ++i) {
    auto t = tuple_of(i, o, 4);
    if (std::find(t.begin(), t.end(), 0) == t.end()) {
      pos4[i] = slots4.size();
      slots4.push_back(i);
    }
  }
  const std::size_t words = (slots4.size() + 63) / 64;
  // mask[j]: coboundary of the indicator cochain of slots3[j], restricted to normalized tuples
  const Grp z2({2});
  std::vector<std::vector<std::uint64_t>> mask(slots3.size(), std::vector<std::uint64_t>(words, 0));
  for (std::size_t j = 0; j < slots3.size(); ++j) {
    std::vector<std::size_t> c(pow_size(o, 3), 0);
    c[slots3[j]] = 1;
    const auto d = coboundary(g, z2, c, 3);
    for (const auto& [s, p] : pos4)
      if (d[s]) mask[j][p / 64] |= std::uint64_t{1} << (p % 64);
  }
  Counts out;
  std::vector<std::uint64_t> state(words, 0);
  const std::uint64_t total = std::uint64_t{1} << slots3.size();
  for (std::uint64_t step = 0;; ++step) {
    if (std::all_of(state.begin(), state.end(), [](std::uint64_t w) { return w == 0; })) ++out.cocycles;
    if (step + 1 == total) break;
    const auto bit = static_cast<std::size_t>(__builtin_ctzll(step + 1));
    for (std::size_t w = 0; w < words; ++w) state[w] ^= mask[bit][w];
  }
  std::set<std::vector<std::size_t>> images;
  std::vector<std::size_t> slots2;
  for (std::size_t i = 0; i < o * o; ++i)
    if (i / o != 0 && i % o != 0) slots2.push_back(i);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << slots2.size()); ++bits) {
    std::vector<std::size_t> c(o * o, 0);
    for (std::size_t j = 0; j < slots2.size(); ++j) c[slots2[j]] = (bits >> j) & 1;
    images.insert(coboundary(g, z2, c, 2));
  }
  out.coboundaries = images.size();
  return out;
}

}  // namespace oracle
