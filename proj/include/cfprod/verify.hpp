#pragma once

// The reproduction suite behind `cfprod verify-paper`: worked examples, exhaustive
// checks over pointed minimal modular extensions, and property sweeps.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cfprod/abgroup.hpp"
#include "cfprod/catalog.hpp"
#include "cfprod/error.hpp"
#include "cfprod/fusion.hpp"
#include "cfprod/io.hpp"
#include "cfprod/metric.hpp"
#include "cfprod/pointed.hpp"
#include "cfprod/zest.hpp"

namespace cfprod {

// ---------------------------------------------------------------------------
// Property sweeps. Each returns the number of cases examined and the first failure.
// ---------------------------------------------------------------------------

struct SweepResult {
  bool ok = true;
  std::uint64_t cases = 0;
  std::string detail;

  void fail(std::string why) {
    if (ok) detail = std::move(why);
    ok = false;
  }
};

/// |Gauss sum| = sqrt|E| and the normalized sum is an 8th root of unity, for every
/// non-degenerate form on every group of order <= max_order.
inline SweepResult milgram_sweep(std::int64_t max_order = 64, CentralChargeTolerance tol = {}) {
  SweepResult r;
  for (std::int64_t n = 1; n <= max_order; ++n)
    for (const auto& e : abelian_groups_of_order(n)) {
      FormEnumerator fe(e);
      const double root = std::sqrt(static_cast<double>(n));
      fe.for_each_gauss([&](const GaussView& v) {
        if (!v.nondegenerate) return;
        ++r.cases;
        if (std::abs(std::abs(v.gauss) - root) > tol.magnitude) {
          r.fail("|Gauss sum| = " + std::to_string(std::abs(v.gauss)) + " on " + e.to_string());
          return;
        }
        const auto unit = v.gauss / root;
        const double eighths = std::arg(unit) / (2.0 * std::numbers::pi) * 8.0;
        const double k = std::round(eighths);
        if (std::abs(unit - std::polar(1.0, 2.0 * std::numbers::pi * k / 8.0)) > tol.snap)
          r.fail("normalized Gauss sum is not an 8th root of unity on " + e.to_string());
      });
    }
  return r;
}

/// For every non-degenerate form class of order <= max_order and every isotropic H:
/// |condense(P, H)| |H|^2 = |E|, the result is non-degenerate, and the central charge
/// is unchanged.
inline SweepResult condensation_sweep(std::int64_t max_order = 32) {
  SweepResult r;
  for (std::int64_t n = 1; n <= max_order; ++n)
    for (const auto& e : abelian_groups_of_order(n)) {
      const auto subs = all_subgroups(e);
      for (const auto& p : detail::nondegenerate_form_classes(e)) {
        const int sigma = central_charge(p);
        for (const auto& h : subs) {
          if (!is_isotropic(p, h)) continue;
          ++r.cases;
          const auto c = condense(p, h);
          const std::string where = " (|E| = " + std::to_string(n) + ", |H| = " + std::to_string(h.order()) + ")";
          if (c.result.order() * h.order() * h.order() != p.order()) r.fail("order bookkeeping fails" + where);
          else if (!is_nondegenerate(c.result)) r.fail("condensation is degenerate" + where);
          else if (central_charge(c.result) != sigma) r.fail("central charge changed" + where);
        }
      }
    }
  return r;
}

/// Every form produced by the enumerator on groups of order <= max_order is accepted
/// by validate_premetric and has a symmetric bilinear polarization (checked on all
/// triples). Each single-entry perturbation is accepted exactly when it is still a
/// quadratic form by the same full check.
inline SweepResult polarization_sweep(std::int64_t max_order = 8) {
  SweepResult r;
  for (std::int64_t n = 1; n <= max_order; ++n)
    for (const auto& e : abelian_groups_of_order(n)) {
      FormEnumerator fe(e);
      const auto den = fe.denominator();
      const std::size_t sz = e.order();
      std::vector<std::size_t> add(sz * sz), neg(sz);
      for (std::size_t x = 0; x < sz; ++x) {
        neg[x] = e.neg(x);
        for (std::size_t y = 0; y < sz; ++y) add[x * sz + y] = e.add(x, y);
      }
      auto quadratic = [&](const std::vector<std::int64_t>& v) {
        if (v[0] != 0) return false;
        for (std::size_t x = 0; x < sz; ++x)
          if (v[neg[x]] != v[x]) return false;
        auto b = [&](std::size_t x, std::size_t y) { return ((v[add[x * sz + y]] - v[x] - v[y]) % den + den) % den; };
        for (std::size_t x = 0; x < sz; ++x)
          for (std::size_t y = 0; y < sz; ++y)
            for (std::size_t w = 0; w < sz; ++w)
              if (b(add[x * sz + y], w) != (b(x, w) + b(y, w)) % den) return false;
        return true;
      };
      auto accepted = [&](const std::vector<std::int64_t>& v) {
        std::vector<Phase> t(sz);
        for (std::size_t x = 0; x < sz; ++x) t[x] = Phase(v[x], den);
        try {
          (void)validate_premetric(e, std::move(t));
          return true;
        } catch (const ValidationError&) {
          return false;
        }
      };
      std::uint64_t index = 0;
      fe.for_each([&](const FormView& view) {
        std::vector<std::int64_t> v(view.values->begin(), view.values->end());
        ++r.cases;
        if (!quadratic(v)) r.fail("enumerated table is not a quadratic form on " + e.to_string());
        if (!accepted(v)) r.fail("validate_premetric rejects an enumerated form on " + e.to_string());
        // perturb one pair {x, -x} on a sample of forms
        if (sz > 1 && index++ % 7 == 0) {
          const std::size_t x = 1 + index % (sz - 1);
          auto w = v;
          w[x] = (w[x] + 1) % den;
          if (neg[x] != x) w[neg[x]] = w[x];
          ++r.cases;
          if (quadratic(w) != accepted(w)) r.fail("validate_premetric disagrees with the full bilinearity check on " + e.to_string());
        }
      });
    }
  return r;
}

namespace detail {

/// Counts normalized cocycles and coboundaries by listing every normalized cochain.
struct BruteCohomology {
  std::uint64_t cocycles = 0;
  std::uint64_t coboundaries = 0;
};

inline BruteCohomology brute_cohomology(const FinAbGroup& g, const FinAbGroup& m, int degree) {
  auto count_table = [&](int deg) {
    std::uint64_t c = 1;
    for (int i = 0; i < deg; ++i) c *= g.order() - 1;
    return c;
  };
  auto all = [&](int deg, const std::function<void(const Cochain&)>& fn) {
    Cochain c = Cochain::zero(deg, g, m);
    std::vector<std::size_t> slots;
    for (std::size_t s = 0; s < c.values.size(); ++s) {
      const auto a = c.args(s);
      if (std::find(a.begin(), a.end(), 0) == a.end()) slots.push_back(s);
    }
    if (slots.size() != count_table(deg)) throw InternalError("normalized slot count");
    for (;;) {
      fn(c);
      std::size_t i = 0;
      for (; i < slots.size(); ++i) {
        if (++c.values[slots[i]] < m.order()) break;
        c.values[slots[i]] = 0;
      }
      if (i == slots.size()) break;
    }
  };
  BruteCohomology out;
  all(degree, [&](const Cochain& c) {
    const auto d = coboundary(c);
    if (std::all_of(d.values.begin(), d.values.end(), [](std::size_t v) { return v == 0; })) ++out.cocycles;
  });
  std::vector<std::vector<std::size_t>> images;
  if (degree == 1) {
    images.push_back(Cochain::zero(1, g, m).values);
  } else {
    all(degree - 1, [&](const Cochain& c) { images.push_back(coboundary(c).values); });
  }
  std::sort(images.begin(), images.end());
  images.erase(std::unique(images.begin(), images.end()), images.end());
  out.coboundaries = images.size();
  return out;
}

}  // namespace detail

/// solve_cocycles against listing all normalized cochains, for groups of order <= 4,
/// degrees 1 and 2, and degree 3 where the listing has at most 2^16 tables.
inline SweepResult cocycle_sweep() {
  SweepResult r;
  std::vector<FinAbGroup> groups;
  for (std::int64_t n = 2; n <= 4; ++n)
    for (const auto& g : abelian_groups_of_order(n)) groups.push_back(g);
  for (const auto& g : groups)
    for (const auto& m : groups)
      for (int deg = 1; deg <= 3; ++deg) {
        const double tables = std::pow(static_cast<double>(m.order()), std::pow(static_cast<double>(g.order() - 1), deg));
        if (tables > 65536.0) continue;
        ++r.cases;
        const auto brute = detail::brute_cohomology(g, m, deg);
        const auto solved = solve_cocycles(g, m, deg);
        const std::string where = " for H^" + std::to_string(deg) + "(" + g.to_string() + ", " + m.to_string() + ")";
        if (solved.cocycle_count != brute.cocycles) r.fail("cocycle count differs" + where);
        else if (solved.coboundary_count != brute.coboundaries) r.fail("coboundary count differs" + where);
        else if (solved.class_count * brute.coboundaries != brute.cocycles) r.fail("class count differs" + where);
        else if (solved.class_representatives.size() != solved.class_count) r.fail("representative count differs" + where);
      }
  return r;
}

/// Fixed-point-free de-equivariantization: orbits all have size |Gamma|, so
/// rank(fiber) = rank(quotient) |Gamma| and FPdim(fiber) = |Gamma| FPdim(quotient);
/// other orbit representatives give isomorphic rings.
inline SweepResult deequivariantization_sweep(const std::vector<std::pair<GradedFusionRing, GradedFusionRing>>& pairs,
                                              unsigned seed = 20240611) {
  SweepResult r;
  std::mt19937 rng(seed);
  for (const auto& [c, d] : pairs) {
    ++r.cases;
    const auto cf = cfp_ring(c, d);
    const auto gamma = static_cast<std::size_t>(c.embedding()->b.order());
    const auto& fiber = cf.fiber.ring;
    const auto& quot = cf.ring();
    const std::string where = " for " + c.name() + " and " + d.name();
    if (quot.rank() * gamma != fiber.rank()) {
      r.fail("rank bookkeeping fails" + where);
      continue;
    }
    std::vector<std::size_t> orbit_size(quot.rank(), 0);
    for (auto o : cf.quotient.orbit_of) ++orbit_size[o];
    if (std::any_of(orbit_size.begin(), orbit_size.end(), [&](std::size_t s) { return s != gamma; }))
      r.fail("orbit of size != |Gamma|" + where);
    const double ratio = fp_dimension(fiber) / fp_dimension(quot);
    if (std::abs(ratio - static_cast<double>(gamma)) > 1e-9) r.fail("FP dimension does not divide by |Gamma|" + where);
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<std::size_t> order(fiber.rank());
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      const auto other = cfp_ring(c, d, order);
      if (find_ring_isomorphisms(quot, other.ring(), true, true).empty())
        r.fail("representative choice changes the ring" + where);
    }
  }
  return r;
}

/// CFP laws up to iota-compatible equivalence on the given extensions of one B_z:
/// unit CFP(Z(B_z), C) = C, commutativity on all pairs, associativity on all triples.
inline SweepResult cfp_law_sweep(const std::vector<PointedCategory>& sample) {
  SweepResult r;
  if (sample.empty()) return r;
  const auto unit = center_of_Bz(sample.front().b, sample.front().z);
  auto cfp = [](const PointedCategory& a, const PointedCategory& b) { return condensed_fiber_product(a, b).category; };
  const std::size_t n = sample.size();
  std::vector<PointedCategory> pair(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) pair[i * n + j] = cfp(sample[i], sample[j]);
  for (std::size_t i = 0; i < n; ++i) {
    ++r.cases;
    if (!pointed_equivalence(cfp(unit, sample[i]), sample[i])) r.fail("unit law fails for " + sample[i].name());
    for (std::size_t j = 0; j < n; ++j) {
      ++r.cases;
      if (!pointed_equivalence(pair[i * n + j], pair[j * n + i]))
        r.fail("commutativity fails for " + sample[i].name() + ", " + sample[j].name());
      for (std::size_t k = 0; k < n; ++k) {
        ++r.cases;
        if (!pointed_equivalence(cfp(pair[i * n + j], sample[k]), cfp(sample[i], pair[j * n + k])))
          r.fail("associativity fails for " + sample[i].name() + ", " + sample[j].name() + ", " + sample[k].name());
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// The suite.
// ---------------------------------------------------------------------------

struct VerifyCheck {
  int criterion = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyCriterion {
  int id = 0;
  std::string title;
  double limit_seconds = 0;
  double seconds = 0;
  bool passed = false;
};

struct VerifyReport {
  std::vector<VerifyCriterion> criteria;
  std::vector<VerifyCheck> checks;
  double seconds = 0;

  [[nodiscard]] bool passed() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.passed; });
  }

  [[nodiscard]] Json to_json() const {
    Json j;
    j["passed"] = passed();
    Json cs = Json::array();
    for (const auto& c : criteria) {
      Json o;
      o["criterion"] = c.id;
      o["title"] = c.title;
      o["passed"] = c.passed;
      o["limit_seconds"] = c.limit_seconds;
      Json list = Json::array();
      for (const auto& k : checks) {
        if (k.criterion != c.id) continue;
        Json e;
        e["name"] = k.name;
        e["passed"] = k.passed;
        if (!k.detail.empty()) e["detail"] = k.detail;
        list.push_back(std::move(e));
      }
      o["checks"] = std::move(list);
      cs.push_back(std::move(o));
    }
    j["criteria"] = std::move(cs);
    return j;
  }

  /// Human-readable table; timings are left out so the output is reproducible.
  [[nodiscard]] std::string table() const {
    std::ostringstream os;
    for (const auto& c : criteria) {
      os << (c.passed ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.title << "\n";
      for (const auto& k : checks) {
        if (k.criterion != c.id) continue;
        os << "        " << (k.passed ? "ok  " : "FAIL") << "  " << k.name;
        if (!k.detail.empty()) os << "  (" << k.detail << ")";
        os << "\n";
      }
    }
    std::size_t ok = 0;
    for (const auto& c : criteria) ok += c.passed ? 1 : 0;
    os << ok << "/" << criteria.size() << " criteria passed\n";
    return os.str();
  }
};

struct VerifyOptions {
  /// Flip the sign of q on P4 (negative control: the P4 example must fail).
  bool inject_sign_error = false;
  unsigned jobs = 1;
  /// Skip the timing limits (useful under sanitizers or debug builds).
  bool ignore_time_limits = false;
};

namespace detail {

class SuiteRunner {
 public:
  SuiteRunner(VerifyReport& rep, bool ignore_time) : rep_(rep), ignore_time_(ignore_time) {}

  void criterion(int id, std::string title, double limit, const std::function<void()>& body) {
    current_ = id;
    const std::size_t first = rep_.checks.size();
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body();
    } catch (const std::exception& e) {
      check("completes without error", false, e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    VerifyCriterion c{id, std::move(title), limit, secs, true};
    for (std::size_t i = first; i < rep_.checks.size(); ++i) c.passed = c.passed && rep_.checks[i].passed;
    if (!ignore_time_ && secs > limit) {
      check("runtime within " + format_seconds(limit), false, format_seconds(secs));
      c.passed = false;
    }
    rep_.criteria.push_back(std::move(c));
  }

  void check(std::string name, bool ok, std::string detail = {}) {
    rep_.checks.push_back(VerifyCheck{current_, std::move(name), ok, std::move(detail)});
  }

  void sweep(std::string name, const SweepResult& r) {
    check(std::move(name), r.ok && r.cases > 0,
          r.ok ? std::to_string(r.cases) + " cases" : r.detail);
  }

 private:
  static std::string format_seconds(double s) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(1) << s << " s";
    return os.str();
  }

  VerifyReport& rep_;
  bool ignore_time_;
  int current_ = 0;
};

inline std::string phases_string(const std::vector<Phase>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
  return s + "]";
}

inline std::vector<Phase> phases(std::initializer_list<std::pair<std::int64_t, std::int64_t>> v) {
  std::vector<Phase> out;
  for (auto [a, b] : v) out.emplace_back(a, b);
  return out;
}

}  // namespace detail

inline VerifyReport verify_paper_suite(const VerifyOptions& opts = {}) {
  VerifyReport rep;
  detail::SuiteRunner run(rep, opts.ignore_time_limits);
  const auto t0 = std::chrono::steady_clock::now();

  auto p4 = catalog::p4();
  if (opts.inject_sign_error) {
    auto t = p4.pmg.table();
    for (auto& ph : t) ph = -ph;
    p4 = make_pointed(validate_premetric(p4.group(), t, "P4"), p4.b, p4.z, p4.iota);
  }
  const FinAbGroup z2({2});

  run.criterion(1, "cfp(P4, P4) is Sem [x] Sem", 1.0, [&] {
    const auto c = condensed_fiber_product(p4, p4).category;
    run.check("rank 4 on Z/2 x Z/2", c.order() == 4 && canonical_factors(c.group()) == std::vector<std::int64_t>{2, 2},
              c.group().to_string());
    const auto tw = twist_multiset(c.pmg);
    run.check("twists {0, 1/2, 1/4, 1/4}", tw == detail::phases({{0, 1}, {1, 4}, {1, 4}, {1, 2}}),
              detail::phases_string(tw));
    run.check("isomorphic to Sem [x] Sem", premetric_isomorphic(c.pmg, catalog::semion_squared()).has_value());
    const int sigma = central_charge(c.pmg);
    run.check("central charge index 2 (chi = i)", sigma == 2, "sigma = " + std::to_string(sigma));
  });

  run.criterion(2, "SU(2)_4 with Vec_Z4 over Z/2", 1.0, [&] {
    const auto su = catalog::su2_4_ring();
    const auto v4 = catalog::vec_z4_ring();
    const auto cf = cfp_ring(su, v4);
    const auto& r = cf.ring();
    run.check("fiber product has 10 basis elements", cf.fiber.ring.rank() == 10,
              std::to_string(cf.fiber.ring.rank()));
    run.check("condensed fiber product has 5 basis elements", r.rank() == 5, std::to_string(r.rank()));
    const auto x = r.index("[X1,g]");
    const std::vector<GradedFusionRing::Term> want{{r.index("[z,1]"), 1}, {r.index("[Y,1]"), 1}};
    auto got = r.product(x, x);
    std::string shown;
    for (const auto& [c, m] : got) shown += (shown.empty() ? "" : " + ") + (m > 1 ? std::to_string(m) : "") + r.label(c);
    auto sorted_want = want;
    std::sort(sorted_want.begin(), sorted_want.end());
    run.check("[X₁,g]⊗[X₁,g] = [Y,1]⊕[z,1]", got == sorted_want, shown);
    run.check("dual([X1,g]) = [X-1,g]", r.label(r.dual(x)) == "[X-1,g]", r.label(r.dual(x)));
  });

  run.criterion(3, "zested twists along Z(sVec) -> P4 -> Sem [x] Sem", 1.0, [&] {
    const auto zs = catalog::z_svec();
    const auto first = zested_twists_via_cfp(zs, p4);
    run.check("Z(sVec) twists [0, 1/2, 0, 0]", first.original == detail::phases({{0, 1}, {1, 2}, {0, 1}, {0, 1}}),
              detail::phases_string(first.original));
    run.check("first zesting gives [0, 1/2, 1/8, 1/8]", first.exact == detail::phases({{0, 1}, {1, 2}, {1, 8}, {1, 8}}),
              detail::phases_string(first.exact));
    const auto second = zested_twists_via_cfp(first.cfp, p4);
    run.check("second zesting gives [0, 1/2, 1/4, 1/4]", second.exact == detail::phases({{0, 1}, {1, 2}, {1, 4}, {1, 4}}),
              detail::phases_string(second.exact));
    run.check("grade-level formula agrees with the condensation",
              first.exact == first.grade_level && second.exact == second.grade_level);
    const auto sd = section_dependence(zs, p4);
    run.check("twist multiset independent of the section", sd.multiset_invariant,
              std::to_string(sd.sections) + " sections");
  });

  run.criterion(4, "cfp is a zesting at ring level", 1.0, [&] {
    Cochain lambda = Cochain::zero(2, z2, z2);
    lambda.values[lambda.slot({1, 1})] = 1;
    const auto zested = zest_fusion_ring(catalog::vec_z2_rep_z2_ring(), lambda);
    const FinAbGroup z4({4});
    const auto target = group_ring(z4, Hom(z4, z2, {Element{1}}));
    run.check("Vec_Z2 [x] Rep(Z2) zested by lambda(1,1) = phi has Z/4 fusion",
              !find_ring_isomorphisms(zested, target, true, true).empty());
    const auto rep = verify_cfp_equals_zesting(catalog::su2_4_ring(), catalog::vec_z4_ring());
    std::string map;
    for (const auto& s : rep.map_labels) map += (map.empty() ? "" : ", ") + s;
    run.check("cfp(SU(2)_4, Vec_Z4) = SU(2)_4 zested by the same lambda", rep.isomorphic,
              rep.isomorphic ? map : rep.detail);
  });

  MmeOptions mo;
  mo.jobs = opts.jobs;
  std::vector<PointedCategory> mme_svec, mme_rep;

  run.criterion(5, "pointed minimal modular extensions of sVec are zestings of Z(sVec)", 30.0, [&] {
    mme_svec = enumerate_pointed_mme(z2, Element{1}, mo);
    run.check("8 classes", mme_svec.size() == 8, std::to_string(mme_svec.size()));
    const auto zs = catalog::z_svec();
    std::size_t reached = 0, solved = 0;
    for (const auto& c : mme_svec) {
      bool hit = false;
      for (const auto& p : mme_svec)
        if (!hit && pointed_equivalence(condensed_fiber_product(zs, p).category, c)) hit = true;
      reached += hit ? 1 : 0;
      if (solve_nu(extract_lambda(c).lambda, c.z)) ++solved;
    }
    run.check("every class is CFP(Z(sVec), P) for some P", reached == mme_svec.size(),
              std::to_string(reached) + "/" + std::to_string(mme_svec.size()));
    run.check("every class has a solvable zesting datum", solved == mme_svec.size(),
              std::to_string(solved) + "/" + std::to_string(mme_svec.size()));
  });

  auto pair_sets = [&]() {
    if (mme_svec.empty()) mme_svec = enumerate_pointed_mme(z2, Element{1}, mo);
    if (mme_rep.empty()) mme_rep = enumerate_pointed_mme(z2, Element{0}, mo);
    return std::vector<const std::vector<PointedCategory>*>{&mme_svec, &mme_rep};
  };

  run.criterion(6, "CFP of minimal modular extensions is a minimal modular extension", 30.0, [&] {
    std::size_t pairs = 0, good = 0;
    std::string first_bad;
    for (const auto* set : pair_sets())
      for (const auto& c : *set)
        for (const auto& p : *set) {
          ++pairs;
          const auto out = condensed_fiber_product(c, p).category;
          bool ok = is_nondegenerate(out.pmg) && out.order() == out.b.order() * out.b.order() && out.iota.is_injective();
          for (std::size_t phi = 0; ok && phi < out.b.order(); ++phi)
            ok = out.pmg.q(out.iota.apply(phi)) == qz(out.b, out.z, out.b.element(phi));
          if (ok) ++good;
          else if (first_bad.empty()) first_bad = c.name() + " with " + p.name();
        }
    run.check("Rep(Z/2) has 2 pointed classes", mme_rep.size() == 2, std::to_string(mme_rep.size()));
    run.check("all ordered pairs give non-degenerate |E| = |B|^2 with B_z embedded", good == pairs,
              good == pairs ? std::to_string(pairs) + " pairs" : first_bad);
  });

  run.criterion(7, "central charge is additive under CFP", 30.0, [&] {
    std::size_t pairs = 0, good = 0;
    std::string first_bad;
    for (const auto* set : pair_sets())
      for (const auto& c : *set)
        for (const auto& p : *set) {
          ++pairs;
          const int s = central_charge(condensed_fiber_product(c, p).category.pmg);
          const int want = (central_charge(c.pmg) + central_charge(p.pmg)) % 8;
          if (s == want) ++good;
          else if (first_bad.empty()) first_bad = c.name() + " with " + p.name();
        }
    run.check("sigma(cfp(C, P)) = sigma(C) + sigma(P) mod 8", good == pairs,
              good == pairs ? std::to_string(pairs) + " pairs" : first_bad);
  });

  run.criterion(8, "property sweeps", 300.0, [&] {
    run.sweep("Milgram: all non-degenerate forms with |E| <= 64", milgram_sweep(64));
    run.sweep("condensation bookkeeping: all form classes with |E| <= 32", condensation_sweep(32));
    run.sweep("polarization bilinearity: all forms with |E| <= 8", polarization_sweep(8));
    run.sweep("cocycle solver against cochain listing, |G|, |M| <= 4", cocycle_sweep());
    std::vector<std::pair<GradedFusionRing, GradedFusionRing>> rings{
        {catalog::su2_4_ring(), catalog::vec_z4_ring()},
        {catalog::vec_z4_ring(), catalog::vec_z4_ring()},
        {catalog::su2_4_ring(), catalog::vec_z2_rep_z2_ring()}};
    for (const auto* set : pair_sets())
      for (const auto& c : *set) rings.emplace_back(ring_of_pointed(c), ring_of_pointed(set->front()));
    run.sweep("de-equivariantization bookkeeping", deequivariantization_sweep(rings));
    run.sweep("CFP unit, commutativity, associativity on extensions of sVec", cfp_law_sweep(mme_svec));
    run.sweep("CFP unit, commutativity, associativity on extensions of Rep(Z/2)", cfp_law_sweep(mme_rep));
  });

  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace cfprod
