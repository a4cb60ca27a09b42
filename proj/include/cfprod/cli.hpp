#pragma once

// The `cfprod` command line: subcommands over model files, with exit codes
// 0 success, 1 usage or parse error, 2 mathematical failure, 3 capacity exceeded.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cfprod/abgroup.hpp"
#include "cfprod/error.hpp"
#include "cfprod/fusion.hpp"
#include "cfprod/io.hpp"
#include "cfprod/metric.hpp"
#include "cfprod/pointed.hpp"
#include "cfprod/verify.hpp"
#include "cfprod/zest.hpp"

namespace cfprod::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kMath = 2, kCapacity = 3 };

namespace detail {

/// "2,2" -> {2, 2}; "" -> {}.
inline std::vector<std::int64_t> parse_ints(const std::string& text, const std::string& what) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t used = 0;
    try {
      out.push_back(std::stoll(part, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) throw ValidationError(what + ": '" + text + "' is not a comma-separated integer list");
  }
  return out;
}

inline ModelFile load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_model_file(ss.str());
  } catch (const ModelError& e) {
    throw ModelError(path + ": " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
  }
}

inline const PointedCategory& need_pointed(const ModelFile& m, const std::string& flag) {
  if (!m.is_pointed()) throw ValidationError(flag + " must be a pointed_category, got " + m.kind);
  return std::get<PointedCategory>(m.value);
}

/// Rings for ring-level commands; pointed categories are converted.
inline GradedFusionRing as_ring(const ModelFile& m, const std::string& flag) {
  if (m.is_ring()) return std::get<GradedFusionRing>(m.value);
  if (m.is_pointed()) return ring_of_pointed(std::get<PointedCategory>(m.value));
  throw ValidationError(flag + " must be a graded_fusion_ring or pointed_category, got " + m.kind);
}

inline const PreMetricGroup& as_premetric(const ModelFile& m, const std::string& flag) {
  if (m.is_premetric()) return std::get<PreMetricGroup>(m.value);
  if (m.is_pointed()) return std::get<PointedCategory>(m.value).pmg;
  throw ValidationError(flag + " must be a premetric_group or pointed_category, got " + m.kind);
}

inline Json phases_json(const std::vector<Phase>& v) {
  Json a = Json::array();
  for (const auto& p : v) a.push_back(p.to_string());
  return a;
}

inline Json element_json(const FinAbGroup& g, std::size_t x) { return cfprod::detail::int_array(g.element(x).coeffs); }

inline std::string gauss_text(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

/// Summary of a non-degenerate or degenerate pre-metric group.
inline Json premetric_summary(const PreMetricGroup& p) {
  Json j;
  j["order"] = p.order();
  j["nondegenerate"] = is_nondegenerate(p);
  j["twist_multiset"] = phases_json(twist_multiset(p));
  if (is_nondegenerate(p)) j["central_charge_index"] = central_charge(p);
  const auto g = gauss_sum(p);
  j["gauss_sum_float_diagnostic"] = {{"re", gauss_text(g.real())}, {"im", gauss_text(g.imag())}};
  return j;
}

inline Json ring_iso_json(const GradedFusionRing& r, const GradedFusionRing& s, const std::vector<std::size_t>& map) {
  Json m = Json::object();
  for (std::size_t a = 0; a < map.size(); ++a) m[r.label(a)] = s.label(map[a]);
  return m;
}

struct Context {
  std::ostream& out;
  std::string out_path;

  void emit(const std::string& text) const {
    if (out_path.empty()) {
      out << text;
      return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + out_path + "'");
    f << text;
  }
  void emit(const Json& j) const { emit(dump(j)); }
};

}  // namespace detail

/// Runs the command line; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Pointed braided categories, condensed fiber products and zesting", "cfprod"};
  app.require_subcommand(1);
  std::string out_path;
  unsigned jobs = 1;
  app.add_option("--out", out_path, "Write the result to this file instead of stdout");
  app.add_option("--jobs", jobs, "Worker threads for enumeration")->check(CLI::Range(1u, 64u));

  std::string left, right, in, b_text, z_text, g_text, m_text, sub_text, datum_path, section_text;
  bool relaxed = false, report = false, inject = false, json_report = false, emit_datum = false;
  bool ignore_time = false;
  int degree = 2;

  auto* bz = app.add_subcommand("bz", "The symmetric category B_z on the dual group of B");
  bz->add_option("--B", b_text, "Invariant factors of B, comma separated")->required();
  bz->add_option("--z", z_text, "The element z of B with 2z = 0")->required();

  auto* center = app.add_subcommand("center", "The Drinfeld center Z(B_z)");
  center->add_option("--B", b_text, "Invariant factors of B")->required();
  center->add_option("--z", z_text, "The element z")->required();

  auto* grade = app.add_subcommand("grade", "Canonical grading of a pointed category or a ring");
  grade->add_option("--in", in, "Model file")->required();

  auto* fiber = app.add_subcommand("fiber", "Fiber product over B");
  fiber->add_option("--left", left, "Left model file")->required();
  fiber->add_option("--right", right, "Right model file")->required();

  auto* cfp = app.add_subcommand("cfp", "Condensed fiber product");
  cfp->add_option("--left", left, "Left model file")->required();
  cfp->add_option("--right", right, "Right model file")->required();
  cfp->add_flag("--report", report, "Wrap the result with twists and central charge");

  auto* cond = app.add_subcommand("condense", "Condense an isotropic subgroup");
  cond->add_option("--in", in, "premetric_group or pointed_category file")->required();
  cond->add_option("--sub", sub_text, "Generators as a JSON list of elements, e.g. [[2]]")->required();

  auto* mext = app.add_subcommand("mext", "Pointed minimal modular extensions of B_z");
  mext->add_option("--B", b_text, "Invariant factors of B")->required();
  mext->add_option("--z", z_text, "The element z")->required();
  mext->add_flag("--relaxed", relaxed, "Plain braided equivalence instead of embedding-compatible");

  auto* coc = app.add_subcommand("cocycles", "Normalized cocycles and cohomology with trivial action");
  coc->add_option("--G", g_text, "Invariant factors of G")->required();
  coc->add_option("--M", m_text, "Invariant factors of the coefficients M")->required();
  coc->add_option("--degree", degree, "Cochain degree (1 to 4)")->check(CLI::Range(1, 4));

  auto* zest = app.add_subcommand("zest", "Zest a graded ring by the lambda of a pointed extension");
  zest->add_option("--in", in, "Ring or pointed category to zest")->required();
  auto* zest_right = zest->add_option("--right", right, "Pointed extension P supplying lambda");
  auto* zest_datum = zest->add_option("--datum", datum_path, "zesting_datum file supplying lambda");
  zest_right->excludes(zest_datum);
  zest->add_option("--z", z_text, "z for a ring-valued --right (default 0)");
  zest->add_flag("--emit-datum", emit_datum, "Print the solved zesting datum instead of the ring");

  auto* tw = app.add_subcommand("twists", "Zested twists of C by P, through the condensed fiber product");
  tw->add_option("--left", left, "Pointed category C")->required();
  tw->add_option("--right", right, "Pointed category P")->required();
  tw->add_option("--section", section_text, "Element index chosen in each grade of P, comma separated");

  auto* iso = app.add_subcommand("iso", "Find an equivalence between two models");
  iso->add_option("--left", left, "Left model file")->required();
  iso->add_option("--right", right, "Right model file")->required();
  iso->add_flag("--relaxed", relaxed, "Ignore the embedded B_z (pointed inputs)");

  auto* vp = app.add_subcommand("verify-paper", "Run the reproduction suite");
  vp->add_flag("--inject-fault", inject, "Flip the sign of q on P4 (negative control)");
  vp->add_flag("--json", json_report, "Print the JSON report instead of the table");
  vp->add_flag("--no-time-limits", ignore_time, "Do not fail on runtime limits");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  const detail::Context ctx{out, out_path};
  try {
    auto group = [](const std::string& t, const std::string& what) { return FinAbGroup(detail::parse_ints(t, what)); };
    auto element = [](const FinAbGroup& g, const std::string& t) {
      Element e(detail::parse_ints(t, "--z"));
      if (!g.contains(e)) throw ValidationError("--z: " + e.to_string() + " is not an element of " + g.to_string());
      return e;
    };

    if (*bz || *center) {
      const auto b = group(b_text, "--B");
      const auto z = element(b, z_text);
      ctx.emit(to_json(*bz ? make_Bz(b, z) : center_of_Bz(b, z)));
      return kOk;
    }

    if (*grade) {
      const auto m = detail::load(in);
      Json j;
      if (m.is_pointed()) {
        const auto& c = std::get<PointedCategory>(m.value);
        j["grading_group"] = cfprod::detail::int_array(c.b.factors());
        Json rows = Json::array();
        const auto deg = c.grading.table();
        for (std::size_t x = 0; x < c.order(); ++x)
          rows.push_back({{"element", detail::element_json(c.group(), x)},
                          {"q", c.pmg.q(x).to_string()},
                          {"grade", detail::element_json(c.b, deg[x])}});
        j["grades"] = std::move(rows);
      } else {
        const auto r = detail::as_ring(m, "--in");
        j["grading_group"] = cfprod::detail::int_array(r.grading_group().factors());
        Json rows = Json::object();
        for (std::size_t a = 0; a < r.rank(); ++a) rows[r.label(a)] = cfprod::detail::int_array(r.grade(a).coeffs);
        j["grades"] = std::move(rows);
      }
      ctx.emit(j);
      return kOk;
    }

    if (*fiber || *cfp) {
      const auto l = detail::load(left), r = detail::load(right);
      if (l.is_pointed() && r.is_pointed()) {
        const auto& c = std::get<PointedCategory>(l.value);
        const auto& d = std::get<PointedCategory>(r.value);
        if (*fiber) {
          const auto fp = fiber_product_pointed(c, d);
          auto pmg = fp.pmg;
          pmg.set_name(c.name() + " x_B " + d.name());
          Json j;
          j["fiber_product"] = to_json(pmg);
          Json members = Json::array();
          for (std::size_t x = 0; x < fp.pmg.order(); ++x) {
            const auto amb = fp.inclusion.apply(x);
            members.push_back(Json::array({detail::element_json(c.group(), amb / d.order()),
                                           detail::element_json(d.group(), amb % d.order())}));
          }
          j["pairs"] = std::move(members);
          ctx.emit(j);
          return kOk;
        }
        const auto cf = condensed_fiber_product(c, d);
        if (!report) {
          ctx.emit(to_json(cf.category));
          return kOk;
        }
        Json j;
        j["result"] = to_json(cf.category);
        j["summary"] = detail::premetric_summary(cf.category.pmg);
        Json reps = Json::array();
        for (std::size_t k = 0; k < cf.category.order(); ++k) {
          const auto amb = cf.condensation.representative[k];
          reps.push_back(Json::array({detail::element_json(c.group(), amb / d.order()),
                                      detail::element_json(d.group(), amb % d.order())}));
        }
        j["representatives"] = std::move(reps);
        ctx.emit(j);
        return kOk;
      }
      const auto c = detail::as_ring(l, "--left"), d = detail::as_ring(r, "--right");
      if (*fiber) {
        ctx.emit(to_json(fiber_product_ring(c, d).ring));
        return kOk;
      }
      const auto cf = cfp_ring(c, d);
      if (!report) {
        ctx.emit(to_json(cf.ring()));
        return kOk;
      }
      Json j;
      j["result"] = to_json(cf.ring());
      j["fiber_rank"] = cf.fiber.ring.rank();
      ctx.emit(j);
      return kOk;
    }

    if (*cond) {
      const auto m = detail::load(in);
      const auto& p = detail::as_premetric(m, "--in");
      Json gens;
      try {
        gens = Json::parse(sub_text);
      } catch (const Json::parse_error&) {
        throw ValidationError("--sub is not valid JSON");
      }
      cfprod::detail::Reader rd(gens, "--sub");
      std::vector<Element> els;
      for (std::size_t i = 0; i < rd.size_of_array(); ++i) els.push_back(rd.item(i).element_of(p.group()));
      const auto h = Subgroup::generated(p.group(), els);
      const auto c = condense(p, h);
      Json j;
      j["result"] = to_json(c.result);
      j["summary"] = detail::premetric_summary(c.result);
      j["condensed_order"] = h.order();
      j["centralizer_order"] = c.centralizer.order();
      Json reps = Json::array();
      for (auto x : c.representative) reps.push_back(detail::element_json(p.group(), x));
      j["representatives"] = std::move(reps);
      ctx.emit(j);
      return kOk;
    }

    if (*mext) {
      const auto b = group(b_text, "--B");
      const auto z = element(b, z_text);
      MmeOptions mo;
      mo.relaxed = relaxed;
      mo.jobs = jobs;
      const auto classes = enumerate_pointed_mme(b, z, mo);
      Json j;
      j["count"] = classes.size();
      Json list = Json::array();
      for (const auto& c : classes) {
        Json e;
        e["model"] = to_json(c);
        e["central_charge_index"] = central_charge(c.pmg);
        e["twist_multiset"] = detail::phases_json(twist_multiset(c.pmg));
        list.push_back(std::move(e));
      }
      j["classes"] = std::move(list);
      ctx.emit(j);
      return kOk;
    }

    if (*coc) {
      const auto g = group(g_text, "--G"), m = group(m_text, "--M");
      const auto res = solve_cocycles(g, m, degree);
      Json j;
      j["degree"] = degree;
      j["cocycles"] = res.cocycle_count;
      j["coboundaries"] = res.coboundary_count;
      j["classes"] = res.class_count;
      Json reps = Json::array();
      for (const auto& c : res.class_representatives) {
        Json t = Json::object();
        for (std::size_t s = 0; s < c.values.size(); ++s) {
          if (c.values[s] == 0) continue;
          std::string key;
          for (auto a : c.args(s)) key += (key.empty() ? "" : ",") + std::to_string(a);
          t[key] = detail::element_json(m, c.values[s]);
        }
        reps.push_back(std::move(t));
      }
      j["representatives"] = std::move(reps);
      ctx.emit(j);
      return kOk;
    }

    if (*zest) {
      const auto target = detail::as_ring(detail::load(in), "--in");
      Cochain lambda;
      Element z;
      if (!datum_path.empty()) {
        const auto dm = detail::load(datum_path);
        if (!dm.is_datum()) throw ValidationError("--datum must be a zesting_datum, got " + dm.kind);
        const auto& d = std::get<ZestingDatum>(dm.value);
        lambda = d.lambda;
        z = d.z;
      } else if (!right.empty()) {
        const auto pm = detail::load(right);
        if (pm.is_pointed()) {
          const auto& p = std::get<PointedCategory>(pm.value);
          lambda = extract_lambda(p).lambda;
          z = p.z;
        } else {
          const auto pr = detail::as_ring(pm, "--right");
          lambda = extract_lambda(pr).lambda;
          z = z_text.empty() ? lambda.coefficients.zero() : element(lambda.coefficients, z_text);
        }
      } else {
        throw ValidationError("zest needs --right or --datum");
      }
      const auto nu = solve_nu(lambda, z);
      if (!nu) throw MathError("obstructed: d nu = beta(lambda, lambda) has no solution");
      if (emit_datum) {
        ZestingDatum d{lambda.source, lambda.coefficients, z, lambda, nu->particular_phases(), std::nullopt};
        validate_zesting_datum(d);
        ctx.emit(to_json(d));
        return kOk;
      }
      ctx.emit(to_json(zest_fusion_ring(target, lambda)));
      return kOk;
    }

    if (*tw) {
      const auto lm = detail::load(left), rm = detail::load(right);
      const auto& c = detail::need_pointed(lm, "--left");
      const auto& p = detail::need_pointed(rm, "--right");
      std::optional<std::vector<std::size_t>> section;
      if (!section_text.empty()) {
        std::vector<std::size_t> s;
        for (auto v : detail::parse_ints(section_text, "--section")) {
          if (v < 0 || static_cast<std::uint64_t>(v) >= p.order()) throw ValidationError("--section: index out of range");
          s.push_back(static_cast<std::size_t>(v));
        }
        section = s;
      }
      const auto z = zested_twists_via_cfp(c, p, section);
      const auto sd = section_dependence(c, p);
      Json j;
      Json order = Json::array();
      for (auto x : z.order) order.push_back(detail::element_json(c.group(), x));
      j["elements"] = std::move(order);
      j["original"] = detail::phases_json(z.original);
      j["zested"] = detail::phases_json(z.exact);
      j["grade_level"] = detail::phases_json(z.grade_level);
      j["sections_checked"] = sd.sections;
      j["pointwise_section_invariant"] = sd.pointwise_invariant;
      j["multiset_section_invariant"] = sd.multiset_invariant;
      ctx.emit(j);
      return kOk;
    }

    if (*iso) {
      const auto lm = detail::load(left), rm = detail::load(right);
      Json j;
      if ((lm.is_pointed() || lm.is_premetric()) && (rm.is_pointed() || rm.is_premetric())) {
        std::optional<Hom> f;
        if (lm.is_pointed() && rm.is_pointed())
          f = pointed_equivalence(std::get<PointedCategory>(lm.value), std::get<PointedCategory>(rm.value), relaxed);
        else
          f = premetric_isomorphic(detail::as_premetric(lm, "--left"), detail::as_premetric(rm, "--right"));
        j["isomorphic"] = f.has_value();
        if (f) {
          Json imgs = Json::array();
          for (const auto& e : f->images()) imgs.push_back(cfprod::detail::int_array(e.coeffs));
          j["generator_images"] = std::move(imgs);
        }
      } else {
        const auto r = detail::as_ring(lm, "--left"), s = detail::as_ring(rm, "--right");
        const auto maps = find_ring_isomorphisms(r, s, true, true);
        j["isomorphic"] = !maps.empty();
        if (!maps.empty()) j["map"] = detail::ring_iso_json(r, s, maps.front());
      }
      ctx.emit(j);
      if (!j["isomorphic"].get<bool>()) {
        err << "error: no isomorphism found\n";
        return kMath;
      }
      return kOk;
    }

    if (*vp) {
      VerifyOptions vo;
      vo.inject_sign_error = inject;
      vo.jobs = jobs;
      vo.ignore_time_limits = ignore_time;
      const auto rep = verify_paper_suite(vo);
      ctx.emit(json_report ? dump(rep.to_json()) : rep.table());
      return rep.passed() ? kOk : kMath;
    }
  } catch (const CapacityError& e) {
    err << "capacity exceeded: " << e.what() << "\n";
    return kCapacity;
  } catch (const MathError& e) {
    err << "error: " << e.what() << "\n";
    return kMath;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kMath;
  }
  return kUsage;
}

}  // namespace cfprod::cli
