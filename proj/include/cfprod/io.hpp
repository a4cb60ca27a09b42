#pragma once

// JSON model files: parsing with located errors and deterministic emission.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cfprod/abgroup.hpp"
#include "cfprod/error.hpp"
#include "cfprod/fusion.hpp"
#include "cfprod/metric.hpp"
#include "cfprod/phase.hpp"
#include "cfprod/pointed.hpp"
#include "cfprod/zest.hpp"

namespace cfprod {

using Json = nlohmann::ordered_json;

/// A parse or validation failure located in the input: either a line/column for
/// syntax errors or a JSON path such as "$.q[3]".
class ModelError : public ValidationError {
 public:
  ModelError(std::string where, const std::string& what)
      : ValidationError(where + ": " + what), where_(std::move(where)) {}
  [[nodiscard]] const std::string& where() const { return where_; }

 private:
  std::string where_;
};

struct ModelFile {
  std::string kind;
  std::string name;
  std::variant<PreMetricGroup, PointedCategory, GradedFusionRing, ZestingDatum> value;

  [[nodiscard]] bool is_premetric() const { return std::holds_alternative<PreMetricGroup>(value); }
  [[nodiscard]] bool is_pointed() const { return std::holds_alternative<PointedCategory>(value); }
  [[nodiscard]] bool is_ring() const { return std::holds_alternative<GradedFusionRing>(value); }
  [[nodiscard]] bool is_datum() const { return std::holds_alternative<ZestingDatum>(value); }
};

inline constexpr std::uint64_t kMaxModelOrder = 1u << 16;

namespace detail {

class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

  [[nodiscard]] const std::string& path() const { return path_; }
  [[noreturn]] void fail(const std::string& what) const { throw ModelError(path_, what); }

  [[nodiscard]] Reader at(const std::string& key) const {
    if (!j_.is_object()) fail("expected an object");
    auto it = j_.find(key);
    if (it == j_.end()) throw ModelError(path_ + "." + key, "missing field");
    return Reader(*it, path_ + "." + key);
  }
  [[nodiscard]] bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }
  [[nodiscard]] Reader item(std::size_t i) const { return Reader(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }

  void only_fields(const std::set<std::string>& allowed) const {
    if (!j_.is_object()) fail("expected an object");
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!allowed.count(it.key())) throw ModelError(path_ + "." + it.key(), "unknown field");
  }

  [[nodiscard]] std::size_t size_of_array() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }
  [[nodiscard]] std::string str() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  [[nodiscard]] std::int64_t integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<std::int64_t>();
  }
  [[nodiscard]] std::vector<std::int64_t> int_array() const {
    std::vector<std::int64_t> out(size_of_array());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = item(i).integer();
    return out;
  }
  [[nodiscard]] Phase fraction() const {
    const auto s = str();
    try {
      return Phase::parse(s);
    } catch (const ValidationError& e) {
      fail(std::string("bad fraction: ") + e.what());
    }
  }
  [[nodiscard]] std::vector<std::pair<std::string, Reader>> entries() const {
    if (!j_.is_object()) fail("expected an object");
    std::vector<std::pair<std::string, Reader>> out;
    for (auto it = j_.begin(); it != j_.end(); ++it)
      out.emplace_back(it.key(), Reader(it.value(), path_ + "[\"" + it.key() + "\"]"));
    return out;
  }

  [[nodiscard]] FinAbGroup group() const {
    const auto f = int_array();
    try {
      FinAbGroup g(f);
      if (g.order() > kMaxModelOrder) throw CapacityError(path_ + ": group order exceeds " + std::to_string(kMaxModelOrder));
      return g;
    } catch (const ValidationError& e) {
      fail(e.what());
    }
  }
  [[nodiscard]] Element element_of(const FinAbGroup& g) const {
    Element e(int_array());
    if (!g.contains(e)) fail(e.to_string() + " is not an element of " + g.to_string());
    return e;
  }

 private:
  const Json& j_;
  std::string path_;
};

/// Runs fn and relabels validation failures with the given location.
template <class Fn>
auto located(const std::string& where, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ModelError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ModelError(where, e.what());
  }
}

inline std::vector<std::size_t> parse_tuple_key(const Reader& r, const std::string& key, std::size_t arity,
                                                std::size_t bound) {
  std::vector<std::size_t> out;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      r.fail("key '" + key + "' is not a comma-separated list of element indices");
    const auto v = std::stoull(part);
    if (v >= bound) r.fail("element index " + part + " out of range in key '" + key + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.size() != arity) r.fail("key '" + key + "' must have " + std::to_string(arity) + " entries");
  return out;
}

inline std::string tuple_key(const std::vector<std::size_t>& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s;
}

inline std::vector<Phase> parse_q(const Reader& root, const FinAbGroup& e) {
  const auto q = root.at("q");
  const std::size_t n = q.size_of_array();
  if (n != e.order())
    q.fail("q has " + std::to_string(n) + " entries, the group has order " + std::to_string(e.order()));
  std::vector<Phase> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = q.item(i).fraction();
  return t;
}

inline PreMetricGroup parse_premetric(const Reader& root, const std::string& name) {
  const auto e = root.at("invariant_factors").group();
  auto t = parse_q(root, e);
  return located("$.q", [&] { return validate_premetric(e, std::move(t), name); });
}

inline PointedCategory parse_pointed(const Reader& root, const std::string& name) {
  auto pmg = parse_premetric(root, name);
  const auto b = root.at("B").group();
  const auto z = root.at("z").element_of(b);
  const auto emb = root.at("embedding");
  const FinAbGroup& e = pmg.group();
  if (emb.size_of_array() != e.rank())
    emb.fail("embedding needs " + std::to_string(e.rank()) + " rows (one per factor of E)");
  std::vector<Element> cols(b.rank(), Element(std::vector<std::int64_t>(e.rank(), 0)));
  for (std::size_t r = 0; r < e.rank(); ++r) {
    const auto row = emb.item(r).int_array();
    if (row.size() != b.rank())
      emb.item(r).fail("embedding row needs " + std::to_string(b.rank()) + " columns (one per factor of B)");
    for (std::size_t c = 0; c < b.rank(); ++c) {
      auto coeffs = cols[c].coeffs;
      coeffs[r] = row[c];
      cols[c] = Element(std::move(coeffs));
    }
  }
  return located("$.embedding", [&] {
    Hom iota(b, e, cols);
    if (!iota.is_injective()) throw ValidationError("embedding is not injective");
    for (std::size_t phi = 0; phi < b.order(); ++phi)
      if (pmg.q(iota.apply(phi)) != qz(b, z, b.element(phi)))
        throw ValidationError("q restricted to the embedded dual group differs from q_z at " + b.element(phi).to_string());
    return make_pointed(pmg, b, z, iota);
  });
}

inline GradedFusionRing parse_ring(const Reader& root, const std::string& name) {
  FusionRingData d;
  d.name = name;
  d.grading_group = root.at("grading_group").group();
  const auto basis = root.at("basis");
  for (std::size_t i = 0; i < basis.size_of_array(); ++i) d.basis.push_back(basis.item(i).str());
  if (d.basis.empty()) basis.fail("basis is empty");
  if (d.basis.size() > 256) throw CapacityError("$.basis: rank exceeds 256");
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < d.basis.size(); ++i)
    if (!idx.emplace(d.basis[i], i).second) basis.item(i).fail("duplicate label '" + d.basis[i] + "'");
  auto label = [&](const Reader& r) {
    const auto s = r.str();
    auto it = idx.find(s);
    if (it == idx.end()) r.fail("unknown basis label '" + s + "'");
    return it->second;
  };
  auto label_map = [&](const Reader& m, auto&& value) {
    std::vector<bool> seen(d.basis.size(), false);
    for (const auto& [k, v] : m.entries()) {
      auto it = idx.find(k);
      if (it == idx.end()) v.fail("unknown basis label '" + k + "'");
      seen[it->second] = true;
      value(it->second, v);
    }
    for (std::size_t a = 0; a < seen.size(); ++a)
      if (!seen[a]) m.fail("no entry for '" + d.basis[a] + "'");
  };
  d.grade.assign(d.basis.size(), d.grading_group.zero());
  label_map(root.at("grade"), [&](std::size_t a, const Reader& v) { d.grade[a] = v.element_of(d.grading_group); });
  d.unit = label(root.at("unit"));
  d.dual.assign(d.basis.size(), 0);
  label_map(root.at("dual"), [&](std::size_t a, const Reader& v) { d.dual[a] = label(v); });
  const auto n = root.at("N");
  std::set<std::array<std::size_t, 3>> seen;
  for (std::size_t i = 0; i < n.size_of_array(); ++i) {
    const auto row = n.item(i);
    if (row.size_of_array() != 4) row.fail("expected [label, label, label, multiplicity]");
    const std::array<std::size_t, 3> key{label(row.item(0)), label(row.item(1)), label(row.item(2))};
    const auto m = row.item(3).integer();
    if (m < 0) row.item(3).fail("negative multiplicity");
    if (!seen.insert(key).second) row.fail("repeated structure constant");
    if (m != 0) d.set(key[0], key[1], key[2], m);
  }
  if (root.has("B") != root.has("embedding")) root.fail("'B' and 'embedding' must be given together");
  if (root.has("B")) {
    const auto b = root.at("B").group();
    const auto emb = root.at("embedding");
    if (emb.size_of_array() != b.order()) emb.fail("embedding needs one label per element of B");
    RingEmbedding re{b, {}};
    for (std::size_t i = 0; i < b.order(); ++i) re.labels.push_back(label(emb.item(i)));
    d.embedding = re;
  }
  return located("$", [&] { return validate_fusion_ring(d); });
}

inline ZestingDatum parse_datum(const Reader& root) {
  ZestingDatum d;
  d.g = root.at("G").group();
  d.b = root.at("B").group();
  d.z = root.at("z").element_of(d.b);
  const std::size_t n = d.g.order();
  if (n > 64) throw CapacityError("$.G: zesting data support |G| <= 64");
  d.lambda = Cochain::zero(2, d.g, d.b);
  for (const auto& [k, v] : root.at("lambda").entries()) {
    const auto t = parse_tuple_key(v, k, 2, n);
    d.lambda.values[d.lambda.slot(t)] = d.b.index(v.element_of(d.b));
  }
  d.nu.assign(n * n * n, Phase{});
  for (const auto& [k, v] : root.at("nu").entries()) {
    const auto t = parse_tuple_key(v, k, 3, n);
    d.nu[(t[0] * n + t[1]) * n + t[2]] = v.fraction();
  }
  if (root.has("t")) {
    std::vector<Phase> t(n * n);
    for (const auto& [k, v] : root.at("t").entries()) {
      const auto a = parse_tuple_key(v, k, 2, n);
      t[a[0] * n + a[1]] = v.fraction();
    }
    d.t = std::move(t);
  }
  located("$", [&] {
    check_z(d.b, d.z);
    validate_zesting_datum(d);
    return 0;
  });
  return d;
}

inline std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline Json int_array(const std::vector<std::int64_t>& v) {
  Json a = Json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

inline void emit_premetric_fields(Json& j, const PreMetricGroup& p) {
  j["invariant_factors"] = int_array(p.group().factors());
  Json q = Json::array();
  for (const auto& ph : p.table()) q.push_back(ph.to_string());
  j["q"] = std::move(q);
}

}  // namespace detail

/// Parses a model file. Unknown fields are rejected; syntax errors carry line and column,
/// semantic errors a JSON path.
inline ModelFile parse_model_file(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ModelError(detail::line_column(text, e.byte), "JSON syntax error");
  }
  detail::Reader root(j, "$");
  ModelFile m;
  m.kind = root.at("kind").str();
  if (root.has("name")) m.name = root.at("name").str();
  if (m.kind == "premetric_group") {
    root.only_fields({"kind", "name", "invariant_factors", "q"});
    m.value = detail::parse_premetric(root, m.name);
  } else if (m.kind == "pointed_category") {
    root.only_fields({"kind", "name", "invariant_factors", "q", "B", "z", "embedding"});
    m.value = detail::parse_pointed(root, m.name);
  } else if (m.kind == "graded_fusion_ring") {
    root.only_fields({"kind", "name", "grading_group", "basis", "grade", "unit", "dual", "N", "B", "embedding"});
    m.value = detail::parse_ring(root, m.name);
  } else if (m.kind == "zesting_datum") {
    root.only_fields({"kind", "name", "G", "B", "z", "lambda", "nu", "t"});
    m.value = detail::parse_datum(root);
  } else {
    throw ModelError("$.kind", "unknown kind '" + m.kind + "'");
  }
  return m;
}

inline Json to_json(const PreMetricGroup& p) {
  Json j;
  j["kind"] = "premetric_group";
  if (!p.name().empty()) j["name"] = p.name();
  detail::emit_premetric_fields(j, p);
  return j;
}

inline Json to_json(const PointedCategory& c) {
  Json j;
  j["kind"] = "pointed_category";
  if (!c.name().empty()) j["name"] = c.name();
  detail::emit_premetric_fields(j, c.pmg);
  j["B"] = detail::int_array(c.b.factors());
  j["z"] = detail::int_array(c.z.coeffs);
  Json emb = Json::array();
  for (std::size_t r = 0; r < c.group().rank(); ++r) {
    Json row = Json::array();
    for (std::size_t k = 0; k < c.b.rank(); ++k) row.push_back(c.iota.images()[k][r]);
    emb.push_back(std::move(row));
  }
  j["embedding"] = std::move(emb);
  return j;
}

inline Json to_json(const GradedFusionRing& r) {
  Json j;
  j["kind"] = "graded_fusion_ring";
  if (!r.name().empty()) j["name"] = r.name();
  j["grading_group"] = detail::int_array(r.grading_group().factors());
  j["basis"] = r.basis();
  Json grade = Json::object(), dual = Json::object();
  for (std::size_t a = 0; a < r.rank(); ++a) {
    grade[r.label(a)] = detail::int_array(r.grade(a).coeffs);
    dual[r.label(a)] = r.label(r.dual(a));
  }
  j["grade"] = std::move(grade);
  j["unit"] = r.label(r.unit());
  j["dual"] = std::move(dual);
  Json n = Json::array();
  for (std::size_t a = 0; a < r.rank(); ++a)
    for (std::size_t b = 0; b < r.rank(); ++b)
      for (const auto& [c, m] : r.product(a, b)) n.push_back(Json::array({r.label(a), r.label(b), r.label(c), m}));
  j["N"] = std::move(n);
  if (r.embedding()) {
    j["B"] = detail::int_array(r.embedding()->b.factors());
    Json emb = Json::array();
    for (auto a : r.embedding()->labels) emb.push_back(r.label(a));
    j["embedding"] = std::move(emb);
  }
  return j;
}

/// Tables are written sparsely: entries that are zero are omitted.
inline Json to_json(const ZestingDatum& d, const std::string& name = {}) {
  Json j;
  j["kind"] = "zesting_datum";
  if (!name.empty()) j["name"] = name;
  j["G"] = detail::int_array(d.g.factors());
  j["B"] = detail::int_array(d.b.factors());
  j["z"] = detail::int_array(d.z.coeffs);
  Json lambda = Json::object();
  for (std::size_t s = 0; s < d.lambda.values.size(); ++s)
    if (d.lambda.values[s] != 0)
      lambda[detail::tuple_key(d.lambda.args(s))] = detail::int_array(d.b.element(d.lambda.values[s]).coeffs);
  j["lambda"] = std::move(lambda);
  const std::size_t n = d.g.order();
  Json nu = Json::object();
  for (std::size_t s = 0; s < d.nu.size(); ++s)
    if (!d.nu[s].is_zero()) nu[detail::tuple_key({s / (n * n), s / n % n, s % n})] = d.nu[s].to_string();
  j["nu"] = std::move(nu);
  if (d.t) {
    Json t = Json::object();
    for (std::size_t s = 0; s < d.t->size(); ++s)
      if (!(*d.t)[s].is_zero()) t[detail::tuple_key({s / n, s % n})] = (*d.t)[s].to_string();
    j["t"] = std::move(t);
  }
  return j;
}

inline Json to_json(const ModelFile& m) {
  return std::visit(
      [&](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ZestingDatum>)
          return to_json(v, m.name);
        else
          return to_json(v);
      },
      m.value);
}

/// Deterministic text: two-space indent and a trailing newline.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline std::string emit_model_file(const ModelFile& m) { return dump(to_json(m)); }

}  // namespace cfprod
