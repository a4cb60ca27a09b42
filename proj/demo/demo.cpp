// Walks through the main constructions on small examples.
//
//   cfprod_demo [path/to/su2_4.json]

#include <fstream>
#include <iostream>
#include <sstream>

#include "cfprod/catalog.hpp"
#include "cfprod/io.hpp"
#include "cfprod/pointed.hpp"
#include "cfprod/zest.hpp"

using namespace cfprod;

namespace {

std::string show(const std::vector<Phase>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
  return s + "]";
}

GradedFusionRing load_ring(int argc, char** argv) {
  if (argc < 2) return catalog::su2_4_ring();
  std::ifstream in(argv[1]);
  std::stringstream ss;
  ss << in.rdbuf();
  auto m = parse_model_file(ss.str());
  if (!m.is_ring()) throw ValidationError(std::string(argv[1]) + " is not a graded_fusion_ring");
  return std::get<GradedFusionRing>(m.value);
}

}  // namespace

int main(int argc, char** argv) try {
  // 1. Two copies of C(Z/4, a^2/8) over sVec.
  const auto p4 = catalog::p4();
  const auto sq = condensed_fiber_product(p4, p4).category;
  std::cout << "cfp(P4, P4): " << sq.group().to_string() << ", twists " << show(twist_multiset(sq.pmg))
            << ", sigma " << central_charge(sq.pmg) << "\n";
  std::cout << "  Sem [x] Sem? " << (premetric_isomorphic(sq.pmg, catalog::semion_squared()) ? "yes" : "no") << "\n";

  // 2. SU(2)_4 against Vec_Z4: a fusion ring that admits no braiding.
  const auto su = load_ring(argc, argv);
  const auto cf = cfp_ring(su, catalog::vec_z4_ring());
  const auto& r = cf.ring();
  std::cout << su.name() << " x Vec_Z4: fiber rank " << cf.fiber.ring.rank() << ", condensed rank " << r.rank() << "\n";
  const auto x = r.index("[X1,g]");
  std::cout << "  [X1,g] (x) [X1,g] =";
  const char* sep = " ";
  for (const auto& [c, m] : r.product(x, x)) {
    std::cout << sep << (m > 1 ? std::to_string(m) : "") << r.label(c);
    sep = " + ";
  }
  std::cout << ", dual " << r.label(r.dual(x)) << "\n";
  const auto rep = verify_cfp_equals_zesting(su, catalog::vec_z4_ring());
  std::cout << "  equals the zesting of " << su.name() << ": " << (rep.isomorphic ? "yes" : "no") << "\n";

  // 3. Zesting twists, step by step.
  const auto first = zested_twists_via_cfp(catalog::z_svec(), p4);
  const auto second = zested_twists_via_cfp(first.cfp, p4);
  std::cout << "twists: " << show(first.original) << " -> " << show(first.exact) << " -> " << show(second.exact) << "\n";

  // 4. All pointed minimal modular extensions of sVec and their central charges.
  const auto classes = enumerate_pointed_mme(FinAbGroup({2}), Element{1});
  std::cout << classes.size() << " pointed extensions of sVec, sigma:";
  for (const auto& c : classes) std::cout << " " << central_charge(c.pmg);
  std::cout << "\n";
  return 0;
} catch (const std::exception& e) {
  std::cerr << "demo failed: " << e.what() << "\n";
  return 1;
}
