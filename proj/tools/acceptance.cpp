#include "khflow/verify.hpp"

#include <chrono>
#include <iostream>

using namespace khflow;

int main(int argc, char** argv) {
  VerifyOptions opt;
  if (argc > 1) opt.data_dir = argv[1];
  const std::pair<const char*, const char*> criteria[] = {
      {"structure", "Bar-Natan homology free of rank 2^|D| in the predicted degrees"},
      {"s-invariant", "s values of the corpus knots over Q and F2"},
      {"s-spread", "s_max - s_min = 2 over Q, F2, F3"},
      {"frame-assignments", "standard sign and frame assignments, frame_from_sign"},
      {"cube", "cube complex acyclic, skeleton matching, contraction without side effects"},
      {"basis-change", "XY differential conjugates to the 1X differential"},
      {"oracles", "cubic handle slides agree with the chain oracles"},
      {"examples", "ladybug and Hopf census before and after the Whitney tricks"},
      {"elimination", "no gr_q-decreasing points, closed moduli between increasing pairs"},
      {"reidemeister", "Reidemeister maps are quasi-isomorphisms preserving homology and s"},
      {"duality", "mirror duality isomorphism and s(mK) = -s(K)"},
      {"canonical-degree", "canonical degrees of connected knot cobordisms"},
  };
  int failed = 0, i = 0;
  for (const auto& [suite, what] : criteria) {
    ++i;
    auto t0 = std::chrono::steady_clock::now();
    auto r = run_suite(suite, opt);
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (r.pass ? "PASS" : "FAIL") << " " << i << " " << suite << ": " << what << " (" << int(sec * 10) / 10.0 << " s)\n";
    if (!r.pass) {
      ++failed;
      for (const auto& line : r.details) std::cout << "    " << line << "\n";
    }
  }
  std::cout << (12 - failed) << "/12 criteria pass\n";
  return failed ? 1 : 0;
}
