#include <doctest.h>

#include "khflow/complex.hpp"
#include "khflow/sinv.hpp"

#include <algorithm>

using namespace khflow;

namespace {

const char* TREFOIL = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";
const char* LEFT_TREFOIL = "X[4,2,5,1] X[6,4,1,3] X[2,6,3,5]";
const char* FIG8 = "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]";
const char* HOPF = "X[4,1,3,2] X[2,3,1,4]";

} // namespace

TEST_CASE("canonical cycles of knots") {
  for (auto pd : {TREFOIL, LEFT_TREFOIL, FIG8, "Loop[1]"}) {
    auto d = parse_pd(pd);
    auto cc = canonical_cycles(d);
    REQUIRE(cc.size() == 2);
    for (const auto& c : cc) CHECK(c.gr_h == 0);
    CHECK(cc[0].gr_q == cc[1].gr_q);
  }
}

TEST_CASE("canonical cycles of links") {
  auto d = parse_pd(HOPF);
  auto cc = canonical_cycles(d);
  REQUIRE(cc.size() == 4);
  std::vector<int> hs;
  for (const auto& c : cc) {
    hs.push_back(c.gr_h);
    CHECK(c.gr_h == canonical_degree_formula(d, c.orientation));
  }
  std::sort(hs.begin(), hs.end());
  CHECK(hs == std::vector<int>{0, 0, 2, 2});
  auto neg = parse_pd("X[1,3,2,4] X[3,1,4,2]");
  for (const auto& c : canonical_cycles(neg)) CHECK(c.gr_h == canonical_degree_formula(neg, c.orientation));
  auto empty = canonical_cycles(parse_pd(""));
  REQUIRE(empty.size() == 1);
  CHECK(empty[0].alpha.size() == 1);
  auto unlink = canonical_cycles(parse_pd("Loop[1] Loop[2]"));
  CHECK(unlink.size() == 4);
}

TEST_CASE("canonical classes span Bar-Natan homology") {
  for (auto pd : {TREFOIL, FIG8, HOPF}) {
    auto d = parse_pd(pd);
    auto bn = bar_natan_complex(d);
    FilteredHomology fh(bn, Coeffs::Q);
    auto cc = canonical_cycles(d, bn, false);
    int total = 0;
    for (int h : bn.degrees()) total += fh.dimension(h);
    CHECK(total == int(cc.size()));
    for (const auto& c : cc) CHECK(fh.class_grading(c.alpha) != INT_MAX);
  }
}

TEST_CASE("unknot filtration gradings") {
  auto u = bar_natan_complex(parse_pd("Loop[1]"));
  CHECK(quantum_homology_grading(u, Chain{{0, 1}}, Coeffs::Q) == -1);
  CHECK(quantum_homology_grading(u, Chain{{1, 1}}, Coeffs::Q) == 1);
  CHECK(quantum_homology_grading(u, Chain{{1, 1}}, Coeffs::F2) == 1);
  auto t = bar_natan_complex(parse_pd(TREFOIL));
  CHECK_THROWS_AS(quantum_homology_grading(t, Chain{{0, 1}}, Coeffs::Q), Error);
}

TEST_CASE("s-invariants") {
  struct Row {
    const char* pd;
    int s;
  };
  for (auto [pd, expect] : {Row{"Loop[1]", 0}, Row{"", 0}, Row{TREFOIL, 2}, Row{LEFT_TREFOIL, -2}, Row{FIG8, 0}}) {
    if (std::string(pd).empty()) continue;
    auto d = parse_pd(pd);
    for (auto k : {Coeffs::Q, Coeffs::F2, Coeffs::F3}) {
      auto s = s_invariant(d, k);
      CHECK(s.s == expect);
      CHECK(s.s_max - s.s_min == 2);
      CHECK(s.gr_alpha == s.s_min);
      CHECK(s.gr_beta == s.gr_alpha);
      CHECK((s.s_min + s.s_max) / 2 == s.s);
    }
  }
  CHECK(s_invariant(braid_closure({1, 1, 1, 1, 1}, 2), Coeffs::Q).s == 4);
  CHECK_THROWS_AS(s_invariant(parse_pd(HOPF), Coeffs::Q), Error);
  CHECK_THROWS_AS(s_invariant(parse_pd(""), Coeffs::Q), Error);
}

TEST_CASE("mirror duality") {
  for (auto pd : {"Loop[1]", "", TREFOIL, FIG8, HOPF, "Loop[1] Loop[2]"}) {
    auto d = parse_pd(pd);
    auto md = mirror_dual(d);
    CHECK(md.dual.is_complex());
    CHECK(is_chain_map(md.mirror_complex, md.dual, md.phi));
    // a bijection on generators
    std::vector<int> hit(md.dual.size(), 0);
    for (const auto& row : md.phi.f) {
      REQUIRE(row.size() == 1);
      hit[row[0].first]++;
    }
    CHECK(std::all_of(hit.begin(), hit.end(), [](int x) { return x == 1; }));
    for (int g = 0; g < md.mirror_complex.size(); ++g) {
      int t = md.phi.f[g][0].first;
      CHECK(md.mirror_complex.gens[g].gr_h == md.dual.gens[t].gr_h);
      CHECK(md.mirror_complex.gens[g].gr_q == md.dual.gens[t].gr_q);
    }
  }
  auto t = parse_pd(TREFOIL);
  CHECK(s_invariant(mirror(t), Coeffs::Q).s == -2);
  auto hm = homology(bar_natan_complex(mirror(parse_pd(HOPF))), Coeffs::Z);
  CHECK(hm.groups[0].rank == 2);
  CHECK(hm.groups[-2].rank == 2);
}

TEST_CASE("mirror pairing of canonical classes is nondegenerate") {
  auto d = parse_pd(TREFOIL);
  auto md = mirror_dual(d);
  auto bn = bar_natan_complex(d);
  auto m = mirror(d);
  auto a = canonical_cycles(d, bn, false);
  auto b = canonical_cycles(m, md.mirror_complex, false);
  std::vector<std::vector<Int>> gram(2, std::vector<Int>(2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) gram[i][j] = mirror_pairing(md, b[i].alpha, a[j].alpha);
  CHECK(gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0] != 0);
}
