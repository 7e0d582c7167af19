#include <doctest.h>

#include "khflow/complex.hpp"
#include "khflow/homology.hpp"

#include <map>
#include <random>
#include <set>

using namespace khflow;

namespace {

const char* TREFOIL = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";
const char* FIG8 = "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]";

std::map<int, int> counts_by_state_weight(const GradedChainComplex& c) {
  std::map<int, int> out;
  for (const auto& g : c.gens) out[popcount(g.state)]++;
  return out;
}

// Dense matrix of d in a fixed generator order.
std::vector<std::vector<Int>> dense(const GradedChainComplex& c) {
  std::vector<std::vector<Int>> m(c.size(), std::vector<Int>(c.size(), 0));
  for (int g = 0; g < c.size(); ++g)
    for (const auto& [t, v] : c.d[g]) m[t][g] += v;
  return m;
}

} // namespace

TEST_CASE("frobenius tables") {
  auto bn = frobenius_spec(1, 0, Basis::OneX);
  CHECK(bn.m[0][0][0] == 1);
  CHECK(bn.m[0][0][1] == 0);
  CHECK(bn.delta[1][0][1] == 1);
  CHECK(bn.delta[1][1][0] == 1);
  CHECK(bn.delta[1][1][1] == -1);
  auto kh = frobenius_spec(0, 0, Basis::OneX);
  CHECK(kh.delta[1][1][1] == 0);
  CHECK(kh.m[0][0][0] == 0);
  auto xy = frobenius_spec(1, 0, Basis::XY);
  CHECK(xy.m[1][1][1] == -1);
  CHECK(xy.m[0][0][0] == 1);
  CHECK(xy.delta[0][0][0] == 1);
  CHECK(xy.delta[0][1][1] == 0);
  for (auto [h, t] : std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {0, 1}, {2, 3}, {-1, 2}})
    CHECK(frobenius_relation_holds(frobenius_spec(h, t, Basis::OneX)));
  CHECK(frobenius_relation_holds(xy));
  CHECK(frobenius_relation_holds(frobenius_spec(0, 1, Basis::XY)));
  CHECK_THROWS_AS(frobenius_spec(0, 0, Basis::XY), Error);
  CHECK_THROWS_AS(frobenius_spec(1, 1, Basis::XY), Error);
}

TEST_CASE("trefoil generator counts") {
  auto d = parse_pd(TREFOIL);
  auto c = khovanov_complex(d, frobenius_spec(0, 0, Basis::OneX));
  CHECK(counts_by_state_weight(c) == std::map<int, int>{{0, 4}, {1, 6}, {2, 12}, {3, 8}});
}

TEST_CASE("empty diagram complex") {
  auto c = bar_natan_complex(parse_pd(""));
  CHECK(c.size() == 1);
  CHECK(c.gens[0].gr_h == 0);
  CHECK(homology(c, Coeffs::Z).total_rank() == 1);
}

TEST_CASE("d squared vanishes for all specializations") {
  for (auto pd : {TREFOIL, FIG8, "X[4,1,3,2] X[2,3,1,4]", "Loop[1] Loop[2]"}) {
    auto d = parse_pd(pd);
    for (auto [h, t] : std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {0, 1}}) {
      CHECK(khovanov_complex(d, frobenius_spec(h, t, Basis::OneX)).is_complex());
      CHECK(khovanov_complex(d, frobenius_spec(h, t, Basis::OneX), random_sign(d.n(), *new std::mt19937_64(5))).is_complex());
    }
    CHECK(xy_complex(d).is_complex());
  }
}

TEST_CASE("quantum gradings") {
  auto u = bar_natan_complex(parse_pd("Loop[1]"));
  REQUIRE(u.size() == 2);
  CHECK(u.gens[0].gr_q == -1);
  CHECK(u.gens[1].gr_q == 1);
  auto d = parse_pd(TREFOIL);
  auto c = bar_natan_complex(d);
  int g = c.index_of(0, 0);
  CHECK(c.gens[g].gr_q == 1);
  for (int x = 0; x < c.size(); ++x) {
    // matches the grading from degrees of labels
    int deg = 0;
    for (int i = 0; i < c.gens[x].r; ++i) deg += bit(c.gens[x].labels, i) ? 1 : -1;
    CHECK(c.gens[x].gr_q == popcount(c.gens[x].state) + deg + d.n_plus - 2 * d.n_minus);
    for (const auto& [t, v] : c.d[x]) CHECK(c.gens[t].gr_q >= c.gens[x].gr_q);
  }
  auto kh = khovanov_complex(parse_pd(FIG8), frobenius_spec(0, 0, Basis::OneX));
  for (int x = 0; x < kh.size(); ++x)
    for (const auto& [t, v] : kh.d[x]) CHECK(kh.gens[t].gr_q == kh.gens[x].gr_q);
}

TEST_CASE("xy complex agrees with diagonal tables") {
  for (auto pd : {TREFOIL, FIG8, "X[4,1,3,2] X[2,3,1,4]"}) {
    auto d = parse_pd(pd);
    auto blockwise = xy_complex(d);
    auto tables = khovanov_complex(d, frobenius_spec(1, 0, Basis::XY));
    CHECK(dense(blockwise) == dense(tables));
    CHECK(homology(blockwise, Coeffs::Z) == homology(bar_natan_complex(d), Coeffs::Z));
  }
}

TEST_CASE("xy differential of the hopf configuration lives on two squares") {
  auto d = parse_pd("X[4,1,3,2] X[2,3,1,4]");
  auto c = xy_complex(d);
  int entries = 0;
  std::set<int> touched;
  for (int g = 0; g < c.size(); ++g)
    for (const auto& [t, v] : c.d[g]) {
      ++entries;
      touched.insert(g);
      touched.insert(t);
    }
  CHECK(entries == 8);
  CHECK(touched.size() == 8);
}

TEST_CASE("basis change conjugates xy to bar-natan") {
  for (auto pd : {"", "Loop[1]", TREFOIL, FIG8, "X[4,1,3,2] X[2,3,1,4]"}) {
    auto d = parse_pd(pd);
    auto xy = xy_complex(d);
    auto bn = bar_natan_complex(d);
    auto P = basis_change(xy, bn);
    CHECK(is_chain_map(xy, bn, P.forward));
    CHECK(is_chain_map(bn, xy, P.inverse));
    CHECK(maps_equal(compose(P.inverse, P.forward), identity_map(xy)));
    CHECK(maps_equal(compose(P.forward, P.inverse), identity_map(bn)));
  }
}

TEST_CASE("bar-natan homology rank") {
  for (auto pd : {TREFOIL, FIG8}) {
    auto h = homology(bar_natan_complex(parse_pd(pd)), Coeffs::Z);
    CHECK(h.total_rank() == 2);
    CHECK(h.torsion_free());
  }
  auto kh = homology(khovanov_complex(parse_pd(TREFOIL), frobenius_spec(0, 0, Basis::OneX)), Coeffs::Q);
  CHECK(kh.total_rank() == 4);
  CHECK(kh.has_bigraded);
  // right trefoil: q^1 + q^3 + q^5 t^2 + q^9 t^3
  CHECK(kh.bigraded[{0, 1}].rank == 1);
  CHECK(kh.bigraded[{0, 3}].rank == 1);
  CHECK(kh.bigraded[{2, 5}].rank == 1);
  CHECK(kh.bigraded[{3, 9}].rank == 1);
  auto khz = homology(khovanov_complex(parse_pd(TREFOIL), frobenius_spec(0, 0, Basis::OneX)), Coeffs::Z);
  CHECK(khz.groups[3].torsion == std::vector<Int>{2});
}
