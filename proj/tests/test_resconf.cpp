#include <doctest.h>

#include "khflow/resconf.hpp"

#include <algorithm>
#include <set>

using namespace khflow;

namespace {

const char* TREFOIL = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";

ResolutionConfiguration basic_merge() {
  ResolutionConfiguration c;
  c.arcs = {{1, 2, 3, 4}};
  c.joins = {{1, 4}, {2, 3}};
  return c;
}

ResolutionConfiguration basic_split() {
  ResolutionConfiguration c;
  c.arcs = {{1, 2, 3, 4}};
  c.joins = {{1, 2}, {3, 4}};
  return c;
}

// Arrows predicted by the Khovanov algebra with h = t = 0: label 1 is the unit.
std::set<std::pair<std::vector<int>, std::vector<int>>> algebra_arrows(bool merge) {
  std::set<std::pair<std::vector<int>, std::vector<int>>> out;
  if (merge) {
    // m(1,1)=1, m(1,X)=m(X,1)=X, m(X,X)=0
    out.insert({{1, 1}, {1}});
    out.insert({{1, 0}, {0}});
    out.insert({{0, 1}, {0}});
  } else {
    // delta(1) = 1 X + X 1, delta(X) = X X
    out.insert({{1}, {1, 0}});
    out.insert({{1}, {0, 1}});
    out.insert({{0}, {0, 0}});
  }
  return out;
}

std::vector<int> unpack(Mask v, int r) {
  std::vector<int> out(r);
  for (int i = 0; i < r; ++i) out[i] = bit(v, i);
  return out;
}

void check_blocks_against_components(const ResolutionConfiguration& c) {
  Poset P = poset(c, xy_relation());
  UnionFind uf(int(P.objects.size()));
  for (auto [a, b] : P.covers) uf.unite(a, b);
  std::map<int, std::set<int>> comps;
  for (int o = 0; o < int(P.objects.size()); ++o) comps[uf.find(o)].insert(o);
  auto blocks = cube_decomposition(c);
  CHECK(blocks.size() == comps.size());
  std::set<int> covered;
  std::set<std::set<int>> block_sets;
  std::set<std::pair<int, int>> covers(P.covers.begin(), P.covers.end());
  for (const auto& b : blocks) {
    std::set<int> objs;
    for (Mask w = 0; w < (Mask(1) << b.k); ++w) {
      int o = P.index_of(b.embed(w), b.labels_at(c, w));
      REQUIRE(o >= 0);
      CHECK(P.objects[o].state == b.embed(w));
      objs.insert(o);
      CHECK(covered.insert(o).second);
      for (int j = 0; j < b.k; ++j)
        if (!bit(w, j)) {
          Mask w2 = w | (Mask(1) << j);
          int o2 = P.index_of(b.embed(w2), b.labels_at(c, w2));
          CHECK(covers.count({o, o2}) == 1);
        }
    }
    CHECK(P.index_of(b.max_state, b.max_labels) == P.index_of(b.embed((Mask(1) << b.k) - 1), b.labels_at(c, (Mask(1) << b.k) - 1)));
    block_sets.insert(objs);
  }
  CHECK(covered.size() == P.objects.size());
  std::set<std::set<int>> comp_sets;
  for (auto& kv : comps) comp_sets.insert(kv.second);
  CHECK(block_sets == comp_sets);
  size_t edges = 0;
  for (const auto& b : blocks) edges += b.k ? size_t(b.k) << (b.k - 1) : 0;
  CHECK(edges == P.covers.size());
}

} // namespace

TEST_CASE("associated configurations") {
  auto tref = associated_config(parse_pd(TREFOIL));
  auto circ = tref.circles();
  CHECK(circ.size() == 2);
  CHECK(tref.index() == 3);
  for (const auto& s : tref.arcs) {
    auto side = [&](int l) {
      for (int i = 0; i < 2; ++i)
        if (std::count(circ[i].begin(), circ[i].end(), l)) return i;
      return -1;
    };
    CHECK(side(s[0]) != side(s[1]));
  }
  auto u = associated_config(parse_pd("Loop[1]"));
  CHECK(u.circles().size() == 1);
  CHECK(u.index() == 0);
  auto h = hopf_config();
  CHECK(h.circles().size() == 2);
  CHECK(h.index() == 2);
}

TEST_CASE("surgery") {
  auto tref = associated_config(parse_pd(TREFOIL));
  auto s1 = surgery(tref, {0});
  CHECK(s1.circles().size() == 1);
  CHECK(s1.index() == 2);
  CHECK(surgery(tref, {}).circles() == tref.circles());
  CHECK(surgery(tref, {}).arcs == tref.arcs);
  auto h = surgery(hopf_config(), {0, 1});
  CHECK(h.circles().size() == 2);
  CHECK(h.index() == 0);
  CHECK_THROWS_AS(surgery(tref, {3}), Error);
  CHECK_THROWS_AS(surgery(tref, {1, 1}), Error);
  for (Mask B = 0; B < 8; ++B) {
    std::vector<int> b;
    for (int i = 0; i < 3; ++i)
      if (bit(B, i)) b.push_back(i);
    auto s = surgery(tref, b);
    CHECK(s.index() == 3 - int(b.size()));
    CHECK(s.circles() == tref.circles_at(B));
  }
}

TEST_CASE("ladybug configuration circle counts") {
  auto c = ladybug_config();
  CHECK(c.circles_at(0b00).size() == 1);
  CHECK(c.circles_at(0b01).size() == 2);
  CHECK(c.circles_at(0b10).size() == 2);
  CHECK(c.circles_at(0b11).size() == 1);
}

TEST_CASE("khovanov relation on basic merge and split") {
  for (bool merge : {true, false}) {
    auto c = merge ? basic_merge() : basic_split();
    Poset P = poset(c, khovanov_relation());
    std::set<std::pair<std::vector<int>, std::vector<int>>> got;
    for (auto [a, b] : P.covers)
      got.insert({unpack(P.objects[a].labels, P.objects[a].r), unpack(P.objects[b].labels, P.objects[b].r)});
    CHECK(got == algebra_arrows(merge));
    CHECK(P.covers.size() == 3);
  }
}

TEST_CASE("xy poset of a single circle") {
  ResolutionConfiguration c;
  c.loose = {1};
  Poset P = poset(c, xy_relation());
  CHECK(P.objects.size() == 2);
  CHECK(P.covers.empty());
  CHECK(cube_decomposition(c).size() == 2);
}

TEST_CASE("hopf cube decomposition") {
  auto blocks = cube_decomposition(hopf_config());
  std::multiset<int> ks;
  for (const auto& b : blocks) ks.insert(b.k);
  CHECK(ks == std::multiset<int>{0, 0, 0, 0, 2, 2});
  check_blocks_against_components(hopf_config());
}

TEST_CASE("cube decomposition partitions the xy poset") {
  check_blocks_against_components(associated_config(parse_pd(TREFOIL)));
  check_blocks_against_components(ladybug_config());
  check_blocks_against_components(associated_config(parse_pd("X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]")));
  check_blocks_against_components(associated_config(braid_closure({1, 1, 1, 1, 1}, 2)));
}

TEST_CASE("admissible decorations") {
  CHECK(admissible({hopf_config(), {0, 0}, {0, 0}}));
  CHECK_FALSE(admissible({basic_merge(), {0, 1}, {0}}));
  ResolutionConfiguration two;
  two.arcs = {{1, 2, 3, 4}, {5, 6, 7, 8}};
  two.joins = {{1, 4}, {2, 3}, {5, 8}, {6, 7}};
  CHECK(admissible({two, {0, 0, 1, 1}, {0, 1}}));
  CHECK_FALSE(admissible({two, {0, 0, 1, 1}, {1, 0}}));
}
