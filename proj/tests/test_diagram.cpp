#include <doctest.h>

#include "khflow/diagram.hpp"

#include <algorithm>
#include <set>

using namespace khflow;

TEST_CASE("right trefoil") {
  auto d = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]");
  CHECK(d.n() == 3);
  CHECK(d.num_components() == 1);
  CHECK(d.n_plus == 3);
  CHECK(d.n_minus == 0);
  CHECK(resolve(d, State{0, 0, 0}).r() == 2);
  CHECK(resolve(d, State{1, 1, 1}).r() == 3);
  CHECK(seifert_state(d) == State{0, 0, 0});
}

TEST_CASE("empty diagram") {
  auto d = parse_pd("");
  CHECK(d.n() == 0);
  CHECK(d.num_components() == 0);
  CHECK(resolve(d, State{}).r() == 0);
  CHECK(seifert_state(d).empty());
}

TEST_CASE("hopf links") {
  auto neg = parse_pd("X[1,3,2,4] X[3,1,4,2]");
  CHECK(neg.num_components() == 2);
  CHECK(linking_number(neg, 0, 1) == -1);
  auto pos = parse_pd("X[4,1,3,2] X[2,3,1,4]");
  CHECK(pos.num_components() == 2);
  CHECK(linking_number(pos, 0, 1) == 1);
  CHECK(linking_number(mirror(pos), 0, 1) == -1);
  CHECK_THROWS_AS(linking_number(pos, 0, 0), Error);
  CHECK_THROWS_AS(linking_number(pos, 0, 2), Error);
  auto unlink = parse_pd("Loop[1] Loop[2]");
  CHECK(unlink.num_components() == 2);
  CHECK(linking_number(unlink, 0, 1) == 0);
}

TEST_CASE("mirror and json input") {
  auto d = parse_pd("[[1,4,2,5],[3,6,4,1],[5,2,6,3]]");
  CHECK(d.n_plus == 3);
  auto m = mirror(d);
  CHECK(m.n_minus == 3);
  CHECK(seifert_state(m) == State{1, 1, 1});
  auto left = parse_pd("X[4,2,5,1] X[6,4,1,3] X[2,6,3,5]");
  CHECK(left.n_minus == 3);
  CHECK(parse_pd(to_pd_text(m)).n_minus == 3);
  auto fig8 = parse_pd("X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]");
  CHECK(fig8.num_components() == 1);
  CHECK(fig8.n_plus == 2);
  CHECK(fig8.n_minus == 2);
}

TEST_CASE("parse errors") {
  auto code = [](const std::string& s) {
    try {
      parse_pd(s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  CHECK(code("X[1,2,3]") == ErrorCode::MalformedPD);
  CHECK(code("X[1,2,a,4]") == ErrorCode::MalformedPD);
  CHECK(code("X[1,2,3,4]") == ErrorCode::InconsistentEdges);
  CHECK(code("[[1,2,2]]") == ErrorCode::MalformedPD);
  CHECK(code("X[1,3,2,4] X[1,4,2,3]") == ErrorCode::NonOrientable);
  CHECK_THROWS_AS(resolve(parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"), State{0, 1}), Error);
}

TEST_CASE("ab labels of loops") {
  auto u = parse_pd("Loop[1]");
  auto ab = ab_labeling(u, {false});
  REQUIRE(ab.labels.size() == 1);
  CHECK(ab.labels[0] == 'a');
  CHECK(ab_labeling(u, {true}).labels[0] == 'b');
}

TEST_CASE("ab labels flip under total reversal") {
  for (auto pd : {"X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]", "X[4,1,3,2] X[2,3,1,4]",
                  "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]", "Loop[1] Loop[2]"}) {
    auto d = parse_pd(pd);
    int m = d.num_components();
    for (int o = 0; o < (1 << m); ++o) {
      Orientation a(m), b(m);
      for (int i = 0; i < m; ++i) {
        a[i] = (o >> i) & 1;
        b[i] = !a[i];
      }
      auto la = ab_labeling(d, a), lb = ab_labeling(d, b);
      REQUIRE(la.circles == lb.circles);
      for (size_t i = 0; i < la.labels.size(); ++i) CHECK(la.labels[i] != lb.labels[i]);
    }
  }
}

TEST_CASE("positive hopf ab labels") {
  auto d = parse_pd("X[4,1,3,2] X[2,3,1,4]");
  auto ab = ab_labeling(d, {false, false});
  REQUIRE(ab.labels.size() == 2);
  CHECK(ab.labels[0] != ab.labels[1]);
}

TEST_CASE("braid closures") {
  auto t25 = braid_closure({1, 1, 1, 1, 1}, 2);
  CHECK(t25.num_components() == 1);
  CHECK(t25.n_plus == 5);
  auto t34 = braid_closure({1, 2, 1, 2, 1, 2, 1, 2}, 3);
  CHECK(t34.num_components() == 1);
  CHECK(t34.n_plus == 8);
  auto again = parse_pd(to_pd_text(t34));
  CHECK(to_tuples(again) == to_tuples(t34));
  auto unknot = braid_closure({1, -1}, 2);
  CHECK(unknot.num_components() == 2);
  CHECK(braid_closure({}, 1).loops.size() == 1);
}

TEST_CASE("resolution circles partition the edge segments") {
  auto d = braid_closure({1, 2, 1, 2, 1, 2, 1, 2}, 3);
  std::vector<int> all = d.labels();
  for (Mask u = 0; u < (Mask(1) << d.n()); u += 7) {
    auto cd = resolve(d, u);
    std::vector<int> seen;
    for (auto& c : cd.circles) seen.insert(seen.end(), c.begin(), c.end());
    std::sort(seen.begin(), seen.end());
    CHECK(seen == all);
  }
}

TEST_CASE("seifert circle count matches orientation tracing") {
  for (auto pd : {"X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]", "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]"}) {
    auto d = parse_pd(pd);
    // follow each edge into its head and leave along the outgoing slot of the other strand
    std::set<int> seen;
    int count = 0;
    for (int l : d.labels()) {
      if (seen.count(l)) continue;
      ++count;
      int e = l;
      while (!seen.count(e)) {
        seen.insert(e);
        auto h = d.head.at(e);
        const auto& x = d.crossings[h.crossing];
        int other_in = h.slot == x.under_in ? x.over_in : x.under_in;
        e = x.label(other_in + 2);
      }
    }
    CHECK(resolve(d, seifert_mask(d)).r() == count);
  }
}

TEST_CASE("linking sum is invariant under crossing reordering") {
  auto a = parse_pd("X[4,1,3,2] X[2,3,1,4] Loop[5]");
  auto b = parse_pd("X[2,3,1,4] X[4,1,3,2] Loop[5]");
  auto total = [](const LinkDiagram& d) {
    int s = 0;
    for (int i = 0; i < d.num_components(); ++i)
      for (int j = i + 1; j < d.num_components(); ++j) s += std::abs(linking_number(d, i, j));
    return s;
  };
  CHECK(total(a) == total(b));
  CHECK(total(a) == 1);
}
