#include <doctest.h>

#include "khflow/complex.hpp"
#include "khflow/flowcat.hpp"
#include "khflow/homology.hpp"
#include "khflow/sinv.hpp"

#include <random>

using namespace khflow;

namespace {

const char* CORPUS[] = {
    "Loop[1]",
    "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]",
    "X[4,2,5,1] X[6,4,1,3] X[2,6,3,5]",
    "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]",
    "X[4,1,3,2] X[2,3,1,4]",
    "X[1,3,2,4] X[3,1,4,2]",
    "X[1,6,2,7] X[3,8,4,9] X[5,10,6,1] X[7,2,8,3] X[9,4,10,5]",
    "Loop[1] Loop[2]",
};

int object_at(const FlowCategory1& c, Mask state, Mask labels) {
  for (const auto& o : c.objects)
    if (o.alive && o.state == state && o.labels == labels) return o.id;
  return -1;
}

bool same_complex(const GradedChainComplex& a, const GradedChainComplex& b) {
  if (a.size() != b.size()) return false;
  for (int g = 0; g < a.size(); ++g) {
    auto ra = a.d[g], rb = b.d[g];
    if (ra != rb) return false;
  }
  return true;
}

std::map<int, HomologyGroup> nonzero(const HomologySummary& h) {
  std::map<int, HomologyGroup> out;
  for (const auto& [k, g] : h.groups)
    if (g.rank || !g.torsion.empty()) out[k] = g;
  return out;
}

} // namespace

TEST_CASE("cube skeleton") {
  for (int n = 0; n <= 4; ++n) {
    auto s = standard_sign(n);
    auto c = cube_skeleton(n, s, frame_from_sign(s));
    CHECK(c.check_invariants() == "");
    CHECK(int(c.objects.size()) == (1 << n));
    CHECK(c.total_points() == n * (n ? 1 << (n - 1) : 0));
    int faces = n < 2 ? 0 : n * (n - 1) / 2 * (1 << (n - 2));
    CHECK(c.total_components() == faces);
    auto h = homology(c.associated_complex(), Coeffs::Z);
    CHECK(h.total_rank() == (n == 0 ? 1 : 0));
  }
  auto s = standard_sign(3);
  FrameAssignment bad = frame_from_sign(s);
  bad.set(0, 1, 0, 1 - bad.at(0, 1, 0));
  CHECK_THROWS_AS(cube_skeleton(3, s, bad), Error);
}

TEST_CASE("cube contraction has no side effects") {
  for (int n = 1; n <= 5; ++n) {
    auto s = standard_sign(n);
    auto c = cube_skeleton(n, s, frame_from_sign(s));
    bool side = true;
    MoveLog log;
    auto out = cube_contract(c, n, &log, &side);
    CHECK_FALSE(side);
    CHECK(out.alive_objects().empty());
    CHECK(int(log.moves.size()) == (1 << (n - 1)));
    CHECK(log.replay(c).alive_objects().empty());
  }
}

TEST_CASE("XY flow category") {
  auto hopf = xy_flow_category(parse_pd(CORPUS[4]));
  CHECK(hopf.check_invariants() == "");
  CHECK(isolated_objects(hopf).size() == 4);
  CHECK(hopf.total_points() == 8);
  CHECK(hopf.total_components() == 2);
  auto empty = xy_flow_category(parse_pd(""));
  CHECK(empty.objects.size() == 1);
  for (auto pd : CORPUS) {
    auto d = parse_pd(pd);
    auto c = xy_flow_category(d);
    CHECK(c.check_invariants() == "");
    CHECK(same_complex(c.associated_complex(false), xy_complex(ComplexInput{associated_config(d), d.n_plus, d.n_minus}, standard_sign(d.n()))));
  }
}

TEST_CASE("cubic handle slides recover the Bar-Natan complex") {
  for (auto pd : CORPUS) {
    auto d = parse_pd(pd);
    auto xy = xy_flow_category(d);
    MoveLog log;
    auto slid = cubic_handle_slides(xy, &log);
    INFO(pd);
    CHECK(slid.check_invariants() == "");
    auto bn = bar_natan_complex(d);
    CHECK(same_complex(slid.associated_complex(true), bn));
    CHECK(homology(slid.associated_complex(), Coeffs::Q) == homology(bn, Coeffs::Q));

    auto o0 = chains_oracle_0dim(xy);
    std::map<ObjectPair, std::vector<int>> got0;
    for (const auto& [k, pts] : slid.moduli0)
      for (const auto& p : pts) got0[k].push_back(p.sign);
    for (auto& kv : got0) std::sort(kv.second.begin(), kv.second.end());
    CHECK(got0 == o0);

    auto o1 = chains_oracle_1dim(xy);
    std::map<ObjectPair, long> got1;
    for (const auto& [k, comps] : slid.moduli1)
      if (!comps.empty()) got1[k] = long(comps.size());
    CHECK(got1 == o1);

    CHECK(log.replay(xy).total_points() == slid.total_points());
  }
}

TEST_CASE("ladybug configuration") {
  auto xy = xy_flow_category(ladybug_config());
  auto slid = cubic_handle_slides(xy);
  int x = object_at(slid, 3, 0), y = object_at(slid, 0, 1);
  REQUIRE(x >= 0);
  REQUIRE(y >= 0);
  CHECK(slid.components(x, y).size() == 6);
  MoveLog log;
  auto el = eliminate_quantum_increasing(slid, &log);
  CHECK(el.check_invariants() == "");
  CHECK(log.moves.size() == 4);
  const auto& comps = el.components(x, y);
  CHECK(comps.size() == 2);
  for (const auto& c : comps) CHECK_FALSE(c.circle);
  for (const auto& [k, pts] : el.moduli0)
    if (!pts.empty()) CHECK(el.objects[k.first].gr_q >= el.objects[k.second].gr_q);
}

TEST_CASE("Hopf configuration") {
  auto xy = xy_flow_category(hopf_config());
  auto slid = cubic_handle_slides(xy);
  int x = object_at(slid, 3, 0), y = object_at(slid, 0, 3);
  REQUIRE(x >= 0);
  REQUIRE(y >= 0);
  CHECK(slid.components(x, y).size() == 4);
  auto el = eliminate_quantum_increasing(slid);
  CHECK(el.check_invariants() == "");
  const auto& comps = el.components(x, y);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].circle);
}

TEST_CASE("elimination on diagrams") {
  for (auto pd : CORPUS) {
    auto d = parse_pd(pd);
    auto slid = cubic_handle_slides(xy_flow_category(d));
    INFO(pd);
    FlowCategory1 el;
    try {
      el = eliminate_quantum_increasing(slid);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Stuck);
      continue;
    }
    CHECK(el.check_invariants() == "");
    auto h = homology(el.associated_complex(), Coeffs::Q);
    CHECK(h == homology(bar_natan_complex(d), Coeffs::Q));
  }
}

TEST_CASE("moves preserve homology") {
  auto d = parse_pd(CORPUS[1]);
  auto c = xy_flow_category(d);
  auto h0 = nonzero(homology(c.associated_complex(), Coeffs::Z));
  std::mt19937 rng(7);
  int moves = 0;
  for (int step = 0; step < 40; ++step) {
    std::vector<std::pair<int, int>> slides, cancels;
    auto alive = c.alive_objects();
    for (int a : alive)
      for (int b : alive)
        if (a != b && c.objects[a].gr == c.objects[b].gr) slides.push_back({a, b});
    for (const auto& [k, pts] : c.moduli0)
      if (pts.size() == 1) cancels.push_back(k);
    if (step % 3 == 2 && !cancels.empty()) {
      auto [x, y] = cancels[rng() % cancels.size()];
      c = handle_cancel(c, x, y);
    } else if (!slides.empty()) {
      auto [x, y] = slides[rng() % slides.size()];
      c = handle_slide(c, x, y, rng() % 2 ? 1 : -1);
    }
    ++moves;
    REQUIRE(c.check_invariants() == "");
    CHECK(nonzero(homology(c.associated_complex(), Coeffs::Z)) == h0);
  }
  CHECK(moves == 40);
}

TEST_CASE("Whitney trick") {
  auto xy = xy_flow_category(ladybug_config());
  auto slid = cubic_handle_slides(xy);
  for (const auto& [k, pts] : slid.moduli0) {
    if (pts.size() < 2) continue;
    for (const auto& p : pts)
      for (const auto& q : pts)
        if (p.sign == -q.sign) {
          auto w = whitney_trick(slid, k.first, k.second, p.id, q.id);
          CHECK(w.check_invariants() == "");
          CHECK(w.total_points() == slid.total_points() - 2);
        }
    auto same = std::find_if(pts.begin() + 1, pts.end(), [&](const FlowPoint& q) { return q.sign == pts[0].sign; });
    if (same != pts.end()) CHECK_THROWS_AS(whitney_trick(slid, k.first, k.second, pts[0].id, same->id), Error);
  }
  CHECK_THROWS_AS(handle_cancel(slid, 0, 1), Error);
  CHECK_THROWS_AS(handle_slide(slid, 0, int(slid.objects.size()) - 1, 1), Error);
}

TEST_CASE("move scripts") {
  auto s = standard_sign(2);
  auto c = cube_skeleton(2, s, frame_from_sign(s));
  auto moves = parse_moves("# contract\ncancel 10 00\ncancel 11 01\n", c);
  REQUIRE(moves.size() == 2);
  MoveLog log{moves};
  CHECK(log.replay(c).alive_objects().empty());
  auto slides = parse_moves("slide 10 01 -1\nwhitney 11 10 0 1\n", c);
  CHECK(slides[0].epsilon == -1);
  CHECK(slides[1].p == 0);
  CHECK_THROWS_AS(parse_moves("flip 10 00", c), Error);
  CHECK_THROWS_AS(parse_moves("cancel 10 zz", c), Error);
  CHECK_THROWS_AS(parse_moves("slide 10 01 2", c), Error);
  auto json = flowcat_to_json(c);
  CHECK(json.find("\"schema\": 1") != std::string::npos);
  CHECK(movelog_to_json(log, c).find("cancel") != std::string::npos);
}
