#include "khflow/flowcat.hpp"

#include <json.hpp>

#include <algorithm>
#include <climits>
#include <set>
#include <sstream>
#include <tuple>

namespace khflow {

int FlowCategory1::add_object(FlowObject o) {
  o.id = int(objects.size());
  objects.push_back(o);
  return o.id;
}

int FlowCategory1::add_point(int x, int y, int sign) {
  int id = next_point++;
  moduli0[{x, y}].push_back({id, sign});
  return id;
}

int FlowCategory1::add_interval(int x, int y, Endpoint a, Endpoint b, int framing) {
  FlowComponent c;
  c.id = next_component++;
  c.ends[0] = a;
  c.ends[1] = b;
  c.framing = framing & 1;
  moduli1[{x, y}].push_back(c);
  return c.id;
}

int FlowCategory1::add_circle(int x, int y, int framing) {
  FlowComponent c;
  c.id = next_component++;
  c.circle = true;
  c.framing = framing & 1;
  moduli1[{x, y}].push_back(c);
  return c.id;
}

std::vector<int> FlowCategory1::alive_objects() const {
  std::vector<int> out;
  for (const auto& o : objects)
    if (o.alive) out.push_back(o.id);
  std::stable_sort(out.begin(), out.end(), [&](int a, int b) { return objects[a].gr < objects[b].gr; });
  return out;
}

const std::vector<FlowPoint>& FlowCategory1::points(int x, int y) const {
  static const std::vector<FlowPoint> none;
  auto it = moduli0.find({x, y});
  return it == moduli0.end() ? none : it->second;
}

const std::vector<FlowComponent>& FlowCategory1::components(int x, int y) const {
  static const std::vector<FlowComponent> none;
  auto it = moduli1.find({x, y});
  return it == moduli1.end() ? none : it->second;
}

int FlowCategory1::count(int x, int y) const {
  int total = 0;
  for (const auto& p : points(x, y)) total += p.sign;
  return total;
}

int FlowCategory1::point_sign(int x, int y, int pid) const {
  for (const auto& p : points(x, y))
    if (p.id == pid) return p.sign;
  return 0;
}

int FlowCategory1::find_object(const std::string& name) const {
  for (const auto& o : objects)
    if (o.alive && o.name == name) return o.id;
  return -1;
}

std::vector<std::pair<Endpoint, int>> FlowCategory1::composites(int x, int y) const {
  std::vector<std::pair<Endpoint, int>> out;
  for (auto it = moduli0.lower_bound({x, INT_MIN}); it != moduli0.end() && it->first.first == x; ++it) {
    int z = it->first.second;
    for (const auto& p : points(z, y))
      for (const auto& q : it->second) out.push_back({Endpoint{z, p.id, q.id}, p.sign * q.sign});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::string FlowCategory1::check_invariants() const {
  std::set<int> seen;
  for (const auto& [key, pts] : moduli0) {
    auto [x, y] = key;
    if (!objects.at(x).alive || !objects.at(y).alive) return "0-dim moduli on a removed object";
    if (!pts.empty() && objects[x].gr != objects[y].gr + 1) return "0-dim moduli between " + objects[x].name + " and " + objects[y].name + " with wrong grading";
    for (const auto& p : pts)
      if (!seen.insert(p.id).second) return "duplicate point id";
  }
  std::set<ObjectPair> pairs;
  for (const auto& [key, comps] : moduli1) {
    auto [x, y] = key;
    if (comps.empty()) continue;
    if (!objects.at(x).alive || !objects.at(y).alive) return "1-dim moduli on a removed object";
    if (objects[x].gr != objects[y].gr + 2) return "1-dim moduli with wrong grading";
    pairs.insert(key);
  }
  for (const auto& [k1, p1] : moduli0) {
    if (p1.empty()) continue;
    for (auto it = moduli0.lower_bound({k1.second, INT_MIN}); it != moduli0.end() && it->first.first == k1.second; ++it)
      if (!it->second.empty()) pairs.insert({k1.first, it->first.second});
  }
  for (auto [x, y] : pairs) {
    auto comp = composites(x, y);
    std::map<Endpoint, int> sign;
    int total = 0;
    for (const auto& [e, s] : comp) {
      sign[e] = s;
      total += s;
    }
    std::string where = objects[x].name + " -> " + objects[y].name;
    if (total != 0) return "chain condition fails at " + where;
    std::vector<Endpoint> ends;
    for (const auto& c : components(x, y)) {
      if (c.circle) continue;
      for (const auto& e : c.ends)
        if (!sign.count(e)) return "interval endpoint is not a composite at " + where;
      if (sign[c.ends[0]] != -sign[c.ends[1]]) return "interval endpoints have equal sign at " + where;
      ends.push_back(c.ends[0]);
      ends.push_back(c.ends[1]);
    }
    std::sort(ends.begin(), ends.end());
    std::vector<Endpoint> want;
    for (const auto& [e, s] : comp) want.push_back(e);
    if (ends != want) return "boundary matching fails at " + where;
  }
  return "";
}

GradedChainComplex FlowCategory1::associated_complex(bool orient) const {
  GradedChainComplex c;
  auto alive = alive_objects();
  std::map<int, int> pos;
  for (int id : alive) {
    const auto& o = objects[id];
    pos[id] = c.size();
    c.gens.push_back(Generator{o.state, o.labels, o.r, o.gr, o.gr_q});
  }
  c.d.resize(c.size());
  c.direction = 1;
  for (const auto& [key, pts] : moduli0) {
    int total = 0;
    for (const auto& p : pts) total += p.sign;
    if (!total) continue;
    auto [x, y] = key;
    if (orient && (objects[x].reversed != objects[y].reversed)) total = -total;
    c.d[pos.at(y)].push_back({pos.at(x), Int(total)});
  }
  for (auto& row : c.d) std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  c.reindex();
  return c;
}

int FlowCategory1::total_points() const {
  int n = 0;
  for (const auto& kv : moduli0) n += int(kv.second.size());
  return n;
}

int FlowCategory1::total_components() const {
  int n = 0;
  for (const auto& kv : moduli1) n += int(kv.second.size());
  return n;
}

namespace {

void add_cube(FlowCategory1& c, int k, const std::vector<int>& obj, const SignAssignment& s, const FrameAssignment& f) {
  std::vector<std::vector<int>> pid(k, std::vector<int>(size_t(1) << k, -1));
  for (Mask w = 0; w < (Mask(1) << k); ++w)
    for (int i = 0; i < k; ++i)
      if (!bit(w, i)) pid[i][w] = c.add_point(obj[w | (Mask(1) << i)], obj[w], sign_of(s.at(i, w)));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      for (Mask w = 0; w < (Mask(1) << k); ++w) {
        if (bit(w, i) || bit(w, j)) continue;
        Mask mi = w | (Mask(1) << i), mj = w | (Mask(1) << j), top = mi | mj;
        Endpoint a{obj[mi], pid[i][w], pid[j][mi]};
        Endpoint b{obj[mj], pid[j][w], pid[i][mj]};
        c.add_interval(obj[top], obj[w], a, b, f.at(i, j, w));
      }
}

std::vector<int> sources(const FlowCategory1& c, int x) {
  std::vector<int> out;
  for (const auto& [key, pts] : c.moduli0)
    if (key.second == x && !pts.empty()) out.push_back(key.first);
  return out;
}

std::vector<int> targets(const FlowCategory1& c, int y) {
  std::vector<int> out;
  for (auto it = c.moduli0.lower_bound({y, INT_MIN}); it != c.moduli0.end() && it->first.first == y; ++it)
    if (!it->second.empty()) out.push_back(it->first.second);
  return out;
}

std::vector<ObjectPair> keys1_with(const FlowCategory1& c, int obj, bool as_source) {
  std::vector<ObjectPair> out;
  for (const auto& [key, comps] : c.moduli1)
    if ((as_source ? key.first : key.second) == obj && !comps.empty()) out.push_back(key);
  return out;
}

void drop_object(FlowCategory1& c, int x) {
  for (auto* m : {&c.moduli0})
    for (auto it = m->begin(); it != m->end();)
      it = (it->first.first == x || it->first.second == x) ? m->erase(it) : std::next(it);
  for (auto it = c.moduli1.begin(); it != c.moduli1.end();)
    it = (it->first.first == x || it->first.second == x) ? c.moduli1.erase(it) : std::next(it);
  c.objects[x].alive = false;
}

// Pieces of 1-dim moduli whose ends either are composites or must be glued
// to the matching end of another piece.
using GlueKey = std::tuple<char, int, int>;
struct PieceEnd {
  bool glue = false;
  Endpoint ep;
  GlueKey key{};
};
struct Piece {
  ObjectPair target;
  bool circle = false;
  PieceEnd e[2];
  int framing = 0;
};

void assemble(FlowCategory1& c, const std::vector<Piece>& pieces) {
  std::map<GlueKey, std::vector<std::pair<int, int>>> at;
  for (int i = 0; i < int(pieces.size()); ++i)
    if (!pieces[i].circle)
      for (int s = 0; s < 2; ++s)
        if (pieces[i].e[s].glue) at[pieces[i].e[s].key].push_back({i, s});
  for (const auto& [k, v] : at)
    if (v.size() != 2) throw Error(ErrorCode::Stuck, "unmatched gluing corner");
  std::vector<bool> used(pieces.size(), false);
  for (int i = 0; i < int(pieces.size()); ++i) {
    if (used[i]) continue;
    const Piece& p = pieces[i];
    if (p.circle) {
      used[i] = true;
      c.add_circle(p.target.first, p.target.second, p.framing);
      continue;
    }
    int start_side = !p.e[0].glue ? 0 : (!p.e[1].glue ? 1 : -1);
    if (start_side < 0) continue;
    int cur = i, side = start_side, framing = 0;
    Endpoint first = p.e[start_side].ep;
    while (true) {
      used[cur] = true;
      framing += pieces[cur].framing;
      if (pieces[cur].target != p.target) throw Error(ErrorCode::Stuck, "gluing across different moduli spaces");
      const PieceEnd& other = pieces[cur].e[1 - side];
      if (!other.glue) {
        c.add_interval(p.target.first, p.target.second, first, other.ep, framing);
        break;
      }
      auto& pair = at.at(other.key);
      auto next = pair[0] == std::make_pair(cur, 1 - side) ? pair[1] : pair[0];
      cur = next.first;
      side = next.second;
    }
  }
  // closed chains of glued pieces
  for (int i = 0; i < int(pieces.size()); ++i) {
    if (used[i]) continue;
    int cur = i, side = 0, framing = 0;
    while (!used[cur]) {
      used[cur] = true;
      framing += pieces[cur].framing;
      const PieceEnd& other = pieces[cur].e[1 - side];
      auto& pair = at.at(other.key);
      auto next = pair[0] == std::make_pair(cur, 1 - side) ? pair[1] : pair[0];
      cur = next.first;
      side = next.second;
    }
    c.add_circle(pieces[i].target.first, pieces[i].target.second, framing);
  }
}

void slide_inplace(FlowCategory1& c, int x, int y, int eps) {
  if (x == y || !c.objects.at(x).alive || !c.objects.at(y).alive) throw Error(ErrorCode::GradingMismatch, "slide needs two distinct live objects");
  if (c.objects[x].gr != c.objects[y].gr) throw Error(ErrorCode::GradingMismatch, "slide needs objects of equal grading");
  if (eps != 1 && eps != -1) throw Error(ErrorCode::GradingMismatch, "slide sign must be +1 or -1");
  std::map<int, int> copy_ax, copy_yb;
  std::vector<std::pair<int, FlowPoint>> ax, yb;
  for (int a : sources(c, x))
    for (const auto& q : c.points(a, x)) ax.push_back({a, q});
  for (int b : targets(c, y))
    for (const auto& p : c.points(y, b)) yb.push_back({b, p});
  for (const auto& [a, q] : ax) copy_ax[q.id] = c.add_point(a, y, -eps * q.sign);
  for (const auto& [b, p] : yb) copy_yb[p.id] = c.add_point(x, b, eps * p.sign);
  for (auto key : keys1_with(c, y, true)) {
    auto comps = c.moduli1[key];
    for (const auto& k : comps) {
      if (k.circle) c.add_circle(x, key.second, k.framing);
      else {
        Endpoint e0 = k.ends[0], e1 = k.ends[1];
        e0.inner = copy_yb.at(e0.inner);
        e1.inner = copy_yb.at(e1.inner);
        c.add_interval(x, key.second, e0, e1, k.framing);
      }
    }
  }
  for (auto key : keys1_with(c, x, false)) {
    auto comps = c.moduli1[key];
    for (const auto& k : comps) {
      if (k.circle) c.add_circle(key.first, y, k.framing);
      else {
        Endpoint e0 = k.ends[0], e1 = k.ends[1];
        e0.outer = copy_ax.at(e0.outer);
        e1.outer = copy_ax.at(e1.outer);
        c.add_interval(key.first, y, e0, e1, k.framing);
      }
    }
  }
  for (const auto& [a, q] : ax)
    for (const auto& [b, p] : yb)
      c.add_interval(a, b, Endpoint{x, copy_yb.at(p.id), q.id}, Endpoint{y, p.id, copy_ax.at(q.id)}, 0);
  c.objects[x].name += "'";
}

void cancel_inplace(FlowCategory1& c, int x, int y) {
  if (!c.objects.at(x).alive || !c.objects.at(y).alive || c.objects[x].gr != c.objects[y].gr + 1)
    throw Error(ErrorCode::NotCancellable, "cancel needs live objects with |x| = |y| + 1");
  const auto& pxy = c.points(x, y);
  if (pxy.size() != 1) throw Error(ErrorCode::NotCancellable, "M(x, y) is not a single point");
  int P = pxy[0].id, sigma = pxy[0].sign;
  std::vector<std::pair<int, FlowPoint>> ay, xb;
  for (int a : sources(c, y))
    if (a != x)
      for (const auto& q : c.points(a, y)) ay.push_back({a, q});
  for (int b : targets(c, x))
    if (b != y)
      for (const auto& p : c.points(x, b)) xb.push_back({b, p});
  std::map<std::pair<int, int>, int> glued;  // (p in M(x,b), q in M(a,y)) -> new point
  for (const auto& [a, q] : ay)
    for (const auto& [b, p] : xb) glued[{p.id, q.id}] = c.add_point(a, b, -sigma * p.sign * q.sign);

  std::vector<Piece> pieces;
  auto token = [](char t, int a, int b) {
    PieceEnd e;
    e.glue = true;
    e.key = {t, a, b};
    return e;
  };
  auto terminal = [](Endpoint ep) {
    PieceEnd e;
    e.ep = ep;
    return e;
  };
  // existing components with a corner through x or y
  for (auto& [key, comps] : c.moduli1) {
    if (key.first == x || key.first == y || key.second == x || key.second == y) continue;
    std::vector<FlowComponent> keep;
    for (const auto& k : comps) {
      bool touched = !k.circle && (k.ends[0].z == x || k.ends[0].z == y || k.ends[1].z == x || k.ends[1].z == y);
      if (!touched) {
        keep.push_back(k);
        continue;
      }
      Piece pc;
      pc.target = key;
      pc.framing = k.framing;
      for (int s = 0; s < 2; ++s) {
        const Endpoint& e = k.ends[s];
        if (e.z == y) pc.e[s] = token('Y', e.outer, e.inner);
        else if (e.z == x) pc.e[s] = token('X', e.outer, e.inner);
        else pc.e[s] = terminal(e);
      }
      pieces.push_back(pc);
    }
    comps = keep;
  }
  // M(x, b) x M(a, y) with the first factor 1-dimensional
  for (auto key : keys1_with(c, x, true)) {
    int b = key.second;
    if (b == y) continue;
    for (const auto& J : c.components(x, b))
      for (const auto& [a, q] : ay) {
        Piece pc;
        pc.target = {a, b};
        pc.framing = J.framing;
        pc.circle = J.circle;
        if (!J.circle)
          for (int s = 0; s < 2; ++s) {
            const Endpoint& e = J.ends[s];
            if (e.z == y) pc.e[s] = token('Y', e.outer, q.id);
            else pc.e[s] = terminal(Endpoint{e.z, e.outer, glued.at({e.inner, q.id})});
          }
        pieces.push_back(pc);
      }
  }
  // second factor 1-dimensional
  for (auto key : keys1_with(c, y, false)) {
    int a = key.first;
    if (a == x) continue;
    for (const auto& K : c.components(a, y))
      for (const auto& [b, p] : xb) {
        Piece pc;
        pc.target = {a, b};
        pc.framing = K.framing;
        pc.circle = K.circle;
        if (!K.circle)
          for (int s = 0; s < 2; ++s) {
            const Endpoint& e = K.ends[s];
            if (e.z == x) pc.e[s] = token('X', p.id, e.inner);
            else pc.e[s] = terminal(Endpoint{e.z, glued.at({p.id, e.outer}), e.inner});
          }
        pieces.push_back(pc);
      }
  }
  (void)P;
  drop_object(c, x);
  drop_object(c, y);
  assemble(c, pieces);
}

void whitney_inplace(FlowCategory1& c, int x, int y, int P, int Q) {
  if (!c.objects.at(x).alive || !c.objects.at(y).alive || c.objects[x].gr != c.objects[y].gr + 1)
    throw Error(ErrorCode::NotOppositePair, "Whitney trick needs live objects with |x| = |y| + 1");
  int sp = c.point_sign(x, y, P), sq = c.point_sign(x, y, Q);
  if (P == Q || sp == 0 || sq == 0 || sp != -sq) throw Error(ErrorCode::NotOppositePair, "points are not an opposite pair in M(x, y)");
  auto& pts = c.moduli0[{x, y}];
  pts.erase(std::remove_if(pts.begin(), pts.end(), [&](const FlowPoint& p) { return p.id == P || p.id == Q; }), pts.end());
  if (pts.empty()) c.moduli0.erase({x, y});
  std::vector<Piece> pieces;
  auto collect = [&](ObjectPair key, auto classify) {
    auto& comps = c.moduli1[key];
    std::vector<FlowComponent> keep;
    for (const auto& k : comps) {
      Piece pc;
      pc.target = key;
      pc.framing = k.framing;
      bool touched = false;
      if (!k.circle)
        for (int s = 0; s < 2; ++s) {
          if (classify(k.ends[s], pc.e[s])) touched = true;
          else pc.e[s].ep = k.ends[s];
        }
      if (touched) pieces.push_back(pc);
      else keep.push_back(k);
    }
    comps = keep;
  };
  for (auto key : keys1_with(c, y, false))
    collect(key, [&](const Endpoint& e, PieceEnd& out) {
      if (e.z != x || (e.outer != P && e.outer != Q)) return false;
      out.glue = true;
      out.key = {'A', e.inner, 0};
      return true;
    });
  for (auto key : keys1_with(c, x, true))
    collect(key, [&](const Endpoint& e, PieceEnd& out) {
      if (e.z != y || (e.inner != P && e.inner != Q)) return false;
      out.glue = true;
      out.key = {'B', e.outer, 0};
      return true;
    });
  assemble(c, pieces);
}

} // namespace

FlowCategory1 cube_skeleton(int n, const SignAssignment& s, const FrameAssignment& f) {
  if (s.n != n || f.n != n || !verify_frame_pair(s, f)) throw Error(ErrorCode::IncompatiblePair, "sign and frame assignments are not a frame assignment pair");
  FlowCategory1 c;
  std::vector<Mask> order;
  for (Mask u = 0; u < (Mask(1) << n); ++u) order.push_back(u);
  std::stable_sort(order.begin(), order.end(), [&](Mask a, Mask b) {
    if (popcount(a) != popcount(b)) return popcount(a) < popcount(b);
    return lex_key(a, n) < lex_key(b, n);
  });
  std::vector<int> obj(size_t(1) << n);
  for (Mask u : order) {
    FlowObject o;
    o.name = mask_string(u, n);
    o.gr = popcount(u);
    o.state = u;
    obj[u] = c.add_object(o);
  }
  add_cube(c, n, obj, s, f);
  return c;
}

FlowCategory1 xy_flow_category(const ComplexInput& in, const SignAssignment& s) {
  auto blocks = xy_blocks(in, s);
  GradedChainComplex xy = xy_complex(in, s);
  FlowCategory1 c;
  for (int g = 0; g < xy.size(); ++g) {
    const auto& x = xy.gens[g];
    FlowObject o;
    o.name = xy.name(g);
    o.gr = x.gr_h;
    o.state = x.state;
    o.labels = x.labels;
    o.r = x.r;
    o.gr_q = quantum_grading(x, in.n_plus, in.n_minus);
    c.add_object(o);
  }
  for (const auto& b : blocks) add_cube(c, b.block.k, b.gens, b.sign, frame_from_sign(b.sign));
  return c;
}

FlowCategory1 xy_flow_category(const LinkDiagram& d) {
  return xy_flow_category(ComplexInput{associated_config(d), d.n_plus, d.n_minus}, standard_sign(d.n()));
}

FlowCategory1 xy_flow_category(const ResolutionConfiguration& cfg) {
  return xy_flow_category(ComplexInput{cfg, 0, 0}, standard_sign(cfg.index()));
}

FlowCategory1 handle_cancel(const FlowCategory1& c, int x, int y) {
  FlowCategory1 out = c;
  cancel_inplace(out, x, y);
  return out;
}

FlowCategory1 handle_slide(const FlowCategory1& c, int x, int y, int epsilon) {
  FlowCategory1 out = c;
  slide_inplace(out, x, y, epsilon);
  return out;
}

FlowCategory1 whitney_trick(const FlowCategory1& c, int x, int y, int p, int q) {
  FlowCategory1 out = c;
  whitney_inplace(out, x, y, p, q);
  return out;
}

namespace {

void apply_inplace(FlowCategory1& c, const Move& m) {
  switch (m.kind) {
    case Move::Cancel: cancel_inplace(c, m.x, m.y); break;
    case Move::Slide: slide_inplace(c, m.x, m.y, m.epsilon); break;
    case Move::Whitney: whitney_inplace(c, m.x, m.y, m.p, m.q); break;
  }
}

} // namespace

FlowCategory1 apply_move(const FlowCategory1& c, const Move& m) {
  FlowCategory1 out = c;
  apply_inplace(out, m);
  return out;
}

FlowCategory1 MoveLog::replay(const FlowCategory1& initial) const {
  FlowCategory1 c = initial;
  for (const auto& m : moves) apply_inplace(c, m);
  return c;
}

namespace {

std::map<std::pair<Mask, Mask>, int> object_index(const FlowCategory1& c) {
  std::map<std::pair<Mask, Mask>, int> out;
  for (const auto& o : c.objects)
    if (o.alive) out[{o.state, o.labels}] = o.id;
  return out;
}

std::string label_name(const FlowObject& o, int n) {
  std::string lab;
  for (int i = 0; i < o.r; ++i) lab += bit(o.labels, i) ? '1' : 'X';
  return lab + "_" + mask_string(o.state, n);
}

} // namespace

FlowCategory1 cubic_handle_slides(const FlowCategory1& xy, MoveLog* log) {
  FlowCategory1 c = xy;
  auto idx = object_index(c);
  std::vector<Mask> states;
  for (const auto& o : c.objects)
    if (o.alive && (states.empty() || states.back() != o.state)) states.push_back(o.state);
  std::set<Mask> done;
  int n = 0;
  for (const auto& o : c.objects) {
    auto pos = o.name.find('_');
    if (pos != std::string::npos) n = int(o.name.size() - pos - 1);
  }
  for (Mask u : states) {
    if (!done.insert(u).second) continue;
    int r = c.objects[idx.at({u, 0})].r;
    std::vector<Mask> labs;
    for (Mask v = 0; v < (Mask(1) << r); ++v) labs.push_back(v);
    std::sort(labs.begin(), labs.end(), [&](Mask a, Mask b) { return lex_key(a, r) < lex_key(b, r); });
    for (int i = 0; i < r; ++i)
      for (Mask v : labs) {
        if (bit(v, i)) continue;
        Move m;
        m.kind = Move::Slide;
        m.x = idx.at({u, v});
        m.y = idx.at({u, v | (Mask(1) << i)});
        m.epsilon = 1;
        slide_inplace(c, m.x, m.y, 1);
        if (log) log->moves.push_back(m);
      }
  }
  for (auto& o : c.objects) {
    o.reversed = popcount(o.labels) % 2 == 1;
    o.name = label_name(o, n);
  }
  return c;
}

std::map<ObjectPair, std::vector<int>> chains_oracle_0dim(const FlowCategory1& xy) {
  auto idx = object_index(xy);
  std::map<ObjectPair, std::vector<int>> out;
  for (const auto& [key, pts] : xy.moduli0) {
    const auto& x1 = xy.objects[key.first];
    const auto& y1 = xy.objects[key.second];
    Mask full = (Mask(1) << y1.r) - 1;
    for (Mask v = x1.labels;; v = (v - 1) & x1.labels) {
      Mask rest = full & ~y1.labels;
      for (Mask add = rest;; add = (add - 1) & rest) {
        int x = idx.at({x1.state, v}), y = idx.at({y1.state, y1.labels | add});
        for (const auto& p : pts) out[{x, y}].push_back(p.sign * sign_of(popcount(add)));
        if (add == 0) break;
      }
      if (v == 0) break;
    }
  }
  for (auto& kv : out) std::sort(kv.second.begin(), kv.second.end());
  return out;
}

std::map<ObjectPair, long> chains_oracle_1dim(const FlowCategory1& xy) {
  auto idx = object_index(xy);
  std::map<ObjectPair, long> out;
  auto spread = [&](const FlowObject& x1, const FlowObject& y1, long mult) {
    Mask full = (Mask(1) << y1.r) - 1;
    Mask rest = full & ~y1.labels;
    for (Mask v = x1.labels;; v = (v - 1) & x1.labels) {
      for (Mask add = rest;; add = (add - 1) & rest) {
        out[{idx.at({x1.state, v}), idx.at({y1.state, y1.labels | add})}] += mult;
        if (add == 0) break;
      }
      if (v == 0) break;
    }
  };
  for (const auto& [key, comps] : xy.moduli1)
    if (!comps.empty()) spread(xy.objects[key.first], xy.objects[key.second], long(comps.size()));
  // x1 -> y1 ~~> x2 -> y2 with a strict horizontal step of length l
  std::map<int, std::vector<std::pair<int, long>>> down;
  for (const auto& [key, pts] : xy.moduli0)
    if (!pts.empty()) down[key.first].push_back({key.second, long(pts.size())});
  for (const auto& [x1, lst] : down)
    for (const auto& [y1, n1] : lst) {
      const auto& oy = xy.objects[y1];
      Mask full = (Mask(1) << oy.r) - 1;
      Mask rest = full & ~oy.labels;
      for (Mask add = rest; add != 0; add = (add - 1) & rest) {
        int x2 = idx.at({oy.state, oy.labels | add});
        auto it = down.find(x2);
        if (it == down.end()) continue;
        long mult = n1 << (popcount(add) - 1);
        for (const auto& [y2, n2] : it->second) {
          // spread with the chain's outer ends x1 and y2
          const auto& ox1 = xy.objects[x1];
          const auto& oy2 = xy.objects[y2];
          Mask full2 = (Mask(1) << oy2.r) - 1;
          Mask rest2 = full2 & ~oy2.labels;
          for (Mask v = ox1.labels;; v = (v - 1) & ox1.labels) {
            for (Mask a2 = rest2;; a2 = (a2 - 1) & rest2) {
              out[{idx.at({ox1.state, v}), idx.at({oy2.state, oy2.labels | a2})}] += mult * n2;
              if (a2 == 0) break;
            }
            if (v == 0) break;
          }
        }
      }
    }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

FlowCategory1 cube_contract(const FlowCategory1& cube, int n, MoveLog* log, bool* side_effects) {
  FlowCategory1 c = cube;
  if (side_effects) *side_effects = false;
  if (n == 0) return c;
  std::map<Mask, int> obj;
  for (const auto& o : c.objects) obj[o.state] = o.id;
  std::vector<Mask> low;
  for (Mask v = 0; v < (Mask(1) << n); ++v)
    if (!bit(v, n - 1)) low.push_back(v);
  std::stable_sort(low.begin(), low.end(), [](Mask a, Mask b) { return popcount(a) < popcount(b); });
  for (Mask v : low) {
    int x = obj.at(v | (Mask(1) << (n - 1))), y = obj.at(v);
    int before0 = c.total_points(), before1 = c.total_components();
    int own0 = int(c.points(x, y).size());
    int incident0 = 0, incident1 = 0;
    for (const auto& [k, p] : c.moduli0)
      if (k.first == x || k.second == x || k.first == y || k.second == y) incident0 += int(p.size());
    for (const auto& [k, p] : c.moduli1)
      if (k.first == x || k.second == x || k.first == y || k.second == y) incident1 += int(p.size());
    cancel_inplace(c, x, y);
    (void)own0;
    if (side_effects && (c.total_points() != before0 - incident0 || c.total_components() != before1 - incident1)) *side_effects = true;
    if (log) log->moves.push_back(Move{Move::Cancel, x, y, 1, -1, -1});
  }
  return c;
}

FlowCategory1 eliminate_quantum_increasing(const FlowCategory1& in, MoveLog* log) {
  FlowCategory1 c = in;
  auto rank = [&](int id) { return std::make_pair(c.objects[id].gr, id); };
  while (true) {
    bool found = false;
    std::pair<std::pair<int, int>, std::pair<int, int>> best;
    ObjectPair key{-1, -1};
    for (const auto& [k, pts] : c.moduli0) {
      if (pts.empty() || c.objects[k.first].gr_q >= c.objects[k.second].gr_q) continue;
      auto r = std::make_pair(rank(k.first), rank(k.second));
      if (!found || r < best) {
        best = r;
        key = k;
        found = true;
      }
    }
    if (!found) break;
    auto pts = c.moduli0[key];
    std::sort(pts.begin(), pts.end(), [](const FlowPoint& a, const FlowPoint& b) { return a.id < b.id; });
    int P = pts[0].id, Q = -1;
    for (const auto& p : pts)
      if (p.sign == -pts[0].sign) {
        Q = p.id;
        break;
      }
    if (Q < 0) throw Error(ErrorCode::Stuck, "quantum-increasing point without an opposite partner between " + c.objects[key.first].name + " and " + c.objects[key.second].name);
    whitney_inplace(c, key.first, key.second, P, Q);
    if (log) log->moves.push_back(Move{Move::Whitney, key.first, key.second, 1, P, Q});
  }
  return c;
}

std::vector<int> isolated_objects(const FlowCategory1& c) {
  std::set<int> touched;
  for (const auto& [k, p] : c.moduli0)
    if (!p.empty()) {
      touched.insert(k.first);
      touched.insert(k.second);
    }
  std::vector<int> out;
  for (int id : c.alive_objects())
    if (!touched.count(id)) out.push_back(id);
  return out;
}

std::vector<Move> parse_moves(const std::string& text, const FlowCategory1& c) {
  std::vector<Move> out;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  auto object = [&](const std::string& tok) {
    int id = c.find_object(tok);
    if (id >= 0) return id;
    try {
      size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used == tok.size() && v >= 0 && v < int(c.objects.size())) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidScript, "line " + std::to_string(lineno) + ": unknown object " + tok);
  };
  auto integer = [&](const std::string& tok) {
    try {
      size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used == tok.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidScript, "line " + std::to_string(lineno) + ": expected an integer, got " + tok);
  };
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    Move m;
    if (tok[0] == "cancel" && tok.size() == 3) {
      m.kind = Move::Cancel;
    } else if (tok[0] == "slide" && tok.size() == 4) {
      m.kind = Move::Slide;
      m.epsilon = integer(tok[3]);
      if (m.epsilon != 1 && m.epsilon != -1) throw Error(ErrorCode::InvalidScript, "line " + std::to_string(lineno) + ": slide sign must be +1 or -1");
    } else if (tok[0] == "whitney" && tok.size() == 5) {
      m.kind = Move::Whitney;
      m.p = integer(tok[3]);
      m.q = integer(tok[4]);
    } else {
      throw Error(ErrorCode::InvalidScript, "line " + std::to_string(lineno) + ": cannot parse '" + line + "'");
    }
    m.x = object(tok[1]);
    m.y = object(tok[2]);
    out.push_back(m);
  }
  return out;
}

std::string flowcat_to_json(const FlowCategory1& c) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["kind"] = "flow_category";
  nlohmann::ordered_json objs = nlohmann::ordered_json::array();
  for (int id : c.alive_objects()) {
    const auto& o = c.objects[id];
    objs.push_back({{"id", o.id}, {"name", o.name}, {"gr", o.gr}, {"gr_q", o.gr_q}, {"reversed", o.reversed}});
  }
  j["objects"] = objs;
  nlohmann::ordered_json m0 = nlohmann::ordered_json::array();
  for (const auto& [k, pts] : c.moduli0) {
    if (pts.empty()) continue;
    nlohmann::ordered_json p = nlohmann::ordered_json::array();
    for (const auto& x : pts) p.push_back({{"id", x.id}, {"sign", x.sign}});
    m0.push_back({{"x", k.first}, {"y", k.second}, {"points", p}});
  }
  j["moduli0"] = m0;
  nlohmann::ordered_json m1 = nlohmann::ordered_json::array();
  for (const auto& [k, comps] : c.moduli1) {
    if (comps.empty()) continue;
    nlohmann::ordered_json cs = nlohmann::ordered_json::array();
    for (const auto& x : comps) {
      nlohmann::ordered_json e;
      e["id"] = x.id;
      e["type"] = x.circle ? "circle" : "interval";
      if (!x.circle)
        e["ends"] = {{x.ends[0].z, x.ends[0].outer, x.ends[0].inner}, {x.ends[1].z, x.ends[1].outer, x.ends[1].inner}};
      e["framing"] = x.framing;
      cs.push_back(e);
    }
    m1.push_back({{"x", k.first}, {"y", k.second}, {"components", cs}});
  }
  j["moduli1"] = m1;
  return j.dump(2);
}

std::string movelog_to_json(const MoveLog& log, const FlowCategory1& c) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["kind"] = "move_log";
  nlohmann::ordered_json ms = nlohmann::ordered_json::array();
  for (const auto& m : log.moves) {
    nlohmann::ordered_json e;
    e["move"] = m.kind == Move::Cancel ? "cancel" : (m.kind == Move::Slide ? "slide" : "whitney");
    e["x"] = m.x;
    e["y"] = m.y;
    if (m.x >= 0 && m.x < int(c.objects.size())) e["x_name"] = c.objects[m.x].name;
    if (m.y >= 0 && m.y < int(c.objects.size())) e["y_name"] = c.objects[m.y].name;
    if (m.kind == Move::Slide) e["epsilon"] = m.epsilon;
    if (m.kind == Move::Whitney) e["points"] = {m.p, m.q};
    ms.push_back(e);
  }
  j["moves"] = ms;
  return j.dump(2);
}

} // namespace khflow
