#include "khflow/cobord.hpp"

#include "khflow/complex.hpp"
#include "khflow/homology.hpp"
#include "khflow/reduce.hpp"
#include "khflow/sinv.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace khflow {

namespace {

int max_label(const LinkDiagram& d) {
  auto l = d.labels();
  int m = 0;
  for (int x : l) m = std::max(m, x);
  for (int x : d.loops) m = std::max(m, x);
  return m;
}

bool has_label(const LinkDiagram& d, int e) { return d.head.count(e) > 0 || d.is_loop(e); }

Crossing make_crossing(int u_in, int u_out, int o_in, int o_out, int sign) {
  Crossing c;
  c.under_in = 0;
  if (sign > 0) {
    c.e = {u_in, o_in, u_out, o_out};
    c.over_in = 1;
  } else {
    c.e = {u_in, o_out, u_out, o_in};
    c.over_in = 3;
  }
  return c;
}

struct Parts {
  std::vector<Crossing> xs;
  std::vector<int> loops;
  std::vector<bool> rev;
};

Parts parts_of(const LinkDiagram& d) { return Parts{d.crossings, d.loops, d.loop_reversed}; }

void drop_loop(Parts& p, int e) {
  for (size_t i = 0; i < p.loops.size(); ++i)
    if (p.loops[i] == e) {
      p.loops.erase(p.loops.begin() + long(i));
      p.rev.erase(p.rev.begin() + long(i));
      return;
    }
}

LinkDiagram finish(const Parts& p) {
  LinkDiagram d = build_diagram(p.xs, p.loops, p.rev);
  if (!is_planar(d)) throw Error(ErrorCode::InvalidSite, "move produces a non-planar diagram");
  return d;
}

int crossing_index(const LinkDiagram& d, int c1) {
  if (c1 < 1 || c1 > d.n()) throw Error(ErrorCode::InvalidSite, "crossing c" + std::to_string(c1) + " does not exist");
  return c1 - 1;
}

void need_edge(const LinkDiagram& d, int e) {
  if (!has_label(d, e)) throw Error(ErrorCode::InvalidSite, "edge e" + std::to_string(e) + " does not exist");
}

// Removes crossings and joins the strand pieces passing through them. A joined
// strand keeps the label of its piece entering the removed region.
LinkDiagram remove_crossings(const LinkDiagram& d, const std::set<int>& gone) {
  std::map<int, int> parent;
  std::function<int(int)> find = [&](int x) {
    auto it = parent.find(x);
    if (it == parent.end() || it->second == x) return x;
    return it->second = find(it->second);
  };
  for (int c : gone) {
    const auto& x = d.crossings[c];
    for (int s : {x.under_in, x.over_in}) {
      int a = find(x.label(s)), b = find(x.label(s + 2));
      if (a != b) parent[a] = b;
    }
  }
  std::map<int, std::vector<int>> cls;
  for (int l : d.labels())
    if (!d.is_loop(l)) cls[find(l)].push_back(l);
  std::map<int, int> rep;
  Parts p;
  p.loops = d.loops;
  p.rev = d.loop_reversed;
  for (auto& [root, ls] : cls) {
    int r = -1;
    for (int l : ls)
      if (!gone.count(d.tail.at(l).crossing)) r = l;
    bool closed = r < 0;
    if (closed) r = *std::min_element(ls.begin(), ls.end());
    for (int l : ls) rep[l] = r;
    if (closed) {
      p.loops.push_back(r);
      p.rev.push_back(false);
    }
  }
  for (int c = 0; c < d.n(); ++c) {
    if (gone.count(c)) continue;
    Crossing x = d.crossings[c];
    for (auto& l : x.e) l = rep.at(l);
    p.xs.push_back(x);
  }
  return finish(p);
}

LinkDiagram add_kink(const LinkDiagram& d, int e, int sign) {
  need_edge(d, e);
  Parts p = parts_of(d);
  int l = max_label(d) + 1, e2 = l + 1;
  if (d.is_loop(e)) {
    drop_loop(p, e);
    e2 = e;
  } else {
    auto h = d.head.at(e);
    p.xs[h.crossing].e[h.slot] = e2;
  }
  p.xs.push_back(make_crossing(e, l, l, e2, sign));
  return finish(p);
}

LinkDiagram remove_kink(const LinkDiagram& d, int c, int sign) {
  const auto& x = d.crossings[c];
  bool kink = false;
  for (int s = 0; s < 4; ++s)
    if (x.label(s) == x.label(s + 1)) kink = true;
  if (!kink) throw Error(ErrorCode::InvalidSite, "crossing c" + std::to_string(c + 1) + " is not a kink");
  if (x.sign() != sign) throw Error(ErrorCode::InvalidSite, "kink at c" + std::to_string(c + 1) + " has the other sign");
  return remove_crossings(d, {c});
}

LinkDiagram add_bigon(const LinkDiagram& d, int e, int f) {
  need_edge(d, e);
  need_edge(d, f);
  if (e == f) throw Error(ErrorCode::InvalidSite, "R2 needs two different edges");
  int L = max_label(d) + 1;
  int e1 = L, e2 = L + 1, f1 = L + 2, f2 = L + 3;
  bool eloop = d.is_loop(e), floop = d.is_loop(f);
  int e_last = eloop ? e : e2, f_last = floop ? f : f2;
  for (int order = 0; order < 2; ++order)
    for (int s1 : {1, -1}) {
      int s2 = -s1;
      Parts p = parts_of(d);
      if (eloop) drop_loop(p, e);
      else p.xs[d.head.at(e).crossing].e[d.head.at(e).slot] = e2;
      if (floop) drop_loop(p, f);
      else p.xs[d.head.at(f).crossing].e[d.head.at(f).slot] = f2;
      int u1i = order == 0 ? f : f1, u1o = order == 0 ? f1 : f_last;
      int u2i = order == 0 ? f1 : f, u2o = order == 0 ? f_last : f1;
      p.xs.push_back(make_crossing(u1i, u1o, e, e1, s1));
      p.xs.push_back(make_crossing(u2i, u2o, e1, e_last, s2));
      try {
        return finish(p);
      } catch (const Error&) {
      }
    }
  throw Error(ErrorCode::InvalidSite, "edges e" + std::to_string(e) + " and e" + std::to_string(f) + " do not share a face");
}

LinkDiagram remove_bigon(const LinkDiagram& d, int a, int b) {
  if (a == b) throw Error(ErrorCode::InvalidSite, "R2 needs two different crossings");
  const auto& A = d.crossings[a];
  const auto& B = d.crossings[b];
  if (A.sign() == B.sign()) throw Error(ErrorCode::InvalidSite, "bigon crossings must have opposite signs");
  auto joins = [&](int p, int ps, int q, int qs) {
    int l = d.crossings[p].label(ps);
    auto h = d.head.at(l);
    return h.crossing == q && h.slot == ((qs % 4) + 4) % 4;
  };
  bool over = joins(a, A.over_in + 2, b, B.over_in) || joins(b, B.over_in + 2, a, A.over_in);
  bool under = joins(a, A.under_in + 2, b, B.under_in) || joins(b, B.under_in + 2, a, A.under_in);
  if (!over || !under) throw Error(ErrorCode::InvalidSite, "crossings do not bound a bigon with one strand over both");
  return remove_crossings(d, {a, b});
}

// Faces as cycles of darts (crossing, slot), each dart leaving its crossing.
std::vector<std::vector<std::pair<int, int>>> face_cycles(const LinkDiagram& d) {
  int n = d.n();
  std::map<int, std::vector<std::pair<int, int>>> occ;
  for (int c = 0; c < n; ++c)
    for (int s = 0; s < 4; ++s) occ[d.crossings[c].e[s]].push_back({c, s});
  std::vector<std::vector<std::pair<int, int>>> out;
  std::vector<char> seen(size_t(4 * n), 0);
  for (int start = 0; start < 4 * n; ++start) {
    if (seen[start]) continue;
    out.emplace_back();
    int cur = start;
    while (!seen[cur]) {
      seen[cur] = 1;
      int c = cur / 4, s = cur % 4;
      out.back().push_back({c, s});
      const auto& v = occ[d.crossings[c].e[s]];
      if (v.size() != 2) return {};
      auto other = v[0] == std::make_pair(c, s) ? v[1] : v[0];
      cur = other.first * 4 + (other.second + 1) % 4;
    }
  }
  return out;
}

LinkDiagram triangle_move(const LinkDiagram& d, int A, int B, int C) {
  std::set<int> T{A, B, C};
  if (T.size() != 3) throw Error(ErrorCode::InvalidSite, "R3 needs three different crossings");
  struct Side {
    int label, P, Q, in, out;
    bool overP, overQ;
  };
  std::vector<Side> sides;
  for (const auto& face : face_cycles(d)) {
    if (face.size() != 3) continue;
    std::set<int> at;
    for (auto [c, sl] : face) at.insert(c);
    if (at != T) continue;
    for (auto [c, sl] : face) {
      int l = d.crossings[c].e[sl];
      auto t = d.tail.at(l), h = d.head.at(l);
      const auto& P = d.crossings[t.crossing];
      const auto& Q = d.crossings[h.crossing];
      sides.push_back({l, t.crossing, h.crossing, P.label(t.slot + 2), Q.label(h.slot + 2),
                       t.slot == (P.over_in + 2) % 4, h.slot == Q.over_in});
    }
    break;
  }
  if (sides.size() != 3) throw Error(ErrorCode::InvalidSite, "crossings do not bound a triangle");
  std::set<int> side_labels;
  for (const auto& s : sides) side_labels.insert(s.label);
  bool top = false;
  for (const auto& s : sides) {
    if (side_labels.count(s.in) || side_labels.count(s.out)) throw Error(ErrorCode::InvalidSite, "degenerate triangle");
    if (s.overP && s.overQ) top = true;
  }
  if (!top) throw Error(ErrorCode::InvalidSite, "no strand passes over both of its triangle crossings");
  Parts p = parts_of(d);
  for (int X : T) {
    int ui = 0, uo = 0, oi = 0, oo = 0, found = 0;
    for (const auto& s : sides) {
      if (s.P != X && s.Q != X) continue;
      ++found;
      bool over = s.P == X ? s.overP : s.overQ;
      int in = s.Q == X ? s.in : s.label;
      int out = s.Q == X ? s.label : s.out;
      (over ? oi : ui) = in;
      (over ? oo : uo) = out;
    }
    if (found != 2) throw Error(ErrorCode::InvalidSite, "crossings do not bound a triangle");
    p.xs[X] = make_crossing(ui, uo, oi, oo, d.crossings[X].sign());
  }
  return finish(p);
}

LinkDiagram saddle_move(const LinkDiagram& d, int e, int f) {
  need_edge(d, e);
  need_edge(d, f);
  if (e == f) throw Error(ErrorCode::InvalidSite, "saddle needs two different edges");
  Parts p = parts_of(d);
  bool el = d.is_loop(e), fl = d.is_loop(f);
  if (el && fl) {
    drop_loop(p, f);
    return finish(p);
  }
  if (el || fl) {
    drop_loop(p, el ? e : f);
    return finish(p);
  }
  auto he = d.head.at(e), hf = d.head.at(f);
  p.xs[he.crossing].e[he.slot] = f;
  p.xs[hf.crossing].e[hf.slot] = e;
  try {
    return finish(p);
  } catch (const Error&) {
    throw Error(ErrorCode::InvalidSite, "edges e" + std::to_string(e) + " and e" + std::to_string(f) + " do not bound a common face with opposite orientations");
  }
}

std::vector<int> kept_crossings(const LinkDiagram& big, const std::set<int>& gone) {
  std::vector<int> out;
  for (int c = 0; c < big.n(); ++c)
    if (!gone.count(c)) out.push_back(c);
  return out;
}

void sort_rows(ChainMap& m) {
  for (auto& row : m.f) std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
}

// Gaussian elimination of C(big) along its extra crossings down to a copy of
// C(small). Fills both homotopy inverse maps.
void eliminate(const LinkDiagram& small, const LinkDiagram& big, const std::vector<int>& cross_map,
               const GradedChainComplex& cs, const GradedChainComplex& cb, ChainMap& to_small, ChainMap& to_big) {
  Mask extra_bits = 0;
  for (int c = 0; c < big.n(); ++c) extra_bits |= Mask(1) << c;
  for (int c : cross_map) extra_bits &= ~(Mask(1) << c);
  // edges running between two extra crossings and absent from the small diagram
  std::set<int> inner;
  auto small_labels = small.labels();
  std::set<int> kept(small_labels.begin(), small_labels.end());
  for (int l : big.labels()) {
    if (big.is_loop(l) || kept.count(l)) continue;
    if (bit(extra_bits, big.tail.at(l).crossing) && bit(extra_bits, big.head.at(l).crossing)) inner.insert(l);
  }
  std::map<Mask, CrossinglessDiagram> res_big, res_small;
  auto rb = [&](Mask u) -> const CrossinglessDiagram& {
    auto it = res_big.find(u);
    if (it == res_big.end()) it = res_big.emplace(u, resolve(big, u)).first;
    return it->second;
  };
  auto rs = [&](Mask u) -> const CrossinglessDiagram& {
    auto it = res_small.find(u);
    if (it == res_small.end()) it = res_small.emplace(u, resolve(small, u)).first;
    return it->second;
  };
  int nb = cb.size();
  std::vector<char> extra1(nb, 0), extraX(nb, 0);
  for (int g = 0; g < nb; ++g) {
    const auto& r = rb(cb.gens[g].state);
    for (int i = 0; i < r.r(); ++i) {
      bool extra = std::all_of(r.circles[i].begin(), r.circles[i].end(), [&](int l) { return inner.count(l) > 0; });
      if (!extra) continue;
      (bit(cb.gens[g].labels, i) ? extra1 : extraX)[g] = 1;
    }
  }
  Reducer<IntegerRing> red(cb, IntegerRing{}, true);
  red.reduce([&](int x, int y) {
    Mask diff = cb.gens[x].state ^ cb.gens[y].state;
    return diff && (diff & extra_bits) == diff && (extra1[x] || extraX[y]);
  });
  auto surv = red.survivors();
  auto fail = [](const std::string& why) { return Error(ErrorCode::InvalidSite, "elimination does not reach the smaller diagram: " + why); };
  if (int(surv.size()) != cs.size()) throw fail(std::to_string(surv.size()) + " generators left");
  std::map<int, int> phi, inv;
  for (int s : surv) {
    Mask U = cb.gens[s].state, u = 0;
    for (int i = 0; i < int(cross_map.size()); ++i)
      if (bit(U, cross_map[i])) u |= Mask(1) << i;
    const auto& R = rb(U);
    const auto& r = rs(u);
    Mask labels = 0;
    std::set<int> used;
    for (int i = 0; i < r.r(); ++i) {
      int j = R.circle_of(r.circles[i][0]);
      if (j < 0 || !used.insert(j).second) throw fail("circles do not correspond");
      if (bit(cb.gens[s].labels, j)) labels |= Mask(1) << i;
    }
    int t = cs.index_of(u, labels);
    if (t < 0 || inv.count(t)) throw fail("generators do not correspond");
    if (cs.gens[t].gr_h != cb.gens[s].gr_h || cs.gens[t].gr_q != cb.gens[s].gr_q) throw fail("gradings differ");
    phi[s] = t;
    inv[t] = s;
  }
  std::map<int, int> eps;
  auto small_coeff = [&](int a, int b) -> Int {
    for (const auto& [t, v] : cs.d[a])
      if (t == b) return v;
    return 0;
  };
  std::map<int, std::vector<std::pair<int, int>>> adj;
  for (int s : surv)
    for (const auto& [t, v] : red.out[s]) {
      adj[s].push_back({t, 0});
      adj[t].push_back({s, 0});
    }
  for (int s : surv) {
    if (eps.count(s)) continue;
    eps[s] = 1;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      int a = stack.back();
      stack.pop_back();
      for (auto [b, _] : adj[a]) {
        if (eps.count(b)) continue;
        Int rv = red.out[a].count(b) ? red.out[a].at(b) : red.out[b].at(a);
        Int sv = red.out[a].count(b) ? small_coeff(phi[a], phi[b]) : small_coeff(phi[b], phi[a]);
        if (sv == 0) throw fail("differentials differ");
        eps[b] = (rv == sv) ? eps[a] : -eps[a];
        stack.push_back(b);
      }
    }
  }
  for (int s : surv) {
    std::map<int, Int> want;
    for (const auto& [t, v] : cs.d[phi[s]]) want[t] = v;
    std::map<int, Int> got;
    for (const auto& [t, v] : red.out[s]) got[phi[t]] = v * eps[s] * eps[t];
    if (want != got) throw fail("differentials differ");
  }
  to_small = ChainMap{};
  to_small.src_size = cb.size();
  to_small.tgt_size = cs.size();
  to_small.f.resize(cb.size());
  for (int g = 0; g < cb.size(); ++g)
    for (const auto& [s, v] : red.proj[g])
      if (v != 0) to_small.f[g].push_back({phi.at(s), v * eps.at(s)});
  to_big = ChainMap{};
  to_big.src_size = cs.size();
  to_big.tgt_size = cb.size();
  to_big.f.resize(cs.size());
  for (int s : surv)
    for (const auto& [g, v] : red.iota[s])
      if (v != 0) to_big.f[phi[s]].push_back({g, v * eps[s]});
  sort_rows(to_small);
  sort_rows(to_big);
}

// Chain map sending the canonical classes of a to those of b, for diagrams
// whose components correspond through shared edge labels.
ChainMap canonical_transfer(const LinkDiagram& a, const GradedChainComplex& ca, const LinkDiagram& b, const GradedChainComplex& cb) {
  Reducer<IntegerRing> red(ca, IntegerRing{}, true);
  red.reduce();
  auto surv = red.survivors();
  for (int s : surv)
    if (!red.out[s].empty()) throw Error(ErrorCode::InvalidSite, "integral reduction leaves a differential");
  std::map<int, int> pos;
  for (int i = 0; i < int(surv.size()); ++i) pos[surv[i]] = i;
  auto oa = all_orientations(a);
  int k = int(oa.size());
  if (k != int(surv.size())) throw Error(ErrorCode::InvalidSite, "homology rank differs from the canonical count");
  auto coords = [&](const Chain& z) {
    std::vector<Rat> v(surv.size());
    for (const auto& [g, c] : z)
      for (const auto& [s, w] : red.proj[g]) v[pos.at(s)] += Rat(c * w);
    return v;
  };
  // columns: canonical classes of a
  std::vector<std::vector<Rat>> M(k, std::vector<Rat>(k));
  std::vector<Chain> target_cycles;
  auto bn_b = cb;
  for (int j = 0; j < k; ++j) {
    auto v = coords(canonical_cycle(a, ca, oa[j]));
    for (int i = 0; i < k; ++i) M[i][j] = v[i];
    Orientation ob(b.num_components());
    for (int c = 0; c < b.num_components(); ++c) ob[c] = oa[j][a.component_of.at(b.components[c][0])];
    target_cycles.push_back(canonical_cycle(b, bn_b, ob));
  }
  // invert M
  std::vector<std::vector<Rat>> Inv(k, std::vector<Rat>(k));
  for (int i = 0; i < k; ++i) Inv[i][i] = 1;
  for (int col = 0; col < k; ++col) {
    int piv = col;
    while (piv < k && M[piv][col] == 0) ++piv;
    if (piv == k) throw Error(ErrorCode::InvalidSite, "canonical classes are not a basis");
    std::swap(M[piv], M[col]);
    std::swap(Inv[piv], Inv[col]);
    Rat pv = M[col][col];
    for (int j = 0; j < k; ++j) {
      M[col][j] /= pv;
      Inv[col][j] /= pv;
    }
    for (int r = 0; r < k; ++r) {
      if (r == col || M[r][col] == 0) continue;
      Rat f = M[r][col];
      for (int j = 0; j < k; ++j) {
        M[r][j] -= f * M[col][j];
        Inv[r][j] -= f * Inv[col][j];
      }
    }
  }
  ChainMap g;
  g.src_size = ca.size();
  g.tgt_size = cb.size();
  g.f.resize(ca.size());
  for (int x = 0; x < ca.size(); ++x) {
    std::vector<Rat> p(k);
    for (const auto& [s, w] : red.proj[x]) p[pos.at(s)] += Rat(w);
    Chain img;
    for (int o = 0; o < k; ++o) {
      Rat c = 0;
      for (int i = 0; i < k; ++i) c += Inv[o][i] * p[i];
      if (c == 0) continue;
      if (c.get_den() != 1) throw Error(ErrorCode::InvalidSite, "canonical classes are not an integral basis");
      for (const auto& [t, v] : target_cycles[o]) img[t] += c.get_num() * v;
    }
    for (const auto& [t, v] : img)
      if (v != 0) g.f[x].push_back({t, v});
  }
  return g;
}

enum class Local { Cup, Cap, Saddle };

ChainMap local_map(const LinkDiagram& d, const GradedChainComplex& cd, const LinkDiagram& d2, const GradedChainComplex& cd2,
                   Local kind, int e, int f) {
  auto frob = frobenius_spec(1, 0, Basis::OneX);
  ChainMap m;
  m.src_size = cd.size();
  m.tgt_size = cd2.size();
  m.f.resize(cd.size());
  std::map<Mask, std::pair<CrossinglessDiagram, CrossinglessDiagram>> cache;
  for (int g = 0; g < cd.size(); ++g) {
    Mask u = cd.gens[g].state;
    auto it = cache.find(u);
    if (it == cache.end()) it = cache.emplace(u, std::make_pair(resolve(d, u), resolve(d2, u))).first;
    const auto& [r1, r2] = it->second;
    auto touched = [&](const std::vector<int>& c) {
      if (kind == Local::Cup) return std::binary_search(c.begin(), c.end(), e);
      return std::binary_search(c.begin(), c.end(), e) || std::binary_search(c.begin(), c.end(), f);
    };
    std::vector<int> t1, t2;
    std::map<int, int> same;  // circle of d2 -> circle of d
    for (int j = 0; j < r2.r(); ++j) {
      if (touched(r2.circles[j])) {
        t2.push_back(j);
        continue;
      }
      for (int i = 0; i < r1.r(); ++i)
        if (r1.circles[i] == r2.circles[j]) same[j] = i;
      if (!same.count(j)) throw Error(ErrorCode::InvalidSite, "circles do not correspond");
    }
    for (int i = 0; i < r1.r(); ++i)
      if (touched(r1.circles[i])) t1.push_back(i);
    Mask lab = cd.gens[g].labels;
    Mask base = 0;
    for (auto [j, i] : same)
      if (bit(lab, i)) base |= Mask(1) << j;
    std::vector<std::pair<Mask, Int>> outs;
    if (kind == Local::Cup) {
      outs.push_back({base | (Mask(1) << t2.at(0)), 1});
    } else if (kind == Local::Cap) {
      if (!bit(lab, t1.at(0))) outs.push_back({base, 1});
    } else if (t1.size() == 2 && t2.size() == 1) {
      int a = bit(lab, t1[0]), b = bit(lab, t1[1]);
      for (int c = 0; c < 2; ++c)
        if (frob.m[a][b][c] != 0) outs.push_back({base | (Mask(c) << t2[0]), frob.m[a][b][c]});
    } else if (t1.size() == 1 && t2.size() == 2) {
      int a = bit(lab, t1[0]);
      for (int c1 = 0; c1 < 2; ++c1)
        for (int c2 = 0; c2 < 2; ++c2)
          if (frob.delta[a][c1][c2] != 0)
            outs.push_back({base | (Mask(c1) << t2[0]) | (Mask(c2) << t2[1]), frob.delta[a][c1][c2]});
    } else {
      throw Error(ErrorCode::InvalidSite, "saddle is neither a merge nor a split");
    }
    for (const auto& [labels, v] : outs) {
      int t = cd2.index_of(u, labels);
      if (t < 0) throw Error(ErrorCode::InvalidSite, "target generator missing");
      m.f[g].push_back({t, v});
    }
  }
  sort_rows(m);
  return m;
}

std::string pd_key(const LinkDiagram& d) { return to_pd_text(d); }

} // namespace

bool is_planar(const LinkDiagram& d) {
  int n = d.n();
  if (n == 0) return true;
  std::map<int, std::vector<std::pair<int, int>>> occ;
  for (int c = 0; c < n; ++c)
    for (int s = 0; s < 4; ++s) occ[d.crossings[c].e[s]].push_back({c, s});
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& [l, v] : occ) {
    if (v.size() != 2) return false;
    parent[find(v[0].first)] = find(v[1].first);
  }
  int pieces = 0;
  for (int c = 0; c < n; ++c)
    if (find(c) == c) ++pieces;
  int faces = int(face_cycles(d).size());
  return faces == n + 2 * pieces;
}

std::string MoveSpec::text() const {
  std::string s;
  switch (kind) {
    case R1Plus: s = "r1+"; break;
    case R1Minus: s = "r1-"; break;
    case R2: s = "r2"; break;
    case R3: s = "r3"; break;
    case Cup: s = "cup"; break;
    case Cap: s = "cap"; break;
    case Saddle: s = "saddle"; break;
  }
  for (int e : edges) s += " e" + std::to_string(e);
  for (int c : crossings) s += " c" + std::to_string(c);
  return s;
}

MoveSpec parse_move(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> tok;
  for (std::string t; is >> t;) tok.push_back(t);
  auto bad = [&](const std::string& why) { return Error(ErrorCode::InvalidScript, "'" + line + "': " + why); };
  if (tok.empty()) throw bad("empty move");
  MoveSpec m;
  std::string k = tok[0];
  std::transform(k.begin(), k.end(), k.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  if (k == "r1+") m.kind = MoveSpec::R1Plus;
  else if (k == "r1-") m.kind = MoveSpec::R1Minus;
  else if (k == "r2") m.kind = MoveSpec::R2;
  else if (k == "r3") m.kind = MoveSpec::R3;
  else if (k == "cup") m.kind = MoveSpec::Cup;
  else if (k == "cap") m.kind = MoveSpec::Cap;
  else if (k == "saddle") m.kind = MoveSpec::Saddle;
  else throw bad("unknown move");
  for (size_t i = 1; i < tok.size(); ++i) {
    const auto& t = tok[i];
    if (t.size() < 2 || (t[0] != 'e' && t[0] != 'c')) throw bad("site must look like e<label> or c<crossing>");
    int v = 0;
    try {
      size_t used = 0;
      v = std::stoi(t.substr(1), &used);
      if (used != t.size() - 1) throw bad("bad number");
    } catch (const std::logic_error&) {
      throw bad("bad number");
    }
    if (v <= 0) throw bad("sites are positive");
    (t[0] == 'e' ? m.edges : m.crossings).push_back(v);
  }
  size_t ne = m.edges.size(), nc = m.crossings.size();
  bool ok = false;
  switch (m.kind) {
    case MoveSpec::R1Plus:
    case MoveSpec::R1Minus: ok = ne + nc == 1; break;
    case MoveSpec::R2: ok = (ne == 2 && nc == 0) || (ne == 0 && nc == 2); break;
    case MoveSpec::R3: ok = ne == 0 && nc == 3; break;
    case MoveSpec::Cup: ok = ne + nc == 0; break;
    case MoveSpec::Cap: ok = ne == 1 && nc == 0; break;
    case MoveSpec::Saddle: ok = ne == 2 && nc == 0; break;
  }
  if (!ok) throw bad("wrong sites for this move");
  return m;
}

std::vector<MoveSpec> parse_cobordism_script(const std::string& text) {
  std::vector<MoveSpec> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_move(line));
  }
  return out;
}

LinkDiagram apply_move(const LinkDiagram& d, const MoveSpec& m) {
  switch (m.kind) {
    case MoveSpec::R1Plus:
    case MoveSpec::R1Minus: {
      int sign = m.kind == MoveSpec::R1Plus ? 1 : -1;
      if (!m.edges.empty()) return add_kink(d, m.edges[0], sign);
      return remove_kink(d, crossing_index(d, m.crossings[0]), sign);
    }
    case MoveSpec::R2:
      if (!m.edges.empty()) return add_bigon(d, m.edges[0], m.edges[1]);
      return remove_bigon(d, crossing_index(d, m.crossings[0]), crossing_index(d, m.crossings[1]));
    case MoveSpec::R3:
      return triangle_move(d, crossing_index(d, m.crossings[0]), crossing_index(d, m.crossings[1]), crossing_index(d, m.crossings[2]));
    case MoveSpec::Cup: {
      Parts p = parts_of(d);
      p.loops.push_back(max_label(d) + 1);
      p.rev.push_back(false);
      return finish(p);
    }
    case MoveSpec::Cap: {
      if (!d.is_loop(m.edges[0])) throw Error(ErrorCode::InvalidSite, "cap needs a crossingless component");
      Parts p = parts_of(d);
      drop_loop(p, m.edges[0]);
      return finish(p);
    }
    case MoveSpec::Saddle:
      return saddle_move(d, m.edges[0], m.edges[1]);
  }
  throw Error(ErrorCode::InvalidSite, "unknown move");
}

CobordismStep reidemeister_map(const LinkDiagram& d, const MoveSpec& m) {
  if (!m.reidemeister()) throw Error(ErrorCode::InvalidSite, "not a Reidemeister move");
  CobordismStep st;
  st.move = m;
  st.source = d;
  st.target = apply_move(d, m);
  st.src = bar_natan_complex(st.source);
  st.tgt = bar_natan_complex(st.target);
  st.has_back = true;
  if (m.kind == MoveSpec::R3) {
    st.map = canonical_transfer(st.source, st.src, st.target, st.tgt);
    st.back = canonical_transfer(st.target, st.tgt, st.source, st.src);
    return st;
  }
  if (m.removes()) {
    std::set<int> gone;
    for (int c : m.crossings) gone.insert(c - 1);
    eliminate(st.target, st.source, kept_crossings(st.source, gone), st.tgt, st.src, st.map, st.back);
  } else {
    std::vector<int> cm(size_t(d.n()));
    std::iota(cm.begin(), cm.end(), 0);
    eliminate(st.source, st.target, cm, st.src, st.tgt, st.back, st.map);
  }
  return st;
}

CobordismStep morse_map(const LinkDiagram& d, const MoveSpec& m) {
  CobordismStep st;
  st.move = m;
  st.source = d;
  st.target = apply_move(d, m);
  st.src = bar_natan_complex(st.source);
  st.tgt = bar_natan_complex(st.target);
  switch (m.kind) {
    case MoveSpec::Cup:
      st.map = local_map(d, st.src, st.target, st.tgt, Local::Cup, max_label(d) + 1, 0);
      st.shift_q = 1;
      break;
    case MoveSpec::Cap:
      st.map = local_map(d, st.src, st.target, st.tgt, Local::Cap, m.edges[0], m.edges[0]);
      st.shift_q = 1;
      break;
    case MoveSpec::Saddle:
      st.map = local_map(d, st.src, st.target, st.tgt, Local::Saddle, m.edges[0], m.edges[1]);
      st.shift_q = -1;
      break;
    default:
      throw Error(ErrorCode::InvalidSite, "not a Morse move");
  }
  return st;
}

CobordismStep move_map(const LinkDiagram& d, const MoveSpec& m) {
  return m.reidemeister() ? reidemeister_map(d, m) : morse_map(d, m);
}

Cobordism cobordism_map(const LinkDiagram& d, const std::vector<MoveSpec>& moves) {
  Cobordism c;
  c.source = c.target = d;
  c.src = c.tgt = bar_natan_complex(d);
  c.map = identity_map(c.src);
  for (const auto& m : moves) {
    auto st = move_map(c.target, m);
    c.map = khflow::compose(st.map, c.map);
    c.shift_q += st.shift_q;
    c.cups += m.kind == MoveSpec::Cup;
    c.caps += m.kind == MoveSpec::Cap;
    c.saddles += m.kind == MoveSpec::Saddle;
    c.target = st.target;
    c.tgt = st.tgt;
    c.steps.push_back(std::move(st));
  }
  return c;
}

Cobordism compose(const Cobordism& first, const Cobordism& second) {
  if (pd_key(first.target) != pd_key(second.source)) throw Error(ErrorCode::NonComposable, "target of the first cobordism is not the source of the second");
  Cobordism c = first;
  c.target = second.target;
  c.tgt = second.tgt;
  c.map = khflow::compose(second.map, first.map);
  c.shift_q += second.shift_q;
  c.cups += second.cups;
  c.caps += second.caps;
  c.saddles += second.saddles;
  for (const auto& s : second.steps) c.steps.push_back(s);
  return c;
}

int canonical_degree(const Cobordism& f, char source_class, char target_class) {
  if (f.source.num_components() != 1 || f.target.num_components() != 1)
    throw Error(ErrorCode::NotConnectedCobordism, "canonical degree needs knots at both ends");
  int chi = f.euler_characteristic();
  if (chi > 0 || chi % 2 != 0) throw Error(ErrorCode::NotConnectedCobordism, "Euler characteristic " + std::to_string(chi) + " does not fit a connected cobordism");
  auto pick = [](char w) {
    if (w != 'a' && w != 'b') throw Error(ErrorCode::InvalidSite, "canonical class must be a or b");
    return Orientation{w == 'b'};
  };
  Chain z = canonical_cycle(f.source, f.src, pick(source_class));
  Chain img = f.map.apply(z);
  Chain ta = canonical_cycle(f.target, f.tgt, {false});
  Chain tb = canonical_cycle(f.target, f.tgt, {true});
  Reducer<Rationals> red(f.tgt, Rationals{}, true);
  red.reduce();
  auto surv = red.survivors();
  std::map<int, int> pos;
  for (int i = 0; i < int(surv.size()); ++i) pos[surv[i]] = i;
  auto coords = [&](const Chain& c) {
    std::vector<Rat> v(surv.size());
    for (const auto& [g, x] : c)
      for (const auto& [s, w] : red.proj[g]) v[pos.at(s)] += Rat(x) * w;
    return v;
  };
  auto va = coords(ta), vb = coords(tb), vi = coords(img);
  // solve vi = x va + y vb
  int n = int(surv.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Rat det = va[i] * vb[j] - va[j] * vb[i];
      if (det == 0) continue;
      Rat x = (vi[i] * vb[j] - vi[j] * vb[i]) / det;
      Rat y = (va[i] * vi[j] - va[j] * vi[i]) / det;
      for (int k = 0; k < n; ++k)
        if (vi[k] != x * va[k] + y * vb[k]) throw Error(ErrorCode::NotConnectedCobordism, "image leaves the canonical span");
      Rat r = target_class == 'a' ? x : (target_class == 'b' ? y : Rat(0));
      if (target_class != 'a' && target_class != 'b') throw Error(ErrorCode::InvalidSite, "canonical class must be a or b");
      if (r.get_den() != 1) throw Error(ErrorCode::NotConnectedCobordism, "non-integral canonical degree");
      return int(r.get_num().get_si());
    }
  throw Error(ErrorCode::NotConnectedCobordism, "canonical classes of the target are dependent");
}

GradedChainComplex mapping_cone(const GradedChainComplex& src, const GradedChainComplex& tgt, const ChainMap& f) {
  GradedChainComplex c;
  int na = src.size();
  for (const auto& g : src.gens) {
    Generator x = g;
    x.gr_h -= 1;
    c.gens.push_back(x);
  }
  for (const auto& g : tgt.gens) c.gens.push_back(g);
  c.d.resize(c.gens.size());
  for (int a = 0; a < na; ++a) {
    for (const auto& [t, v] : src.d[a]) c.d[a].push_back({t, -v});
    for (const auto& [t, v] : f.f[a]) c.d[a].push_back({na + t, v});
  }
  for (int b = 0; b < tgt.size(); ++b)
    for (const auto& [t, v] : tgt.d[b]) c.d[na + b].push_back({na + t, v});
  c.direction = 1;
  return c;
}

bool is_quasi_isomorphism(const GradedChainComplex& src, const GradedChainComplex& tgt, const ChainMap& f) {
  if (!is_chain_map(src, tgt, f)) return false;
  auto h = homology(mapping_cone(src, tgt, f), Coeffs::Z);
  return h.total_rank() == 0 && h.torsion_free();
}

std::string cobordism_to_json(const Cobordism& f) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["kind"] = "cobordism_map";
  j["source"] = to_pd_text(f.source);
  j["target"] = to_pd_text(f.target);
  j["q_shift"] = f.shift_q;
  j["euler_characteristic"] = f.euler_characteristic();
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const auto& s : f.steps) steps.push_back({{"move", s.move.text()}, {"target", to_pd_text(s.target)}, {"q_shift", s.shift_q}});
  j["steps"] = steps;
  j["source_size"] = f.map.src_size;
  j["target_size"] = f.map.tgt_size;
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (int g = 0; g < f.map.src_size; ++g)
    for (const auto& [t, v] : f.map.f[g]) entries.push_back({g, t, v.get_str()});
  j["entries"] = entries;
  return j.dump(2);
}

} // namespace khflow
