#include "khflow/resconf.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

namespace khflow {

std::vector<int> ResolutionConfiguration::labels() const {
  std::set<int> s(loose.begin(), loose.end());
  for (const auto& a : arcs) s.insert(a.begin(), a.end());
  for (const auto& [x, y] : joins) s.insert({x, y});
  return {s.begin(), s.end()};
}

std::vector<std::vector<int>> ResolutionConfiguration::circles_at(Mask surgered) const {
  std::vector<int> labs = labels();
  auto idx = [&](int l) { return int(std::lower_bound(labs.begin(), labs.end(), l) - labs.begin()); };
  UnionFind uf(int(labs.size()));
  for (const auto& [x, y] : joins) uf.unite(idx(x), idx(y));
  for (int i = 0; i < index(); ++i) {
    const auto& s = arcs[i];
    if (bit(surgered, i)) {
      uf.unite(idx(s[0]), idx(s[1]));
      uf.unite(idx(s[2]), idx(s[3]));
    } else {
      uf.unite(idx(s[0]), idx(s[3]));
      uf.unite(idx(s[1]), idx(s[2]));
    }
  }
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < int(labs.size()); ++i) groups[uf.find(i)].push_back(labs[i]);
  std::vector<std::vector<int>> out;
  for (auto& kv : groups) out.push_back(kv.second);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> ResolutionConfiguration::circles() const { return circles_at(0); }

ResolutionConfiguration associated_config(const LinkDiagram& d) {
  ResolutionConfiguration c;
  for (int i = 0; i < d.n(); ++i) {
    c.arcs.push_back(d.crossings[i].e);
    c.arc_ids.push_back(i);
  }
  c.loose = d.loops;
  return c;
}

ResolutionConfiguration surgery(const ResolutionConfiguration& c, const std::vector<int>& B) {
  std::set<int> b;
  for (int i : B) {
    if (i < 0 || i >= c.index() || !b.insert(i).second) throw Error(ErrorCode::InvalidArc, "arc " + std::to_string(i));
  }
  ResolutionConfiguration out;
  out.joins = c.joins;
  out.loose = c.loose;
  for (int i = 0; i < c.index(); ++i) {
    const auto& s = c.arcs[i];
    if (b.count(i)) {
      out.joins.push_back({s[0], s[1]});
      out.joins.push_back({s[2], s[3]});
    } else {
      out.arcs.push_back(s);
      out.arc_ids.push_back(c.arc_ids.empty() ? i : c.arc_ids[i]);
    }
  }
  return out;
}

ResolutionConfiguration ladybug_config() {
  ResolutionConfiguration c;
  c.arcs = {{1, 2, 3, 4}, {1, 4, 3, 2}};
  c.arc_ids = {0, 1};
  return c;
}

ResolutionConfiguration hopf_config() { return associated_config(parse_pd("X[4,1,3,2] X[2,3,1,4]")); }

EdgeTransition transition(const std::vector<std::vector<int>>& from, const std::vector<std::vector<int>>& to,
                          const std::array<int, 4>& site) {
  auto find = [](const std::vector<std::vector<int>>& cs, int l) {
    for (int i = 0; i < int(cs.size()); ++i)
      if (std::binary_search(cs[i].begin(), cs[i].end(), l)) return i;
    return -1;
  };
  EdgeTransition t;
  int ca = find(from, site[0]), cb = find(from, site[1]);
  if (ca != cb) {
    t.merge = true;
    t.a = std::min(ca, cb);
    t.b = std::max(ca, cb);
    t.m = find(to, site[0]);
  } else {
    t.a = ca;
    int p = find(to, site[0]), q = find(to, site[2]);
    t.p = std::min(p, q);
    t.q = std::max(p, q);
  }
  t.carry.assign(from.size(), -1);
  for (int i = 0; i < int(from.size()); ++i)
    if (i != t.a && i != t.b) t.carry[i] = find(to, from[i][0]);
  return t;
}

BasicRelation khovanov_relation() {
  BasicRelation r;
  r.name = "khovanov";
  r.merge[{1, 1}] = {1};
  r.merge[{1, 0}] = {0};
  r.merge[{0, 1}] = {0};
  r.merge[{0, 0}] = {};
  r.split[1] = {{1, 0}, {0, 1}};
  r.split[0] = {{0, 0}};
  return r;
}

BasicRelation xy_relation() {
  BasicRelation r;
  r.name = "xy";
  r.merge[{0, 0}] = {0};
  r.merge[{1, 1}] = {1};
  r.merge[{0, 1}] = {};
  r.merge[{1, 0}] = {};
  r.split[0] = {{0, 0}};
  r.split[1] = {{1, 1}};
  return r;
}

int Poset::index_of(Mask state, Mask labels) const {
  auto it = lookup.find({state, labels});
  return it == lookup.end() ? -1 : it->second;
}

Poset poset(const ResolutionConfiguration& c, const BasicRelation& rel) {
  int n = c.index();
  std::vector<Mask> states;
  for (Mask u = 0; u < (Mask(1) << n); ++u) states.push_back(u);
  std::sort(states.begin(), states.end(), [&](Mask a, Mask b) {
    if (popcount(a) != popcount(b)) return popcount(a) < popcount(b);
    return lex_key(a, n) < lex_key(b, n);
  });
  std::map<Mask, std::vector<std::vector<int>>> circ;
  for (Mask u : states) circ[u] = c.circles_at(u);
  Poset P;
  for (Mask u : states) {
    int r = int(circ[u].size());
    std::vector<Mask> labs;
    for (Mask v = 0; v < (Mask(1) << r); ++v) labs.push_back(v);
    std::sort(labs.begin(), labs.end(), [&](Mask a, Mask b) { return lex_key(a, r) < lex_key(b, r); });
    for (Mask v : labs) {
      P.lookup[{u, v}] = int(P.objects.size());
      P.objects.push_back({u, v, r});
    }
  }
  for (int o = 0; o < int(P.objects.size()); ++o) {
    auto [u, x, r] = P.objects[o];
    for (int i = 0; i < n; ++i) {
      if (bit(u, i)) continue;
      Mask w = u | (Mask(1) << i);
      EdgeTransition t = transition(circ[u], circ[w], c.arcs[i]);
      Mask base = 0;
      for (int k = 0; k < r; ++k)
        if (t.carry[k] >= 0 && bit(x, k)) base |= Mask(1) << t.carry[k];
      if (t.merge) {
        for (int l : rel.merge.at({int(bit(x, t.a)), int(bit(x, t.b))}))
          P.covers.push_back({o, P.index_of(w, base | (Mask(l) << t.m))});
      } else {
        for (auto [l1, l2] : rel.split.at(int(bit(x, t.a))))
          P.covers.push_back({o, P.index_of(w, base | (Mask(l1) << t.p) | (Mask(l2) << t.q))});
      }
    }
  }
  return P;
}

bool admissible(const DecoratedConfiguration& dec) {
  const auto& c = dec.config;
  auto zc = c.circles();
  auto sc = c.circles_at((Mask(1) << c.index()) - 1);
  if (dec.y.size() != zc.size() || dec.x.size() != sc.size()) return false;
  auto find = [](const std::vector<std::vector<int>>& cs, int l) {
    for (int i = 0; i < int(cs.size()); ++i)
      if (std::binary_search(cs[i].begin(), cs[i].end(), l)) return i;
    return -1;
  };
  UnionFind uf(int(zc.size()));
  for (const auto& s : c.arcs) uf.unite(find(zc, s[0]), find(zc, s[1]));
  for (int i = 0; i < int(zc.size()); ++i)
    if (dec.y[i] != dec.y[uf.find(i)]) return false;
  for (int j = 0; j < int(sc.size()); ++j) {
    int comp = uf.find(find(zc, sc[j][0]));
    if (dec.x[j] != dec.y[comp]) return false;
  }
  return true;
}

Mask CubeBlock::embed(Mask w) const {
  Mask u = min_state;
  for (int j = 0; j < k; ++j)
    if (bit(w, j)) u |= Mask(1) << arcs[j];
  return u;
}

Mask CubeBlock::labels_at(const ResolutionConfiguration& c, Mask w) const {
  auto base = c.circles_at(min_state);
  auto cur = c.circles_at(embed(w));
  Mask out = 0;
  for (int i = 0; i < int(cur.size()); ++i) {
    int l = cur[i][0];
    for (int j = 0; j < int(base.size()); ++j)
      if (std::binary_search(base[j].begin(), base[j].end(), l)) {
        if (bit(min_labels, j)) out |= Mask(1) << i;
        break;
      }
  }
  return out;
}

std::vector<CubeBlock> cube_decomposition(const ResolutionConfiguration& c) {
  Poset P = poset(c, xy_relation());
  std::vector<int> indeg(P.objects.size(), 0);
  for (auto [a, b] : P.covers) ++indeg[b];
  std::vector<CubeBlock> out;
  for (int o = 0; o < int(P.objects.size()); ++o) {
    if (indeg[o]) continue;
    const auto& obj = P.objects[o];
    auto circ = c.circles_at(obj.state);
    auto find = [&](int l) {
      for (int i = 0; i < int(circ.size()); ++i)
        if (std::binary_search(circ[i].begin(), circ[i].end(), l)) return i;
      return -1;
    };
    CubeBlock b;
    b.min_state = obj.state;
    b.min_labels = obj.labels;
    for (int i = 0; i < c.index(); ++i) {
      if (bit(obj.state, i)) continue;
      if (bit(obj.labels, find(c.arcs[i][0])) == bit(obj.labels, find(c.arcs[i][1]))) b.arcs.push_back(i);
    }
    b.k = int(b.arcs.size());
    b.max_state = b.embed((Mask(1) << b.k) - 1);
    b.max_labels = b.labels_at(c, (Mask(1) << b.k) - 1);
    out.push_back(b);
  }
  return out;
}

std::string config_to_json(const ResolutionConfiguration& c) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["kind"] = "resolution_configuration";
  auto circ = c.circles();
  j["circles"] = circ;
  nlohmann::ordered_json arcs = nlohmann::ordered_json::array();
  for (int i = 0; i < c.index(); ++i) {
    int ca = -1, cb = -1;
    for (int k = 0; k < int(circ.size()); ++k) {
      if (std::binary_search(circ[k].begin(), circ[k].end(), c.arcs[i][0])) ca = k;
      if (std::binary_search(circ[k].begin(), circ[k].end(), c.arcs[i][1])) cb = k;
    }
    arcs.push_back({{"id", c.arc_ids.empty() ? i : c.arc_ids[i]}, {"site", c.arcs[i]}, {"endpoints", {ca, cb}}});
  }
  j["arcs"] = arcs;
  j["joins"] = c.joins;
  j["loose"] = c.loose;
  return j.dump(2);
}

} // namespace khflow
