#include "khflow/diagram.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace khflow {

std::vector<int> LinkDiagram::labels() const {
  std::vector<int> out;
  out.reserve(head.size());
  for (const auto& kv : head) out.push_back(kv.first);
  return out;
}

bool LinkDiagram::is_loop(int label) const {
  return std::find(loops.begin(), loops.end(), label) != loops.end();
}

int CrossinglessDiagram::circle_of(int label) const {
  for (int i = 0; i < r(); ++i)
    if (std::binary_search(circles[i].begin(), circles[i].end(), label)) return i;
  return -1;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace((unsigned char)s[a])) ++a;
  while (b > a && std::isspace((unsigned char)s[b - 1])) --b;
  return s.substr(a, b - a);
}

long long parse_int(const std::string& raw) {
  std::string s = trim(raw);
  if (s.empty()) throw Error(ErrorCode::MalformedPD, "empty entry");
  size_t pos = 0;
  if (s[0] == '+' || s[0] == '-') pos = 1;
  if (pos == s.size()) throw Error(ErrorCode::MalformedPD, "non-integer entry '" + s + "'");
  for (size_t i = pos; i < s.size(); ++i)
    if (!std::isdigit((unsigned char)s[i])) throw Error(ErrorCode::MalformedPD, "non-integer entry '" + s + "'");
  if (s.size() > 12) throw Error(ErrorCode::MalformedPD, "label too large");
  return std::stoll(s);
}

std::vector<std::vector<int>> tuples_from_text(const std::string& input) {
  std::string text = trim(input);
  if (text.rfind("PD[", 0) == 0 && !text.empty() && text.back() == ']') text = text.substr(3, text.size() - 4);
  std::vector<std::vector<int>> out;
  size_t i = 0, n = text.size();
  while (true) {
    while (i < n && (std::isspace((unsigned char)text[i]) || text[i] == ',')) ++i;
    if (i >= n) break;
    size_t start = i;
    while (i < n && std::isalpha((unsigned char)text[i])) ++i;
    std::string name = text.substr(start, i - start);
    if (name.empty() || i >= n || text[i] != '[')
      throw Error(ErrorCode::MalformedPD, "expected NAME[...] at offset " + std::to_string(start));
    size_t close = text.find(']', i);
    if (close == std::string::npos) throw Error(ErrorCode::MalformedPD, "unterminated bracket");
    std::string body = text.substr(i + 1, close - i - 1);
    i = close + 1;
    std::vector<int> args;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) args.push_back(int(parse_int(item)));
    if (name == "X") {
      if (args.size() != 4) throw Error(ErrorCode::MalformedPD, "crossing arity " + std::to_string(args.size()));
    } else if (name == "Loop" || name == "O") {
      if (args.size() != 1) throw Error(ErrorCode::MalformedPD, "loop arity " + std::to_string(args.size()));
    } else {
      throw Error(ErrorCode::MalformedPD, "unknown token " + name);
    }
    out.push_back(args);
  }
  return out;
}

std::vector<std::vector<int>> tuples_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::MalformedPD, std::string("invalid JSON: ") + e.what());
  }
  std::vector<std::vector<int>> out;
  auto take = [&](const nlohmann::json& arr) {
    if (!arr.is_array()) throw Error(ErrorCode::MalformedPD, "expected an array of arrays");
    for (const auto& t : arr) {
      if (!t.is_array()) throw Error(ErrorCode::MalformedPD, "expected an array of arrays");
      std::vector<int> v;
      for (const auto& x : t) {
        if (!x.is_number_integer()) throw Error(ErrorCode::MalformedPD, "non-integer entry");
        v.push_back(x.get<int>());
      }
      out.push_back(v);
    }
  };
  if (j.is_object()) {
    if (!j.contains("pd") && !j.contains("crossings") && !j.contains("loops")) throw Error(ErrorCode::MalformedPD, "expected pd, crossings or loops");
    if (j.contains("pd")) take(j["pd"]);
    if (j.contains("crossings")) take(j["crossings"]);
    if (j.contains("loops")) {
      for (const auto& l : j["loops"]) {
        if (!l.is_number_integer()) throw Error(ErrorCode::MalformedPD, "non-integer loop label");
        out.push_back({l.get<int>()});
      }
    }
  } else {
    take(j);
  }
  return out;
}

// Union-find with parity, used to orient over-strands.
struct ParityUF {
  std::vector<int> p, par;
  explicit ParityUF(int n) : p(n), par(n, 0) {
    for (int i = 0; i < n; ++i) p[i] = i;
  }
  std::pair<int, int> find(int x) {
    int acc = 0;
    int r = x;
    while (p[r] != r) {
      acc ^= par[r];
      r = p[r];
    }
    // path compression
    int cur = x, curpar = acc;
    while (p[cur] != cur) {
      int nxt = p[cur], np = curpar ^ par[cur];
      p[cur] = r;
      par[cur] = curpar;
      cur = nxt;
      curpar = np;
    }
    return {r, acc};
  }
  bool unite(int a, int b, int rel) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) return (pa ^ pb) == rel;
    p[rb] = ra;
    par[rb] = pa ^ pb ^ rel;
    return true;
  }
};

} // namespace

LinkDiagram from_tuples(const std::vector<std::vector<int>>& tuples) {
  std::vector<Crossing> xs;
  std::vector<int> loops;
  std::map<int, int> count;
  for (const auto& t : tuples) {
    if (t.size() != 4 && t.size() != 1) throw Error(ErrorCode::MalformedPD, "tuple arity " + std::to_string(t.size()));
    for (int l : t)
      if (l <= 0) throw Error(ErrorCode::MalformedPD, "labels must be positive integers");
    if (t.size() == 4) {
      Crossing c;
      for (int k = 0; k < 4; ++k) c.e[k] = t[k];
      xs.push_back(c);
      for (int l : t) ++count[l];
    } else {
      loops.push_back(t[0]);
    }
  }
  for (auto& [l, k] : count)
    if (k != 2) throw Error(ErrorCode::InconsistentEdges, "label " + std::to_string(l) + " appears " + std::to_string(k) + " times");
  std::set<int> seen;
  for (int l : loops)
    if (count.count(l) || !seen.insert(l).second)
      throw Error(ErrorCode::InconsistentEdges, "loop label " + std::to_string(l) + " reused");

  int nc = int(xs.size());
  const int K = nc;
  ParityUF uf(nc + 1);
  std::map<int, std::vector<std::pair<int, int>>> occ;
  for (int c = 0; c < nc; ++c)
    for (int s = 0; s < 4; ++s) occ[xs[c].e[s]].push_back({c, s});
  auto node = [&](int c, int s) -> std::pair<int, int> {
    if (s == 0) return {K, 1};
    if (s == 2) return {K, 0};
    if (s == 1) return {c, 0};
    return {c, 1};
  };
  for (auto& [l, v] : occ) {
    auto [na, oa] = node(v[0].first, v[0].second);
    auto [nb, ob] = node(v[1].first, v[1].second);
    if (!uf.unite(na, nb, 1 ^ oa ^ ob))
      throw Error(ErrorCode::NonOrientable, "edge " + std::to_string(l) + " cannot be oriented");
  }
  std::vector<int> x(nc, -1);
  int rootK = uf.find(K).first;
  std::map<int, int> group_value;
  for (int c = 0; c < nc; ++c) {
    auto [r, par] = uf.find(c);
    if (r == rootK) x[c] = par ^ uf.find(K).second;
  }
  // Over-only components: orient by increasing labels.
  for (int c = 0; c < nc; ++c) {
    if (x[c] >= 0) continue;
    int g = uf.find(c).first;
    if (group_value.count(g)) continue;
    std::vector<int> members;
    for (int k = 0; k < nc; ++k)
      if (x[k] < 0 && uf.find(k).first == g) members.push_back(k);
    auto head_of = [&](int k, int s, int gv) {
      int xv = uf.find(k).second ^ gv;
      return s == 1 ? xv : 1 - xv;
    };
    int emin = -1;
    for (int k : members)
      for (int s : {1, 3}) emin = emin < 0 ? xs[k].e[s] : std::min(emin, xs[k].e[s]);
    int succ = -1, pred = -1;
    for (auto [k, s] : occ[emin]) {
      if (s != 1 && s != 3) continue;
      if (head_of(k, s, 0)) succ = xs[k].label(s + 2);
      else pred = xs[k].label(s + 2);
    }
    group_value[g] = (succ >= 0 && pred >= 0 && succ > pred) ? 1 : 0;
    for (int k : members) x[k] = uf.find(k).second ^ group_value[g];
  }
  for (int c = 0; c < nc; ++c) {
    xs[c].under_in = 0;
    xs[c].over_in = x[c] ? 1 : 3;
  }
  return build_diagram(xs, loops);
}

LinkDiagram build_diagram(std::vector<Crossing> crossings, std::vector<int> loops, std::vector<bool> loop_reversed) {
  LinkDiagram d;
  d.crossings = std::move(crossings);
  d.loops = std::move(loops);
  d.loop_reversed = std::move(loop_reversed);
  d.loop_reversed.resize(d.loops.size(), false);
  std::map<int, int> count;
  for (int c = 0; c < d.n(); ++c) {
    const auto& x = d.crossings[c];
    if ((x.under_in != 0 && x.under_in != 2) || (x.over_in != 1 && x.over_in != 3))
      throw Error(ErrorCode::MalformedPD, "invalid slot roles at crossing " + std::to_string(c));
    for (int s = 0; s < 4; ++s) ++count[x.e[s]];
    for (int s : {x.under_in, x.over_in}) {
      if (d.head.count(x.e[s])) throw Error(ErrorCode::NonOrientable, "edge " + std::to_string(x.e[s]) + " has two heads");
      d.head[x.e[s]] = {c, s};
    }
    for (int s : {x.under_in + 2, x.over_in + 2}) {
      int sl = s % 4;
      if (d.tail.count(x.e[sl])) throw Error(ErrorCode::NonOrientable, "edge " + std::to_string(x.e[sl]) + " has two tails");
      d.tail[x.e[sl]] = {c, sl};
    }
  }
  for (auto& [l, k] : count)
    if (k != 2) throw Error(ErrorCode::InconsistentEdges, "label " + std::to_string(l) + " appears " + std::to_string(k) + " times");
  for (int l : d.loops) {
    if (count.count(l) || d.head.count(l)) throw Error(ErrorCode::InconsistentEdges, "loop label reused");
    d.head[l] = {-1, -1};
    d.tail[l] = {-1, -1};
  }
  std::set<int> visited;
  for (const auto& kv : d.head) {
    int start = kv.first;
    if (visited.count(start)) continue;
    std::vector<int> comp;
    int e = start;
    while (true) {
      visited.insert(e);
      comp.push_back(e);
      EdgeEnd h = d.head[e];
      if (h.crossing < 0) break;
      int nxt = d.crossings[h.crossing].label(h.slot + 2);
      if (nxt == start) break;
      if (visited.count(nxt)) throw Error(ErrorCode::NonOrientable, "component tracing failed");
      e = nxt;
    }
    int idx = d.num_components();
    for (int l : comp) d.component_of[l] = idx;
    d.components.push_back(comp);
  }
  for (const auto& x : d.crossings) {
    d.signs.push_back(x.sign());
    (x.sign() > 0 ? d.n_plus : d.n_minus)++;
  }
  return d;
}

LinkDiagram parse_pd(const std::string& text) {
  std::string t = trim(text);
  if (!t.empty() && (t[0] == '[' || t[0] == '{')) return from_tuples(tuples_from_json(t));
  return from_tuples(tuples_from_text(t));
}

std::vector<std::vector<int>> to_tuples(const LinkDiagram& d) {
  std::vector<std::vector<int>> out;
  for (const auto& x : d.crossings) {
    std::vector<int> t(4);
    for (int k = 0; k < 4; ++k) t[k] = x.label(x.under_in + k);
    out.push_back(t);
  }
  for (int l : d.loops) out.push_back({l});
  return out;
}

std::string to_pd_text(const LinkDiagram& d) {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : to_tuples(d)) {
    if (!first) os << ' ';
    first = false;
    if (t.size() == 4) os << "X[" << t[0] << ',' << t[1] << ',' << t[2] << ',' << t[3] << ']';
    else os << "Loop[" << t[0] << ']';
  }
  return os.str();
}

Mask state_mask(const LinkDiagram& d, const State& u) {
  if (int(u.size()) != d.n())
    throw Error(ErrorCode::LengthMismatch, "state length " + std::to_string(u.size()) + " vs " + std::to_string(d.n()));
  Mask m = 0;
  for (int i = 0; i < d.n(); ++i) {
    if (u[i] != 0 && u[i] != 1) throw Error(ErrorCode::LengthMismatch, "state entries must be 0 or 1");
    if (u[i]) m |= Mask(1) << i;
  }
  return m;
}

State state_vector(Mask u, int n) {
  State s(n);
  for (int i = 0; i < n; ++i) s[i] = bit(u, i);
  return s;
}

std::array<std::pair<int, int>, 2> smoothing(const Crossing& c, int b) {
  if (b == 0) return {{{c.e[0], c.e[3]}, {c.e[1], c.e[2]}}};
  return {{{c.e[0], c.e[1]}, {c.e[2], c.e[3]}}};
}

CrossinglessDiagram resolve(const LinkDiagram& d, Mask u) {
  std::vector<int> labs = d.labels();
  auto idx = [&](int l) { return int(std::lower_bound(labs.begin(), labs.end(), l) - labs.begin()); };
  UnionFind uf(int(labs.size()));
  for (int c = 0; c < d.n(); ++c)
    for (auto [a, b] : smoothing(d.crossings[c], bit(u, c))) uf.unite(idx(a), idx(b));
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < int(labs.size()); ++i) groups[uf.find(i)].push_back(labs[i]);
  CrossinglessDiagram out;
  out.state = u;
  out.n = d.n();
  for (auto& [r, v] : groups) out.circles.push_back(v);
  std::sort(out.circles.begin(), out.circles.end());
  return out;
}

CrossinglessDiagram resolve(const LinkDiagram& d, const State& u) { return resolve(d, state_mask(d, u)); }

Mask seifert_mask(const LinkDiagram& d) {
  Mask m = 0;
  for (int i = 0; i < d.n(); ++i)
    if (d.crossings[i].sign() < 0) m |= Mask(1) << i;
  return m;
}

State seifert_state(const LinkDiagram& d) { return state_vector(seifert_mask(d), d.n()); }

LinkDiagram reorient(const LinkDiagram& d, const Orientation& o) {
  if (int(o.size()) != d.num_components())
    throw Error(ErrorCode::LengthMismatch, "orientation length must equal component count");
  auto flipped = [&](int label) { return bool(o[d.component_of.at(label)]); };
  std::vector<Crossing> xs = d.crossings;
  for (auto& x : xs) {
    if (flipped(x.label(x.under_in))) x.under_in = (x.under_in + 2) % 4;
    if (flipped(x.label(x.over_in))) x.over_in = (x.over_in + 2) % 4;
  }
  std::vector<bool> rev = d.loop_reversed;
  for (size_t i = 0; i < d.loops.size(); ++i)
    if (flipped(d.loops[i])) rev[i] = !rev[i];
  return build_diagram(xs, d.loops, rev);
}

LinkDiagram mirror(const LinkDiagram& d) {
  std::vector<Crossing> xs;
  for (const auto& x : d.crossings) {
    Crossing m;
    for (int k = 0; k < 4; ++k) m.e[k] = x.label(x.over_in + k);
    m.under_in = 0;
    m.over_in = ((x.under_in - x.over_in) % 4 + 4) % 4;
    xs.push_back(m);
  }
  return build_diagram(xs, d.loops, d.loop_reversed);
}

LinkDiagram relabel_canonical(const LinkDiagram& d) {
  std::map<int, int> f;
  int next = 1;
  for (const auto& comp : d.components)
    for (int l : comp) f[l] = next++;
  std::vector<Crossing> xs = d.crossings;
  for (auto& x : xs)
    for (auto& l : x.e) l = f.at(l);
  std::vector<int> loops;
  for (int l : d.loops) loops.push_back(f.at(l));
  return build_diagram(xs, loops, d.loop_reversed);
}

LinkDiagram braid_closure(const std::vector<int>& word, int strands) {
  if (strands < 1) throw Error(ErrorCode::MalformedPD, "braid needs at least one strand");
  std::vector<int> cur(strands), init(strands);
  for (int p = 0; p < strands; ++p) cur[p] = init[p] = p + 1;
  int next = strands + 1;
  std::vector<Crossing> xs;
  for (int g : word) {
    int i = std::abs(g) - 1;
    if (g == 0 || i + 1 >= strands) throw Error(ErrorCode::MalformedPD, "braid generator out of range");
    int sw = cur[i], se = cur[i + 1];
    int nw = next++, ne = next++;
    Crossing c;
    if (g > 0) {
      c.e = {sw, se, ne, nw};
      c.over_in = 1;
    } else {
      c.e = {se, ne, nw, sw};
      c.over_in = 3;
    }
    c.under_in = 0;
    xs.push_back(c);
    cur[i] = nw;
    cur[i + 1] = ne;
  }
  std::map<int, int> f;
  std::vector<int> loops;
  for (int p = 0; p < strands; ++p) {
    if (cur[p] == init[p]) loops.push_back(init[p]);
    else f[cur[p]] = init[p];
  }
  for (auto& x : xs)
    for (auto& l : x.e)
      if (f.count(l)) l = f[l];
  return relabel_canonical(build_diagram(xs, loops));
}

FaceData faces(const LinkDiagram& d) {
  int nc = d.n();
  std::map<int, std::vector<std::pair<int, int>>> occ;
  for (int c = 0; c < nc; ++c)
    for (int s = 0; s < 4; ++s) occ[d.crossings[c].e[s]].push_back({c, s});
  auto partner = [&](int c, int s) {
    const auto& v = occ[d.crossings[c].e[s]];
    return (v[0].first == c && v[0].second == s) ? v[1] : v[0];
  };
  std::vector<std::array<int, 4>> raw(nc, {-1, -1, -1, -1});
  int nf = 0;
  for (int c = 0; c < nc; ++c)
    for (int s = 0; s < 4; ++s) {
      if (raw[c][s] >= 0) continue;
      int cc = c, ss = s;
      while (raw[cc][ss] < 0) {
        raw[cc][ss] = nf;
        auto [c2, s2] = partner(cc, ss);
        cc = c2;
        ss = (s2 + 3) % 4;
      }
      ++nf;
    }
  UnionFind pieces(nc);
  for (auto& [l, v] : occ) pieces.unite(v[0].first, v[1].first);
  std::map<int, std::vector<int>> members;
  for (int c = 0; c < nc; ++c) members[pieces.find(c)].push_back(c);
  std::set<int> outer_raw;
  for (auto& [root, cs] : members) {
    std::set<int> fs;
    int low = -1;
    for (int c : cs)
      for (int s = 0; s < 4; ++s) {
        fs.insert(raw[c][s]);
        int l = d.crossings[c].e[s];
        if (low < 0 || l < low) low = l;
      }
    int V = int(cs.size()), E = 2 * V, F = int(fs.size());
    if (V - E + F != 2)
      throw Error(ErrorCode::EmbeddingFailure, "rotation system has genus > 0 (V-E+F=" + std::to_string(V - E + F) + ")");
    EdgeEnd t = d.tail.at(low);
    outer_raw.insert(raw[t.crossing][(t.slot + 3) % 4]);
  }
  FaceData fd;
  fd.outer = 0;
  std::map<int, int> renum;
  int next = 1;
  for (int f = 0; f < nf; ++f) renum[f] = outer_raw.count(f) ? 0 : next++;
  fd.corner.resize(nc);
  for (int c = 0; c < nc; ++c)
    for (int s = 0; s < 4; ++s) fd.corner[c][s] = renum[raw[c][s]];
  for (int l : d.loops) fd.loop_faces[l] = {next++, 0};
  fd.num_faces = next;
  return fd;
}

ABLabeling ab_labeling(const LinkDiagram& d, const Orientation& o) {
  FaceData fd = faces(d);
  LinkDiagram dor = reorient(d, o);
  Mask u = seifert_mask(dor);
  CrossinglessDiagram cd = resolve(dor, u);
  UnionFind reg(fd.num_faces);
  for (int c = 0; c < d.n(); ++c) {
    if (bit(u, c)) reg.unite(fd.corner[c][1], fd.corner[c][3]);
    else reg.unite(fd.corner[c][0], fd.corner[c][2]);
  }
  auto left_right = [&](int label) -> std::pair<int, int> {
    if (dor.is_loop(label)) {
      auto [in, out] = fd.loop_faces.at(label);
      size_t i = std::find(dor.loops.begin(), dor.loops.end(), label) - dor.loops.begin();
      return dor.loop_reversed[i] ? std::make_pair(out, in) : std::make_pair(in, out);
    }
    EdgeEnd t = dor.tail.at(label);
    return {fd.corner[t.crossing][t.slot], fd.corner[t.crossing][(t.slot + 3) % 4]};
  };
  std::vector<std::vector<int>> adj(fd.num_faces);
  for (int l : dor.labels()) {
    auto [a, b] = left_right(l);
    a = reg.find(a), b = reg.find(b);
    if (a == b) throw Error(ErrorCode::EmbeddingFailure, "edge with the same region on both sides");
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<int> color(fd.num_faces, -1);
  std::vector<int> queue{reg.find(fd.outer)};
  color[queue[0]] = 0;
  for (size_t q = 0; q < queue.size(); ++q) {
    int f = queue[q];
    for (int g : adj[f]) {
      if (color[g] < 0) {
        color[g] = 1 - color[f];
        queue.push_back(g);
      } else if (color[g] == color[f]) {
        throw Error(ErrorCode::EmbeddingFailure, "regions are not 2-colorable");
      }
    }
  }
  ABLabeling ab;
  ab.orientation = o;
  ab.state = u;
  ab.circles = cd.circles;
  for (const auto& circ : cd.circles) {
    int left = reg.find(left_right(circ[0]).first);
    for (int l : circ)
      if (reg.find(left_right(l).first) != left)
        throw Error(ErrorCode::EmbeddingFailure, "Seifert circle sees two regions on its left");
    if (color[left] < 0) throw Error(ErrorCode::EmbeddingFailure, "unreachable region");
    ab.labels.push_back(color[left] == 1 ? 'a' : 'b');
  }
  return ab;
}

int linking_number(const LinkDiagram& d, int i, int j) {
  int m = d.num_components();
  if (i < 0 || j < 0 || i >= m || j >= m) throw Error(ErrorCode::IndexOutOfRange, "component index out of range");
  if (i == j) throw Error(ErrorCode::SameComponent, "linking number needs two distinct components");
  int total = 0;
  for (const auto& x : d.crossings) {
    int a = d.component_of.at(x.label(x.under_in)), b = d.component_of.at(x.label(x.over_in));
    if ((a == i && b == j) || (a == j && b == i)) total += x.sign();
  }
  return total / 2;
}

} // namespace khflow
