#include "khflow/verify.hpp"

#include "khflow/cobord.hpp"
#include "khflow/complex.hpp"
#include "khflow/cube.hpp"
#include "khflow/flowcat.hpp"
#include "khflow/homology.hpp"
#include "khflow/resconf.hpp"
#include "khflow/sinv.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

namespace fs = std::filesystem;

namespace khflow {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string default_data_dir() {
  if (const char* env = std::getenv("KHFLOW_DATA")) return env;
#ifdef KHFLOW_DATA_DIR
  return KHFLOW_DATA_DIR;
#else
  return "data";
#endif
}

std::vector<CorpusEntry> load_corpus(const std::string& data_dir) {
  std::vector<fs::path> files;
  fs::path dir = fs::path(data_dir) / "corpus";
  if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, "no corpus directory at " + dir.string());
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".pd") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<CorpusEntry> out;
  for (const auto& p : files) {
    CorpusEntry c;
    c.name = p.stem().string();
    c.pd = read_text_file(p.string());
    while (!c.pd.empty() && std::isspace(static_cast<unsigned char>(c.pd.back()))) c.pd.pop_back();
    c.diagram = parse_pd(c.pd);
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

std::map<int, HomologyGroup> nonzero(const std::map<int, HomologyGroup>& g) {
  std::map<int, HomologyGroup> out;
  for (const auto& [k, v] : g)
    if (v.rank || !v.torsion.empty()) out[k] = v;
  return out;
}

std::map<std::pair<int, int>, HomologyGroup> nonzero(const std::map<std::pair<int, int>, HomologyGroup>& g) {
  std::map<std::pair<int, int>, HomologyGroup> out;
  for (const auto& [k, v] : g)
    if (v.rank || !v.torsion.empty()) out[k] = v;
  return out;
}

struct Ctx {
  const VerifyOptions& opt;
  CheckResult& res;
  void fail(const std::string& s) {
    res.pass = false;
    res.details.push_back("FAIL " + s);
  }
  void note(const std::string& s) { res.details.push_back(s); }
  void expect(bool ok, const std::string& s) {
    if (ok) note(s);
    else fail(s);
  }
  std::vector<CorpusEntry> corpus(int cap) const {
    std::vector<CorpusEntry> out;
    for (auto& c : load_corpus(opt.data_dir))
      if (c.diagram.n() <= cap) out.push_back(std::move(c));
    return out;
  }
  std::vector<CorpusEntry> corpus() const { return corpus(opt.max_crossings); }
  LinkDiagram diagram(const std::string& name) const {
    for (auto& c : load_corpus(opt.data_dir))
      if (c.name == name) return c.diagram;
    throw Error(ErrorCode::Io, "no corpus diagram named " + name);
  }
};

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  os << '{';
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << '}';
  return os.str();
}

void structure(Ctx& c) {
  for (const auto& e : c.corpus()) {
    const auto& d = e.diagram;
    auto h = homology(bar_natan_complex(d), Coeffs::Z);
    std::vector<int> got, want;
    for (const auto& [deg, g] : h.groups)
      for (int i = 0; i < g.rank; ++i) got.push_back(deg);
    for (const auto& o : all_orientations(d)) want.push_back(canonical_degree_formula(d, o));
    std::sort(want.begin(), want.end());
    bool ok = h.torsion_free() && h.total_rank() == (1 << d.num_components()) && got == want;
    c.expect(ok, e.name + ": rank " + std::to_string(h.total_rank()) + " degrees " + join(got) + " predicted " + join(want));
  }
}

const std::map<std::string, int> EXPECTED_S = {
    {"unknot", 0}, {"trefoil-right", 2}, {"trefoil-left", -2}, {"figure-eight", 0}, {"t25", 4}, {"t34", 6},
};

void s_values(Ctx& c) {
  for (const auto& e : c.corpus()) {
    auto it = EXPECTED_S.find(e.name);
    if (it == EXPECTED_S.end()) continue;
    for (Coeffs k : {Coeffs::Q, Coeffs::F2}) {
      int s = s_invariant(e.diagram, k).s;
      c.expect(s == it->second, e.name + " over " + coeffs_name(k) + ": s = " + std::to_string(s) + " expected " + std::to_string(it->second));
    }
  }
}

void s_spread(Ctx& c) {
  for (const auto& e : c.corpus()) {
    if (e.diagram.num_components() != 1) continue;
    for (Coeffs k : {Coeffs::Q, Coeffs::F2, Coeffs::F3}) {
      auto s = s_invariant(e.diagram, k);
      c.expect(s.s_max - s.s_min == 2, e.name + " over " + coeffs_name(k) + ": s_min " + std::to_string(s.s_min) + " s_max " + std::to_string(s.s_max));
    }
  }
}

std::vector<int> range(int lo, int hi, int only) {
  if (only > 0) return {only};
  std::vector<int> v;
  for (int i = lo; i <= hi; ++i) v.push_back(i);
  return v;
}

void frames(Ctx& c) {
  for (int n : range(1, 8, c.opt.n))
    c.expect(verify_sign(standard_sign(n)), "n=" + std::to_string(n) + ": delta of the standard sign is 1 on " + std::to_string(face_count(n)) + " faces");
  for (int n : range(1, 6, c.opt.n)) {
    bool ok = verify_frame_pair(standard_sign(n), standard_frame(n));
    c.expect(ok, "n=" + std::to_string(n) + ": standard pair passes on " + std::to_string(face_count(n)) + " faces, " + std::to_string(edge_count(n)) + " edges");
  }
  std::mt19937_64 rng(20240611);
  for (int n : c.opt.n > 0 ? std::vector<int>{c.opt.n} : std::vector<int>{4, 5}) {
    int good = 0;
    for (int i = 0; i < 100; ++i) {
      auto s = random_sign(n, rng);
      good += verify_sign(s) && verify_frame_pair(s, frame_from_sign(s));
    }
    c.expect(good == 100, "n=" + std::to_string(n) + ": frame_from_sign passes for " + std::to_string(good) + "/100 random sign assignments");
  }
}

void cube(Ctx& c) {
  std::mt19937_64 rng(7);
  for (int n : range(1, 6, c.opt.n)) {
    bool ok = true;
    for (int i = 0; i < 4 && ok; ++i) {
      auto s = i == 0 ? standard_sign(n) : random_sign(n, rng);
      auto h = homology(cube_complex(n, s), Coeffs::Z);
      ok = h.total_rank() == 0 && h.torsion_free();
    }
    c.expect(ok, "n=" + std::to_string(n) + ": cube complex acyclic for the standard and 3 random sign assignments");
  }
  for (int n : range(0, 5, c.opt.n)) {
    auto s = standard_sign(n);
    auto sk = cube_skeleton(n, s, frame_from_sign(s));
    std::string bad = sk.check_invariants();
    c.expect(bad.empty(), "n=" + std::to_string(n) + ": skeleton boundary matching " + (bad.empty() ? "ok" : bad));
    if (n == 0) continue;
    bool side = true;
    MoveLog log;
    auto out = cube_contract(sk, n, &log, &side);
    bool ok = !side && out.alive_objects().empty() && log.replay(sk).alive_objects().empty();
    c.expect(ok, "n=" + std::to_string(n) + ": contraction by " + std::to_string(log.moves.size()) + " cancellations, side effects " + (side ? "yes" : "none"));
  }
}

void basis(Ctx& c) {
  for (const auto& e : c.corpus()) {
    auto xy = xy_complex(e.diagram);
    auto bn = bar_natan_complex(e.diagram);
    auto P = basis_change(xy, bn);
    bool ok = is_chain_map(xy, bn, P.forward) && is_chain_map(bn, xy, P.inverse) &&
              maps_equal(compose(P.inverse, P.forward), identity_map(xy)) && maps_equal(compose(P.forward, P.inverse), identity_map(bn));
    c.expect(ok, e.name + ": " + std::to_string(bn.size()) + " generators, XY differential conjugates to the 1X one");
  }
}

void oracles(Ctx& c) {
  for (const auto& e : c.corpus(std::min(6, c.opt.max_crossings))) {
    auto xy = xy_flow_category(e.diagram);
    auto slid = cubic_handle_slides(xy);
    auto o0 = chains_oracle_0dim(xy);
    std::map<ObjectPair, std::vector<int>> got0;
    for (const auto& [k, pts] : slid.moduli0)
      for (const auto& p : pts) got0[k].push_back(p.sign);
    for (auto& kv : got0) std::sort(kv.second.begin(), kv.second.end());
    auto o1 = chains_oracle_1dim(xy);
    std::map<ObjectPair, long> got1;
    for (const auto& [k, comps] : slid.moduli1)
      if (!comps.empty()) got1[k] = long(comps.size());
    c.expect(got0 == o0 && got1 == o1, e.name + ": " + std::to_string(slid.total_points()) + " points, " + std::to_string(slid.total_components()) + " components match the chain counts");
  }
}

int object_at(const FlowCategory1& f, Mask state, Mask labels) {
  for (const auto& o : f.objects)
    if (o.alive && o.state == state && o.labels == labels) return o.id;
  return -1;
}

void examples(Ctx& c) {
  {
    auto slid = cubic_handle_slides(xy_flow_category(ladybug_config()));
    int x = object_at(slid, 3, 0), y = object_at(slid, 0, 1);
    size_t before = slid.components(x, y).size();
    MoveLog log;
    auto el = eliminate_quantum_increasing(slid, &log);
    const auto& comps = el.components(x, y);
    bool intervals = std::none_of(comps.begin(), comps.end(), [](const FlowComponent& k) { return k.circle; });
    c.expect(before == 6, "ladybug: " + std::to_string(before) + " components before the Whitney tricks");
    c.expect(comps.size() == 2 && intervals, "ladybug: " + std::to_string(comps.size()) + (intervals ? " intervals" : " components") + " after " + std::to_string(log.moves.size()) + " moves");
  }
  {
    auto slid = cubic_handle_slides(xy_flow_category(hopf_config()));
    int x = object_at(slid, 3, 0), y = object_at(slid, 0, 3);
    const auto& pre = slid.components(x, y);
    bool intervals = std::none_of(pre.begin(), pre.end(), [](const FlowComponent& k) { return k.circle; });
    c.expect(pre.size() == 4 && intervals, "hopf: " + std::to_string(pre.size()) + " intervals before the Whitney tricks");
    auto el = eliminate_quantum_increasing(slid);
    const auto& post = el.components(x, y);
    c.expect(post.size() == 1 && post[0].circle, "hopf: " + std::to_string(post.size()) + " component after, circle " + (post.size() == 1 && post[0].circle ? "yes" : "no"));
  }
}

void elimination(Ctx& c) {
  for (const auto& e : c.corpus()) {
    auto slid = cubic_handle_slides(xy_flow_category(e.diagram));
    FlowCategory1 el;
    try {
      el = eliminate_quantum_increasing(slid);
    } catch (const Error& err) {
      c.fail(e.name + ": " + err.what());
      continue;
    }
    int bad0 = 0, circles = 0, bad1 = 0;
    for (const auto& [k, pts] : el.moduli0)
      if (!pts.empty() && el.objects[k.first].gr_q < el.objects[k.second].gr_q) ++bad0;
    for (const auto& [k, comps] : el.moduli1) {
      const auto& x = el.objects[k.first];
      const auto& y = el.objects[k.second];
      if (x.gr - y.gr != 2 || x.gr_q >= y.gr_q) continue;
      for (const auto& comp : comps) (comp.circle ? circles : bad1)++;
    }
    bool ok = bad0 == 0 && bad1 == 0 && el.check_invariants().empty();
    c.expect(ok, e.name + ": " + std::to_string(el.alive_objects().size()) + " objects left, " + std::to_string(bad0) + " decreasing points, " +
                     std::to_string(circles) + " circles and " + std::to_string(bad1) + " intervals between increasing pairs");
  }
}

std::vector<std::string> script_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto h = line.find('#');
    if (h != std::string::npos) line.resize(h);
    if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(line);
  }
  return out;
}

void reidemeister(Ctx& c) {
  auto lines = script_lines(read_text_file(c.opt.data_dir + "/scripts/reidemeister.sites"));
  int sites = 0;
  for (const auto& line : lines) {
    std::istringstream is(line);
    std::string name;
    is >> name;
    std::string rest;
    std::getline(is, rest);
    auto d = c.diagram(name);
    if (d.n() > c.opt.max_crossings) continue;
    auto m = parse_move(rest);
    auto st = reidemeister_map(d, m);
    bool maps = is_chain_map(st.src, st.tgt, st.map) && is_chain_map(st.tgt, st.src, st.back);
    auto cone = homology(mapping_cone(st.src, st.tgt, st.map), Coeffs::Z);
    bool acyclic = cone.total_rank() == 0 && cone.torsion_free();
    auto kh = [](const LinkDiagram& x) { return homology(khovanov_complex(x, frobenius_spec(0, 0, Basis::OneX)), Coeffs::Z); };
    auto ka = kh(st.source), kb = kh(st.target);
    bool same = nonzero(ka.groups) == nonzero(kb.groups) && nonzero(ka.bigraded) == nonzero(kb.bigraded) &&
                nonzero(homology(st.src, Coeffs::Z).groups) == nonzero(homology(st.tgt, Coeffs::Z).groups);
    std::string s_note;
    if (d.num_components() == 1) {
      int sa = s_invariant(st.source, Coeffs::Q).s, sb = s_invariant(st.target, Coeffs::Q).s;
      same = same && sa == sb;
      s_note = ", s " + std::to_string(sa) + " -> " + std::to_string(sb);
    }
    c.expect(maps && acyclic && same, name + " " + m.text() + ": chain maps " + (maps ? "ok" : "bad") + ", cone " + (acyclic ? "acyclic" : "not acyclic") +
                                          ", homology " + (same ? "unchanged" : "changed") + s_note);
    ++sites;
  }
  c.expect(sites >= 5, std::to_string(sites) + " sites checked");
}

void duality(Ctx& c) {
  for (const auto& e : c.corpus()) {
    auto md = mirror_dual(e.diagram);
    bool iso = is_chain_map(md.mirror_complex, md.dual, md.phi);
    std::vector<int> hit(size_t(md.dual.size()), 0);
    for (int g = 0; g < int(md.phi.f.size()) && iso; ++g) {
      const auto& row = md.phi.f[g];
      if (row.size() != 1 || abs(row[0].second) != 1) {
        iso = false;
        break;
      }
      int t = row[0].first;
      hit[t]++;
      iso = md.mirror_complex.gens[g].gr_h == md.dual.gens[t].gr_h && md.mirror_complex.gens[g].gr_q == md.dual.gens[t].gr_q;
    }
    iso = iso && std::all_of(hit.begin(), hit.end(), [](int x) { return x == 1; });
    std::string line = e.name + ": phi " + (iso ? "is" : "is not") + " a graded chain isomorphism";
    bool ok = iso;
    if (e.diagram.num_components() == 1) {
      int s = s_invariant(e.diagram, Coeffs::Q).s, sm = s_invariant(mirror(e.diagram), Coeffs::Q).s;
      ok = ok && sm == -s;
      line += ", s " + std::to_string(s) + " and mirror " + std::to_string(sm);
    }
    c.expect(ok, line);
  }
}

void canonical(Ctx& c) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(fs::path(c.opt.data_dir) / "scripts"))
    if (e.path().extension() == ".cob") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  int done = 0;
  for (const auto& p : files) {
    std::string text = read_text_file(p.string());
    std::string name;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
      if (line.rfind("# diagram:", 0) == 0) {
        std::istringstream ls(line.substr(10));
        ls >> name;
      }
    auto d = c.diagram(name);
    if (d.n() > c.opt.max_crossings) continue;
    auto f = cobordism_map(d, parse_cobordism_script(text));
    int aa = canonical_degree(f, 'a', 'a'), ab = canonical_degree(f, 'a', 'b');
    int ba = canonical_degree(f, 'b', 'a'), bb = canonical_degree(f, 'b', 'b');
    bool ok = std::abs(aa) == 1 && std::abs(bb) == 1 && ab == 0 && ba == 0;
    std::ostringstream os;
    os << p.stem().string() << " (chi " << f.euler_characteristic() << "): aa " << aa << " ab " << ab << " ba " << ba << " bb " << bb;
    c.expect(ok, os.str());
    ++done;
  }
  c.expect(done >= 3, std::to_string(done) + " cobordisms checked");
}

const std::vector<std::pair<std::string, std::function<void(Ctx&)>>>& suites() {
  static const std::vector<std::pair<std::string, std::function<void(Ctx&)>>> s = {
      {"structure", structure},
      {"s-invariant", s_values},
      {"s-spread", s_spread},
      {"frame-assignments", frames},
      {"cube", cube},
      {"basis-change", basis},
      {"oracles", oracles},
      {"examples", examples},
      {"elimination", elimination},
      {"reidemeister", reidemeister},
      {"duality", duality},
      {"canonical-degree", canonical},
  };
  return s;
}

} // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [n, f] : suites()) out.push_back(n);
  return out;
}

CheckResult run_suite(const std::string& name, const VerifyOptions& opt) {
  CheckResult res;
  res.suite = name;
  Ctx c{opt, res};
  for (const auto& [n, f] : suites())
    if (n == name) {
      try {
        f(c);
      } catch (const Error& e) {
        c.fail(std::string("error: ") + e.what());
      }
      return res;
    }
  throw Error(ErrorCode::InvalidScript, "unknown suite " + name);
}

} // namespace khflow
