#include "khflow/cli.hpp"

#include "khflow/cobord.hpp"
#include "khflow/complex.hpp"
#include "khflow/cube.hpp"
#include "khflow/flowcat.hpp"
#include "khflow/homology.hpp"
#include "khflow/resconf.hpp"
#include "khflow/sinv.hpp"
#include "khflow/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <sstream>

namespace khflow {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Job {
  std::string pd;
  bool has_pd = false;
  std::string input;
  std::string coeffs;
  std::string sign = "standard";
  std::string frobenius = "1,0";
  std::string basis = "1x";
  std::string out;
  std::string script;
  std::string suite = "all";
  std::string stage = "xy";
  std::string what = "complex";
  int n = 0;
  int max_crossings = 8;
  bool detail = false;
};

LinkDiagram load_diagram(const Job& j) {
  bool file = !j.input.empty();
  if (j.has_pd == file) throw UsageError("give exactly one of --pd or an input file");
  return parse_pd(file ? read_text_file(j.input) : j.pd);
}

SignAssignment load_sign(const Job& j, int n) {
  if (j.sign == "standard") return standard_sign(n);
  if (j.sign.rfind("file:", 0) != 0) throw UsageError("--sign must be standard or file:<path>");
  auto s = parse_sign_json(read_text_file(j.sign.substr(5)));
  if (s.n != n) throw Error(ErrorCode::DimensionMismatch, "sign assignment has n=" + std::to_string(s.n) + ", diagram has " + std::to_string(n) + " crossings");
  if (!verify_sign(s)) throw Error(ErrorCode::NotASignAssignment, "delta s is not 1 on every face");
  return s;
}

FrobeniusSpec load_frobenius(const Job& j) {
  auto comma = j.frobenius.find(',');
  if (comma == std::string::npos) throw UsageError("--frobenius takes h,t");
  int h = 0, t = 0;
  try {
    h = std::stoi(j.frobenius.substr(0, comma));
    t = std::stoi(j.frobenius.substr(comma + 1));
  } catch (const std::exception&) {
    throw UsageError("--frobenius takes two integers h,t");
  }
  Basis b = j.basis == "xy" ? Basis::XY : Basis::OneX;
  return frobenius_spec(h, t, b);
}

Coeffs load_coeffs(const Job& j, Coeffs dflt) {
  if (j.coeffs.empty()) return dflt;
  try {
    return parse_coeffs(j.coeffs);
  } catch (const std::exception&) {
    throw UsageError("--coeffs must be one of Z, Q, F2, F3");
  }
}

GradedChainComplex load_complex(const Job& j, const LinkDiagram& d) {
  return khovanov_complex(d, load_frobenius(j), load_sign(j, d.n()));
}

std::string orientation_string(const Orientation& o) {
  std::string s;
  for (bool b : o) s += b ? '-' : '+';
  return s.empty() ? "()" : s;
}

std::string census(const FlowCategory1& c) {
  std::ostringstream os;
  auto alive = c.alive_objects();
  std::map<int, int> by_gr;
  for (int x : alive) by_gr[c.objects[x].gr]++;
  int circles = 0, intervals = 0;
  for (const auto& [k, comps] : c.moduli1)
    for (const auto& comp : comps) (comp.circle ? circles : intervals)++;
  os << "objects " << alive.size() << "\n";
  for (const auto& [g, k] : by_gr) os << "  grading " << g << ": " << k << "\n";
  os << "points " << c.total_points() << "\n";
  os << "intervals " << intervals << "\n";
  os << "circles " << circles << "\n";
  os << "isolated " << isolated_objects(c).size() << "\n";
  std::string bad = c.check_invariants();
  os << "invariants " << (bad.empty() ? "ok" : bad) << "\n";
  return os.str();
}

FlowCategory1 build_stage(const Job& j, const LinkDiagram& d) {
  auto xy = xy_flow_category(ComplexInput{associated_config(d), d.n_plus, d.n_minus}, load_sign(j, d.n()));
  if (j.stage == "xy") return xy;
  auto bn = cubic_handle_slides(xy);
  if (j.stage == "bn") return bn;
  return eliminate_quantum_increasing(bn);
}

std::string diagram_json(const LinkDiagram& d) {
  nlohmann::json j;
  j["schema"] = 1;
  j["kind"] = "diagram";
  j["pd"] = to_tuples(d);
  j["components"] = d.components;
  j["signs"] = d.signs;
  j["n_plus"] = d.n_plus;
  j["n_minus"] = d.n_minus;
  return j.dump(2) + "\n";
}

std::string homology_json(const HomologySummary& h) {
  nlohmann::json j;
  j["schema"] = 1;
  j["kind"] = "homology";
  j["coefficients"] = coeffs_name(h.coeffs);
  j["groups"] = nlohmann::json::array();
  for (const auto& [deg, g] : h.groups) {
    if (!g.rank && g.torsion.empty()) continue;
    std::vector<std::string> tors;
    for (const auto& t : g.torsion) tors.push_back(t.get_str());
    j["groups"].push_back({{"h", deg}, {"rank", g.rank}, {"torsion", tors}});
  }
  if (h.has_bigraded) {
    j["bigraded"] = nlohmann::json::array();
    for (const auto& [key, g] : h.bigraded) {
      if (!g.rank && g.torsion.empty()) continue;
      std::vector<std::string> tors;
      for (const auto& t : g.torsion) tors.push_back(t.get_str());
      j["bigraded"].push_back({{"h", key.first}, {"q", key.second}, {"rank", g.rank}, {"torsion", tors}});
    }
  }
  return j.dump(2) + "\n";
}

std::string canonical_text(const LinkDiagram& d) {
  std::ostringstream os;
  for (const auto& c : canonical_cycles(d))
    os << "orientation " << orientation_string(c.orientation) << " gr_h " << c.gr_h << " gr_q " << c.gr_q << " predicted " << canonical_degree_formula(d, c.orientation)
       << " terms " << c.alpha.size() << "\n";
  return os.str();
}

std::string cobordism_text(const Cobordism& f) {
  std::ostringstream os;
  os << "source " << to_pd_text(f.source) << "\n";
  os << "target " << to_pd_text(f.target) << "\n";
  for (const auto& st : f.steps) os << "step " << st.move.text() << " -> " << to_pd_text(st.target) << "\n";
  os << "euler characteristic " << f.euler_characteristic() << "\n";
  os << "chain map " << (is_chain_map(f.src, f.tgt, f.map) ? "ok" : "bad") << "\n";
  try {
    for (char a : {'a', 'b'})
      for (char b : {'a', 'b'}) os << "degree " << (a == 'a' ? "alpha" : "beta") << " -> " << (b == 'a' ? "alpha" : "beta") << " " << canonical_degree(f, a, b) << "\n";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotConnectedCobordism) throw;
    os << "degrees unavailable: " << e.what() << "\n";
  }
  return os.str();
}

int execute(const std::string& cmd, const Job& j, std::ostream& out, std::ostream& err) {
  std::ostringstream os;
  int code = 0;
  if (cmd == "complex") {
    auto d = load_diagram(j);
    os << complex_to_text(load_complex(j, d));
  } else if (cmd == "homology") {
    auto d = load_diagram(j);
    os << format_homology(homology(load_complex(j, d), load_coeffs(j, Coeffs::Z)));
  } else if (cmd == "s") {
    auto d = load_diagram(j);
    auto k = load_coeffs(j, Coeffs::Q);
    if (!is_field(k)) throw UsageError("s needs a field: Q, F2 or F3");
    auto s = s_invariant(d, k);
    os << s.s << "\n";
    if (j.detail) os << "s_min " << s.s_min << "\ns_max " << s.s_max << "\ngr_alpha " << s.gr_alpha << "\ngr_beta " << s.gr_beta << "\n";
  } else if (cmd == "canonical") {
    auto d = load_diagram(j);
    if (j.script.empty()) os << canonical_text(d);
    else os << cobordism_text(cobordism_map(d, parse_cobordism_script(read_text_file(j.script))));
  } else if (cmd == "flowcat") {
    auto d = load_diagram(j);
    os << census(build_stage(j, d));
  } else if (cmd == "moves") {
    if (j.script.empty()) throw UsageError("moves needs --script");
    auto d = load_diagram(j);
    auto c = build_stage(j, d);
    auto h0 = homology(c.associated_complex(), Coeffs::Z);
    auto moves = parse_moves(read_text_file(j.script), c);
    for (const auto& m : moves) {
      c = apply_move(c, m);
      os << (m.kind == Move::Cancel ? "cancel " : m.kind == Move::Slide ? "slide " : "whitney ") << c.objects[m.x].name << " " << c.objects[m.y].name;
      if (m.kind == Move::Slide) os << " " << (m.epsilon > 0 ? "+1" : "-1");
      if (m.kind == Move::Whitney) os << " " << m.p << " " << m.q;
      os << "\n";
    }
    os << census(c);
    auto h1 = homology(c.associated_complex(), Coeffs::Z);
    bool same = true;
    for (const auto& [deg, g] : h0.groups) {
      auto it = h1.groups.find(deg);
      HomologyGroup z;
      same = same && (it == h1.groups.end() ? z : it->second) == g;
    }
    for (const auto& [deg, g] : h1.groups) {
      auto it = h0.groups.find(deg);
      HomologyGroup z;
      same = same && (it == h0.groups.end() ? z : it->second) == g;
    }
    os << "homology " << (same ? "unchanged" : "changed") << "\n";
    if (!same) code = 1;
  } else if (cmd == "verify") {
    VerifyOptions opt;
    opt.n = j.n;
    opt.max_crossings = j.max_crossings;
    std::vector<std::string> names;
    if (j.suite == "all") names = suite_names();
    else {
      auto all = suite_names();
      if (std::find(all.begin(), all.end(), j.suite) == all.end()) throw UsageError("unknown suite " + j.suite);
      names = {j.suite};
    }
    for (const auto& name : names) {
      auto r = run_suite(name, opt);
      os << (r.pass ? "PASS " : "FAIL ") << name << "\n";
      for (const auto& line : r.details) os << "  " << line << "\n";
      if (!r.pass) code = 1;
    }
  } else if (cmd == "export") {
    if (j.what == "sign" || j.what == "frame") {
      if (j.n <= 0) throw UsageError("export --what " + j.what + " needs --n");
      os << (j.what == "sign" ? sign_to_json(standard_sign(j.n)) : frame_to_json(standard_frame(j.n))) << "\n";
    } else {
      auto d = load_diagram(j);
      if (j.what == "diagram") os << diagram_json(d);
      else if (j.what == "complex") os << complex_to_json(load_complex(j, d)) << "\n";
      else if (j.what == "homology") os << homology_json(homology(load_complex(j, d), load_coeffs(j, Coeffs::Z)));
      else if (j.what == "config") os << config_to_json(associated_config(d)) << "\n";
      else if (j.what == "flowcat") os << flowcat_to_json(build_stage(j, d)) << "\n";
      else if (j.what == "cobordism") {
        if (j.script.empty()) throw UsageError("export --what cobordism needs --script");
        os << cobordism_to_json(cobordism_map(d, parse_cobordism_script(read_text_file(j.script)))) << "\n";
      } else throw UsageError("unknown export kind " + j.what);
    }
  }
  if (j.out.empty()) out << os.str();
  else {
    std::ofstream f(j.out);
    if (!f) throw Error(ErrorCode::Io, "cannot write " + j.out);
    f << os.str();
  }
  (void)err;
  return code;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bar-Natan homology and flow categories"};
  app.require_subcommand(1, 1);
  Job j;
  auto add_input = [&](CLI::App* s) {
    s->add_option("--pd", j.pd, "inline PD code or JSON");
    s->add_option("input", j.input, "file holding a PD code or JSON");
  };
  auto add_sign = [&](CLI::App* s) { s->add_option("--sign", j.sign, "standard or file:<path>"); };
  auto add_coeffs = [&](CLI::App* s) { s->add_option("--coeffs", j.coeffs, "Z, Q, F2 or F3"); };
  auto add_out = [&](CLI::App* s) { s->add_option("--out", j.out, "write output here"); };
  auto add_frob = [&](CLI::App* s) {
    s->add_option("--frobenius", j.frobenius, "h,t of the Frobenius algebra (default 1,0)");
    s->add_option("--basis", j.basis, "1x or xy")->check(CLI::IsMember({"1x", "xy"}));
  };
  auto add_stage = [&](CLI::App* s) { s->add_option("--stage", j.stage, "xy, bn or eliminated")->check(CLI::IsMember({"xy", "bn", "eliminated"})); };

  std::map<std::string, CLI::App*> subs;
  auto sub = [&](const std::string& name, const std::string& help) { return subs[name] = app.add_subcommand(name, help); };

  auto* c = sub("complex", "print the chain complex");
  add_input(c), add_sign(c), add_frob(c), add_out(c);
  auto* h = sub("homology", "print homology");
  add_input(h), add_sign(h), add_frob(h), add_coeffs(h), add_out(h);
  auto* s = sub("s", "print the s-invariant");
  add_input(s), add_coeffs(s), add_out(s);
  s->add_flag("--detail", j.detail, "also print s_min, s_max and the gradings");
  auto* k = sub("canonical", "canonical classes, or canonical degrees of a cobordism");
  add_input(k), add_out(k);
  k->add_option("--script", j.script, "cobordism script");
  auto* f = sub("flowcat", "flow category census");
  add_input(f), add_sign(f), add_stage(f), add_out(f);
  auto* m = sub("moves", "apply a move script to a flow category");
  add_input(m), add_sign(m), add_stage(m), add_out(m);
  m->add_option("--script", j.script, "moves script")->required();
  auto* v = sub("verify", "run verification suites");
  v->add_option("--suite", j.suite, "suite name or all");
  v->add_option("--n", j.n, "cube dimension")->check(CLI::Range(1, 12));
  v->add_option("--max-crossings", j.max_crossings, "skip larger corpus diagrams")->check(CLI::NonNegativeNumber);
  add_out(v);
  auto* e = sub("export", "JSON export");
  add_input(e), add_sign(e), add_frob(e), add_coeffs(e), add_stage(e), add_out(e);
  e->add_option("--what", j.what, "diagram, complex, homology, config, flowcat, cobordism, sign or frame");
  e->add_option("--script", j.script, "cobordism script");
  e->add_option("--n", j.n, "cube dimension for sign and frame")->check(CLI::Range(1, 12));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& pe) {
    err << "usage error: " << pe.what() << "\n";
    for (const auto* a : app.get_subcommands()) err << a->help();
    if (app.get_subcommands().empty()) err << app.help();
    return 2;
  }
  auto* chosen = app.get_subcommands().front();
  if (auto* opt = chosen->get_option_no_throw("--pd")) j.has_pd = opt->count() > 0;
  try {
    return execute(chosen->get_name(), j, out, err);
  } catch (const UsageError& u) {
    err << "usage error: " << u.what() << "\n";
    return 2;
  } catch (const Error& x) {
    err << "error: " << x.what() << "\n";
    return 1;
  }
}

} // namespace khflow
