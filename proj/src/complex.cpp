#include "khflow/complex.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace khflow {

FrobeniusSpec frobenius_spec(int h, int t, Basis basis) {
  FrobeniusSpec s;
  s.h = h;
  s.t = t;
  s.basis = basis;
  for (auto& a : s.m)
    for (auto& b : a) b = {0, 0};
  for (auto& a : s.delta)
    for (auto& b : a) b = {0, 0};
  if (basis == Basis::OneX) {
    s.m[1][1][1] = 1;
    s.m[1][0][0] = 1;
    s.m[0][1][0] = 1;
    s.m[0][0][0] = h;
    s.m[0][0][1] = t;
    s.delta[1][0][1] = 1;
    s.delta[1][1][0] = 1;
    s.delta[1][1][1] = -h;
    s.delta[0][0][0] = 1;
    s.delta[0][1][1] = t;
    s.c = 0;
    return s;
  }
  long disc = long(h) * h + 4L * t;
  long root = disc >= 0 ? std::lround(std::sqrt(double(disc))) : -1;
  if (disc <= 0 || root * root != disc || (h + root) % 2 != 0)
    throw Error(ErrorCode::NotDiagonalizable, "X^2 - hX - t has no distinct integer roots");
  s.u = int((h - root) / 2);
  s.v = int((h + root) / 2);
  s.c = s.v - s.u;
  s.m[0][0][0] = s.c;
  s.m[1][1][1] = -s.c;
  s.delta[0][0][0] = 1;
  s.delta[1][1][1] = 1;
  return s;
}

bool frobenius_relation_holds(const FrobeniusSpec& s) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
          Int lhs = 0, rhs1 = 0, rhs2 = 0;
          for (int l = 0; l < 2; ++l) lhs += s.m[i][j][l] * s.delta[l][p][q];
          for (int r = 0; r < 2; ++r) {
            rhs1 += s.delta[i][p][r] * s.m[r][j][q];
            rhs2 += s.delta[j][r][q] * s.m[i][r][p];
          }
          if (lhs != rhs1 || lhs != rhs2) return false;
        }
  return true;
}

int quantum_grading(const Generator& g, int n_plus, int n_minus) {
  return popcount(g.state) + 2 * popcount(g.labels) - g.r + n_plus - 2 * n_minus;
}

namespace {

struct Skeleton {
  int n = 0;
  std::vector<Mask> states;
  std::vector<int> offset;  // indexed by mask
  std::map<Mask, std::vector<std::vector<int>>> circles;
};

Skeleton skeleton(const ComplexInput& in, GradedChainComplex& c, char basis) {
  Skeleton sk;
  int n = in.config.index();
  sk.n = n;
  for (Mask u = 0; u < (Mask(1) << n); ++u) sk.states.push_back(u);
  std::sort(sk.states.begin(), sk.states.end(), [&](Mask a, Mask b) {
    if (popcount(a) != popcount(b)) return popcount(a) < popcount(b);
    return lex_key(a, n) < lex_key(b, n);
  });
  sk.offset.assign(size_t(1) << n, 0);
  c.n = n;
  c.n_plus = in.n_plus;
  c.n_minus = in.n_minus;
  c.basis = basis;
  c.direction = 1;
  for (Mask u : sk.states) {
    auto circ = in.config.circles_at(u);
    int r = int(circ.size());
    sk.offset[u] = c.size();
    std::vector<Mask> labs;
    for (Mask v = 0; v < (Mask(1) << r); ++v) labs.push_back(v);
    std::sort(labs.begin(), labs.end(), [&](Mask a, Mask b) { return lex_key(a, r) < lex_key(b, r); });
    for (Mask v : labs) {
      Generator g{u, v, r, popcount(u) - in.n_minus, 0};
      g.gr_q = quantum_grading(g, in.n_plus, in.n_minus);
      c.gens.push_back(g);
    }
    sk.circles[u] = std::move(circ);
  }
  c.d.resize(c.size());
  c.reindex();
  return sk;
}

int gen_index(const Skeleton& sk, Mask u, Mask v, int r) { return sk.offset[u] + int(lex_key(v, r)); }

Mask carried(const EdgeTransition& t, Mask x) {
  Mask base = 0;
  for (int k = 0; k < int(t.carry.size()); ++k)
    if (t.carry[k] >= 0 && bit(x, k)) base |= Mask(1) << t.carry[k];
  return base;
}

} // namespace

GradedChainComplex khovanov_complex(const ComplexInput& in, const FrobeniusSpec& spec, const SignAssignment& s) {
  if (s.n != in.config.index()) throw Error(ErrorCode::DimensionMismatch, "sign assignment dimension differs from crossing count");
  GradedChainComplex c;
  Skeleton sk = skeleton(in, c, spec.basis == Basis::OneX ? '1' : 'y');
  c.has_q = spec.basis == Basis::OneX;
  int n = sk.n;
  for (int g = 0; g < c.size(); ++g) {
    const Generator& x = c.gens[g];
    for (int i = 0; i < n; ++i) {
      if (bit(x.state, i)) continue;
      Mask w = x.state | (Mask(1) << i);
      const auto& cw = sk.circles.at(w);
      EdgeTransition t = transition(sk.circles.at(x.state), cw, in.config.arcs[i]);
      int sg = sign_of(s.at(i, x.state));
      Mask base = carried(t, x.labels);
      int rw = int(cw.size());
      if (t.merge) {
        for (int l = 0; l < 2; ++l) {
          const Int& coef = spec.m[bit(x.labels, t.a)][bit(x.labels, t.b)][l];
          if (coef != 0) c.d[g].push_back({gen_index(sk, w, base | (Mask(l) << t.m), rw), coef * sg});
        }
      } else {
        for (int p = 0; p < 2; ++p)
          for (int q = 0; q < 2; ++q) {
            const Int& coef = spec.delta[bit(x.labels, t.a)][p][q];
            if (coef != 0)
              c.d[g].push_back({gen_index(sk, w, base | (Mask(p) << t.p) | (Mask(q) << t.q), rw), coef * sg});
          }
      }
    }
    std::sort(c.d[g].begin(), c.d[g].end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  return c;
}

GradedChainComplex khovanov_complex(const LinkDiagram& d, const FrobeniusSpec& spec, const SignAssignment& s) {
  return khovanov_complex(ComplexInput{associated_config(d), d.n_plus, d.n_minus}, spec, s);
}

GradedChainComplex khovanov_complex(const LinkDiagram& d, const FrobeniusSpec& spec) {
  return khovanov_complex(d, spec, standard_sign(d.n()));
}

GradedChainComplex bar_natan_complex(const LinkDiagram& d) { return khovanov_complex(d, frobenius_spec(1, 0, Basis::OneX)); }

std::vector<XYBlock> xy_blocks(const ComplexInput& in, const SignAssignment& s) {
  if (s.n != in.config.index()) throw Error(ErrorCode::DimensionMismatch, "sign assignment dimension differs from crossing count");
  GradedChainComplex c;
  Skeleton sk = skeleton(in, c, 'y');
  std::vector<XYBlock> out;
  for (const auto& b : cube_decomposition(in.config)) {
    const auto& base = sk.circles.at(b.min_state);
    auto labels_at = [&](Mask w) {
      const auto& cur = sk.circles.at(b.embed(w));
      Mask lab = 0;
      for (int i = 0; i < int(cur.size()); ++i)
        for (int j = 0; j < int(base.size()); ++j)
          if (std::binary_search(base[j].begin(), base[j].end(), cur[i][0])) {
            if (bit(b.min_labels, j)) lab |= Mask(1) << i;
            break;
          }
      return lab;
    };
    // t(w, j) = 1 iff the edge merges two circles labeled Y
    auto adjust = [&](Mask w, int j) {
      Mask u = b.embed(w);
      const auto& cu = sk.circles.at(u);
      EdgeTransition t = transition(cu, sk.circles.at(u | (Mask(1) << b.arcs[j])), in.config.arcs[b.arcs[j]]);
      return (t.merge && bit(labels_at(w), t.a)) ? 1 : 0;
    };
    for (int j = 0; j < b.k; ++j)
      for (int l = j + 1; l < b.k; ++l)
        for (Mask w = 0; w < (Mask(1) << b.k); ++w) {
          if (bit(w, j) || bit(w, l)) continue;
          int sum = adjust(w, j) + adjust(w | (Mask(1) << l), j) + adjust(w, l) + adjust(w | (Mask(1) << j), l);
          if (sum % 2) throw Error(ErrorCode::NotASignAssignment, "sign adjustment is not a cocycle");
        }
    XYBlock xb;
    xb.block = b;
    xb.sign = SignAssignment(b.k);
    for (Mask w = 0; w < (Mask(1) << b.k); ++w) {
      Mask u = b.embed(w);
      xb.gens.push_back(gen_index(sk, u, labels_at(w), int(sk.circles.at(u).size())));
      for (int j = 0; j < b.k; ++j)
        if (!bit(w, j)) xb.sign.set(j, w, (s.at(b.arcs[j], u) + adjust(w, j)) & 1);
    }
    out.push_back(std::move(xb));
  }
  return out;
}

GradedChainComplex xy_complex(const ComplexInput& in, const SignAssignment& s) {
  auto blocks = xy_blocks(in, s);
  GradedChainComplex c;
  skeleton(in, c, 'y');
  c.has_q = false;
  for (const auto& xb : blocks)
    for (Mask w = 0; w < (Mask(1) << xb.block.k); ++w)
      for (int j = 0; j < xb.block.k; ++j)
        if (!bit(w, j)) c.d[xb.gens[w]].push_back({xb.gens[w | (Mask(1) << j)], Int(sign_of(xb.sign.at(j, w)))});
  for (auto& row : c.d)
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return c;
}

GradedChainComplex xy_complex(const LinkDiagram& d, const SignAssignment& s) {
  return xy_complex(ComplexInput{associated_config(d), d.n_plus, d.n_minus}, s);
}

GradedChainComplex xy_complex(const LinkDiagram& d) { return xy_complex(d, standard_sign(d.n())); }

BasisChange basis_change(const GradedChainComplex& xy, const GradedChainComplex& bn) {
  if (xy.size() != bn.size()) throw Error(ErrorCode::DimensionMismatch, "complexes differ in size");
  BasisChange out;
  out.forward.src_size = out.forward.tgt_size = xy.size();
  out.inverse = out.forward;
  out.forward.f.resize(xy.size());
  out.inverse.f.resize(xy.size());
  for (int g = 0; g < xy.size(); ++g) {
    const Generator& x = xy.gens[g];
    // subsets of the Y (resp. 1) positions
    for (Mask z = x.labels;; z = (z - 1) & x.labels) {
      out.forward.f[g].push_back({bn.index_of(x.state, z), Int(sign_of(popcount(z)))});
      out.inverse.f[bn.index_of(x.state, x.labels)].push_back({xy.index_of(x.state, z), Int(sign_of(popcount(z)))});
      if (z == 0) break;
    }
  }
  return out;
}

std::string complex_to_json(const GradedChainComplex& c) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["kind"] = "chain_complex";
  j["basis"] = c.basis == 'y' ? "XY" : (c.basis == '1' ? "1X" : "cube");
  j["crossings"] = c.n;
  j["n_plus"] = c.n_plus;
  j["n_minus"] = c.n_minus;
  j["direction"] = c.direction;
  auto by = c.by_degree();
  std::map<int, int> pos;
  nlohmann::ordered_json gens = nlohmann::ordered_json::array();
  for (const auto& [deg, list] : by)
    for (size_t i = 0; i < list.size(); ++i) pos[list[i]] = int(i);
  for (int g = 0; g < c.size(); ++g) {
    nlohmann::ordered_json x;
    x["name"] = c.name(g);
    x["gr_h"] = c.gens[g].gr_h;
    if (c.has_q) x["gr_q"] = c.gens[g].gr_q;
    gens.push_back(x);
  }
  j["generators"] = gens;
  nlohmann::ordered_json mats = nlohmann::ordered_json::array();
  for (const auto& [deg, list] : by) {
    auto tgt = by.find(deg + c.direction);
    nlohmann::ordered_json m;
    m["from_degree"] = deg;
    m["rows"] = tgt == by.end() ? 0 : tgt->second.size();
    m["cols"] = list.size();
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (size_t col = 0; col < list.size(); ++col)
      for (const auto& [t, v] : c.d[list[col]]) entries.push_back({pos[t], col, v.get_si()});
    m["entries"] = entries;
    mats.push_back(m);
  }
  j["matrices"] = mats;
  return j.dump(2);
}

std::string complex_to_text(const GradedChainComplex& c) {
  std::ostringstream os;
  auto by = c.by_degree();
  std::map<int, int> pos;
  for (const auto& [deg, list] : by)
    for (size_t i = 0; i < list.size(); ++i) pos[list[i]] = int(i);
  os << "complex " << by.size() << " degrees, direction " << c.direction << "\n";
  for (const auto& [deg, list] : by) os << "degree " << deg << " rank " << list.size() << "\n";
  for (const auto& [deg, list] : by)
    for (size_t col = 0; col < list.size(); ++col)
      for (const auto& [t, v] : c.d[list[col]]) os << "d " << deg << " " << pos[t] << " " << col << " " << v.get_str() << "\n";
  return os.str();
}

} // namespace khflow
