#include "khflow/homology.hpp"

#include "khflow/reduce.hpp"

#include <algorithm>
#include <sstream>

namespace khflow {

Coeffs parse_coeffs(const std::string& s) {
  if (s == "Z") return Coeffs::Z;
  if (s == "Q") return Coeffs::Q;
  if (s == "F2") return Coeffs::F2;
  if (s == "F3") return Coeffs::F3;
  throw std::invalid_argument("unknown coefficients " + s);
}

std::string coeffs_name(Coeffs k) {
  switch (k) {
  case Coeffs::Z: return "Z";
  case Coeffs::Q: return "Q";
  case Coeffs::F2: return "F2";
  case Coeffs::F3: return "F3";
  }
  return "?";
}

bool is_field(Coeffs k) { return k != Coeffs::Z; }

namespace {

DenseMatrix identity(int n) {
  DenseMatrix I(n, std::vector<Int>(n, 0));
  for (int i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

} // namespace

SmithDecomposition smith_normal_form(const DenseMatrix& A) {
  int m = int(A.size());
  int n = m ? int(A[0].size()) : 0;
  DenseMatrix D = A;
  SmithDecomposition out;
  out.U = identity(m);
  out.V = identity(n);
  auto swap_rows = [&](int a, int b) {
    std::swap(D[a], D[b]);
    std::swap(out.U[a], out.U[b]);
  };
  auto swap_cols = [&](int a, int b) {
    for (auto& row : D) std::swap(row[a], row[b]);
    for (auto& row : out.V) std::swap(row[a], row[b]);
  };
  auto add_row = [&](int dst, int src, const Int& q) {  // row_dst -= q row_src
    for (int j = 0; j < n; ++j) D[dst][j] -= q * D[src][j];
    for (int j = 0; j < m; ++j) out.U[dst][j] -= q * out.U[src][j];
  };
  auto add_col = [&](int dst, int src, const Int& q) {
    for (int i = 0; i < m; ++i) D[i][dst] -= q * D[i][src];
    for (int i = 0; i < n; ++i) out.V[i][dst] -= q * out.V[i][src];
  };
  for (int t = 0; t < std::min(m, n); ++t) {
    int pi = -1, pj = -1;
    for (int i = t; i < m; ++i)
      for (int j = t; j < n; ++j)
        if (D[i][j] != 0 && (pi < 0 || abs(D[i][j]) < abs(D[pi][pj]))) pi = i, pj = j;
    if (pi < 0) break;
    swap_rows(t, pi);
    swap_cols(t, pj);
    while (true) {
      bool clean = true;
      for (int i = t + 1; i < m; ++i)
        if (D[i][t] != 0) {
          Int q = D[i][t] / D[t][t];
          add_row(i, t, q);
          if (D[i][t] != 0) clean = false;
        }
      for (int j = t + 1; j < n; ++j)
        if (D[t][j] != 0) {
          Int q = D[t][j] / D[t][t];
          add_col(j, t, q);
          if (D[t][j] != 0) clean = false;
        }
      if (!clean) {
        int bi = t, bj = t;
        for (int i = t; i < m; ++i)
          if (D[i][t] != 0 && abs(D[i][t]) < abs(D[bi][bj])) bi = i, bj = t;
        for (int j = t; j < n; ++j)
          if (D[t][j] != 0 && abs(D[t][j]) < abs(D[bi][bj])) bi = t, bj = j;
        swap_rows(t, bi);
        swap_cols(t, bj);
        continue;
      }
      int bad = -1;
      for (int i = t + 1; i < m && bad < 0; ++i)
        for (int j = t + 1; j < n; ++j)
          if (D[i][j] % D[t][t] != 0) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      add_row(t, bad, -1);
    }
    if (D[t][t] < 0) {
      for (int j = 0; j < n; ++j) D[t][j] = -D[t][j];
      for (int j = 0; j < m; ++j) out.U[t][j] = -out.U[t][j];
    }
    out.diagonal.push_back(D[t][t]);
  }
  return out;
}

int HomologySummary::total_rank() const {
  int r = 0;
  for (const auto& kv : groups) r += kv.second.rank;
  return r;
}

bool HomologySummary::torsion_free() const {
  for (const auto& kv : groups)
    if (!kv.second.torsion.empty()) return false;
  return true;
}

namespace {

bool q_homogeneous(const GradedChainComplex& c) {
  if (!c.has_q) return false;
  for (int g = 0; g < c.size(); ++g)
    for (const auto& [t, v] : c.d[g])
      if (c.gens[t].gr_q != c.gens[g].gr_q) return false;
  return true;
}

template <class K>
HomologySummary field_homology(const GradedChainComplex& c, K k, Coeffs name, bool bigr) {
  Reducer<K> red(c, k);
  red.reduce();
  HomologySummary h;
  h.coeffs = name;
  h.has_bigraded = bigr;
  for (int d : c.degrees()) h.groups[d];
  for (int g : red.survivors()) {
    if (!red.out[g].empty() || !red.in[g].empty()) throw Error(ErrorCode::NotAComplex, "field reduction left a nonzero entry");
    h.groups[c.gens[g].gr_h].rank++;
    if (bigr) h.bigraded[{c.gens[g].gr_h, c.gens[g].gr_q}].rank++;
  }
  return h;
}

} // namespace

HomologySummary homology(const GradedChainComplex& c, Coeffs k) {
  for (int g = 0; g < c.size(); ++g)
    for (const auto& [t, v] : c.d[g])
      if (c.gens[t].gr_h != c.gens[g].gr_h + c.direction) throw Error(ErrorCode::NotAComplex, "differential has wrong degree");
  bool bigr = q_homogeneous(c);
  switch (k) {
  case Coeffs::Q: return field_homology(c, Rationals{}, k, bigr);
  case Coeffs::F2: return field_homology(c, PrimeField(2), k, bigr);
  case Coeffs::F3: return field_homology(c, PrimeField(3), k, bigr);
  case Coeffs::Z: break;
  }
  Reducer<IntegerRing> red(c, IntegerRing{});
  red.reduce();
  HomologySummary h;
  h.coeffs = Coeffs::Z;
  h.has_bigraded = bigr;
  for (int d : c.degrees()) h.groups[d];
  std::map<std::pair<int, int>, std::vector<int>> blocks;
  for (int g : red.survivors()) blocks[{c.gens[g].gr_h, bigr ? c.gens[g].gr_q : 0}].push_back(g);
  std::map<std::pair<int, int>, std::vector<Int>> diag;
  for (const auto& [key, src] : blocks) {
    auto tgt_it = blocks.find({key.first + c.direction, key.second});
    if (tgt_it == blocks.end()) continue;
    const auto& tgt = tgt_it->second;
    DenseMatrix M(tgt.size(), std::vector<Int>(src.size(), 0));
    for (size_t j = 0; j < src.size(); ++j)
      for (const auto& [t, v] : red.out[src[j]]) {
        auto pos = std::lower_bound(tgt.begin(), tgt.end(), t);
        if (pos == tgt.end() || *pos != t) throw Error(ErrorCode::NotAComplex, "entry leaves its block");
        M[pos - tgt.begin()][j] = v;
      }
    diag[key] = smith_normal_form(M).diagonal;
  }
  for (const auto& [key, src] : blocks) {
    int out_rank = 0;
    if (diag.count(key))
      for (const auto& v : diag[key])
        if (v != 0) ++out_rank;
    int in_rank = 0;
    std::vector<Int> tors;
    auto prev = diag.find({key.first - c.direction, key.second});
    if (prev != diag.end())
      for (const auto& v : prev->second)
        if (v != 0) {
          ++in_rank;
          if (v != 1) tors.push_back(v);
        }
    HomologyGroup grp{int(src.size()) - out_rank - in_rank, tors};
    auto& total = h.groups[key.first];
    total.rank += grp.rank;
    total.torsion.insert(total.torsion.end(), tors.begin(), tors.end());
    if (bigr && (grp.rank || !tors.empty())) h.bigraded[key] = grp;
  }
  for (auto& [d, g] : h.groups) std::sort(g.torsion.begin(), g.torsion.end());
  return h;
}

std::string format_homology(const HomologySummary& h) {
  std::ostringstream os;
  os << "coefficients " << coeffs_name(h.coeffs) << "\n";
  for (const auto& [d, g] : h.groups) {
    if (g.rank == 0 && g.torsion.empty()) continue;
    os << "H^" << d << " = ";
    bool first = true;
    if (g.rank) {
      os << coeffs_name(h.coeffs);
      if (g.rank > 1) os << "^" << g.rank;
      first = false;
    }
    for (const auto& t : g.torsion) {
      os << (first ? "" : " + ") << "Z/" << t.get_str();
      first = false;
    }
    os << "\n";
  }
  os << "total rank " << h.total_rank() << "\n";
  if (h.has_bigraded) {
    for (const auto& [key, g] : h.bigraded) {
      os << "  (h=" << key.first << ", q=" << key.second << ") rank " << g.rank;
      for (const auto& t : g.torsion) os << " Z/" << t.get_str();
      os << "\n";
    }
  }
  return os.str();
}

int euler_characteristic(const GradedChainComplex& c) {
  int e = 0;
  for (const auto& g : c.gens) e += (g.gr_h % 2 == 0) ? 1 : -1;
  return e;
}

int euler_characteristic(const HomologySummary& h) {
  int e = 0;
  for (const auto& [d, g] : h.groups) e += (d % 2 == 0) ? g.rank : -g.rank;
  return e;
}

} // namespace khflow
