#include "khflow/sinv.hpp"

#include "khflow/complex.hpp"
#include "khflow/reduce.hpp"

#include <algorithm>
#include <set>

namespace khflow {

Chain canonical_cycle(const LinkDiagram& d, const GradedChainComplex& bn, const Orientation& o) {
  ABLabeling ab = ab_labeling(d, o);
  std::vector<int> bs;
  for (int i = 0; i < int(ab.labels.size()); ++i)
    if (ab.labels[i] == 'b') bs.push_back(i);
  Chain z;
  for (Mask sub = 0; sub < (Mask(1) << bs.size()); ++sub) {
    Mask lab = 0;
    for (int k = 0; k < int(bs.size()); ++k)
      if (bit(sub, k)) lab |= Mask(1) << bs[k];
    int g = bn.index_of(ab.state, lab);
    if (g < 0) throw Error(ErrorCode::DimensionMismatch, "canonical generator missing from complex");
    z[g] = sign_of(popcount(sub));
  }
  return z;
}

std::vector<Orientation> all_orientations(const LinkDiagram& d) {
  int m = d.num_components();
  std::vector<Orientation> out;
  for (Mask o = 0; o < (Mask(1) << m); ++o) {
    Orientation v(m);
    for (int i = 0; i < m; ++i) v[i] = bit(o, i);
    out.push_back(v);
  }
  return out;
}

int canonical_degree_formula(const LinkDiagram& d, const Orientation& o) {
  int total = 0;
  for (int i = 0; i < d.num_components(); ++i)
    for (int j = 0; j < d.num_components(); ++j)
      if (o[i] && !o[j]) total += linking_number(d, i, j);
  return 2 * total;
}

std::vector<CanonicalClass> canonical_cycles(const LinkDiagram& d, const GradedChainComplex& bn, bool with_q) {
  std::vector<CanonicalClass> out;
  std::unique_ptr<FilteredHomology> fh;
  if (with_q) fh = std::make_unique<FilteredHomology>(bn, Coeffs::Q);
  for (const auto& o : all_orientations(d)) {
    CanonicalClass c;
    c.orientation = o;
    c.alpha = canonical_cycle(d, bn, o);
    if (!bn.apply(c.alpha).empty()) throw Error(ErrorCode::NotACycle, "canonical chain is not a cycle");
    c.gr_h = bn.gens[c.alpha.begin()->first].gr_h;
    if (fh) c.gr_q = fh->class_grading(c.alpha);
    out.push_back(c);
  }
  return out;
}

std::vector<CanonicalClass> canonical_cycles(const LinkDiagram& d) { return canonical_cycles(d, bar_natan_complex(d)); }

namespace {

template <class K>
struct Echelon {
  using T = typename K::T;
  K k;
  std::vector<std::vector<T>> rows;
  std::vector<int> pivots;

  explicit Echelon(K f) : k(f) {}

  std::vector<T> reduce(std::vector<T> v) const {
    for (size_t r = 0; r < rows.size(); ++r) {
      int p = pivots[r];
      if (k.zero(v[p])) continue;
      T f = v[p];
      for (size_t i = 0; i < v.size(); ++i) v[i] = k.norm(v[i] - f * rows[r][i]);
    }
    return v;
  }
  bool add(std::vector<T> v) {
    v = reduce(std::move(v));
    int p = -1;
    for (size_t i = 0; i < v.size(); ++i)
      if (!k.zero(v[i])) {
        p = int(i);
        break;
      }
    if (p < 0) return false;
    T inv = k.inv(v[p]);
    for (auto& x : v) x = k.norm(x * inv);
    for (size_t r = 0; r < rows.size(); ++r) {
      T f = rows[r][p];
      if (k.zero(f)) continue;
      for (size_t i = 0; i < v.size(); ++i) rows[r][i] = k.norm(rows[r][i] - f * v[i]);
    }
    rows.push_back(std::move(v));
    pivots.push_back(p);
    return true;
  }
  bool contains(const std::vector<T>& v) const {
    auto w = reduce(v);
    for (const auto& x : w)
      if (!k.zero(x)) return false;
    return true;
  }
  int rank() const { return int(rows.size()); }
};

// Basis of {x : A x = 0}, A given by its columns.
template <class K>
std::vector<std::vector<typename K::T>> nullspace(const std::vector<std::vector<typename K::T>>& cols, int m, K k) {
  using T = typename K::T;
  int c = int(cols.size());
  // rows of A^T augmented with the identity
  Echelon<K> e(k);
  std::vector<std::vector<T>> out;
  std::vector<std::vector<T>> aug;
  for (int j = 0; j < c; ++j) {
    std::vector<T> v(m + c, T(0));
    for (int i = 0; i < m; ++i) v[i] = cols[j][i];
    v[m + j] = T(1);
    aug.push_back(v);
  }
  // column reduction: eliminate the A part, what remains with zero A part spans the kernel
  std::vector<std::vector<T>> done;
  std::vector<int> piv;
  for (auto v : aug) {
    for (size_t r = 0; r < done.size(); ++r) {
      int p = piv[r];
      if (k.zero(v[p])) continue;
      T f = v[p] * k.inv(done[r][p]);
      for (int i = 0; i < m + c; ++i) v[i] = k.norm(v[i] - f * done[r][i]);
    }
    int p = -1;
    for (int i = 0; i < m; ++i)
      if (!k.zero(v[i])) {
        p = i;
        break;
      }
    if (p < 0) out.push_back(std::vector<T>(v.begin() + m, v.end()));
    else {
      done.push_back(v);
      piv.push_back(p);
    }
  }
  return out;
}

} // namespace

struct FilteredHomology::Impl {
  virtual ~Impl() = default;
  virtual int class_grading(const Chain& z) const = 0;
  virtual std::map<int, int> profile(int h) const = 0;
  virtual int reduced_size() const = 0;
};

namespace {

template <class K>
struct FilteredImpl : FilteredHomology::Impl {
  using T = typename K::T;
  K k;
  std::vector<std::vector<std::pair<int, T>>> orig;
  std::vector<int> q;
  Reducer<K> red;
  std::map<int, std::vector<int>> surv;  // degree -> survivors sorted by gr_q

  FilteredImpl(const GradedChainComplex& c, K f) : k(f), red(c, f, true) {
    q.resize(c.size());
    orig.resize(c.size());
    for (int g = 0; g < c.size(); ++g) {
      q[g] = c.gens[g].gr_q;
      for (const auto& [t, v] : c.d[g])
        if (!k.zero(k.from(v))) orig[g].push_back({t, k.from(v)});
    }
    red.reduce([&](int x, int y) { return q[x] == q[y]; });
    for (int g : red.survivors()) surv[red.deg[g]].push_back(g);
    for (auto& [h, v] : surv) std::stable_sort(v.begin(), v.end(), [&](int a, int b) { return q[a] < q[b]; });
  }

  const std::vector<int>& at(int h) const {
    static const std::vector<int> none;
    auto it = surv.find(h);
    return it == surv.end() ? none : it->second;
  }

  std::vector<int> jumps(int h) const {
    std::set<int> s;
    for (int g : at(h)) s.insert(q[g]);
    return {s.begin(), s.end()};
  }

  // boundaries into degree h, as vectors over at(h)
  std::vector<std::vector<T>> boundaries(int h) const {
    const auto& gh = at(h);
    std::map<int, int> pos;
    for (int i = 0; i < int(gh.size()); ++i) pos[gh[i]] = i;
    std::vector<std::vector<T>> out;
    for (int w : at(h - 1)) {
      std::vector<T> v(gh.size(), T(0));
      for (const auto& [t, c] : red.out[w]) v[pos.at(t)] = c;
      out.push_back(v);
    }
    return out;
  }

  int class_grading(const Chain& z) const override {
    std::map<int, T> dz;
    std::set<int> hs;
    for (const auto& [g, c] : z) {
      T x = k.from(c);
      if (k.zero(x)) continue;
      hs.insert(red.deg[g]);
      for (const auto& [t, v] : orig[g]) dz[t] = k.norm(dz[t] + x * v);
    }
    for (const auto& [t, v] : dz)
      if (!k.zero(v)) throw Error(ErrorCode::NotACycle, "chain is not a cycle");
    if (hs.empty()) return INT_MAX;
    if (hs.size() > 1) throw Error(ErrorCode::NotACycle, "chain is not homogeneous");
    int h = *hs.begin();
    const auto& gh = at(h);
    std::map<int, int> pos;
    for (int i = 0; i < int(gh.size()); ++i) pos[gh[i]] = i;
    std::vector<T> zp(gh.size(), T(0));
    for (const auto& [g, c] : z) {
      T x = k.from(c);
      if (k.zero(x)) continue;
      for (const auto& [s, v] : red.proj[g]) zp[pos.at(s)] = k.norm(zp[pos.at(s)] + x * v);
    }
    auto B = boundaries(h);
    auto member = [&](int j) {
      std::vector<int> low;
      for (int i = 0; i < int(gh.size()); ++i)
        if (q[gh[i]] < j) low.push_back(i);
      Echelon<K> e(k);
      for (const auto& b : B) {
        std::vector<T> v;
        for (int i : low) v.push_back(b[i]);
        e.add(v);
      }
      std::vector<T> v;
      for (int i : low) v.push_back(zp[i]);
      return e.contains(v);
    };
    if (member(INT_MAX)) return INT_MAX;
    auto js = jumps(h);
    for (int i = int(js.size()) - 1; i >= 0; --i)
      if (member(js[i])) return js[i];
    throw Error(ErrorCode::NotACycle, "filtration search failed");
  }

  std::map<int, int> profile(int h) const override {
    const auto& gh = at(h);
    const auto& gn = at(h + 1);
    std::map<int, int> posn;
    for (int i = 0; i < int(gn.size()); ++i) posn[gn[i]] = i;
    auto B = boundaries(h);
    Echelon<K> eb(k);
    for (const auto& b : B) eb.add(b);
    std::map<int, int> out;
    for (int j : jumps(h)) {
      std::vector<int> cols;
      for (int i = 0; i < int(gh.size()); ++i)
        if (q[gh[i]] >= j) cols.push_back(i);
      std::vector<std::vector<T>> A;
      for (int i : cols) {
        std::vector<T> v(gn.size(), T(0));
        for (const auto& [t, c] : red.out[gh[i]]) v[posn.at(t)] = c;
        A.push_back(v);
      }
      Echelon<K> e = eb;
      for (const auto& n : nullspace<K>(A, int(gn.size()), k)) {
        std::vector<T> v(gh.size(), T(0));
        for (size_t a = 0; a < cols.size(); ++a) v[cols[a]] = n[a];
        e.add(v);
      }
      out[j] = e.rank() - eb.rank();
    }
    return out;
  }

  int reduced_size() const override { return int(red.survivors().size()); }
};

} // namespace

FilteredHomology::FilteredHomology(const GradedChainComplex& c, Coeffs k) {
  switch (k) {
    case Coeffs::Q: impl_ = std::make_unique<FilteredImpl<Rationals>>(c, Rationals{}); break;
    case Coeffs::F2: impl_ = std::make_unique<FilteredImpl<PrimeField>>(c, PrimeField(2)); break;
    case Coeffs::F3: impl_ = std::make_unique<FilteredImpl<PrimeField>>(c, PrimeField(3)); break;
    default: throw Error(ErrorCode::NotAComplex, "filtered homology needs field coefficients");
  }
}
FilteredHomology::~FilteredHomology() = default;
FilteredHomology::FilteredHomology(FilteredHomology&&) noexcept = default;
FilteredHomology& FilteredHomology::operator=(FilteredHomology&&) noexcept = default;

int FilteredHomology::class_grading(const Chain& z) const { return impl_->class_grading(z); }
std::map<int, int> FilteredHomology::profile(int h) const { return impl_->profile(h); }
int FilteredHomology::dimension(int h) const {
  auto p = profile(h);
  return p.empty() ? 0 : p.begin()->second;
}
int FilteredHomology::reduced_size() const { return impl_->reduced_size(); }

int quantum_homology_grading(const GradedChainComplex& c, const Chain& z, Coeffs k) {
  return FilteredHomology(c, k).class_grading(z);
}

SInvariant s_invariant(const LinkDiagram& d, Coeffs k) {
  if (d.num_components() != 1) throw Error(ErrorCode::NotAKnot, "s-invariant needs a knot diagram");
  GradedChainComplex bn = bar_natan_complex(d);
  FilteredHomology fh(bn, k);
  SInvariant s;
  s.coeffs = k;
  s.gr_alpha = fh.class_grading(canonical_cycle(d, bn, {false}));
  s.gr_beta = fh.class_grading(canonical_cycle(d, bn, {true}));
  auto p = fh.profile(0);
  s.s_min = INT_MIN;
  s.s_max = INT_MIN;
  for (const auto& [j, dim] : p) {
    if (dim >= 2) s.s_min = j;
    if (dim >= 1) s.s_max = j;
  }
  s.s = s.gr_alpha + 1;
  return s;
}

GradedChainComplex dual_complex(const GradedChainComplex& c) {
  GradedChainComplex out = c;
  for (auto& g : out.gens) {
    g.gr_h = -g.gr_h;
    g.gr_q = -g.gr_q;
  }
  for (auto& row : out.d) row.clear();
  for (int g = 0; g < c.size(); ++g)
    for (const auto& [t, v] : c.d[g]) out.d[t].push_back({g, v});
  for (auto& row : out.d) std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

MirrorDuality mirror_dual(const LinkDiagram& d) {
  MirrorDuality md;
  LinkDiagram m = mirror(d);
  md.mirror_complex = bar_natan_complex(m);
  GradedChainComplex bn = bar_natan_complex(d);
  md.dual = dual_complex(bn);
  const auto& mc = md.mirror_complex;
  int n = d.n();
  Mask full = n ? (Mask(1) << n) - 1 : 0;
  auto image = [&](int g, int eps) {
    const Generator& x = mc.gens[g];
    Mask lab = ~x.labels & ((Mask(1) << x.r) - 1);
    int t = md.dual.index_of(full & ~x.state, lab);
    if (t < 0) throw Error(ErrorCode::DimensionMismatch, "mirror generator has no dual partner");
    return std::make_pair(t, Int(eps * sign_of(popcount(x.labels))));
  };
  std::map<Mask, std::vector<int>> at;
  for (int g = 0; g < mc.size(); ++g) at[mc.gens[g].state].push_back(g);
  md.epsilon.assign(size_t(1) << n, 0);
  md.epsilon[0] = 1;
  std::vector<Mask> order;
  for (Mask u = 1; u <= full && u != 0; ++u) order.push_back(u);
  std::stable_sort(order.begin(), order.end(), [](Mask a, Mask b) { return popcount(a) < popcount(b); });
  for (Mask w : order) {
    int i = __builtin_ctz(w);
    Mask u = w & ~(Mask(1) << i);
    int eps = 0;
    for (int g : at[u]) {
      std::map<int, Int> lhs;
      for (const auto& [t, v] : mc.d[g])
        if (mc.gens[t].state == w) {
          auto [pt, pv] = image(t, 1);
          lhs[pt] += v * pv;
        }
      auto [pg, pv] = image(g, md.epsilon[u]);
      std::map<int, Int> rhs;
      for (const auto& [t, v] : md.dual.d[pg]) rhs[t] += v * pv;
      for (const auto& [t, v] : lhs) {
        if (v == 0) continue;
        eps = rhs[t] == v ? 1 : -1;
        break;
      }
      if (eps) break;
    }
    if (!eps) throw Error(ErrorCode::NotAComplex, "no edge fixes the duality sign at " + mask_string(w, n));
    md.epsilon[w] = eps;
  }
  md.phi.src_size = mc.size();
  md.phi.tgt_size = md.dual.size();
  md.phi.f.resize(mc.size());
  for (int g = 0; g < mc.size(); ++g) md.phi.f[g].push_back(image(g, md.epsilon[mc.gens[g].state]));
  return md;
}

Int mirror_pairing(const MirrorDuality& m, const Chain& z, const Chain& w) {
  Chain pz = m.phi.apply(z);
  Int total = 0;
  for (const auto& [g, c] : pz) {
    auto it = w.find(g);
    if (it != w.end()) total += c * it->second;
  }
  return total;
}

} // namespace khflow
