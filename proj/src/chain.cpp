#include "khflow/chain.hpp"

#include <set>

namespace khflow {

std::vector<int> GradedChainComplex::degrees() const {
  std::set<int> s;
  for (const auto& g : gens) s.insert(g.gr_h);
  return {s.begin(), s.end()};
}

std::map<int, std::vector<int>> GradedChainComplex::by_degree() const {
  std::map<int, std::vector<int>> out;
  for (int i = 0; i < size(); ++i) out[gens[i].gr_h].push_back(i);
  return out;
}

Chain GradedChainComplex::apply(const Chain& z) const {
  Chain out;
  for (const auto& [g, c] : z) {
    if (c == 0) continue;
    for (const auto& [t, v] : d[g]) {
      Int& slot = out[t];
      slot += c * v;
      if (slot == 0) out.erase(t);
    }
  }
  return out;
}

bool GradedChainComplex::is_complex() const {
  for (int g = 0; g < size(); ++g) {
    for (const auto& [t, v] : d[g])
      if (gens[t].gr_h != gens[g].gr_h + direction) return false;
    if (!apply(apply(Chain{{g, Int(1)}})).empty()) return false;
  }
  return true;
}

std::string GradedChainComplex::name(int g) const {
  const Generator& x = gens[g];
  std::string s = mask_string(x.state, n);
  if (basis == '-') return s;
  std::string lab;
  for (int i = 0; i < x.r; ++i) {
    bool one = bit(x.labels, i);
    if (basis == 'y') lab += one ? 'Y' : 'X';
    else lab += one ? '1' : 'X';
  }
  return lab + "_" + s;
}

int GradedChainComplex::index_of(Mask state, Mask labels) const {
  auto it = lookup.find({state, labels});
  return it == lookup.end() ? -1 : it->second;
}

void GradedChainComplex::reindex() {
  lookup.clear();
  for (int i = 0; i < size(); ++i) lookup[{gens[i].state, gens[i].labels}] = i;
}

Chain chain_add(const Chain& a, const Chain& b, const Int& scale) {
  Chain out = a;
  for (const auto& [g, c] : b) {
    Int& slot = out[g];
    slot += scale * c;
    if (slot == 0) out.erase(g);
  }
  return out;
}

bool chain_zero(const Chain& z) {
  for (const auto& kv : z)
    if (kv.second != 0) return false;
  return true;
}

} // namespace khflow

namespace khflow {

Chain ChainMap::apply(const Chain& z) const {
  Chain out;
  for (const auto& [g, c] : z) {
    if (c == 0) continue;
    for (const auto& [t, v] : f[g]) {
      Int& slot = out[t];
      slot += c * v;
      if (slot == 0) out.erase(t);
    }
  }
  return out;
}

ChainMap identity_map(const GradedChainComplex& c) {
  ChainMap m;
  m.src_size = m.tgt_size = c.size();
  m.f.resize(c.size());
  for (int g = 0; g < c.size(); ++g) m.f[g] = {{g, Int(1)}};
  return m;
}

ChainMap compose(const ChainMap& g, const ChainMap& f) {
  if (f.tgt_size != g.src_size) throw Error(ErrorCode::NonComposable, "chain maps do not compose");
  ChainMap h;
  h.src_size = f.src_size;
  h.tgt_size = g.tgt_size;
  h.shift_h = f.shift_h + g.shift_h;
  h.f.resize(f.src_size);
  for (int s = 0; s < f.src_size; ++s) {
    Chain z;
    for (const auto& [t, v] : f.f[s]) z[t] += v;
    Chain w = g.apply(z);
    for (const auto& [t, v] : w)
      if (v != 0) h.f[s].push_back({t, v});
  }
  return h;
}

bool is_chain_map(const GradedChainComplex& src, const GradedChainComplex& tgt, const ChainMap& f) {
  if (f.src_size != src.size() || f.tgt_size != tgt.size()) return false;
  for (int g = 0; g < src.size(); ++g) {
    Chain e{{g, Int(1)}};
    Chain lhs = f.apply(src.apply(e));
    Chain rhs = tgt.apply(f.apply(e));
    if (!chain_zero(chain_add(lhs, rhs, -1))) return false;
    for (const auto& [t, v] : f.f[g])
      if (v != 0 && tgt.gens[t].gr_h != src.gens[g].gr_h + f.shift_h) return false;
  }
  return true;
}

bool maps_equal(const ChainMap& a, const ChainMap& b) {
  if (a.src_size != b.src_size || a.tgt_size != b.tgt_size) return false;
  for (int g = 0; g < a.src_size; ++g) {
    Chain x, y;
    for (const auto& [t, v] : a.f[g]) x[t] += v;
    for (const auto& [t, v] : b.f[g]) y[t] += v;
    if (!chain_zero(chain_add(x, y, -1))) return false;
  }
  return true;
}

} // namespace khflow
