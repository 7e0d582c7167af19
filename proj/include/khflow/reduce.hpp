#pragma once

#include "khflow/chain.hpp"

#include <map>
#include <set>
#include <vector>

namespace khflow {

struct IntegerRing {
  using T = Int;
  T from(const Int& v) const { return v; }
  bool unit(const T& v) const { return v == 1 || v == -1; }
  T inv(const T& v) const { return v; }
  bool zero(const T& v) const { return v == 0; }
  T norm(const T& v) const { return v; }
};

struct Rationals {
  using T = Rat;
  T from(const Int& v) const { return Rat(v); }
  bool unit(const T& v) const { return v != 0; }
  T inv(const T& v) const { return Rat(1) / v; }
  bool zero(const T& v) const { return v == 0; }
  T norm(const T& v) const { return v; }
};

struct PrimeField {
  using T = Int;
  Int p;
  explicit PrimeField(long q) : p(q) {}
  T norm(const T& v) const {
    Int r = v % p;
    if (r < 0) r += p;
    return r;
  }
  T from(const Int& v) const { return norm(v); }
  bool unit(const T& v) const { return norm(v) != 0; }
  T inv(const T& v) const {
    Int r;
    mpz_invert(r.get_mpz_t(), norm(v).get_mpz_t(), p.get_mpz_t());
    return r;
  }
  bool zero(const T& v) const { return norm(v) == 0; }
};

// Gaussian elimination of a cochain complex along unit entries. Optionally
// records the projection onto and the inclusion of the reduced complex; both
// are chain maps and homotopy inverse to each other.
template <class K>
class Reducer {
public:
  using T = typename K::T;

  Reducer(const GradedChainComplex& c, K k, bool track = false) : k_(k), track_(track) {
    int n = c.size();
    deg.resize(n);
    out.resize(n);
    in.resize(n);
    alive.assign(n, true);
    for (int g = 0; g < n; ++g) {
      deg[g] = c.gens[g].gr_h;
      for (const auto& [t, v] : c.d[g]) {
        T x = k_.from(v);
        if (k_.zero(x)) continue;
        out[g][t] = x;
        in[t].insert(g);
      }
    }
    if (track_) {
      iota.resize(n);
      proj.resize(n);
      preimage.resize(n);
      for (int g = 0; g < n; ++g) {
        iota[g][g] = T(1);
        proj[g][g] = T(1);
        preimage[g].insert(g);
      }
    }
  }

  void cancel(int x, int y) {
    T u = out[x].at(y);
    T ui = k_.inv(u);
    std::vector<std::pair<int, T>> xb;
    for (const auto& [b, v] : out[x])
      if (b != y) xb.push_back({b, v});
    std::vector<std::pair<int, T>> ay;
    for (int a : in[y])
      if (a != x) ay.push_back({a, out[a].at(y)});
    for (const auto& [a, cay] : ay) {
      T f = cay * ui;
      for (const auto& [b, cxb] : xb) {
        T& slot = out[a][b];
        slot = k_.norm(slot - f * cxb);
        if (k_.zero(slot)) {
          out[a].erase(b);
          in[b].erase(a);
        } else {
          in[b].insert(a);
        }
      }
      if (track_) {
        for (const auto& [g, v] : iota[x]) {
          T& slot = iota[a][g];
          slot = k_.norm(slot - f * v);
          if (k_.zero(slot)) iota[a].erase(g);
        }
      }
    }
    if (track_) {
      std::set<int> pre_y = preimage[y];
      for (int g : pre_y) {
        T cy = proj[g].at(y);
        proj[g].erase(y);
        for (const auto& [b, cxb] : xb) {
          T& slot = proj[g][b];
          slot = k_.norm(slot - cy * ui * cxb);
          if (k_.zero(slot)) {
            proj[g].erase(b);
            preimage[b].erase(g);
          } else {
            preimage[b].insert(g);
          }
        }
      }
      for (int g : std::set<int>(preimage[x])) proj[g].erase(x);
      preimage[x].clear();
      preimage[y].clear();
    }
    remove(x);
    remove(y);
  }

  // Cancels unit entries until none remain. `allow(x, y)` filters pivots.
  template <class Allow>
  void reduce(Allow allow) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int x = 0; x < int(out.size()); ++x) {
        if (!alive[x]) continue;
        int best = -1;
        size_t cost = 0;
        for (const auto& [y, v] : out[x]) {
          if (!k_.unit(v) || !allow(x, y)) continue;
          size_t c = in[y].size();
          if (best < 0 || c < cost) {
            best = y;
            cost = c;
          }
        }
        if (best >= 0) {
          cancel(x, best);
          changed = true;
        }
      }
    }
  }
  void reduce() {
    reduce([](int, int) { return true; });
  }

  std::vector<int> survivors() const {
    std::vector<int> s;
    for (int g = 0; g < int(alive.size()); ++g)
      if (alive[g]) s.push_back(g);
    return s;
  }

  const K& field() const { return k_; }

  std::vector<int> deg;
  std::vector<std::map<int, T>> out;
  std::vector<std::set<int>> in;
  std::vector<bool> alive;
  std::vector<std::map<int, T>> iota;
  std::vector<std::map<int, T>> proj;
  std::vector<std::set<int>> preimage;

private:
  void remove(int g) {
    for (const auto& [b, v] : out[g]) in[b].erase(g);
    for (int a : in[g]) out[a].erase(g);
    out[g].clear();
    in[g].clear();
    alive[g] = false;
    if (track_) iota[g].clear();
  }

  K k_;
  bool track_;
};

} // namespace khflow
