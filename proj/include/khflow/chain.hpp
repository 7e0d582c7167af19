#pragma once

#include "khflow/common.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace khflow {

using Chain = std::map<int, Int>;

struct Generator {
  Mask state = 0;
  Mask labels = 0;
  int r = 0;
  int gr_h = 0;
  int gr_q = 0;
};

// Free complex on named generators; d raises gr_h by `direction`.
struct GradedChainComplex {
  std::vector<Generator> gens;
  std::vector<std::vector<std::pair<int, Int>>> d;
  int direction = 1;
  bool has_q = false;
  int n = 0;
  int n_plus = 0;
  int n_minus = 0;
  // '1' for the 1X basis, 'y' for the XY basis, '-' for unlabeled cube complexes
  char basis = '-';
  std::map<std::pair<Mask, Mask>, int> lookup;

  int size() const { return int(gens.size()); }
  std::vector<int> degrees() const;
  std::map<int, std::vector<int>> by_degree() const;
  Chain apply(const Chain& z) const;
  bool is_complex() const;
  std::string name(int g) const;
  int index_of(Mask state, Mask labels) const;
  void reindex();
};

Chain chain_add(const Chain& a, const Chain& b, const Int& scale = 1);
bool chain_zero(const Chain& z);

} // namespace khflow

namespace khflow {

// f[g] lists the image of source generator g in the target basis.
struct ChainMap {
  int src_size = 0;
  int tgt_size = 0;
  int shift_h = 0;
  std::vector<std::vector<std::pair<int, Int>>> f;

  Chain apply(const Chain& z) const;
};

ChainMap identity_map(const GradedChainComplex& c);
ChainMap compose(const ChainMap& g, const ChainMap& f);
bool is_chain_map(const GradedChainComplex& src, const GradedChainComplex& tgt, const ChainMap& f);
bool maps_equal(const ChainMap& a, const ChainMap& b);

} // namespace khflow
