#pragma once

#include "khflow/chain.hpp"
#include "khflow/diagram.hpp"
#include "khflow/homology.hpp"

#include <climits>
#include <map>
#include <memory>
#include <vector>

namespace khflow {

struct CanonicalClass {
  Orientation orientation;
  Chain alpha;
  int gr_h = 0;
  // filtration level of the homology class over Q
  int gr_q = 0;
};

// alpha(D, o) in the 1X Bar-Natan complex of d, with a = X and b = X - 1.
Chain canonical_cycle(const LinkDiagram& d, const GradedChainComplex& bn, const Orientation& o);
std::vector<Orientation> all_orientations(const LinkDiagram& d);
std::vector<CanonicalClass> canonical_cycles(const LinkDiagram& d, const GradedChainComplex& bn, bool with_q = true);
std::vector<CanonicalClass> canonical_cycles(const LinkDiagram& d);

// Predicted homological degree 2 * sum over i in I, j not in I of lk(D_i, D_j),
// I the reversed components.
int canonical_degree_formula(const LinkDiagram& d, const Orientation& o);

// Homology of a complex whose differential never lowers gr_q, together with
// the induced filtration. Built once by filtered cancellation, then queried.
class FilteredHomology {
public:
  FilteredHomology(const GradedChainComplex& c, Coeffs k);
  ~FilteredHomology();
  FilteredHomology(FilteredHomology&&) noexcept;
  FilteredHomology& operator=(FilteredHomology&&) noexcept;

  // max j with [z] in F^j H; INT_MAX for a boundary
  int class_grading(const Chain& z) const;
  // j -> dim F^j H^h at each filtration jump
  std::map<int, int> profile(int h) const;
  int dimension(int h) const;
  // generators left after cancellation
  int reduced_size() const;

  struct Impl;

private:
  std::unique_ptr<Impl> impl_;
};

int quantum_homology_grading(const GradedChainComplex& c, const Chain& z, Coeffs k);

struct SInvariant {
  Coeffs coeffs = Coeffs::Q;
  int s = 0;
  int s_min = 0;
  int s_max = 0;
  int gr_alpha = 0;
  int gr_beta = 0;
};

SInvariant s_invariant(const LinkDiagram& d, Coeffs k);

struct MirrorDuality {
  GradedChainComplex mirror_complex;  // C_BN(m(D))
  GradedChainComplex dual;            // C_BN(D)^*
  ChainMap phi;
  std::vector<int> epsilon;           // per state of m(D)
};

GradedChainComplex dual_complex(const GradedChainComplex& c);
MirrorDuality mirror_dual(const LinkDiagram& d);
// <Phi(z), w> for z in C(m(D)), w in C(D)
Int mirror_pairing(const MirrorDuality& m, const Chain& z, const Chain& w);

} // namespace khflow
