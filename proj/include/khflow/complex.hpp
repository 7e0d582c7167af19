#pragma once

#include "khflow/chain.hpp"
#include "khflow/cube.hpp"
#include "khflow/diagram.hpp"
#include "khflow/resconf.hpp"

#include <array>
#include <string>

namespace khflow {

enum class Basis { OneX, XY };

// Label 0 is X (1X basis) or a = X-u (XY basis); label 1 is 1 or b = X-v.
struct FrobeniusSpec {
  int h = 1;
  int t = 0;
  Basis basis = Basis::OneX;
  int u = 0, v = 0;
  Int c = 1;
  std::array<std::array<std::array<Int, 2>, 2>, 2> m{};
  std::array<std::array<std::array<Int, 2>, 2>, 2> delta{};
};

FrobeniusSpec frobenius_spec(int h, int t, Basis basis);
bool frobenius_relation_holds(const FrobeniusSpec& spec);

struct ComplexInput {
  ResolutionConfiguration config;
  int n_plus = 0;
  int n_minus = 0;
};

GradedChainComplex khovanov_complex(const ComplexInput& in, const FrobeniusSpec& spec, const SignAssignment& s);
GradedChainComplex khovanov_complex(const LinkDiagram& d, const FrobeniusSpec& spec, const SignAssignment& s);
GradedChainComplex khovanov_complex(const LinkDiagram& d, const FrobeniusSpec& spec);
GradedChainComplex bar_natan_complex(const LinkDiagram& d);

// A cube block of the XY poset with its generators (indexed by block vertex)
// and the adjusted sign assignment s' = s + t on the block cube.
struct XYBlock {
  CubeBlock block;
  std::vector<int> gens;
  SignAssignment sign;
};
std::vector<XYBlock> xy_blocks(const ComplexInput& in, const SignAssignment& s);

// XY complex assembled block by block with the sign adjustment.
GradedChainComplex xy_complex(const ComplexInput& in, const SignAssignment& s);
GradedChainComplex xy_complex(const LinkDiagram& d, const SignAssignment& s);
GradedChainComplex xy_complex(const LinkDiagram& d);

// Identification XY -> 1X given by X -> X, Y -> X - 1 on each tensor factor.
struct BasisChange {
  ChainMap forward;
  ChainMap inverse;
};
BasisChange basis_change(const GradedChainComplex& xy, const GradedChainComplex& bn);

int quantum_grading(const Generator& g, int n_plus, int n_minus);

std::string complex_to_json(const GradedChainComplex& c);
std::string complex_to_text(const GradedChainComplex& c);

} // namespace khflow
