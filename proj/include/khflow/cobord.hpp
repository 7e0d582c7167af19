#pragma once

#include "khflow/chain.hpp"
#include "khflow/diagram.hpp"

#include <string>
#include <vector>

namespace khflow {

// Edge sites are PD labels, crossing sites are 1-based positions in the PD code.
// r1+/r1- on an edge add a kink, on a crossing remove one; r2 on two edges
// pushes the first over the second, on two crossings removes the bigon.
struct MoveSpec {
  enum Kind { R1Plus, R1Minus, R2, R3, Cup, Cap, Saddle } kind = Cup;
  std::vector<int> edges;
  std::vector<int> crossings;

  bool reidemeister() const { return kind == R1Plus || kind == R1Minus || kind == R2 || kind == R3; }
  bool removes() const { return !crossings.empty() && kind != R3; }
  std::string text() const;
};

MoveSpec parse_move(const std::string& line);
std::vector<MoveSpec> parse_cobordism_script(const std::string& text);

LinkDiagram apply_move(const LinkDiagram& d, const MoveSpec& m);
bool is_planar(const LinkDiagram& d);

struct CobordismStep {
  MoveSpec move;
  LinkDiagram source, target;
  GradedChainComplex src, tgt;
  ChainMap map;
  // homotopy inverse for Reidemeister moves
  ChainMap back;
  bool has_back = false;
  int shift_q = 0;
};

CobordismStep reidemeister_map(const LinkDiagram& d, const MoveSpec& m);
CobordismStep morse_map(const LinkDiagram& d, const MoveSpec& m);
CobordismStep move_map(const LinkDiagram& d, const MoveSpec& m);

struct Cobordism {
  LinkDiagram source, target;
  GradedChainComplex src, tgt;
  std::vector<CobordismStep> steps;
  ChainMap map;
  int shift_q = 0;
  int cups = 0, caps = 0, saddles = 0;

  int euler_characteristic() const { return cups + caps - saddles; }
};

Cobordism cobordism_map(const LinkDiagram& d, const std::vector<MoveSpec>& moves);
Cobordism compose(const Cobordism& first, const Cobordism& second);

// Coefficient of the target class in f_*(source class) in the canonical basis
// of H_BN(target; Q); 'a' picks alpha, 'b' beta.
int canonical_degree(const Cobordism& f, char source_class, char target_class);

GradedChainComplex mapping_cone(const GradedChainComplex& src, const GradedChainComplex& tgt, const ChainMap& f);
bool is_quasi_isomorphism(const GradedChainComplex& src, const GradedChainComplex& tgt, const ChainMap& f);

std::string cobordism_to_json(const Cobordism& f);

} // namespace khflow
