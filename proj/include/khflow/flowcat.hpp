#pragma once

#include "khflow/chain.hpp"
#include "khflow/complex.hpp"
#include "khflow/cube.hpp"

#include <map>
#include <string>
#include <vector>

namespace khflow {

struct FlowObject {
  int id = 0;
  std::string name;
  int gr = 0;
  int gr_q = 0;
  Mask state = 0;
  Mask labels = 0;
  int r = 0;
  // cell orientation reversed (after cubic slides, objects with |v| odd)
  bool reversed = false;
  bool alive = true;
};

struct FlowPoint {
  int id = 0;
  int sign = 1;
};

// Boundary point of a 1-dim moduli space M(x, y): outer in M(z, y), inner in M(x, z).
struct Endpoint {
  int z = -1;
  int outer = -1;
  int inner = -1;
  bool operator<(const Endpoint& o) const {
    return std::tie(z, outer, inner) < std::tie(o.z, o.outer, o.inner);
  }
  bool operator==(const Endpoint& o) const { return z == o.z && outer == o.outer && inner == o.inner; }
};

struct FlowComponent {
  int id = 0;
  bool circle = false;
  Endpoint ends[2];
  int framing = 0;
};

using ObjectPair = std::pair<int, int>;

// Flow category truncated to moduli of dimension <= 1. Keys (x, y) have
// |x| > |y|; the associated cochain complex sends y to sum #M(x, y) x.
class FlowCategory1 {
public:
  std::vector<FlowObject> objects;
  std::map<ObjectPair, std::vector<FlowPoint>> moduli0;
  std::map<ObjectPair, std::vector<FlowComponent>> moduli1;
  int next_point = 0;
  int next_component = 0;

  int add_object(FlowObject o);
  int add_point(int x, int y, int sign);
  int add_interval(int x, int y, Endpoint a, Endpoint b, int framing);
  int add_circle(int x, int y, int framing);

  const FlowObject& object(int id) const { return objects.at(id); }
  std::vector<int> alive_objects() const;
  const std::vector<FlowPoint>& points(int x, int y) const;
  const std::vector<FlowComponent>& components(int x, int y) const;
  int count(int x, int y) const;
  int point_sign(int x, int y, int pid) const;
  int find_object(const std::string& name) const;

  // composites M(z, y) x M(x, z) as endpoints with their signs
  std::vector<std::pair<Endpoint, int>> composites(int x, int y) const;

  // empty string when boundary matching and the chain condition hold
  std::string check_invariants() const;

  // orient: multiply entries by the orientation signs of reversed objects
  GradedChainComplex associated_complex(bool orient = true) const;

  int total_points() const;
  int total_components() const;
};

FlowCategory1 cube_skeleton(int n, const SignAssignment& s, const FrameAssignment& f);
FlowCategory1 xy_flow_category(const ComplexInput& in, const SignAssignment& s);
FlowCategory1 xy_flow_category(const LinkDiagram& d);
FlowCategory1 xy_flow_category(const ResolutionConfiguration& c);

FlowCategory1 handle_cancel(const FlowCategory1& c, int x, int y);
FlowCategory1 handle_slide(const FlowCategory1& c, int x, int y, int epsilon);
FlowCategory1 whitney_trick(const FlowCategory1& c, int x, int y, int p, int q);

struct Move {
  enum Kind { Cancel, Slide, Whitney } kind = Cancel;
  int x = -1, y = -1;
  int epsilon = 1;
  int p = -1, q = -1;
};

struct MoveLog {
  std::vector<Move> moves;
  FlowCategory1 replay(const FlowCategory1& initial) const;
};

FlowCategory1 apply_move(const FlowCategory1& c, const Move& m);

// XY objects (u, v) with v_i = 0 slid over (u, v + e_i), all u and i, epsilon = +1.
FlowCategory1 cubic_handle_slides(const FlowCategory1& c, MoveLog* log = nullptr);

// Predicted moduli of the slid category from chains in the XY category.
std::map<ObjectPair, std::vector<int>> chains_oracle_0dim(const FlowCategory1& xy);
std::map<ObjectPair, long> chains_oracle_1dim(const FlowCategory1& xy);

// Cancels ((v,1),(v,0)) pairs along the last coordinate in increasing |v|.
FlowCategory1 cube_contract(const FlowCategory1& cube, int n, MoveLog* log = nullptr, bool* side_effects = nullptr);

FlowCategory1 eliminate_quantum_increasing(const FlowCategory1& c, MoveLog* log = nullptr);

// Canonical objects: no 0-dim moduli in or out.
std::vector<int> isolated_objects(const FlowCategory1& c);

std::vector<Move> parse_moves(const std::string& text, const FlowCategory1& c);
std::string flowcat_to_json(const FlowCategory1& c);
std::string movelog_to_json(const MoveLog& log, const FlowCategory1& c);

} // namespace khflow
