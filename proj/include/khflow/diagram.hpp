#pragma once

#include "khflow/common.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace khflow {

// Slots are read counterclockwise. Slots under_in and under_in+2 carry the
// under-strand, over_in and over_in+2 the over-strand. The 0-smoothing joins
// slots (0,3),(1,2); the 1-smoothing joins (0,1),(2,3).
struct Crossing {
  std::array<int, 4> e{};
  int under_in = 0;
  int over_in = 1;

  int sign() const { return over_in == (under_in + 1) % 4 ? 1 : -1; }
  int label(int slot) const { return e[((slot % 4) + 4) % 4]; }
};

struct EdgeEnd {
  int crossing = -1;
  int slot = -1;
};

struct LinkDiagram {
  std::vector<Crossing> crossings;
  std::vector<int> loops;
  std::vector<bool> loop_reversed;
  std::vector<std::vector<int>> components;
  std::vector<int> signs;
  int n_plus = 0;
  int n_minus = 0;
  std::map<int, EdgeEnd> tail;
  std::map<int, EdgeEnd> head;
  std::map<int, int> component_of;

  int n() const { return int(crossings.size()); }
  int num_components() const { return int(components.size()); }
  std::vector<int> labels() const;
  bool is_loop(int label) const;
};

using State = std::vector<int>;
using Orientation = std::vector<bool>;

struct CrossinglessDiagram {
  std::vector<std::vector<int>> circles;
  Mask state = 0;
  int n = 0;

  int r() const { return int(circles.size()); }
  int circle_of(int label) const;
};

struct ABLabeling {
  Orientation orientation;
  Mask state = 0;
  std::vector<std::vector<int>> circles;
  std::vector<char> labels;
};

LinkDiagram parse_pd(const std::string& text);
LinkDiagram from_tuples(const std::vector<std::vector<int>>& tuples);
LinkDiagram build_diagram(std::vector<Crossing> crossings, std::vector<int> loops,
                          std::vector<bool> loop_reversed = {});

std::string to_pd_text(const LinkDiagram& d);
std::vector<std::vector<int>> to_tuples(const LinkDiagram& d);

Mask state_mask(const LinkDiagram& d, const State& u);
State state_vector(Mask u, int n);

std::array<std::pair<int, int>, 2> smoothing(const Crossing& c, int b);

CrossinglessDiagram resolve(const LinkDiagram& d, Mask u);
CrossinglessDiagram resolve(const LinkDiagram& d, const State& u);
Mask seifert_mask(const LinkDiagram& d);
State seifert_state(const LinkDiagram& d);

LinkDiagram reorient(const LinkDiagram& d, const Orientation& o);
LinkDiagram mirror(const LinkDiagram& d);
LinkDiagram relabel_canonical(const LinkDiagram& d);
LinkDiagram braid_closure(const std::vector<int>& word, int strands);

ABLabeling ab_labeling(const LinkDiagram& d, const Orientation& o);
int linking_number(const LinkDiagram& d, int i, int j);

struct FaceData {
  int num_faces = 0;
  std::vector<std::array<int, 4>> corner;   // face of the corner between slots m and m+1
  std::map<int, std::pair<int, int>> loop_faces; // loop label -> (inside, outside)
  int outer = -1;
};

FaceData faces(const LinkDiagram& d);

} // namespace khflow
