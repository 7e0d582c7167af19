#pragma once

#include "khflow/common.hpp"
#include "khflow/diagram.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace khflow {

// Each arc is a site (a,b,c,d): unsurgered it joins (a,d),(b,c); surgery
// joins (a,b),(c,d). The arc runs between the circle through a and the
// circle through b.
struct ResolutionConfiguration {
  std::vector<std::array<int, 4>> arcs;
  std::vector<int> arc_ids;
  std::vector<std::pair<int, int>> joins;
  std::vector<int> loose;

  int index() const { return int(arcs.size()); }
  std::vector<int> labels() const;
  std::vector<std::vector<int>> circles() const;
  std::vector<std::vector<int>> circles_at(Mask surgered) const;
};

struct LabeledConfiguration {
  ResolutionConfiguration config;
  std::vector<int> labels;
};

struct DecoratedConfiguration {
  ResolutionConfiguration config;
  std::vector<int> y;
  std::vector<int> x;
};

ResolutionConfiguration associated_config(const LinkDiagram& d);
ResolutionConfiguration surgery(const ResolutionConfiguration& c, const std::vector<int>& B);
ResolutionConfiguration ladybug_config();
ResolutionConfiguration hopf_config();

// How circles change along the arc `arc` when passing from state u to u+e_arc.
struct EdgeTransition {
  bool merge = false;
  int a = -1, b = -1;  // merge: source circles a<b; split: source circle a
  int m = -1;          // merge target
  int p = -1, q = -1;  // split targets p<q
  std::vector<int> carry;  // source circle -> target circle for untouched circles, -1 otherwise
};

EdgeTransition transition(const std::vector<std::vector<int>>& from, const std::vector<std::vector<int>>& to,
                          const std::array<int, 4>& site);

// Label 0 is X; label 1 is 1 (Khovanov) or Y (XY).
struct BasicRelation {
  std::string name;
  std::map<std::pair<int, int>, std::vector<int>> merge;
  std::map<int, std::vector<std::pair<int, int>>> split;
};

BasicRelation khovanov_relation();
BasicRelation xy_relation();

struct PosetObject {
  Mask state = 0;
  Mask labels = 0;
  int r = 0;
};

struct Poset {
  std::vector<PosetObject> objects;
  std::vector<std::pair<int, int>> covers;  // (a, b): b is one surgery above a
  int index_of(Mask state, Mask labels) const;
  std::map<std::pair<Mask, Mask>, int> lookup;
};

Poset poset(const ResolutionConfiguration& c, const BasicRelation& rel);

bool admissible(const DecoratedConfiguration& dec);

struct CubeBlock {
  Mask min_state = 0, min_labels = 0;
  Mask max_state = 0, max_labels = 0;
  int k = 0;
  std::vector<int> arcs;

  Mask embed(Mask w) const;
  // labels of the object at embedded vertex w
  Mask labels_at(const ResolutionConfiguration& c, Mask w) const;
};

std::vector<CubeBlock> cube_decomposition(const ResolutionConfiguration& c);

std::string config_to_json(const ResolutionConfiguration& c);

} // namespace khflow
