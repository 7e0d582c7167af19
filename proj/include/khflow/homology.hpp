#pragma once

#include "khflow/chain.hpp"

#include <map>
#include <string>
#include <vector>

namespace khflow {

enum class Coeffs { Z, Q, F2, F3 };

Coeffs parse_coeffs(const std::string& s);
std::string coeffs_name(Coeffs k);
bool is_field(Coeffs k);

using DenseMatrix = std::vector<std::vector<Int>>;

struct SmithDecomposition {
  std::vector<Int> diagonal;
  DenseMatrix U, V;
};

SmithDecomposition smith_normal_form(const DenseMatrix& A);

struct HomologyGroup {
  int rank = 0;
  std::vector<Int> torsion;
  bool operator==(const HomologyGroup& o) const { return rank == o.rank && torsion == o.torsion; }
};

struct HomologySummary {
  Coeffs coeffs = Coeffs::Z;
  std::map<int, HomologyGroup> groups;
  // present when the differential preserves gr_q
  std::map<std::pair<int, int>, HomologyGroup> bigraded;
  bool has_bigraded = false;

  int total_rank() const;
  bool torsion_free() const;
  bool operator==(const HomologySummary& o) const { return groups == o.groups; }
};

HomologySummary homology(const GradedChainComplex& c, Coeffs k);
std::string format_homology(const HomologySummary& h);

// Euler characteristic sum_k (-1)^k rank C^k.
int euler_characteristic(const GradedChainComplex& c);
int euler_characteristic(const HomologySummary& h);

} // namespace khflow
