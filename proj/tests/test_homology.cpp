#include <doctest.h>

#include "khflow/homology.hpp"

using namespace khflow;

namespace {

DenseMatrix mul(const DenseMatrix& a, const DenseMatrix& b) {
  size_t m = a.size(), k = b.size(), n = k ? b[0].size() : 0;
  DenseMatrix c(m, std::vector<Int>(n, 0));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t t = 0; t < k; ++t) c[i][j] += a[i][t] * b[t][j];
  return c;
}

void check_snf(const DenseMatrix& A) {
  auto s = smith_normal_form(A);
  auto D = mul(mul(s.U, A), s.V);
  for (size_t i = 0; i < D.size(); ++i)
    for (size_t j = 0; j < D[i].size(); ++j) {
      Int expect = (i == j && i < s.diagonal.size()) ? s.diagonal[i] : Int(0);
      CHECK(D[i][j] == expect);
    }
  for (size_t i = 1; i < s.diagonal.size(); ++i) CHECK(s.diagonal[i] % s.diagonal[i - 1] == 0);
}

} // namespace

TEST_CASE("smith normal form examples") {
  auto s = smith_normal_form({{2, 0}, {0, 3}});
  CHECK(s.diagonal == std::vector<Int>{1, 6});
  CHECK(smith_normal_form({{0, 0}, {0, 0}}).diagonal.empty());
  CHECK(smith_normal_form({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}).diagonal == std::vector<Int>{1, 1, 1});
  check_snf({{2, 0}, {0, 3}});
  check_snf({{4, 6, 2}, {8, 3, -5}, {0, 12, 7}, {1, 1, 1}});
  check_snf({{6, 10}, {15, 21}});
}

TEST_CASE("torsion is detected") {
  // 0 -> Z --2--> Z -> 0
  GradedChainComplex c;
  c.gens = {{0, 0, 0, 0, 0}, {1, 0, 0, 1, 0}};
  c.d = {{{1, Int(2)}}, {}};
  auto hz = homology(c, Coeffs::Z);
  CHECK(hz.groups[0].rank == 0);
  CHECK(hz.groups[1].rank == 0);
  CHECK(hz.groups[1].torsion == std::vector<Int>{2});
  auto h2 = homology(c, Coeffs::F2);
  CHECK(h2.groups[0].rank == 1);
  CHECK(h2.groups[1].rank == 1);
  CHECK(homology(c, Coeffs::Q).total_rank() == 0);
  CHECK(homology(c, Coeffs::F3).total_rank() == 0);
  CHECK(euler_characteristic(c) == euler_characteristic(h2));
}
