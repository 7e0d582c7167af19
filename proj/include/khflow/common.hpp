#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace khflow {

using Int = mpz_class;
using Rat = mpq_class;
using Mask = std::uint32_t;

enum class ErrorCode {
  MalformedPD,
  InconsistentEdges,
  NonOrientable,
  LengthMismatch,
  EmbeddingFailure,
  IndexOutOfRange,
  SameComponent,
  InvalidArc,
  NotASignAssignment,
  DimensionMismatch,
  IncompatiblePair,
  NotDiagonalizable,
  NotCancellable,
  GradingMismatch,
  NotOppositePair,
  Stuck,
  NotAComplex,
  NotACycle,
  NotAKnot,
  InvalidSite,
  NonComposable,
  NotConnectedCobordism,
  InvalidScript,
  Io,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

inline int popcount(Mask m) { return __builtin_popcount(m); }
inline bool bit(Mask m, int i) { return (m >> i) & 1u; }

// Key that orders masks lexicographically with coordinate 0 most significant.
inline Mask lex_key(Mask m, int n) {
  Mask k = 0;
  for (int i = 0; i < n; ++i)
    if (bit(m, i)) k |= Mask(1) << (n - 1 - i);
  return k;
}

inline int sign_of(int parity) { return (parity & 1) ? -1 : 1; }

std::string mask_string(Mask m, int n);

} // namespace khflow

namespace khflow {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n = 0) : p(n) {
    for (int i = 0; i < n; ++i) p[i] = i;
  }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a), b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    p[b] = a;
    return true;
  }
};

} // namespace khflow
