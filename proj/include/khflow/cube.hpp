#pragma once

#include "khflow/chain.hpp"
#include "khflow/common.hpp"

#include <random>
#include <string>
#include <vector>

namespace khflow {

// Edge (i, base) runs from base+e_i down to base; bit i of base is 0.
struct SignAssignment {
  int n = 0;
  std::vector<std::uint8_t> values;

  SignAssignment() = default;
  explicit SignAssignment(int n_) : n(n_), values(size_t(n_) << n_, 0) {}
  int at(int i, Mask base) const { return values[(size_t(i) << n) | base]; }
  void set(int i, Mask base, int v) { values[(size_t(i) << n) | base] = std::uint8_t(v & 1); }
};

// 2-face (i<j, base) spans base .. base+e_i+e_j.
struct FrameAssignment {
  int n = 0;
  std::vector<std::uint8_t> values;

  FrameAssignment() = default;
  explicit FrameAssignment(int n_) : n(n_), values(size_t(n_) * n_ << n_, 0) {}
  int at(int i, int j, Mask base) const { return values[((size_t(i) * n + j) << n) | base]; }
  void set(int i, int j, Mask base, int v) { values[((size_t(i) * n + j) << n) | base] = std::uint8_t(v & 1); }
};

SignAssignment standard_sign(int n);
FrameAssignment standard_frame(int n);
bool verify_sign(const SignAssignment& s);
bool verify_frame_pair(const SignAssignment& s, const FrameAssignment& f);
bool verify_frame_pair_top(const SignAssignment& s, const FrameAssignment& f);
FrameAssignment frame_from_sign(const SignAssignment& s);

// s0 + delta(b) for a vertex cochain b given as a bit per vertex.
SignAssignment twisted_sign(int n, const std::vector<std::uint8_t>& b);
SignAssignment random_sign(int n, std::mt19937_64& rng);

GradedChainComplex cube_complex(int n, const SignAssignment& s);

std::string star_string(int n, Mask base, std::initializer_list<int> stars);
SignAssignment parse_sign_json(const std::string& text);
std::string sign_to_json(const SignAssignment& s);
std::string frame_to_json(const FrameAssignment& f);

int edge_count(int n);
int face_count(int n);

} // namespace khflow
