#include "khflow/cube.hpp"

#include <json.hpp>

#include <algorithm>

namespace khflow {

namespace {

int low_parity(Mask v, int i) { return popcount(v & ((Mask(1) << i) - 1)) & 1; }
int between_parity(Mask v, int i, int j) {
  Mask m = ((Mask(1) << j) - 1) & ~((Mask(1) << (i + 1)) - 1);
  return popcount(v & m) & 1;
}
Mask E(int i) { return Mask(1) << i; }

} // namespace

int edge_count(int n) { return n == 0 ? 0 : n << (n - 1); }
int face_count(int n) { return n < 2 ? 0 : (n * (n - 1) / 2) << (n - 2); }

SignAssignment standard_sign(int n) {
  SignAssignment s(n);
  for (int i = 0; i < n; ++i)
    for (Mask v = 0; v < (Mask(1) << n); ++v)
      if (!bit(v, i)) s.set(i, v, low_parity(v, i));
  return s;
}

FrameAssignment standard_frame(int n) {
  FrameAssignment f(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (Mask v = 0; v < (Mask(1) << n); ++v)
        if (!bit(v, i) && !bit(v, j)) f.set(i, j, v, low_parity(v, i) & between_parity(v, i, j));
  return f;
}

bool verify_sign(const SignAssignment& s) {
  int n = s.n;
  if (s.values.size() != (size_t(n) << n)) return false;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (Mask v = 0; v < (Mask(1) << n); ++v) {
        if (bit(v, i) || bit(v, j)) continue;
        int sum = s.at(i, v) + s.at(i, v | E(j)) + s.at(j, v) + s.at(j, v | E(i));
        if ((sum & 1) != 1) return false;
      }
  return true;
}

namespace {

template <class Rhs>
bool check_frames(const SignAssignment& s, const FrameAssignment& f, Rhs rhs) {
  if (s.n != f.n) throw Error(ErrorCode::DimensionMismatch, "sign and frame assignments differ in dimension");
  int n = s.n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (Mask v = 0; v < (Mask(1) << n); ++v) {
          if (bit(v, i) || bit(v, j) || bit(v, k)) continue;
          int lhs = f.at(i, j, v) + f.at(i, k, v) + f.at(j, k, v) + f.at(i, j, v | E(k)) + f.at(i, k, v | E(j)) +
                    f.at(j, k, v | E(i));
          if ((lhs & 1) != (rhs(i, j, k, v) & 1)) return false;
        }
  return true;
}

} // namespace

bool verify_frame_pair(const SignAssignment& s, const FrameAssignment& f) {
  return check_frames(s, f, [&](int i, int j, int k, Mask v) { return s.at(i, v) + s.at(j, v) + s.at(k, v); });
}

bool verify_frame_pair_top(const SignAssignment& s, const FrameAssignment& f) {
  return check_frames(s, f, [&](int i, int j, int k, Mask v) {
    return s.at(i, v | E(j) | E(k)) + s.at(j, v | E(i) | E(k)) + s.at(k, v | E(i) | E(j));
  });
}

FrameAssignment frame_from_sign(const SignAssignment& s) {
  if (!verify_sign(s)) throw Error(ErrorCode::NotASignAssignment, "delta s is not identically 1");
  int n = s.n;
  SignAssignment s0 = standard_sign(n);
  std::vector<std::uint8_t> b(size_t(1) << n, 0);
  for (Mask v = 1; v < (Mask(1) << n); ++v) {
    int top = 31 - __builtin_clz(v);
    Mask w = v & ~E(top);
    b[v] = b[w] ^ std::uint8_t(s.at(top, w) ^ s0.at(top, w));
  }
  FrameAssignment f = standard_frame(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (Mask v = 0; v < (Mask(1) << n); ++v)
        if (!bit(v, i) && !bit(v, j)) f.set(i, j, v, f.at(i, j, v) ^ b[v]);
  return f;
}

SignAssignment twisted_sign(int n, const std::vector<std::uint8_t>& b) {
  SignAssignment s = standard_sign(n);
  for (int i = 0; i < n; ++i)
    for (Mask v = 0; v < (Mask(1) << n); ++v)
      if (!bit(v, i)) s.set(i, v, s.at(i, v) ^ b[v] ^ b[v | E(i)]);
  return s;
}

SignAssignment random_sign(int n, std::mt19937_64& rng) {
  std::vector<std::uint8_t> b(size_t(1) << n);
  for (auto& x : b) x = std::uint8_t(rng() & 1);
  return twisted_sign(n, b);
}

GradedChainComplex cube_complex(int n, const SignAssignment& s) {
  if (s.n != n) throw Error(ErrorCode::DimensionMismatch, "sign assignment dimension");
  if (!verify_sign(s)) throw Error(ErrorCode::NotASignAssignment, "delta s is not identically 1");
  GradedChainComplex c;
  c.direction = -1;
  c.n = n;
  std::vector<Mask> states;
  for (Mask u = 0; u < (Mask(1) << n); ++u) states.push_back(u);
  std::sort(states.begin(), states.end(), [&](Mask a, Mask b) {
    if (popcount(a) != popcount(b)) return popcount(a) < popcount(b);
    return lex_key(a, n) < lex_key(b, n);
  });
  for (Mask u : states) c.gens.push_back({u, 0, 0, popcount(u), 0});
  c.reindex();
  c.d.resize(c.gens.size());
  for (int g = 0; g < c.size(); ++g) {
    Mask u = c.gens[g].state;
    for (int i = 0; i < n; ++i)
      if (bit(u, i)) c.d[g].push_back({c.index_of(u & ~E(i), 0), Int(sign_of(s.at(i, u & ~E(i))))});
  }
  return c;
}

std::string star_string(int n, Mask base, std::initializer_list<int> stars) {
  std::string out = mask_string(base, n);
  for (int i : stars) out[i] = '*';
  return out;
}

std::string sign_to_json(const SignAssignment& s) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["kind"] = "sign_assignment";
  j["n"] = s.n;
  nlohmann::ordered_json vals = nlohmann::ordered_json::object();
  for (int i = 0; i < s.n; ++i)
    for (Mask v = 0; v < (Mask(1) << s.n); ++v)
      if (!bit(v, i)) vals[star_string(s.n, v, {i})] = s.at(i, v);
  j["values"] = vals;
  return j.dump(2);
}

std::string frame_to_json(const FrameAssignment& f) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["kind"] = "frame_assignment";
  j["n"] = f.n;
  nlohmann::ordered_json vals = nlohmann::ordered_json::object();
  for (int i = 0; i < f.n; ++i)
    for (int k = i + 1; k < f.n; ++k)
      for (Mask v = 0; v < (Mask(1) << f.n); ++v)
        if (!bit(v, i) && !bit(v, k)) vals[star_string(f.n, v, {i, k})] = f.at(i, k, v);
  j["values"] = vals;
  return j.dump(2);
}

SignAssignment parse_sign_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::NotASignAssignment, std::string("invalid JSON: ") + e.what());
  }
  if (!j.contains("n") || !j.contains("values")) throw Error(ErrorCode::NotASignAssignment, "missing n or values");
  int n = j["n"].get<int>();
  if (n < 0 || n > 20) throw Error(ErrorCode::NotASignAssignment, "unsupported dimension");
  SignAssignment s(n);
  int seen = 0;
  for (auto it = j["values"].begin(); it != j["values"].end(); ++it) {
    const std::string& key = it.key();
    if (int(key.size()) != n) throw Error(ErrorCode::NotASignAssignment, "bad edge key " + key);
    int star = -1;
    Mask base = 0;
    for (int i = 0; i < n; ++i) {
      if (key[i] == '*') {
        if (star >= 0) throw Error(ErrorCode::NotASignAssignment, "bad edge key " + key);
        star = i;
      } else if (key[i] == '1') {
        base |= E(i);
      } else if (key[i] != '0') {
        throw Error(ErrorCode::NotASignAssignment, "bad edge key " + key);
      }
    }
    if (star < 0) throw Error(ErrorCode::NotASignAssignment, "bad edge key " + key);
    s.set(star, base, it.value().get<int>());
    ++seen;
  }
  if (seen != edge_count(n)) throw Error(ErrorCode::NotASignAssignment, "incomplete sign assignment");
  return s;
}

} // namespace khflow
