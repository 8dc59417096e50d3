#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "cgc/marked_group.hpp"

namespace cgc {

inline constexpr int32_t kExterior = -1;

// Canonical rooted, generator-labeled transition table of the ball
// B(1_G, R). Indices are assigned by BFS from the root with the column order
// s_1..s_k, s_1^{-1}..s_k^{-1}, so two signatures compare equal as data iff
// the labeled rooted balls are identical.
struct BallSignature {
  int radius = 0;
  int k = 0;
  int size = 0;
  std::vector<int32_t> trans;  // size x 2k, kExterior for steps leaving the ball

  int32_t at(int element, int column) const {
    return trans[static_cast<std::size_t>(element) * 2 * k + column];
  }

  bool operator==(const BallSignature&) const = default;

  std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    mix(static_cast<std::uint64_t>(radius));
    mix(static_cast<std::uint64_t>(k));
    mix(static_cast<std::uint64_t>(size));
    for (int32_t t : trans) mix(static_cast<std::uint64_t>(t) + 2);
    return h;
  }
};

inline BallSignature ball_signature(const MarkedGroup& G, int radius) {
  BallSignature sig;
  sig.radius = radius;
  sig.k = G.k();
  std::vector<int> canon(G.order(), -1);
  std::vector<int> members;
  canon[0] = 0;
  members.push_back(0);
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int g = queue.front();
    queue.pop_front();
    for (int c = 0; c < 2 * G.k(); ++c) {
      int h = G.step(g, c);
      if (G.word_len(h) > radius || canon[h] >= 0) continue;
      canon[h] = static_cast<int>(members.size());
      members.push_back(h);
      queue.push_back(h);
    }
  }
  sig.size = static_cast<int>(members.size());
  sig.trans.assign(static_cast<std::size_t>(sig.size) * 2 * G.k(), kExterior);
  for (int i = 0; i < sig.size; ++i)
    for (int c = 0; c < 2 * G.k(); ++c) {
      int h = G.step(members[i], c);
      if (G.word_len(h) <= radius)
        sig.trans[static_cast<std::size_t>(i) * 2 * G.k() + c] = canon[h];
    }
  return sig;
}

namespace detail {

// The word-forced map B(1_H, diam) -> G: phi(eval_H(w)) := eval_G(w),
// propagated along geodesic (length-increasing) edges only. Edges between
// elements of equal word length relate words longer than diam and must not
// be forced; those relations are covered by the caller's multiplicativity
// check. Returns nullopt if two geodesics to the same element disagree.
inline std::optional<std::vector<int>> word_forced_map(const MarkedGroup& H,
                                                       const MarkedGroup& G,
                                                       int diam) {
  std::vector<int> phi(H.order(), -1);
  phi[0] = 0;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (int c = 0; c < 2 * H.k(); ++c) {
      int y = H.step(x, c);
      if (H.word_len(y) != H.word_len(x) + 1 || H.word_len(y) > diam) continue;
      int gy = G.step(phi[x], c);
      if (phi[y] < 0) {
        phi[y] = gy;
        queue.push_back(y);
      } else if (phi[y] != gy) {
        return std::nullopt;
      }
    }
  }
  return phi;
}

}  // namespace detail

// Membership of H in the radius-R neighborhood of G: a bijection
// phi: B(1_H, 2R) -> B(1_G, 2R) matching generators, compatible with
// inverses, and multiplicative on B(1_H, R). The witness is the word-forced
// phi, checked well-defined in both directions and then verified against the
// inverse and multiplicativity conditions explicitly.
inline bool in_neighborhood(const MarkedGroup& H, const MarkedGroup& G, int R) {
  if (H.k() != G.k())
    throw KMismatch("groups have different numbers of marked generators");
  const int diam = 2 * R;
  auto phi = detail::word_forced_map(H, G, diam);
  if (!phi) return false;
  auto psi = detail::word_forced_map(G, H, diam);
  if (!psi) return false;

  std::vector<int> ballH = H.ball(diam), ballG = G.ball(diam);
  if (ballH.size() != ballG.size()) return false;
  // injectivity: forced maps are mutually inverse on the balls
  for (int x : ballH)
    if ((*psi)[(*phi)[x]] != x) return false;
  // generators correspond in order
  for (int j = 0; j < H.k(); ++j)
    if (H.word_len(H.gens()[j]) <= diam &&
        (*phi)[H.gens()[j]] != G.gens()[j])
      return false;
  // inverse compatibility on B(1_H, 2R)
  for (int x : ballH)
    if ((*phi)[H.inv(x)] != G.inv((*phi)[x])) return false;
  // multiplicativity on B(1_H, R)
  std::vector<int> inner = H.ball(R);
  for (int g : inner)
    for (int h : inner)
      if ((*phi)[H.mul(g, h)] != G.mul((*phi)[g], (*phi)[h])) return false;
  return true;
}

struct PartialIsoRadius {
  int radius = 0;
  bool saturated = false;
};

// Largest R <= R_max with in_neighborhood holding both ways; 0 if none.
inline PartialIsoRadius partial_iso_radius(const MarkedGroup& G,
                                           const MarkedGroup& H, int R_max) {
  PartialIsoRadius result;
  for (int R = 1; R <= R_max; ++R)
    if (in_neighborhood(H, G, R) && in_neighborhood(G, H, R)) result.radius = R;
  result.saturated = result.radius == R_max;
  return result;
}

struct StabilizationReport {
  int radius = 0;
  bool stabilized = false;
  int at_index = -1;
  std::optional<BallSignature> signature;
};

// Smallest index M such that all radius-R signatures from M on are
// identical. A tail of length one carries no evidence, so stabilization
// requires at least the last two signatures to agree.
inline StabilizationReport detect_convergence(
    const std::vector<GroupPtr>& groups, int radius) {
  StabilizationReport report;
  report.radius = radius;
  if (groups.size() < 2) throw Error("need at least two groups in the sequence");
  std::vector<BallSignature> sigs;
  sigs.reserve(groups.size());
  for (const auto& g : groups) sigs.push_back(ball_signature(*g, radius));
  int M = static_cast<int>(sigs.size()) - 1;
  while (M > 0 && sigs[M - 1] == sigs.back()) --M;
  if (M <= static_cast<int>(sigs.size()) - 2) {
    report.stabilized = true;
    report.at_index = M;
    report.signature = sigs.back();
  }
  return report;
}

inline BallSignature limit_ball(const std::vector<GroupPtr>& groups, int radius) {
  StabilizationReport report = detect_convergence(groups, radius);
  if (!report.stabilized)
    throw NotStabilized("sequence does not stabilize at radius " +
                        std::to_string(radius));
  return *report.signature;
}

struct IndexPartition {
  std::vector<std::pair<int, std::vector<int>>> classes;  // (relator-set id, indices)
  std::vector<int> residual;
};

// Index m goes to the first relator set whose relators all vanish in
// G^(m); unmatched indices land in the residual.
inline IndexPartition partition_by_quotient(
    const std::vector<std::vector<Word>>& relator_sets,
    const std::vector<GroupPtr>& groups) {
  IndexPartition partition;
  partition.classes.resize(relator_sets.size());
  for (std::size_t i = 0; i < relator_sets.size(); ++i)
    partition.classes[i].first = static_cast<int>(i);
  for (std::size_t m = 0; m < groups.size(); ++m) {
    bool matched = false;
    for (std::size_t i = 0; i < relator_sets.size() && !matched; ++i) {
      if (is_quotient(relator_sets[i], *groups[m])) {
        partition.classes[i].second.push_back(static_cast<int>(m));
        matched = true;
      }
    }
    if (!matched) partition.residual.push_back(static_cast<int>(m));
  }
  return partition;
}

}  // namespace cgc
