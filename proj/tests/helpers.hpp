#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "cgc/marked_group.hpp"
#include "cgc/roe.hpp"

namespace test_helpers {

// Dihedral group of order 2n marked by (rotation, reflection).
inline cgc::GroupPtr dihedral(int n) {
  std::vector<int> rot(n), refl(n);
  for (int i = 0; i < n; ++i) {
    rot[i] = (i + 1) % n;
    refl[i] = (n - i) % n;
  }
  return cgc::build_from_permutations({rot, refl}, "D" + std::to_string(n));
}

// All words of length <= max_len over the 2k-letter alphabet, as letter
// sequences in the +-j encoding.
inline std::vector<cgc::Word> all_words(int k, int max_len) {
  std::vector<cgc::Word> words{{}};
  std::size_t level_start = 0;
  for (int len = 1; len <= max_len; ++len) {
    std::size_t level_end = words.size();
    for (std::size_t i = level_start; i < level_end; ++i)
      for (int j = 1; j <= k; ++j)
        for (int sign : {1, -1}) {
          cgc::Word w = words[i];
          w.push_back(sign * j);
          words.push_back(std::move(w));
        }
    level_start = level_end;
  }
  return words;
}

// Brute-force neighborhood test: for all words u, w of length <= 2R,
// eval_H(u) = eval_H(w) iff eval_G(u) = eval_G(w). Checked via the induced
// map on evaluations, which must be well-defined and injective.
inline bool oracle_in_neighborhood(const cgc::MarkedGroup& H,
                                   const cgc::MarkedGroup& G, int R) {
  if (H.k() != G.k()) throw cgc::KMismatch("different generator counts");
  std::vector<int> image(H.order(), -1), preimage(G.order(), -1);
  for (const cgc::Word& w : all_words(H.k(), 2 * R)) {
    int h = H.evaluate(w), g = G.evaluate(w);
    if (image[h] < 0 && preimage[g] < 0) {
      image[h] = g;
      preimage[g] = h;
    } else if (image[h] != g) {
      return false;
    }
  }
  return true;
}

inline int oracle_partial_iso_radius(const cgc::MarkedGroup& G,
                                     const cgc::MarkedGroup& H, int R_max) {
  int radius = 0;
  for (int R = 1; R <= R_max; ++R)
    if (oracle_in_neighborhood(H, G, R) && oracle_in_neighborhood(G, H, R))
      radius = R;
  return radius;
}

inline cgc::Kernel random_kernel(const cgc::SpacePtr& space, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  cgc::Kernel k(space);
  for (int x = 0; x < space->total(); ++x)
    for (int y = 0; y < space->total(); ++y)
      k.set(x, y, cgc::Scalar(dist(rng), dist(rng)));
  return k;
}

// Random partial bijection whose pairs stay within blocks.
inline cgc::PartialTranslation random_partial_translation(
    const cgc::SpacePtr& space, std::mt19937_64& rng) {
  cgc::PartialTranslation t;
  const int n = space->total();
  std::vector<int> domain(n), range(n);
  for (int i = 0; i < n; ++i) domain[i] = range[i] = i;
  std::shuffle(domain.begin(), domain.end(), rng);
  std::shuffle(range.begin(), range.end(), rng);
  std::vector<char> range_used(n, 0);
  std::uniform_int_distribution<int> coin(0, 2);
  for (int y : domain) {
    if (coin(rng) == 0) continue;  // leave some points undefined
    for (int x : range) {
      if (range_used[x] || space->block_of(x) != space->block_of(y)) continue;
      range_used[x] = 1;
      t.pairs.emplace_back(y, x);
      break;
    }
  }
  return t;
}

}  // namespace test_helpers
