#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "cgc/errors.hpp"
#include "cgc/word.hpp"

namespace cgc {

inline constexpr int kDefaultOrderCap = 200000;

// A finite group with an ordered tuple of marked generators. The generator
// tuple is a multiset: duplicates, involutions and the identity are allowed.
// Element 0 is always the identity. Instances are immutable after
// construction and safe to share across threads.
class MarkedGroup {
 public:
  MarkedGroup(std::vector<int32_t> mul, std::vector<int> gens, std::string label)
      : label_(std::move(label)), gens_(std::move(gens)) {
    order_ = static_cast<int>(std::max<std::size_t>(1, integer_sqrt(mul.size())));
    mul_ = std::move(mul);
    build_inverse_table();
    build_word_lengths();
  }

  int order() const { return order_; }
  int k() const { return static_cast<int>(gens_.size()); }
  const std::string& label() const { return label_; }
  const std::vector<int>& gens() const { return gens_; }

  int mul(int g, int h) const { return mul_[static_cast<std::size_t>(g) * order_ + h]; }
  int inv(int g) const { return inv_[g]; }
  int word_len(int g) const { return word_len_[g]; }
  const std::vector<int>& word_lengths() const { return word_len_; }

  int diameter() const {
    return *std::max_element(word_len_.begin(), word_len_.end());
  }

  // One step of the generator alphabet: column c < k applies s_{c+1} on the
  // right, column c >= k applies s_{c-k+1}^{-1}.
  int step(int g, int column) const {
    int j = column < k() ? column : column - k();
    int s = column < k() ? gens_[j] : inv_[gens_[j]];
    return mul(g, s);
  }

  // Right-invariant word metric d(g, h) = |g h^{-1}|.
  int distance(int g, int h) const { return word_len_[mul(g, inv_[h])]; }

  int evaluate(const Word& w) const {
    int g = 0;
    for (int letter : w) {
      int j = (letter > 0 ? letter : -letter) - 1;
      if (j < 0 || j >= k())
        throw AlphabetMismatch("word letter outside the generator alphabet");
      int s = letter > 0 ? gens_[j] : inv_[gens_[j]];
      g = mul(g, s);
    }
    return g;
  }

  std::vector<int> ball(int radius) const {
    std::vector<int> members;
    for (int g = 0; g < order_; ++g)
      if (word_len_[g] <= radius) members.push_back(g);
    return members;
  }

 private:
  static std::size_t integer_sqrt(std::size_t n) {
    std::size_t r = static_cast<std::size_t>(std::max(1.0, std::round(std::sqrt(static_cast<double>(n)))));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
  }

  void build_inverse_table() {
    inv_.assign(order_, -1);
    for (int g = 0; g < order_; ++g) {
      for (int h = 0; h < order_; ++h) {
        if (mul(g, h) == 0) {
          inv_[g] = h;
          break;
        }
      }
      if (inv_[g] < 0) throw Error("multiplication table has no inverse for element " + std::to_string(g));
    }
  }

  void build_word_lengths() {
    word_len_.assign(order_, -1);
    word_len_[0] = 0;
    std::deque<int> queue{0};
    while (!queue.empty()) {
      int g = queue.front();
      queue.pop_front();
      for (int c = 0; c < 2 * k(); ++c) {
        int h = step(g, c);
        if (word_len_[h] < 0) {
          word_len_[h] = word_len_[g] + 1;
          queue.push_back(h);
        }
      }
    }
    for (int g = 0; g < order_; ++g)
      if (word_len_[g] < 0)
        throw Error("marked generators do not generate the group (element " +
                    std::to_string(g) + " unreachable)");
  }

  int order_ = 1;
  std::string label_;
  std::vector<int32_t> mul_;
  std::vector<int> inv_;
  std::vector<int> gens_;
  std::vector<int> word_len_;
};

using GroupPtr = std::shared_ptr<const MarkedGroup>;

// An element-wise surjective homomorphism carrying marked generators to
// marked generators in order.
struct QuotientMap {
  GroupPtr source;
  GroupPtr target;
  std::vector<int> table;

  int operator()(int g) const { return table[g]; }
};

namespace detail {

// BFS closure of a generating set in an ambient (possibly huge) group given
// by an abstract element type. Discovery order is breadth-first with the
// generator columns tried in order s_1..s_k, s_1^{-1}..s_k^{-1}, so the
// resulting element numbering is deterministic.
template <class Elem, class MulFn>
std::pair<std::vector<Elem>, std::map<Elem, int>> bfs_closure(
    const Elem& identity, const std::vector<Elem>& gens,
    const std::vector<Elem>& gen_invs, MulFn&& multiply, int cap) {
  std::vector<Elem> elems{identity};
  std::map<Elem, int> index{{identity, 0}};
  std::deque<int> queue{0};
  const int k = static_cast<int>(gens.size());
  while (!queue.empty()) {
    int g = queue.front();
    queue.pop_front();
    for (int c = 0; c < 2 * k; ++c) {
      Elem next = multiply(elems[g], c < k ? gens[c] : gen_invs[c - k]);
      auto [it, inserted] = index.emplace(next, static_cast<int>(elems.size()));
      if (inserted) {
        if (static_cast<int>(elems.size()) >= cap)
          throw ClosureExceedsCap("closure exceeds the configured order cap " +
                                  std::to_string(cap));
        elems.push_back(std::move(next));
        queue.push_back(it->second);
      }
    }
  }
  return {std::move(elems), std::move(index)};
}

template <class Elem, class MulFn>
GroupPtr group_from_closure(const Elem& identity, const std::vector<Elem>& gens,
                            const std::vector<Elem>& gen_invs, MulFn&& multiply,
                            int cap, std::string label) {
  auto [elems, index] = bfs_closure(identity, gens, gen_invs, multiply, cap);
  const int n = static_cast<int>(elems.size());
  std::vector<int32_t> mul(static_cast<std::size_t>(n) * n);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      mul[static_cast<std::size_t>(g) * n + h] =
          index.at(multiply(elems[g], elems[h]));
  std::vector<int> gen_idx;
  gen_idx.reserve(gens.size());
  for (const Elem& s : gens) gen_idx.push_back(index.at(s));
  return std::make_shared<MarkedGroup>(std::move(mul), std::move(gen_idx),
                                       std::move(label));
}

}  // namespace detail

// Subgroup of Sym(d) generated by the given permutations (one-line image
// notation over {0..d-1}); the inputs become the marked generators in order.
inline GroupPtr build_from_permutations(
    const std::vector<std::vector<int>>& perms, std::string label = "perm",
    int cap = kDefaultOrderCap) {
  if (perms.empty()) throw InvalidPermutation("empty generator list");
  const int d = static_cast<int>(perms[0].size());
  std::vector<std::vector<int>> gens, gen_invs;
  for (const auto& p : perms) {
    if (static_cast<int>(p.size()) != d)
      throw InvalidPermutation("permutations act on different point counts");
    std::vector<int> seen(d, 0);
    for (int image : p) {
      if (image < 0 || image >= d || seen[image]++)
        throw InvalidPermutation("not a bijection on {0..d-1}");
    }
    std::vector<int> q(d);
    for (int i = 0; i < d; ++i) q[p[i]] = i;
    gens.push_back(p);
    gen_invs.push_back(std::move(q));
  }
  std::vector<int> identity(d);
  std::iota(identity.begin(), identity.end(), 0);
  auto compose = [](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
    return c;
  };
  return detail::group_from_closure(identity, gens, gen_invs, compose, cap,
                                    std::move(label));
}

// (Z/m, {1}). Elements keep their natural labels 0..m-1.
inline GroupPtr build_cyclic(int m) {
  if (m < 1) throw Error("cyclic order must be >= 1");
  std::vector<int32_t> mul(static_cast<std::size_t>(m) * m);
  for (int g = 0; g < m; ++g)
    for (int h = 0; h < m; ++h)
      mul[static_cast<std::size_t>(g) * m + h] = (g + h) % m;
  return std::make_shared<MarkedGroup>(std::move(mul),
                                       std::vector<int>{m > 1 ? 1 : 0},
                                       "Z/" + std::to_string(m));
}

// SL(2, Z/p) marked by the two elementary matrices.
inline GroupPtr build_sl2(int p, int cap = kDefaultOrderCap) {
  auto is_prime = [](int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  };
  if (!is_prime(p)) throw NotPrime(std::to_string(p) + " is not prime");
  using Mat = std::array<int, 4>;
  auto multiply = [p](const Mat& a, const Mat& b) {
    return Mat{(a[0] * b[0] + a[1] * b[2]) % p, (a[0] * b[1] + a[1] * b[3]) % p,
               (a[2] * b[0] + a[3] * b[2]) % p, (a[2] * b[1] + a[3] * b[3]) % p};
  };
  Mat identity{1, 0, 0, 1};
  std::vector<Mat> gens{{1, 1, 0, 1}, {1, 0, 1, 1}};
  std::vector<Mat> gen_invs{{1, (p - 1) % p, 0, 1}, {1, 0, (p - 1) % p, 1}};
  return detail::group_from_closure(identity, gens, gen_invs, multiply, cap,
                                    "SL2(" + std::to_string(p) + ")");
}

// Direct product with the concatenated generator tuple
// ((g_1,1),...,(g_kG,1),(1,h_1),...,(1,h_kH)).
inline GroupPtr build_product(const GroupPtr& G, const GroupPtr& H,
                              int cap = kDefaultOrderCap) {
  const long long n = static_cast<long long>(G->order()) * H->order();
  if (n > cap)
    throw ClosureExceedsCap("product order " + std::to_string(n) +
                            " exceeds cap " + std::to_string(cap));
  const int nh = H->order();
  const int total = static_cast<int>(n);
  std::vector<int32_t> mul(static_cast<std::size_t>(total) * total);
  for (int g = 0; g < total; ++g)
    for (int h = 0; h < total; ++h)
      mul[static_cast<std::size_t>(g) * total + h] =
          G->mul(g / nh, h / nh) * nh + H->mul(g % nh, h % nh);
  std::vector<int> gens;
  for (int s : G->gens()) gens.push_back(s * nh);
  for (int s : H->gens()) gens.push_back(s);
  return std::make_shared<MarkedGroup>(std::move(mul), std::move(gens),
                                       G->label() + "x" + H->label());
}

namespace detail {

inline std::vector<char> subgroup_closure(const MarkedGroup& G,
                                          const std::vector<int>& seed) {
  std::vector<char> in(G.order(), 0);
  in[0] = 1;
  std::deque<int> queue{0};
  std::vector<int> members{0};
  for (int s : seed)
    if (!in[s]) {
      in[s] = 1;
      members.push_back(s);
      queue.push_back(s);
    }
  // close under products and inverses
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < members.size(); ++i) {
      int a = members[i];
      int ai = G.inv(a);
      if (!in[ai]) {
        in[ai] = 1;
        members.push_back(ai);
        changed = true;
      }
      for (std::size_t j = 0; j < members.size(); ++j) {
        int p = G.mul(a, members[j]);
        if (!in[p]) {
          in[p] = 1;
          members.push_back(p);
          changed = true;
        }
      }
    }
  }
  return in;
}

}  // namespace detail

// Quotient by the normal closure of the given elements. The quotient is
// marked by the images of G's generators.
inline std::pair<GroupPtr, QuotientMap> build_quotient(
    const GroupPtr& G, const std::vector<int>& normal_gens) {
  // normal closure: alternate subgroup closure and conjugation until stable
  std::vector<int> seed = normal_gens;
  std::vector<char> in;
  for (;;) {
    in = detail::subgroup_closure(*G, seed);
    std::vector<int> extra;
    for (int n = 0; n < G->order(); ++n) {
      if (!in[n]) continue;
      for (int s : G->gens()) {
        int c = G->mul(G->mul(s, n), G->inv(s));
        if (!in[c]) extra.push_back(c);
      }
    }
    if (extra.empty()) break;
    seed.clear();
    for (int g = 0; g < G->order(); ++g)
      if (in[g]) seed.push_back(g);
    seed.insert(seed.end(), extra.begin(), extra.end());
  }

  // cosets Ng, numbered in order of their smallest member; identity coset
  // contains 0 and so gets index 0
  std::vector<int> coset_of(G->order(), -1);
  std::vector<int> reps;
  for (int g = 0; g < G->order(); ++g) {
    if (coset_of[g] >= 0) continue;
    int id = static_cast<int>(reps.size());
    reps.push_back(g);
    for (int n = 0; n < G->order(); ++n)
      if (in[n]) coset_of[G->mul(n, g)] = id;
  }
  const int q = static_cast<int>(reps.size());
  std::vector<int32_t> mul(static_cast<std::size_t>(q) * q);
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      mul[static_cast<std::size_t>(a) * q + b] =
          coset_of[G->mul(reps[a], reps[b])];
  std::vector<int> gens;
  for (int s : G->gens()) gens.push_back(coset_of[s]);
  auto Q = std::make_shared<MarkedGroup>(std::move(mul), std::move(gens),
                                         G->label() + "/N");
  QuotientMap map{G, Q, coset_of};
  return {Q, map};
}

// Diagonal subgroup of the direct product of groups sharing k, generated by
// the k tuples (s_j^{(1)},...,s_j^{(M)}). Also returns the coordinate
// projections, each of which is a marked surjection onto its factor.
inline std::pair<GroupPtr, std::vector<QuotientMap>> build_diagonal_product(
    const std::vector<GroupPtr>& groups, int cap = kDefaultOrderCap) {
  if (groups.empty()) throw Error("empty factor list");
  const int k = groups[0]->k();
  for (const auto& g : groups)
    if (g->k() != k) throw KMismatch("factors have different generator counts");
  const int M = static_cast<int>(groups.size());
  using Tuple = std::vector<int>;
  Tuple identity(M, 0);
  std::vector<Tuple> gens(k, Tuple(M)), gen_invs(k, Tuple(M));
  for (int j = 0; j < k; ++j)
    for (int m = 0; m < M; ++m) {
      gens[j][m] = groups[m]->gens()[j];
      gen_invs[j][m] = groups[m]->inv(groups[m]->gens()[j]);
    }
  auto multiply = [&groups, M](const Tuple& a, const Tuple& b) {
    Tuple c(M);
    for (int m = 0; m < M; ++m) c[m] = groups[m]->mul(a[m], b[m]);
    return c;
  };
  auto [elems, index] =
      detail::bfs_closure(identity, gens, gen_invs, multiply, cap);
  const int n = static_cast<int>(elems.size());
  std::vector<int32_t> mul(static_cast<std::size_t>(n) * n);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      mul[static_cast<std::size_t>(g) * n + h] =
          index.at(multiply(elems[g], elems[h]));
  std::vector<int> gen_idx;
  for (const Tuple& s : gens) gen_idx.push_back(index.at(s));
  auto D = std::make_shared<MarkedGroup>(std::move(mul), std::move(gen_idx),
                                         "diag(" + std::to_string(M) + ")");
  std::vector<QuotientMap> projections;
  for (int m = 0; m < M; ++m) {
    std::vector<int> table(n);
    for (int g = 0; g < n; ++g) table[g] = elems[g][m];
    projections.push_back(QuotientMap{D, groups[m], std::move(table)});
  }
  return {D, std::move(projections)};
}

// True iff every relator evaluates to the identity in G, i.e. the marked
// surjection F_k / <<relators>> -> G with sigma_j -> s_j exists.
inline bool is_quotient(const std::vector<Word>& relators, const MarkedGroup& G) {
  for (const Word& w : relators)
    if (G.evaluate(w) != 0) return false;
  return true;
}

}  // namespace cgc
