#pragma once

#include <Eigen/Dense>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "cgc/group_alg.hpp"
#include "cgc/marked_group.hpp"

namespace cgc {

inline constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

// A finite disjoint union of finite metric spaces. Blocks are Cayley spaces
// of marked groups or explicit integer distance matrices. In the plain union
// the cross-block distance is infinite; coarse_union_assemble places the
// blocks on a line instead.
class DisjointUnionSpace {
 public:
  struct Block {
    int size = 0;
    GroupPtr group;          // either a Cayley block ...
    Eigen::MatrixXd dist;    // ... or an explicit distance matrix

    double distance(int x, int y) const {
      if (group) return group->distance(x, y);
      return dist(x, y);
    }
    double diameter() const {
      if (group) return group->diameter();
      return block_diameter(dist);
    }

   private:
    static double block_diameter(const Eigen::MatrixXd& d) {
      return d.size() == 0 ? 0.0 : d.maxCoeff();
    }
  };

  static std::shared_ptr<const DisjointUnionSpace> from_group(GroupPtr G) {
    Block b;
    b.size = G->order();
    b.group = std::move(G);
    return plain({std::move(b)});
  }

  static std::shared_ptr<const DisjointUnionSpace> plain(std::vector<Block> blocks) {
    auto s = std::make_shared<DisjointUnionSpace>();
    s->blocks_ = std::move(blocks);
    s->index_blocks();
    return s;
  }

  const std::vector<Block>& blocks() const { return blocks_; }
  int total() const { return total_; }
  bool coarse() const { return !positions_.empty(); }
  int block_of(int x) const { return block_of_[x]; }
  int local(int x) const { return x - offsets_[block_of_[x]]; }
  int offset(int b) const { return offsets_[b]; }
  double position(int b) const { return positions_[b]; }

  double distance(int x, int y) const {
    int bx = block_of_[x], by = block_of_[y];
    if (bx == by) return blocks_[bx].distance(local(x), local(y));
    if (positions_.empty()) return kInfiniteDistance;
    return std::abs(positions_[bx] - positions_[by]);
  }

  // Used by coarse_union_assemble.
  void set_positions(std::vector<double> positions) { positions_ = std::move(positions); }

 private:
  void index_blocks() {
    total_ = 0;
    offsets_.clear();
    block_of_.clear();
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      offsets_.push_back(total_);
      for (int i = 0; i < blocks_[b].size; ++i) block_of_.push_back(static_cast<int>(b));
      total_ += blocks_[b].size;
    }
  }

  std::vector<Block> blocks_;
  std::vector<int> offsets_;
  std::vector<int> block_of_;
  std::vector<double> positions_;  // nonempty only for coarse unions
  int total_ = 0;
};

using SpacePtr = std::shared_ptr<const DisjointUnionSpace>;

// Places the blocks on a line so cross-block distances are finite and grow
// along the sequence: the gap between block m and m+1 is
// max(m, diam(block m)) + 1.
inline SpacePtr coarse_union_assemble(std::vector<DisjointUnionSpace::Block> blocks) {
  auto space = std::const_pointer_cast<DisjointUnionSpace>(
      DisjointUnionSpace::plain(std::move(blocks)));
  std::vector<double> positions;
  double p = 0.0;
  for (std::size_t m = 0; m < space->blocks().size(); ++m) {
    positions.push_back(p);
    p += std::max(static_cast<double>(m), space->blocks()[m].diameter()) + 1.0;
  }
  space->set_positions(std::move(positions));
  return space;
}

// A finite-propagation matrix over a disjoint union. Stored dense; the
// spaces in play are desk scale.
class Kernel {
 public:
  explicit Kernel(SpacePtr space)
      : space_(std::move(space)),
        m_(Eigen::MatrixXcd::Zero(space_->total(), space_->total())) {}
  Kernel(SpacePtr space, Eigen::MatrixXcd m)
      : space_(std::move(space)), m_(std::move(m)) {}

  const SpacePtr& space() const { return space_; }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  Eigen::MatrixXcd& matrix() { return m_; }
  int size() const { return static_cast<int>(m_.rows()); }

  Scalar operator()(int x, int y) const { return m_(x, y); }
  void set(int x, int y, Scalar v) { m_(x, y) = v; }

  double propagation(double zero_tol = 0.0) const {
    double p = 0.0;
    for (int x = 0; x < size(); ++x)
      for (int y = 0; y < size(); ++y)
        if (std::abs(m_(x, y)) > zero_tol)
          p = std::max(p, space_->distance(x, y));
    return p;
  }

  Kernel star() const { return Kernel(space_, m_.adjoint()); }

  friend Kernel operator*(const Kernel& a, const Kernel& b) {
    a.check_space(b);
    return Kernel(a.space_, a.m_ * b.m_);
  }
  friend Kernel operator+(const Kernel& a, const Kernel& b) {
    a.check_space(b);
    return Kernel(a.space_, a.m_ + b.m_);
  }
  friend Kernel operator-(const Kernel& a, const Kernel& b) {
    a.check_space(b);
    return Kernel(a.space_, a.m_ - b.m_);
  }

 private:
  void check_space(const Kernel& other) const {
    if (space_->total() != other.space_->total())
      throw Error("kernels over different spaces");
  }

  SpacePtr space_;
  Eigen::MatrixXcd m_;
};

// omega(a)(x) = sum_y a_{x,y}, the augmentation onto the diagonal algebra.
inline Eigen::VectorXcd augmentation(const Kernel& a) {
  return a.matrix().rowwise().sum();
}

inline Kernel diagonal_kernel(const SpacePtr& space, const Eigen::VectorXcd& f) {
  Kernel d(space);
  d.matrix() = f.asDiagonal();
  return d;
}

// Natural embedding of the group algebra, xi -> [xi(g h^{-1})]_{g,h}.
inline Kernel group_algebra_embed(const GroupAlgElement& xi, const SpacePtr& space) {
  const MarkedGroup& G = *xi.group();
  if (space->total() != G.order() || space->blocks().size() != 1)
    throw Error("space does not match the group block");
  Kernel k(space);
  for (const auto& [u, c] : xi.coeffs())
    for (int h = 0; h < G.order(); ++h) k.set(G.mul(u, h), h, c);
  return k;
}

inline Kernel group_algebra_embed(const GroupAlgElement& xi) {
  return group_algebra_embed(xi, DisjointUnionSpace::from_group(xi.group()));
}

// A partially defined bijection moving points a bounded distance, stored as
// (domain point, image) pairs.
struct PartialTranslation {
  std::vector<std::pair<int, int>> pairs;  // (y, phi(y))

  Kernel to_kernel(const SpacePtr& space) const {
    Kernel t(space);
    for (auto [y, x] : pairs) t.set(x, y, 1.0);
    return t;
  }
};

// Zeroes every cross-block entry; idempotent, unital, preserves diagonals.
inline Kernel block_expectation(const Kernel& a) {
  Kernel e(a.space(), a.matrix());
  const DisjointUnionSpace& s = *a.space();
  for (int x = 0; x < a.size(); ++x)
    for (int y = 0; y < a.size(); ++y)
      if (s.block_of(x) != s.block_of(y)) e.set(x, y, 0.0);
  return e;
}

// Writes a = sum_i f_i t_i with partial translations extracted greedily:
// repeatedly take a maximal partial bijection inside the remaining support,
// scanning entries in lexicographic (x, y) order.
inline std::vector<std::pair<Eigen::VectorXcd, PartialTranslation>>
translation_decomposition(const Kernel& a, double zero_tol = 0.0) {
  const int n = a.size();
  Eigen::MatrixXcd rest = a.matrix();
  std::vector<std::pair<Eigen::VectorXcd, PartialTranslation>> result;
  for (;;) {
    PartialTranslation t;
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(n);
    std::vector<char> row_used(n, 0), col_used(n, 0);
    for (int x = 0; x < n; ++x) {
      if (row_used[x]) continue;
      for (int y = 0; y < n; ++y) {
        if (col_used[y] || std::abs(rest(x, y)) <= zero_tol) continue;
        row_used[x] = col_used[y] = 1;
        t.pairs.emplace_back(y, x);
        f(x) = rest(x, y);
        rest(x, y) = 0.0;
        break;
      }
    }
    if (t.pairs.empty()) break;
    result.emplace_back(std::move(f), std::move(t));
  }
  return result;
}

// A full translation as a permutation of the whole space.
using FullTranslation = std::vector<int>;

// Writes a partial translation as a diagonal-cut sum of at most 3 full
// translations. Fixed points and complete cycles of the partial bijection go
// into one permutation; the path components split into two sets of disjoint
// swaps (alternating edges along each path), each extended by the identity.
inline std::vector<std::pair<Eigen::VectorXcd, FullTranslation>> extend_to_full(
    const PartialTranslation& t, const SpacePtr& space) {
  const int n = space->total();
  for (auto [y, x] : t.pairs)
    if (space->block_of(x) != space->block_of(y))
      throw NotWithinBlocks("translation pair crosses blocks of a plain union");

  std::vector<int> succ(n, -1), pred(n, -1);
  for (auto [y, x] : t.pairs) {
    if (succ[y] >= 0 || pred[x] >= 0)
      throw Error("pairs do not define a partial bijection");
    succ[y] = x;
    pred[x] = y;
  }

  FullTranslation cycles(n), swaps1(n), swaps2(n);
  std::iota(cycles.begin(), cycles.end(), 0);
  std::iota(swaps1.begin(), swaps1.end(), 0);
  std::iota(swaps2.begin(), swaps2.end(), 0);
  Eigen::VectorXcd f0 = Eigen::VectorXcd::Zero(n), f1 = Eigen::VectorXcd::Zero(n),
                   f2 = Eigen::VectorXcd::Zero(n);
  bool used0 = false, used1 = false, used2 = false;

  std::vector<char> visited(n, 0);
  for (auto [y0, x0] : t.pairs) {
    if (visited[y0]) continue;
    // walk back to the start of this component
    int start = y0;
    while (pred[start] >= 0 && pred[start] != y0) start = pred[start];
    bool is_cycle = pred[start] >= 0;  // came back around
    if (is_cycle) start = y0;
    // collect the component's edges in order
    std::vector<int> nodes;
    int v = start;
    while (v >= 0 && !visited[v]) {
      visited[v] = 1;
      nodes.push_back(v);
      v = succ[v];
    }
    if (is_cycle) {
      for (int u : nodes) {
        cycles[u] = succ[u];
        f0(succ[u]) = 1.0;
      }
      used0 = true;
    } else {
      // nodes = domain points along the path; edge i is nodes[i] -> succ
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        int u = nodes[i];
        if (succ[u] < 0) break;
        FullTranslation& target = (i % 2 == 0) ? swaps1 : swaps2;
        Eigen::VectorXcd& cut = (i % 2 == 0) ? f1 : f2;
        target[u] = succ[u];
        target[succ[u]] = u;
        cut(succ[u]) = 1.0;
        ((i % 2 == 0) ? used1 : used2) = true;
      }
    }
  }

  std::vector<std::pair<Eigen::VectorXcd, FullTranslation>> result;
  if (used0) result.emplace_back(std::move(f0), std::move(cycles));
  if (used1) result.emplace_back(std::move(f1), std::move(swaps1));
  if (used2) result.emplace_back(std::move(f2), std::move(swaps2));
  return result;
}

inline Kernel full_translation_kernel(const FullTranslation& perm, const SpacePtr& space) {
  Kernel k(space);
  for (int y = 0; y < static_cast<int>(perm.size()); ++y) k.set(perm[y], y, 1.0);
  return k;
}

}  // namespace cgc
