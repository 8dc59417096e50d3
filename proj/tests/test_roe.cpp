#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cgc/roe.hpp"
#include "cgc/spectral.hpp"
#include "helpers.hpp"

using namespace cgc;

namespace {

DisjointUnionSpace::Block line_block(int n) {
  DisjointUnionSpace::Block b;
  b.size = n;
  b.dist.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b.dist(i, j) = std::abs(i - j);
  return b;
}

DisjointUnionSpace::Block group_block(GroupPtr g) {
  DisjointUnionSpace::Block b;
  b.size = g->order();
  b.group = std::move(g);
  return b;
}

std::vector<SpacePtr> test_spaces() {
  return {
      DisjointUnionSpace::from_group(build_cyclic(4)),
      DisjointUnionSpace::plain({group_block(build_cyclic(4)), line_block(3)}),
      coarse_union_assemble({group_block(build_cyclic(3)), line_block(4),
                             group_block(build_cyclic(2))}),
  };
}

}  // namespace

TEST_CASE("plain and coarse union metrics") {
  auto plain =
      DisjointUnionSpace::plain({group_block(build_cyclic(4)), line_block(3)});
  CHECK(plain->total() == 7);
  CHECK(plain->distance(0, 2) == 2.0);       // inside the Cayley block
  CHECK(plain->distance(4, 6) == 2.0);       // inside the line block
  CHECK(std::isinf(plain->distance(0, 4)));  // across blocks

  auto coarse = coarse_union_assemble(
      {group_block(build_cyclic(4)), line_block(3), group_block(build_cyclic(2))});
  // gap rule: block 0 at 0, block 1 at max(0, diam 2) + 1 = 3,
  // block 2 at 3 + max(1, diam 2) + 1 = 6
  CHECK(coarse->position(0) == 0.0);
  CHECK(coarse->position(1) == 3.0);
  CHECK(coarse->position(2) == 6.0);
  CHECK(coarse->distance(0, 4) == 3.0);
  CHECK(coarse->distance(4, 8) == 3.0);
}

TEST_CASE("augmentation laws") {
  std::mt19937_64 rng(5);
  for (const auto& space : test_spaces()) {
    for (int trial = 0; trial < 200; ++trial) {
      Kernel a = test_helpers::random_kernel(space, rng);
      Kernel b = test_helpers::random_kernel(space, rng);

      // omega restricted to the diagonal algebra is the identity
      Eigen::VectorXcd f = augmentation(a);
      CHECK((augmentation(diagonal_kernel(space, f)) - f).cwiseAbs().maxCoeff() <
            1e-12);

      // omega(ab) = omega(a . omega(b))
      Eigen::VectorXcd lhs = augmentation(a * b);
      Eigen::VectorXcd rhs =
          augmentation(a * diagonal_kernel(space, augmentation(b)));
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  // omega of the Laplacian kernel vanishes exactly
  for (const auto& g : {build_cyclic(5), test_helpers::dihedral(4)}) {
    Kernel lap = laplacian_matrix(g);
    CHECK(augmentation(lap).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("block expectation") {
  std::mt19937_64 rng(9);
  auto space =
      DisjointUnionSpace::plain({group_block(build_cyclic(3)), line_block(4)});
  Kernel a = test_helpers::random_kernel(space, rng);
  Kernel e = block_expectation(a);
  for (int x = 0; x < space->total(); ++x) {
    CHECK(e(x, x) == a(x, x));
    for (int y = 0; y < space->total(); ++y)
      if (space->block_of(x) != space->block_of(y)) CHECK(e(x, y) == Scalar(0.0));
  }
  // idempotent
  Kernel e2 = block_expectation(e);
  CHECK((e2.matrix() - e.matrix()).cwiseAbs().maxCoeff() == 0.0);
  // finite propagation in the plain union after cutting cross-block entries
  CHECK(std::isinf(a.propagation()));
  CHECK(!std::isinf(e.propagation()));
}

TEST_CASE("kernel star and propagation") {
  auto g = build_cyclic(6);
  Kernel d = laplacian_matrix(g);
  CHECK(d.propagation() == 1.0);
  CHECK((d.star().matrix() - d.matrix()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((d * d).propagation() <= 2.0);
}

TEST_CASE("translation decomposition reassembles exactly") {
  std::mt19937_64 rng(13);
  for (const auto& space : test_spaces()) {
    Kernel a = test_helpers::random_kernel(space, rng);
    auto terms = translation_decomposition(a);
    Eigen::MatrixXcd sum =
        Eigen::MatrixXcd::Zero(space->total(), space->total());
    for (const auto& [f, t] : terms) {
      // each term is diagonal . partial-translation kernel
      sum += Eigen::MatrixXcd(f.asDiagonal()) * t.to_kernel(space).matrix();
      std::vector<char> dom(space->total(), 0), ran(space->total(), 0);
      for (auto [y, x] : t.pairs) {
        CHECK(!dom[y]);
        CHECK(!ran[x]);
        dom[y] = ran[x] = 1;
      }
    }
    CHECK((sum - a.matrix()).cwiseAbs().maxCoeff() == 0.0);
    // dense kernel: the first extracted translation is everywhere defined
    CHECK(terms.front().second.pairs.size() ==
          static_cast<std::size_t>(space->total()));
  }
}

TEST_CASE("extension to full translations") {
  std::mt19937_64 rng(17);
  auto space =
      DisjointUnionSpace::plain({group_block(build_cyclic(8)), line_block(5)});
  for (int trial = 0; trial < 100; ++trial) {
    PartialTranslation t = test_helpers::random_partial_translation(space, rng);
    auto pieces = extend_to_full(t, space);
    CHECK(pieces.size() <= 3);
    Eigen::MatrixXcd sum =
        Eigen::MatrixXcd::Zero(space->total(), space->total());
    for (const auto& [cut, perm] : pieces) {
      // each piece is a genuine permutation of X
      std::vector<char> seen(space->total(), 0);
      for (int image : perm) {
        CHECK(!seen[image]);
        seen[image] = 1;
      }
      sum += Eigen::MatrixXcd(cut.asDiagonal()) *
             full_translation_kernel(perm, space).matrix();
    }
    CHECK((sum - t.to_kernel(space).matrix()).cwiseAbs().maxCoeff() == 0.0);
  }

  PartialTranslation crossing;
  crossing.pairs.emplace_back(0, space->total() - 1);
  CHECK_THROWS_AS(extend_to_full(crossing, space), NotWithinBlocks);
}
