#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cgc/group_alg.hpp"
#include "cgc/marked_group.hpp"
#include "helpers.hpp"

using namespace cgc;

TEST_CASE("cyclic groups") {
  auto t = build_cyclic(1);
  CHECK(t->order() == 1);
  CHECK(t->k() == 1);
  CHECK(t->gens()[0] == 0);

  auto z5 = build_cyclic(5);
  CHECK(z5->word_lengths() == std::vector<int>{0, 1, 2, 2, 1});
  auto z4 = build_cyclic(4);
  CHECK(z4->word_lengths() == std::vector<int>{0, 1, 2, 1});
  CHECK(z4->diameter() == 2);
  CHECK_THROWS_AS(build_cyclic(0), Error);
}

TEST_CASE("permutation closure") {
  auto s3 = build_from_permutations({{1, 0, 2}, {0, 2, 1}});
  CHECK(s3->order() == 6);
  auto id = build_from_permutations({{0, 1, 2}});
  CHECK(id->order() == 1);
  auto c5 = build_from_permutations({{1, 2, 3, 4, 0}});
  CHECK(c5->order() == 5);

  CHECK_THROWS_AS(build_from_permutations({{0, 0, 1}}), InvalidPermutation);
  CHECK_THROWS_AS(build_from_permutations({{1, 2, 3, 4, 0}}, "c5", 3),
                  ClosureExceedsCap);
}

TEST_CASE("sl2 over small primes") {
  CHECK(build_sl2(2)->order() == 6);
  CHECK(build_sl2(3)->order() == 24);
  CHECK(build_sl2(5)->order() == 120);
  CHECK_THROWS_AS(build_sl2(4), NotPrime);
}

TEST_CASE("direct products") {
  auto z2 = build_cyclic(2), z3 = build_cyclic(3);
  auto p = build_product(z2, z3);
  CHECK(p->order() == 6);
  CHECK(p->k() == 2);

  auto copy = build_product(build_cyclic(1), z3);
  CHECK(copy->order() == 3);
  CHECK(copy->k() == 2);
  CHECK(copy->gens()[0] == 0);  // identity generator prepended

  auto z2z2 = build_product(z2, z2);
  CHECK(z2z2->order() == 4);
  CHECK(z2z2->diameter() == 2);
}

TEST_CASE("quotients by normal closures") {
  auto z6 = build_cyclic(6);
  auto [q3, map3] = build_quotient(z6, {3});
  CHECK(q3->order() == 3);
  CHECK(map3(0) == 0);
  CHECK(map3(3) == 0);

  auto [same, map_same] = build_quotient(z6, {0});
  CHECK(same->order() == 6);

  auto s3 = build_from_permutations({{1, 0, 2}, {0, 2, 1}});
  // a 3-cycle: product of the two transpositions
  int three_cycle = s3->mul(s3->gens()[0], s3->gens()[1]);
  auto [q2, map2] = build_quotient(s3, {three_cycle});
  CHECK(q2->order() == 2);

  // quotient map is a homomorphism carrying generators to generators
  for (int g = 0; g < s3->order(); ++g)
    for (int h = 0; h < s3->order(); ++h)
      CHECK(map2(s3->mul(g, h)) == q2->mul(map2(g), map2(h)));
  for (std::size_t j = 0; j < s3->gens().size(); ++j)
    CHECK(map2(s3->gens()[j]) == q2->gens()[j]);
}

TEST_CASE("diagonal products") {
  auto z2 = build_cyclic(2), z3 = build_cyclic(3), z4 = build_cyclic(4);
  auto [d6, proj6] = build_diagonal_product({z2, z3});
  CHECK(d6->order() == 6);
  auto [d4, proj4] = build_diagonal_product({z2, z4});
  CHECK(d4->order() == 4);
  auto [dz3, projz3] = build_diagonal_product({z3, z3});
  CHECK(dz3->order() == 3);

  // projections are onto and generator-matching
  for (std::size_t m = 0; m < proj6.size(); ++m) {
    const QuotientMap& pr = proj6[m];
    std::vector<char> hit(pr.target->order(), 0);
    for (int g = 0; g < d6->order(); ++g) {
      hit[pr(g)] = 1;
      for (int h = 0; h < d6->order(); ++h)
        CHECK(pr(d6->mul(g, h)) == pr.target->mul(pr(g), pr(h)));
    }
    for (char c : hit) CHECK(c == 1);
    CHECK(pr(d6->gens()[0]) == pr.target->gens()[0]);
  }

  CHECK_THROWS_AS(build_diagonal_product({z2, build_sl2(2)}), KMismatch);
}

TEST_CASE("word metric is right-invariant") {
  auto g = test_helpers::dihedral(5);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, g->order() - 1);
  for (int trial = 0; trial < 200; ++trial) {
    int a = pick(rng), b = pick(rng), f = pick(rng);
    CHECK(g->distance(g->mul(a, f), g->mul(b, f)) == g->distance(a, b));
  }
  CHECK(g->distance(3, 3) == 0);
}

TEST_CASE("words: parsing and evaluation") {
  auto z6 = build_cyclic(6);
  CHECK(z6->evaluate(parse_word("a1a1a1", 1)) == 3);
  CHECK(z6->evaluate(parse_word("a1 A1", 1)) == 0);
  CHECK(format_word(parse_word("a1A1", 1)) == "a1A1");
  CHECK_THROWS_AS(parse_word("a2", 1), AlphabetMismatch);
  CHECK_THROWS_AS(parse_word("b1", 1), AlphabetMismatch);
  CHECK(is_quotient({parse_word("a1a1a1a1a1a1", 1)}, *z6));
  CHECK(!is_quotient({parse_word("a1a1", 1)}, *z6));
}

TEST_CASE("group algebra arithmetic") {
  auto z3 = build_cyclic(3);
  GroupAlgElement a(z3);
  a.add(1, Scalar(2.0, 1.0));
  a.add(2, -1.0);

  CHECK(l1_norm(conv(GroupAlgElement::delta(z3, 0), a) - a) == 0.0);

  GroupAlgElement ig = GroupAlgElement::delta(z3, 1, Scalar(0.0, 1.0));
  GroupAlgElement expect = GroupAlgElement::delta(z3, 2, Scalar(0.0, -1.0));
  CHECK(l1_norm(star(ig) - expect) == 0.0);

  GroupAlgElement d = laplacian_group(z3);
  CHECK(d.at(0) == Scalar(2.0));
  CHECK(d.at(1) == Scalar(-1.0));
  CHECK(propagation(d) <= 1);
  CHECK(is_self_adjoint(d));
  // Delta^2 = 3 Delta in C[Z/3]
  CHECK(l1_norm(conv(d, d) - d * 3.0) < 1e-12);

  CHECK_THROWS_AS(conv(a, GroupAlgElement::delta(build_cyclic(4), 0)),
                  GroupMismatch);

  // star is an anti-homomorphism: (ab)* = b* a*
  GroupAlgElement b = d + ig;
  CHECK(l1_norm(star(conv(a, b)) - conv(star(b), star(a))) < 1e-12);
}

TEST_CASE("laplacian multiset conventions") {
  // involutive generator contributes -2 at itself
  auto z2 = build_cyclic(2);
  GroupAlgElement d2 = laplacian_group(z2);
  CHECK(d2.at(0) == Scalar(2.0));
  CHECK(d2.at(1) == Scalar(-2.0));

  // identity generator cancels against its share of 2k
  auto t = build_cyclic(1);
  GroupAlgElement dt = laplacian_group(t);
  CHECK(dt.coeffs().empty());
}
