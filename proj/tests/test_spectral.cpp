#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cgc/spectral.hpp"
#include "helpers.hpp"

using namespace cgc;

namespace {
double cyclic_nu(int m) { return 2.0 - 2.0 * std::cos(2.0 * M_PI / m); }
}  // namespace

TEST_CASE("cyclic gaps match the circulant closed form") {
  CHECK(spectral_gap(build_cyclic(3)).nu == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(spectral_gap(build_cyclic(4)).nu == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(spectral_gap(build_cyclic(6)).nu == doctest::Approx(1.0).epsilon(1e-12));
  for (int m = 3; m <= 64; ++m) {
    SpectrumReport r = spectral_gap(build_cyclic(m));
    CHECK(std::abs(r.nu - cyclic_nu(m)) < 1e-9);
    CHECK(r.lambda_max <= 4.0 + 1e-9);
    CHECK(r.multiplicity_zero == 1);
    CHECK(r.residual < 1e-9);
  }
}

TEST_CASE("trivial spectrum") {
  SpectrumReport r = spectral_gap(build_cyclic(1));
  CHECK(std::isinf(r.nu));
  CHECK(r.order == 1);
}

TEST_CASE("sparse path agrees with dense") {
  auto g = build_cyclic(600);
  SpectrumReport dense = spectral_gap(g, EigenMethod::Dense);
  SpectrumReport sparse = spectral_gap(g, EigenMethod::Sparse);
  CHECK(sparse.method == "sparse");
  CHECK(dense.method == "dense");
  CHECK(std::abs(dense.nu - sparse.nu) < 1e-7);
  CHECK(std::abs(dense.lambda_max - sparse.lambda_max) < 1e-7);
  CHECK(std::abs(dense.nu - cyclic_nu(600)) < 1e-9);
}

TEST_CASE("nonabelian groups") {
  SpectrumReport s3 = spectral_gap(test_helpers::dihedral(3));
  CHECK(s3.nu > 0.0);
  CHECK(s3.order == 6);
  SpectrumReport sl25 = spectral_gap(build_sl2(5));
  CHECK(sl25.order == 120);
  CHECK(sl25.nu > 0.1);  // expander-quality gap at this order
}

TEST_CASE("family reports and the decay verdict") {
  std::vector<GroupPtr> family;
  for (int m = 3; m <= 64; ++m) family.push_back(build_cyclic(m));
  auto reports = family_gaps(family);
  CHECK(reports.size() == 62);

  Verdict v = expander_verdict(reports);
  CHECK(std::abs(v.exponent - 2.0) < 0.2);
  CHECK(v.verdict.find("gap-decay") == 0);
  CHECK(v.min_nu == doctest::Approx(cyclic_nu(64)).epsilon(1e-9));

  CHECK_THROWS_AS(expander_verdict({reports[0], reports[1]}), InsufficientData);
}

TEST_CASE("union gap is the minimum block gap") {
  std::vector<GroupPtr> blocks{build_cyclic(4), build_cyclic(6), build_cyclic(3)};
  CHECK(union_gap(blocks) == doctest::Approx(1.0).epsilon(1e-12));

  // cross-check against the assembled block-diagonal eigensolve
  int total = 0;
  for (const auto& b : blocks) total += b->order();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(total, total);
  int off = 0;
  for (const auto& b : blocks) {
    L.block(off, off, b->order(), b->order()) = detail::laplacian_dense(*b);
    off += b->order();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L, Eigen::EigenvaluesOnly);
  double nu = 0.0;
  for (int i = 0; i < total; ++i)
    if (es.eigenvalues()(i) > 1e-8) {
      nu = es.eigenvalues()(i);
      break;
    }
  CHECK(std::abs(nu - union_gap(blocks)) < 1e-9);
  CHECK(es.eigenvalues().cwiseAbs().minCoeff() < 1e-12);
}

TEST_CASE("quotient monotonicity") {
  auto z12 = build_cyclic(12);
  auto [z6, q12] = build_quotient(z12, {6});
  CHECK(z6->order() == 6);
  CHECK(check_quotient_monotonicity(z12, z6, q12));

  auto s3 = build_from_permutations({{1, 0, 2}, {0, 2, 1}});
  int three_cycle = s3->mul(s3->gens()[0], s3->gens()[1]);
  auto [z2, qs3] = build_quotient(s3, {three_cycle});
  CHECK(check_quotient_monotonicity(s3, z2, qs3));

  CHECK_THROWS_AS(check_quotient_monotonicity(z12, z6, qs3), Error);
}

TEST_CASE("laplacian rows sum to zero exactly") {
  for (const auto& g : {build_cyclic(5), test_helpers::dihedral(4), build_sl2(3)}) {
    Eigen::MatrixXd L = detail::laplacian_dense(*g);
    CHECK((L.rowwise().sum()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((L - L.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}
