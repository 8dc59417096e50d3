#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cgc/group_alg.hpp"
#include "cgc/roe.hpp"
#include "cgc/spectral.hpp"
#include "cgc/topology.hpp"

namespace cgc {

// Witness for Delta^2 - nu Delta + eps delta_e ~ sum_i xi_i* xi_i, every
// xi_i with propagation <= radius. The residual is recomputed by exact
// convolution whenever a certificate is produced or verified.
struct SosCertificate {
  GroupPtr group;
  double nu = 0.0;
  double epsilon = 0.0;
  int radius = 0;
  int n = 0;
  std::vector<GroupAlgElement> xi;
  GroupAlgElement residual;
  double residual_l1 = 0.0;
  int iterations = 0;
  bool converged = false;
  std::uint64_t seed = 0;

  SosCertificate() : residual(GroupPtr{}) {}
  explicit SosCertificate(GroupPtr g) : group(std::move(g)), residual(group) {}
};

enum class SosStatus {
  Certificate,          // feasible, certificate attached
  Infeasible,           // disproved by the regular-representation spectrum
  NoCertificate,        // solver stalled at this R / iteration budget
};

struct SosResult {
  SosStatus status = SosStatus::NoCertificate;
  std::optional<SosCertificate> certificate;
  int iterations = 0;
  double final_distance = 0.0;  // projection distance at termination
};

struct SosOptions {
  double tol = 1e-9;        // acceptance threshold on the recomputed residual l1
  int max_iter = 20000;
  int patience = 500;       // stall window (relative progress < 1e-10)
  std::uint64_t seed = 0;   // seeds the optional random start perturbation
  double start_noise = 0.0;
  int eigencheck_order_cap = 1024;
};

struct GramMatrix {
  std::vector<int> basis;  // elements of B(1_G, R)
  Eigen::MatrixXd P;
};

namespace detail {

struct PairClasses {
  std::vector<int> basis;
  std::vector<std::vector<std::pair<int, int>>> classes;  // by target element g
  std::vector<int> class_elem;
  std::vector<double> rhs;
};

inline PairClasses build_pair_classes(const MarkedGroup& G, int radius,
                                      const GroupAlgElement& target) {
  PairClasses pc;
  pc.basis = G.ball(radius);
  const int N = static_cast<int>(pc.basis.size());
  std::vector<int> class_of(G.order(), -1);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      int g = G.mul(G.inv(pc.basis[i]), pc.basis[j]);
      if (class_of[g] < 0) {
        class_of[g] = static_cast<int>(pc.classes.size());
        pc.classes.emplace_back();
        pc.class_elem.push_back(g);
      }
      pc.classes[class_of[g]].emplace_back(i, j);
    }
  pc.rhs.assign(pc.classes.size(), 0.0);
  for (const auto& [g, c] : target.coeffs()) {
    if (class_of[g] < 0)
      throw SupportExceedsBall("target support at element " + std::to_string(g) +
                               " (word length " + std::to_string(G.word_len(g)) +
                               ") not reachable from the radius-" +
                               std::to_string(radius) + " Gram basis");
    pc.rhs[class_of[g]] = c.real();
  }
  return pc;
}

inline void project_affine(Eigen::MatrixXd& P, const PairClasses& pc) {
  for (std::size_t c = 0; c < pc.classes.size(); ++c) {
    double s = 0.0;
    for (auto [i, j] : pc.classes[c]) s += P(i, j);
    double corr = (pc.rhs[c] - s) / static_cast<double>(pc.classes[c].size());
    for (auto [i, j] : pc.classes[c]) P(i, j) += corr;
  }
}

inline Eigen::MatrixXd project_psd(const Eigen::MatrixXd& P) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (P + P.transpose()));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace detail

// Searches for a PSD Gram matrix on the basis B(1_G, R) whose pair sums
// reproduce a + eps delta_e, by Dykstra-corrected alternating projections
// between the PSD cone and the affine constraint set. A definitive
// Infeasible is declared only when the regular-representation spectrum of
// a + eps delta_e disproves positivity; a stall is reported as
// NoCertificate.
inline SosResult sos_feasibility(const GroupAlgElement& a, int radius,
                                 double epsilon, SosOptions opts = {}) {
  const GroupPtr& G = a.group();
  if (!is_self_adjoint(a))
    throw NotSelfAdjoint("target element is not self-adjoint within 1e-12");
  GroupAlgElement target = a + GroupAlgElement::delta(G, 0, epsilon);

  SosResult result;

  // necessity: positivity in the regular representation (= the maximal
  // algebra of a finite group)
  if (G->order() <= opts.eigencheck_order_cap) {
    Eigen::MatrixXd M(G->order(), G->order());
    M.setZero();
    for (const auto& [u, c] : target.coeffs())
      for (int h = 0; h < G->order(); ++h) M(G->mul(u, h), h) += c.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -1e-9) {
      result.status = SosStatus::Infeasible;
      return result;
    }
  }

  detail::PairClasses pc = detail::build_pair_classes(*G, radius, target);
  const int N = static_cast<int>(pc.basis.size());

  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(N, N);
  detail::project_affine(X, pc);  // least-norm affine point as start
  if (opts.start_noise > 0.0) {
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> dist(0.0, opts.start_noise);
    Eigen::MatrixXd noise(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j <= i; ++j) noise(i, j) = noise(j, i) = dist(rng);
    X += noise;
  }

  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(N, N), q = Eigen::MatrixXd::Zero(N, N);
  Eigen::MatrixXd Y;
  double best = std::numeric_limits<double>::infinity();
  int best_iter = 0;
  const double inner_tol = std::min(1e-11, opts.tol / std::max(1, N));
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    Y = detail::project_psd(X + p);
    p = X + p - Y;
    Eigen::MatrixXd Z = Y + q;
    detail::project_affine(Z, pc);
    q = Y + q - Z;
    X = Z;
    double dist = (X - Y).norm();
    result.final_distance = dist;
    if (dist < inner_tol) {
      ++it;
      break;
    }
    if (dist < best * (1.0 - 1e-10)) {
      best = dist;
      best_iter = it;
    } else if (it - best_iter >= opts.patience) {
      break;  // stalled
    }
  }
  result.iterations = it;

  // factor the PSD projection of the final iterate and recompute the
  // residual exactly
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (X + X.transpose()));
  double lam_max = std::max(es.eigenvalues().maxCoeff(), 0.0);
  double cutoff = 1e-14 * std::max(lam_max, 1.0);

  SosCertificate cert(G);
  cert.nu = 0.0;
  cert.epsilon = epsilon;
  cert.radius = radius;
  cert.seed = opts.seed;
  cert.iterations = it;
  for (int c = 0; c < N; ++c) {
    double lam = es.eigenvalues()(c);
    if (lam <= cutoff) continue;
    GroupAlgElement xi(G);
    double s = std::sqrt(lam);
    for (int i = 0; i < N; ++i) {
      double coeff = s * es.eigenvectors()(i, c);
      if (coeff != 0.0) xi.add(pc.basis[i], coeff);
    }
    cert.xi.push_back(std::move(xi));
  }
  cert.n = static_cast<int>(cert.xi.size());

  GroupAlgElement sum(G);
  for (const auto& xi : cert.xi) sum += conv(star(xi), xi);
  cert.residual = target - sum;
  cert.residual_l1 = l1_norm(cert.residual);
  cert.converged = cert.residual_l1 <= opts.tol;

  if (cert.converged) {
    result.status = SosStatus::Certificate;
    result.certificate = std::move(cert);
  } else {
    result.status = SosStatus::NoCertificate;
  }
  return result;
}

struct VerifyResult {
  double residual_l1 = 0.0;
  bool propagation_ok = true;
  double min_gram_eig = 0.0;
};

// Independent re-check of a certificate: exact convolution, propagation
// bound, and the spectrum of the Gram matrix reassembled from the xi.
inline VerifyResult verify_certificate(const SosCertificate& cert,
                                       const GroupAlgElement& target) {
  VerifyResult out;
  GroupAlgElement sum(target.group());
  std::vector<int> support;
  for (const auto& xi : cert.xi) {
    sum += conv(star(xi), xi);
    if (propagation(xi) > cert.radius) out.propagation_ok = false;
    for (const auto& [g, c] : xi.coeffs()) support.push_back(g);
  }
  out.residual_l1 = l1_norm(target - sum);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  if (!support.empty()) {
    const int N = static_cast<int>(support.size());
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(N, N);
    auto pos = [&support](int g) {
      return static_cast<int>(std::lower_bound(support.begin(), support.end(), g) -
                              support.begin());
    };
    for (const auto& xi : cert.xi) {
      Eigen::VectorXd alpha = Eigen::VectorXd::Zero(N);
      for (const auto& [g, c] : xi.coeffs()) alpha(pos(g)) = c.real();
      P += alpha * alpha.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P, Eigen::EigenvaluesOnly);
    out.min_gram_eig = es.eigenvalues()(0);
  }
  return out;
}

struct CertifiedGapResult {
  double nu = 0.0;
  std::optional<SosCertificate> certificate;
};

// Bisection over nu of sos_feasibility(Delta^2 - nu Delta, R, eps). The
// regular-representation spectrum of Delta gives a definitive upper cap
// (positivity of Delta^2 - nu Delta in the maximal algebra is necessary
// for Sigma^2 membership), so the certified value never exceeds the exact
// gap by more than the bisection slack.
inline CertifiedGapResult certified_gap_full(const GroupPtr& G, int radius,
                                             double epsilon, SosOptions opts = {}) {
  CertifiedGapResult out;
  GroupAlgElement delta = laplacian_group(G);
  if (delta.coeffs().empty()) {
    out.nu = kGapInfinity;  // trivial Laplacian, spectrum {0}
    return out;
  }
  Eigen::MatrixXd L = detail::laplacian_dense(*G);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L, Eigen::EigenvaluesOnly);
  double zero_thr = 1e-8 * std::max(es.eigenvalues().maxCoeff(), 0.0);
  double nu_cap = kGapInfinity;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > zero_thr) {
      nu_cap = es.eigenvalues()(i);
      break;
    }
  if (!std::isfinite(nu_cap)) {
    out.nu = kGapInfinity;
    return out;
  }

  auto attempt = [&](double nu) -> std::optional<SosCertificate> {
    // epsilon-free necessity gate
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      double lam = es.eigenvalues()(i);
      if (lam * lam - nu * lam < -1e-12) return std::nullopt;
    }
    GroupAlgElement target = conv(delta, delta) - delta * nu +
                             GroupAlgElement::delta(G, 0, epsilon);
    // exact two-square witness, valid whenever nu <= 2 sqrt(epsilon):
    //   (sqrt(eps) e - nu/(2 sqrt(eps)) Delta)^2 + (1 - nu^2/(4 eps)) Delta^2
    if (radius >= 1 && epsilon > 0.0 && nu <= 2.0 * std::sqrt(epsilon)) {
      double s = std::sqrt(epsilon);
      SosCertificate cert(G);
      cert.nu = nu;
      cert.epsilon = epsilon;
      cert.radius = radius;
      cert.seed = opts.seed;
      cert.xi.push_back(GroupAlgElement::delta(G, 0, s) +
                        delta * (-nu / (2.0 * s)));
      cert.xi.push_back(delta * std::sqrt(1.0 - nu * nu / (4.0 * epsilon)));
      cert.n = 2;
      GroupAlgElement sum(G);
      for (const auto& xi : cert.xi) sum += conv(star(xi), xi);
      cert.residual = target - sum;
      cert.residual_l1 = l1_norm(cert.residual);
      cert.converged = cert.residual_l1 <= opts.tol;
      if (cert.converged) return cert;
    }
    SosResult r = sos_feasibility(conv(delta, delta) - delta * nu, radius,
                                  epsilon, opts);
    if (r.status != SosStatus::Certificate) return std::nullopt;
    r.certificate->nu = nu;
    return std::move(r.certificate);
  };

  double lo = 0.0, hi = nu_cap * (1.0 + 1e-9) + 1e-12;
  if (auto cert = attempt(nu_cap)) {  // the exact gap itself is usually feasible
    out.nu = nu_cap;
    out.certificate = std::move(cert);
    return out;
  }
  if (auto cert = attempt(0.0)) {
    out.certificate = std::move(cert);
  }
  for (int step = 0; step < 40 && hi - lo > std::max(1e-9, 5e-3 * lo); ++step) {
    double mid = 0.5 * (lo + hi);
    if (auto cert = attempt(mid)) {
      lo = mid;
      out.certificate = std::move(cert);
    } else {
      hi = mid;
    }
  }
  out.nu = lo;
  return out;
}

inline double certified_gap(const GroupPtr& G, int radius, double epsilon,
                            SosOptions opts = {}) {
  return certified_gap_full(G, radius, epsilon, opts).nu;
}

// The constructive averaging of a Roe-algebra sum of squares into the group
// algebra. Psi is the uniform mean of the finite group; the Gram matrix
// [Psi(conj(xi_h) xi_g)] over B(1_G, R) is factored through its PSD square
// root, giving |B(1_G, R)| group-algebra elements per input.
inline std::vector<GroupAlgElement> roe_to_group_sos(
    const std::vector<Kernel>& xi_list, const GroupPtr& G, int radius) {
  const int n = G->order();
  for (const auto& xi : xi_list) {
    if (xi.size() != n)
      throw Error("kernel size does not match the group order");
    if (xi.propagation() > static_cast<double>(radius) + 1e-12)
      throw PropagationExceeded("input kernel propagation exceeds R");
  }
  // x = sum xi* xi must lie in the image of the group algebra
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& xi : xi_list) x += xi.matrix().adjoint() * xi.matrix();
  std::vector<Scalar> avg(n, 0.0);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) avg[G->mul(g, G->inv(h))] += x(g, h);
  for (auto& c : avg) c /= static_cast<double>(n);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      if (std::abs(x(g, h) - avg[G->mul(g, G->inv(h))]) > 1e-10)
        throw NotInGroupAlgebra(
            "sum of squares is not constant on group-translation diagonals");

  std::vector<int> basis = G->ball(radius);
  const int N = static_cast<int>(basis.size());
  std::vector<GroupAlgElement> out;
  for (const auto& xi : xi_list) {
    // xi = sum_g xi_g g with diagonal xi_g(x) = xi(x, g^{-1} x)
    Eigen::MatrixXcd comp(n, N);  // column per basis element g
    for (int bi = 0; bi < N; ++bi) {
      int gi = G->inv(basis[bi]);
      for (int p = 0; p < n; ++p) comp(p, bi) = xi(p, G->mul(gi, p));
    }
    Eigen::MatrixXcd M = comp.adjoint() * comp / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    Eigen::MatrixXcd S = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
                         es.eigenvectors().adjoint();
    // row i of S gives the coefficients of the i-th output element: then
    // sum_i conj(eta_i(u)) eta_i(v) = (S^H S)[u,v] = M[u,v]
    for (int i = 0; i < N; ++i) {
      GroupAlgElement eta(G);
      for (int bi = 0; bi < N; ++bi) {
        Scalar c = S(i, bi);
        if (c != 0.0) eta.add(basis[bi], c);
      }
      out.push_back(std::move(eta));
    }
  }
  return out;
}

// Pushes a certificate along the word-forced partial isomorphism between
// the 2R-balls of H and G and recomputes the residual against the
// transported target Delta_G^2 - nu Delta_G + eps delta_e.
inline SosCertificate transport_certificate(const SosCertificate& cert,
                                            const GroupPtr& G) {
  const GroupPtr& H = cert.group;
  int R = cert.radius;
  for (const auto& xi : cert.xi) R = std::max(R, propagation(xi));
  if (!in_neighborhood(*H, *G, R))
    throw BallTooSmall("groups are not radius-" + std::to_string(R) +
                       " neighbors; certificate supports do not transport");
  auto phi = detail::word_forced_map(*H, *G, 2 * R);

  SosCertificate moved(G);
  moved.nu = cert.nu;
  moved.epsilon = cert.epsilon;
  moved.radius = cert.radius;
  moved.seed = cert.seed;
  moved.iterations = cert.iterations;
  for (const auto& xi : cert.xi) {
    GroupAlgElement img(G);
    for (const auto& [g, c] : xi.coeffs()) img.add((*phi)[g], c);
    moved.xi.push_back(std::move(img));
  }
  moved.n = static_cast<int>(moved.xi.size());

  GroupAlgElement delta = laplacian_group(G);
  GroupAlgElement target = conv(delta, delta) - delta * moved.nu +
                           GroupAlgElement::delta(G, 0, moved.epsilon);
  GroupAlgElement sum(G);
  for (const auto& xi : moved.xi) sum += conv(star(xi), xi);
  moved.residual = target - sum;
  moved.residual_l1 = l1_norm(moved.residual);
  moved.converged = cert.converged;
  return moved;
}

}  // namespace cgc
