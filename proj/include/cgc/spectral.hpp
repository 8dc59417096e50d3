#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "cgc/group_alg.hpp"
#include "cgc/roe.hpp"

namespace cgc {

inline constexpr double kGapInfinity = std::numeric_limits<double>::infinity();

struct SpectrumReport {
  std::string label;
  int order = 0;
  double nu = kGapInfinity;       // smallest nonzero eigenvalue, +inf when spectrum is {0}
  double lambda_max = 0.0;
  std::string method = "dense";
  double residual = 0.0;          // max |Lv - lambda v| over reported eigenpairs
  int multiplicity_zero = 1;
  std::string error;              // set when a family entry failed
};

enum class EigenMethod { Auto, Dense, Sparse };

// |G| x |G| symmetric kernel with entry (g, h) equal to the Laplacian
// coefficient at g h^{-1}; rows sum to zero exactly.
inline Kernel laplacian_matrix(const GroupPtr& G) {
  return group_algebra_embed(laplacian_group(G));
}

namespace detail {

inline Eigen::MatrixXd laplacian_dense(const MarkedGroup& G) {
  // integer coefficient accumulation, converted once
  std::vector<int> coeff(G.order(), 0);
  coeff[0] = 2 * G.k();
  for (int s : G.gens()) {
    coeff[s] -= 1;
    coeff[G.inv(s)] -= 1;
  }
  Eigen::MatrixXd L(G.order(), G.order());
  for (int g = 0; g < G.order(); ++g)
    for (int h = 0; h < G.order(); ++h)
      L(g, h) = static_cast<double>(coeff[G.mul(g, G.inv(h))]);
  return L;
}

inline void laplacian_matvec(const MarkedGroup& G, const Eigen::VectorXd& x,
                             Eigen::VectorXd& y) {
  y = 2.0 * G.k() * x;
  for (int s : G.gens()) {
    int si = G.inv(s);
    for (int g = 0; g < G.order(); ++g) {
      y(g) -= x(G.mul(si, g));
      y(g) -= x(G.mul(s, g));
    }
  }
}

struct LanczosExtremes {
  double smallest = 0.0, largest = 0.0, residual = 0.0;
};

// Lanczos with full reorthogonalization on the orthogonal complement of the
// constants (the all-ones vector is deflated explicitly). Returns the
// extreme Ritz values with residual estimates from explicit matvecs.
inline LanczosExtremes lanczos_deflated(const MarkedGroup& G, double tol,
                                        int max_dim) {
  const int n = G.order();
  Eigen::VectorXd ones = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
  auto deflate = [&ones](Eigen::VectorXd& v) { v -= ones.dot(v) * ones; };

  std::vector<Eigen::VectorXd> basis;
  std::vector<double> alpha, beta;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  // deterministic start vector with a nonzero component everywhere
  for (int i = 0; i < n; ++i) v(i) = std::cos(1.0 + 0.7 * i);
  deflate(v);
  v.normalize();
  basis.push_back(v);

  Eigen::VectorXd w(n);
  const int dim = std::min(max_dim, n - 1);
  LanczosExtremes out;
  for (int j = 0; j < dim; ++j) {
    laplacian_matvec(G, basis[j], w);
    deflate(w);
    double a = basis[j].dot(w);
    alpha.push_back(a);
    w -= a * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    for (const auto& b : basis) w -= b.dot(w) * b;  // full reorthogonalization
    double bnorm = w.norm();

    bool last = (j + 1 == dim) || bnorm < 1e-13;
    if (((j + 1) % 10 == 0) || last) {
      const int m = static_cast<int>(alpha.size());
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
      auto ritz_vector = [&](int col) {
        Eigen::VectorXd rv = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < m; ++i) rv += es.eigenvectors()(i, col) * basis[i];
        return rv;
      };
      Eigen::VectorXd v_lo = ritz_vector(0), v_hi = ritz_vector(m - 1), t(n);
      laplacian_matvec(G, v_lo, t);
      deflate(t);
      double r_lo = (t - es.eigenvalues()(0) * v_lo).norm();
      laplacian_matvec(G, v_hi, t);
      deflate(t);
      double r_hi = (t - es.eigenvalues()(m - 1) * v_hi).norm();
      out.smallest = es.eigenvalues()(0);
      out.largest = es.eigenvalues()(m - 1);
      out.residual = std::max(r_lo, r_hi);
      if (out.residual < tol || last) {
        if (out.residual >= tol && last && bnorm >= 1e-13)
          throw ConvergenceFailure(
              "Lanczos residual " + std::to_string(out.residual) + " after " +
              std::to_string(m) + " iterations on " + G.label());
        return out;
      }
    }
    if (bnorm < 1e-13) break;
    w /= bnorm;
    beta.push_back(bnorm);
    basis.push_back(w);
  }
  return out;
}

}  // namespace detail

inline SpectrumReport spectral_gap(const GroupPtr& G,
                                   EigenMethod method = EigenMethod::Auto,
                                   double tol = 1e-9) {
  SpectrumReport report;
  report.label = G->label();
  report.order = G->order();
  if (method == EigenMethod::Auto)
    method = G->order() < 2000 ? EigenMethod::Dense : EigenMethod::Sparse;

  if (G->order() == 1) {
    report.method = method == EigenMethod::Sparse ? "sparse" : "dense";
    return report;  // spectrum {0}, nu = +inf sentinel
  }

  if (method == EigenMethod::Dense) {
    Eigen::MatrixXd L = detail::laplacian_dense(*G);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    const auto& ev = es.eigenvalues();
    report.lambda_max = ev(ev.size() - 1);
    double zero_thr = 1e-8 * std::max(report.lambda_max, 0.0);
    report.multiplicity_zero = 0;
    int first_nonzero = -1;
    for (int i = 0; i < ev.size(); ++i) {
      if (ev(i) <= zero_thr)
        ++report.multiplicity_zero;
      else if (first_nonzero < 0)
        first_nonzero = i;
    }
    if (first_nonzero >= 0) {
      report.nu = ev(first_nonzero);
      Eigen::VectorXd v = es.eigenvectors().col(first_nonzero);
      report.residual = (L * v - report.nu * v).lpNorm<Eigen::Infinity>();
    }
    Eigen::VectorXd vmax = es.eigenvectors().col(ev.size() - 1);
    report.residual = std::max(
        report.residual,
        (L * vmax - report.lambda_max * vmax).lpNorm<Eigen::Infinity>());
    report.method = "dense";
  } else {
    auto ext = detail::lanczos_deflated(*G, tol, 6000);
    report.nu = ext.smallest;
    report.lambda_max = ext.largest;
    report.residual = ext.residual;
    report.multiplicity_zero = 1;  // Cayley graphs are connected
    report.method = "sparse";
  }
  return report;
}

inline std::vector<SpectrumReport> family_gaps(
    const std::vector<GroupPtr>& family, EigenMethod method = EigenMethod::Auto) {
  std::vector<SpectrumReport> reports;
  for (const auto& G : family) {
    try {
      reports.push_back(spectral_gap(G, method));
    } catch (const Error& e) {
      SpectrumReport r;
      r.label = G->label();
      r.order = G->order();
      r.error = e.what();
      reports.push_back(std::move(r));
    }
  }
  return reports;
}

struct Verdict {
  double min_nu = kGapInfinity;
  double exponent = 0.0;   // decay exponent of nu against order
  double r_squared = 0.0;
  std::string verdict;
};

// Least-squares fit of log(nu) against log(order). Finite-range evidence
// only, never a proof about the infinite family.
inline Verdict expander_verdict(const std::vector<SpectrumReport>& reports) {
  std::vector<double> lx, ly;
  Verdict v;
  for (const auto& r : reports) {
    if (!r.error.empty() || !std::isfinite(r.nu) || r.nu <= 0.0) continue;
    v.min_nu = std::min(v.min_nu, r.nu);
    lx.push_back(std::log(static_cast<double>(r.order)));
    ly.push_back(std::log(r.nu));
  }
  if (lx.size() < 3)
    throw InsufficientData("need at least 3 reports with finite positive gap");
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
    syy += ly[i] * ly[i];
  }
  double denom = n * sxx - sx * sx;
  double slope = denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
  double var_y = n * syy - sy * sy;
  v.r_squared = var_y == 0.0 ? 1.0 : (n * sxy - sx * sy) * slope / var_y;
  v.exponent = -slope;
  if (v.exponent >= 0.25) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "gap-decay (exponent %.3f)", v.exponent);
    v.verdict = buf;
  } else {
    v.verdict = "no decay detected over range";
  }
  return v;
}

// Gap of the block-diagonal Laplacian of the disjoint union: the minimum
// per-block gap (the kernel collects one constant vector per block).
inline double union_gap(const std::vector<GroupPtr>& groups) {
  if (groups.empty()) throw Error("empty union");
  double nu = kGapInfinity;
  for (const auto& G : groups) nu = std::min(nu, spectral_gap(G).nu);
  return nu;
}

// nu is monotone under marked quotients; a false return here signals an
// implementation bug and tests treat it as a hard failure.
inline bool check_quotient_monotonicity(const GroupPtr& big, const GroupPtr& small,
                                        const QuotientMap& q, double tol = 1e-9) {
  if (q.source != big || q.target != small)
    throw Error("quotient map does not connect the given groups");
  double nu_big = spectral_gap(big).nu;
  double nu_small = spectral_gap(small).nu;
  if (!std::isfinite(nu_small)) return true;
  return nu_big <= nu_small + tol;
}

}  // namespace cgc
