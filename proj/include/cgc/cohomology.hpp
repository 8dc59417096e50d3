#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <optional>
#include <utility>
#include <vector>

#include "cgc/roe.hpp"

namespace cgc {

// A finite-dimensional left module over the kernel algebra of a finite
// plain union, given by the action of the matrix units e_xy (same block).
class ModuleRep {
 public:
  ModuleRep(SpacePtr space, int dim) : space_(std::move(space)), dim_(dim) {
    units_.assign(static_cast<std::size_t>(space_->total()) * space_->total(),
                  Eigen::MatrixXd());
  }

  // ell_2(X) with e_xy acting as the matrix unit itself.
  static ModuleRep natural(SpacePtr space) {
    const int n = space->total();
    ModuleRep rep(std::move(space), n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        if (rep.space_->block_of(x) != rep.space_->block_of(y)) continue;
        Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);
        u(x, y) = 1.0;
        rep.set_unit(x, y, std::move(u));
      }
    return rep;
  }

  static ModuleRep direct_sum(const ModuleRep& a, const ModuleRep& b) {
    ModuleRep rep(a.space_, a.dim_ + b.dim_);
    const int n = rep.space_->total();
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        if (rep.space_->block_of(x) != rep.space_->block_of(y)) continue;
        Eigen::MatrixXd u = Eigen::MatrixXd::Zero(rep.dim_, rep.dim_);
        u.topLeftCorner(a.dim_, a.dim_) = a.unit(x, y);
        u.bottomRightCorner(b.dim_, b.dim_) = b.unit(x, y);
        rep.set_unit(x, y, std::move(u));
      }
    return rep;
  }

  const SpacePtr& space() const { return space_; }
  int dim() const { return dim_; }

  void set_unit(int x, int y, Eigen::MatrixXd m) {
    units_[static_cast<std::size_t>(x) * space_->total() + y] = std::move(m);
  }
  const Eigen::MatrixXd& unit(int x, int y) const {
    return units_[static_cast<std::size_t>(x) * space_->total() + y];
  }

  // action of b_xy = e_xy - e_xx (zero when x == y)
  Eigen::MatrixXd ideal_basis_action(int x, int y) const {
    if (x == y) return Eigen::MatrixXd::Zero(dim_, dim_);
    return unit(x, y) - unit(x, x);
  }

 private:
  SpacePtr space_;
  int dim_;
  std::vector<Eigen::MatrixXd> units_;
};

// Basis {e_xy - e_xx : x != y, same block} of the augmentation ideal
// L = ker omega; dimension sum_b n_b (n_b - 1).
inline std::vector<std::pair<int, int>> augmentation_ideal_basis(
    const DisjointUnionSpace& X) {
  std::vector<std::pair<int, int>> basis;
  for (int x = 0; x < X.total(); ++x)
    for (int y = 0; y < X.total(); ++y)
      if (x != y && X.block_of(x) == X.block_of(y)) basis.emplace_back(x, y);
  return basis;
}

// Shared bases for the degree-1 and degree-2 chain spaces over a fixed
// space and module. The tensor chain A (x)_D L is spanned by e_xy (x) b_yv
// after the balancing relation pins the middle index.
class CochainContext {
 public:
  CochainContext(SpacePtr space, ModuleRep module)
      : space_(std::move(space)), module_(std::move(module)) {
    pairs_ = augmentation_ideal_basis(*space_);
    for (std::size_t p = 0; p < pairs_.size(); ++p)
      pair_index_[pairs_[p]] = static_cast<int>(p);
    for (int x = 0; x < space_->total(); ++x)
      for (int y = 0; y < space_->total(); ++y) {
        if (space_->block_of(x) != space_->block_of(y)) continue;
        for (int v = 0; v < space_->total(); ++v)
          if (v != y && space_->block_of(v) == space_->block_of(y))
            triples_.push_back({x, y, v});
      }
  }

  const SpacePtr& space() const { return space_; }
  const ModuleRep& module() const { return module_; }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
  const std::vector<std::array<int, 3>>& triples() const { return triples_; }
  int dim_l() const { return static_cast<int>(pairs_.size()); }
  int dim_m() const { return module_.dim(); }

  int pair_index(int x, int y) const { return pair_index_.at({x, y}); }

 private:
  SpacePtr space_;
  ModuleRep module_;
  std::vector<std::pair<int, int>> pairs_;
  std::map<std::pair<int, int>, int> pair_index_;
  std::vector<std::array<int, 3>> triples_;
};

// A degree-1 or degree-2 cochain, flattened as one module vector per basis
// pair (resp. triple).
struct CochainMap {
  int degree = 1;
  Eigen::VectorXd values;

  Eigen::VectorXd value(const CochainContext& ctx, int slot) const {
    return values.segment(static_cast<std::ptrdiff_t>(slot) * ctx.dim_m(),
                          ctx.dim_m());
  }
};

// d1 v : b_xy -> action(b_xy) v
inline CochainMap differential_1(const CochainContext& ctx,
                                 const Eigen::VectorXd& v) {
  CochainMap theta;
  theta.degree = 1;
  theta.values.resize(static_cast<std::ptrdiff_t>(ctx.dim_l()) * ctx.dim_m());
  for (int p = 0; p < ctx.dim_l(); ++p) {
    auto [x, y] = ctx.pairs()[p];
    theta.values.segment(static_cast<std::ptrdiff_t>(p) * ctx.dim_m(), ctx.dim_m()) =
        ctx.module().ideal_basis_action(x, y) * v;
  }
  return theta;
}

// (d2 theta)(e_xy (x) b_yv) = action(e_xy) theta(b_yv) - theta(e_xy b_yv),
// where e_xy b_yv = b_xv - b_xy.
inline CochainMap differential_2(const CochainContext& ctx, const CochainMap& theta) {
  if (theta.degree != 1) throw DegreeUnsupported("d2 expects a degree-1 cochain");
  CochainMap out;
  out.degree = 2;
  const int dm = ctx.dim_m();
  out.values.resize(static_cast<std::ptrdiff_t>(ctx.triples().size()) * dm);
  for (std::size_t t = 0; t < ctx.triples().size(); ++t) {
    auto [x, y, v] = ctx.triples()[t];
    Eigen::VectorXd val =
        ctx.module().unit(x, y) * theta.value(ctx, ctx.pair_index(y, v));
    if (x != v) val -= theta.value(ctx, ctx.pair_index(x, v));
    if (x != y) val += theta.value(ctx, ctx.pair_index(x, y));
    out.values.segment(static_cast<std::ptrdiff_t>(t) * dm, dm) = val;
  }
  return out;
}

inline CochainMap differential(const CochainContext& ctx, int degree,
                               const Eigen::VectorXd& v) {
  if (degree != 1) throw DegreeUnsupported("vector input requires degree 1");
  return differential_1(ctx, v);
}
inline CochainMap differential(const CochainContext& ctx, int degree,
                               const CochainMap& theta) {
  if (degree != 2) throw DegreeUnsupported("cochain input requires degree 2");
  return differential_2(ctx, theta);
}

namespace detail {

inline int matrix_rank(const Eigen::MatrixXd& m, double tol = 1e-9) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  double thr = tol * std::max(1.0, svd.singularValues()(0));
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > thr) ++r;
  return r;
}

// Orthonormal basis of the column space of P.
inline Eigen::MatrixXd range_basis(const Eigen::MatrixXd& P, double tol = 1e-9) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(P, Eigen::ComputeThinU);
  double thr = svd.singularValues().size() == 0
                   ? 0.0
                   : tol * std::max(1.0, svd.singularValues()(0));
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > thr) ++r;
  return svd.matrixU().leftCols(r);
}

}  // namespace detail

// dim ker d2 - dim ran d1 over explicit bases. D-linearity of the cochains
// is enforced by coordinatizing each slot inside the range of the
// corresponding diagonal idempotent.
inline int h1_dim(const CochainContext& ctx, long long cap = 2000000) {
  const int dm = ctx.dim_m();
  if (static_cast<long long>(ctx.dim_l()) * dm > cap)
    throw CapExceeded("dim(L) * dim(M) exceeds the linear-algebra cap");

  // per-point range basis of action(e_uu)
  const int total = ctx.space()->total();
  std::vector<Eigen::MatrixXd> bases(total);
  for (int u = 0; u < total; ++u)
    bases[u] = detail::range_basis(ctx.module().unit(u, u));

  std::vector<int> offset(ctx.dim_l() + 1, 0);
  for (int p = 0; p < ctx.dim_l(); ++p)
    offset[p + 1] = offset[p] + static_cast<int>(bases[ctx.pairs()[p].first].cols());
  const int c1_dim = offset[ctx.dim_l()];

  Eigen::MatrixXd d1(c1_dim, dm);
  for (int p = 0; p < ctx.dim_l(); ++p) {
    auto [x, y] = ctx.pairs()[p];
    d1.middleRows(offset[p], bases[x].cols()) =
        bases[x].transpose() * ctx.module().ideal_basis_action(x, y);
  }

  const auto& triples = ctx.triples();
  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(
      static_cast<std::ptrdiff_t>(triples.size()) * dm, c1_dim);
  for (std::size_t t = 0; t < triples.size(); ++t) {
    auto [x, y, v] = triples[t];
    auto row = static_cast<std::ptrdiff_t>(t) * dm;
    int pyv = ctx.pair_index(y, v);
    d2.block(row, offset[pyv], dm, bases[y].cols()) +=
        ctx.module().unit(x, y) * bases[y];
    if (x != v) {
      int pxv = ctx.pair_index(x, v);
      d2.block(row, offset[pxv], dm, bases[x].cols()) -= bases[x];
    }
    if (x != y) {
      int pxy = ctx.pair_index(x, y);
      d2.block(row, offset[pxy], dm, bases[x].cols()) += bases[x];
    }
  }

  int ker_d2 = c1_dim - detail::matrix_rank(d2);
  int ran_d1 = detail::matrix_rank(d1);
  return ker_d2 - ran_d1;
}

// Solves theta(b_xy) = action(b_xy) v in the least-squares sense. Expects a
// cocycle; NoSolution (nullopt) is returned when the residual exceeds the
// solve tolerance, which for finite spaces signals a bug upstream.
inline std::optional<Eigen::VectorXd> coboundary_solve(
    const CochainContext& ctx, const CochainMap& theta,
    double cocycle_tol = 1e-9, double solve_tol = 1e-8) {
  if (theta.degree != 1) throw DegreeUnsupported("expected a degree-1 cochain");
  CochainMap d2t = differential_2(ctx, theta);
  double viol = d2t.values.size() == 0 ? 0.0 : d2t.values.lpNorm<Eigen::Infinity>();
  if (viol > cocycle_tol)
    throw NotACocycle("d2(theta) has max entry " + std::to_string(viol));

  const int dm = ctx.dim_m();
  Eigen::MatrixXd A(static_cast<std::ptrdiff_t>(ctx.dim_l()) * dm, dm);
  for (int p = 0; p < ctx.dim_l(); ++p) {
    auto [x, y] = ctx.pairs()[p];
    A.middleRows(static_cast<std::ptrdiff_t>(p) * dm, dm) =
        ctx.module().ideal_basis_action(x, y);
  }
  Eigen::VectorXd v =
      A.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(theta.values);
  double residual = A.rows() == 0 ? 0.0
                                  : (A * v - theta.values).lpNorm<Eigen::Infinity>();
  if (residual > solve_tol) return std::nullopt;
  return v;
}

}  // namespace cgc
