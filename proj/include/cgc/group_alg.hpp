#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <utility>

#include "cgc/marked_group.hpp"

namespace cgc {

using Scalar = std::complex<double>;

// Sparse coefficient vector over the elements of a finite marked group, with
// the group-algebra product, the involution (sum xi(g) g)* = sum conj(xi(g)) g^{-1},
// the l1 norm and the word-length propagation.
class GroupAlgElement {
 public:
  explicit GroupAlgElement(GroupPtr group) : group_(std::move(group)) {}

  static GroupAlgElement delta(GroupPtr group, int g, Scalar c = 1.0) {
    GroupAlgElement e(std::move(group));
    e.add(g, c);
    return e;
  }

  const GroupPtr& group() const { return group_; }
  const std::map<int, Scalar>& coeffs() const { return coeffs_; }

  Scalar at(int g) const {
    auto it = coeffs_.find(g);
    return it == coeffs_.end() ? Scalar{0.0} : it->second;
  }

  void add(int g, Scalar c) {
    auto it = coeffs_.find(g);
    if (it == coeffs_.end()) {
      if (c != 0.0) coeffs_.emplace(g, c);
    } else {
      it->second += c;
      if (it->second == 0.0) coeffs_.erase(it);
    }
  }

  GroupAlgElement& operator+=(const GroupAlgElement& other) {
    check_same_group(other);
    for (const auto& [g, c] : other.coeffs_) add(g, c);
    return *this;
  }
  GroupAlgElement& operator-=(const GroupAlgElement& other) {
    check_same_group(other);
    for (const auto& [g, c] : other.coeffs_) add(g, -c);
    return *this;
  }
  GroupAlgElement& operator*=(Scalar s) {
    if (s == 0.0) {
      coeffs_.clear();
      return *this;
    }
    for (auto& [g, c] : coeffs_) c *= s;
    return *this;
  }

  friend GroupAlgElement operator+(GroupAlgElement a, const GroupAlgElement& b) {
    a += b;
    return a;
  }
  friend GroupAlgElement operator-(GroupAlgElement a, const GroupAlgElement& b) {
    a -= b;
    return a;
  }
  friend GroupAlgElement operator*(GroupAlgElement a, Scalar s) {
    a *= s;
    return a;
  }

  // Coefficients with magnitude <= tol removed; used before comparing
  // propagation of numerically computed elements.
  GroupAlgElement pruned(double tol) const {
    GroupAlgElement r(group_);
    for (const auto& [g, c] : coeffs_)
      if (std::abs(c) > tol) r.coeffs_.emplace(g, c);
    return r;
  }

 private:
  void check_same_group(const GroupAlgElement& other) const {
    if (group_ != other.group_)
      throw GroupMismatch("elements belong to different groups");
  }

  GroupPtr group_;
  std::map<int, Scalar> coeffs_;
};

// Group-algebra product (a*b)(x) = sum_{gh=x} a(g) b(h).
inline GroupAlgElement conv(const GroupAlgElement& a, const GroupAlgElement& b) {
  if (a.group() != b.group())
    throw GroupMismatch("conv over different groups");
  GroupAlgElement c(a.group());
  const MarkedGroup& G = *a.group();
  for (const auto& [g, cg] : a.coeffs())
    for (const auto& [h, ch] : b.coeffs()) c.add(G.mul(g, h), cg * ch);
  return c;
}

inline GroupAlgElement star(const GroupAlgElement& a) {
  GroupAlgElement s(a.group());
  const MarkedGroup& G = *a.group();
  for (const auto& [g, c] : a.coeffs()) s.add(G.inv(g), std::conj(c));
  return s;
}

inline double l1_norm(const GroupAlgElement& a) {
  double n = 0.0;
  for (const auto& [g, c] : a.coeffs()) n += std::abs(c);
  return n;
}

// Max word length over the support; 0 for the zero element.
inline int propagation(const GroupAlgElement& a) {
  int p = 0;
  for (const auto& [g, c] : a.coeffs())
    p = std::max(p, a.group()->word_len(g));
  return p;
}

inline bool is_self_adjoint(const GroupAlgElement& a, double tol = 1e-12) {
  GroupAlgElement d = a - star(a);
  return l1_norm(d) <= tol;
}

// Delta = 2k - sum_j (s_j + s_j^{-1}), with the multiset convention over the
// k marked generators: an involutive generator contributes -2 at itself and
// an identity generator cancels against its share of the 2k.
inline GroupAlgElement laplacian_group(const GroupPtr& G) {
  GroupAlgElement d(G);
  d.add(0, 2.0 * G->k());
  for (int s : G->gens()) {
    d.add(s, -1.0);
    d.add(G->inv(s), -1.0);
  }
  return d;
}

}  // namespace cgc
