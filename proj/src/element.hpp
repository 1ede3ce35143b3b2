#pragma once

#include <array>
#include <span>
#include <vector>

#include "mesh.hpp"
#include "quadrature.hpp"

namespace ripg {

/// Basis data at a set of points: entry (q, i) is basis function i at point q.
struct BasisTables {
  int num_points = 0;
  int num_dofs = 0;
  int derivative_order = 0;
  std::vector<double> values;
  std::vector<Vec2> gradients;  // empty when derivative_order < 1
  std::vector<Mat2> hessians;   // full 2x2, empty when derivative_order < 2

  double value(int q, int i) const { return values[q * num_dofs + i]; }
  const Vec2& gradient(int q, int i) const { return gradients[q * num_dofs + i]; }
  const Mat2& hessian(int q, int i) const { return hessians[q * num_dofs + i]; }
};

/// Equispaced Lagrange element of total degree p on the reference triangle.
///
/// Local dofs: the three vertices, then p-1 nodes per local facet running
/// from its first to its second vertex, then interior nodes.
class LagrangeElement {
 public:
  static constexpr int kMaxDegree = 6;

  explicit LagrangeElement(int degree);

  int degree() const { return degree_; }
  int dof_count() const { return static_cast<int>(nodes_.size()); }
  int dofs_per_edge() const { return degree_ - 1; }
  int interior_dof_count() const { return (degree_ - 1) * (degree_ - 2) / 2; }
  int edge_dof(int local_facet, int m) const { return 3 + local_facet * (degree_ - 1) + m; }
  int interior_dof(int m) const { return 3 + 3 * (degree_ - 1) + m; }

  std::span<const Vec2> nodes() const { return nodes_; }

  // Any output pointer may be null; each points at dof_count() entries.
  void evaluate(const Vec2& reference, double* values, Vec2* gradients,
                Mat2* hessians) const;

  BasisTables tabulate(std::span<const Vec2> points, int derivative_order) const;

 private:
  int degree_;
  std::vector<Vec2> nodes_;
  std::vector<std::array<int, 3>> lattice_;  // barycentric lattice indices, sum p
};

BasisTables tabulate(int degree, const QuadratureRule& rule, int derivative_order);

/// Reference tables mapped through an affine cell map:
/// grad = J^-T grad_ref, Hess = J^-T Hess_ref J^-1.
BasisTables push_forward(const AffineMap& map, const BasisTables& reference);

/// Per point and basis function, curl phi = (d phi/dy, -d phi/dx).
std::vector<Vec2> curl_of_scalar_basis(const BasisTables& physical);

inline Vec2 curl(const Vec2& gradient) { return {gradient.y(), -gradient.x()}; }

/// Symmetric gradient of curl phi from the Hessian of phi:
/// [[phi_xy, (phi_yy - phi_xx)/2], [., -phi_yx]].
inline Mat2 strain_of_curl(const Mat2& hessian) {
  Mat2 grad_u;
  grad_u << hessian(0, 1), hessian(1, 1), -hessian(0, 0), -hessian(1, 0);
  return 0.5 * (grad_u + grad_u.transpose());
}

/// Gradient of curl phi: [[phi_yx, phi_yy], [-phi_xx, -phi_xy]].
inline Mat2 gradient_of_curl(const Mat2& hessian) {
  Mat2 grad_u;
  grad_u << hessian(1, 0), hessian(1, 1), -hessian(0, 0), -hessian(0, 1);
  return grad_u;
}

/// div(curl phi) = phi_yx - phi_xy.
inline double divergence_of_curl(const Mat2& hessian) {
  return hessian(1, 0) - hessian(0, 1);
}

}  // namespace ripg
