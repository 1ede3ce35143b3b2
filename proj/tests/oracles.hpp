// Independent reference computations shared by unit and acceptance tests.
#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "quadrature.hpp"
#include "ripg_stokes.hpp"
#include "space.hpp"

namespace oracle {

using ripg::Mat2;
using ripg::Vec2;

// Local basis of one cell built in physical coordinates from a monomial
// Vandermonde matrix at the global nodes (no reference map involved).
class CellPolynomials {
 public:
  CellPolynomials(const ripg::DofMap& space, std::size_t cell) : p_(space.degree()) {
    for (int a = 0; a <= p_; ++a) {
      for (int b = 0; a + b <= p_; ++b) powers_.emplace_back(a, b);
    }
    const auto dofs = space.cell_dofs(cell);
    const int n = static_cast<int>(dofs.size());
    center_ = Vec2::Zero();
    for (auto d : dofs) center_ += space.node(d) / n;
    Eigen::MatrixXd v(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) v(i, j) = mono(space.node(dofs[i]), j, 0, 0);
    }
    coeffs_ = v.inverse();
  }

  Vec2 gradient(const Vec2& x, int i) const {
    return {eval(x, i, 1, 0), eval(x, i, 0, 1)};
  }
  Mat2 hessian(const Vec2& x, int i) const {
    Mat2 h;
    h << eval(x, i, 2, 0), eval(x, i, 1, 1), eval(x, i, 1, 1), eval(x, i, 0, 2);
    return h;
  }

 private:
  double mono(const Vec2& x, int j, int dx, int dy) const {
    const auto [a, b] = powers_[j];
    if (dx > a || dy > b) return 0.0;
    const Vec2 y = x - center_;
    double c = 1.0;
    for (int k = 0; k < dx; ++k) c *= a - k;
    for (int k = 0; k < dy; ++k) c *= b - k;
    return c * std::pow(y.x(), a - dx) * std::pow(y.y(), b - dy);
  }
  double eval(const Vec2& x, int i, int dx, int dy) const {
    double s = 0.0;
    for (int j = 0; j < coeffs_.rows(); ++j) s += coeffs_(j, i) * mono(x, j, dx, dy);
    return s;
  }

  int p_;
  Vec2 center_;
  std::vector<std::pair<int, int>> powers_;
  Eigen::MatrixXd coeffs_;
};

// Dense facet matrix over the dofs of side 0 followed by side 1 (the layout
// of ripg::LocalFacetMatrix), from a 20-point Gauss rule, explicit tensor
// jumps and the given weights/penalty. Viscosity is a constant.
inline Eigen::MatrixXd facet_matrix(const ripg::DofMap& space, std::size_t f, double mu,
                                    double w_plus, double w_minus, double beta,
                                    bool consistency, bool penalty) {
  const ripg::TriangularMesh& mesh = space.mesh();
  const ripg::Facet& facet = mesh.facet(f);
  const int sides = facet.side_count();
  const int nd = space.dofs_per_cell();
  const int n = sides * nd;
  std::vector<CellPolynomials> polys;
  for (int s = 0; s < sides; ++s) polys.emplace_back(space, facet.sides[s].cell);
  const double w[2] = {w_plus, w_minus};
  const Vec2 a = mesh.vertex(facet.vertices[0]);
  const Vec2 b = mesh.vertex(facet.vertices[1]);
  const double length = (b - a).norm();
  const ripg::LineRule rule = ripg::gauss_legendre(20);

  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  std::vector<Mat2> jump(n), avg(n);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Vec2 x = a + rule.points[q] * (b - a);
    for (int s = 0; s < sides; ++s) {
      const Vec2 normal = facet.sides[s].normal;
      for (int i = 0; i < nd; ++i) {
        const Vec2 g = polys[s].gradient(x, i);
        const Vec2 u(g.y(), -g.x());
        const Mat2 h = polys[s].hessian(x, i);
        Mat2 grad_u;
        grad_u << h(1, 0), h(1, 1), -h(0, 0), -h(0, 1);
        jump[s * nd + i] = u * normal.transpose();
        avg[s * nd + i] = w[s] * mu * (grad_u + grad_u.transpose());
      }
    }
    const double wq = rule.weights[q] * length;
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        double v = 0.0;
        if (consistency) {
          v -= (jump[c].array() * avg[r].array()).sum() + (avg[c].array() * jump[r].array()).sum();
        }
        if (penalty) v += beta * (jump[r].array() * jump[c].array()).sum();
        k(r, c) += wq * v;
      }
    }
  }
  return k;
}

}  // namespace oracle
