#pragma once

#include <vector>

#include "mesh.hpp"

namespace ripg {

/// Rule on the unit interval [0, 1].
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;  // exact for polynomials up to this degree
};

/// Rule on the reference triangle (0,0), (1,0), (0,1).
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return points.size(); }
};

/// n-point Gauss-Legendre rule mapped to [0, 1].
LineRule gauss_legendre(int n);

/// Cheapest Gauss-Legendre rule exact to `degree` on the unit edge.
LineRule edge_rule(int degree);

/// Collapsed (Duffy) Gauss rule on the reference triangle, exact to `degree`.
/// Weights are positive and all points are strictly interior.
QuadratureRule triangle_rule(int degree);

}  // namespace ripg
