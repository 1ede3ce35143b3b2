#include "quadrature.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "error.hpp"

namespace ripg {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence, |x| < 1.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

LineRule gauss_legendre(int n) {
  require(n >= 1 && n <= 64, "Gauss-Legendre point count out of range");
  LineRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  rule.degree = 2 * n - 1;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    const double w = 1.0 / ((1.0 - x * x) * dp * dp);  // half of the [-1,1] weight
    rule.points[i] = 0.5 * (1.0 - x);
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.points[n / 2] = 0.5;
  return rule;
}

LineRule edge_rule(int degree) {
  require(degree >= 0, "quadrature degree must be non-negative");
  return gauss_legendre(degree / 2 + 1);
}

QuadratureRule triangle_rule(int degree) {
  require(degree >= 0, "quadrature degree must be non-negative");
  // xi = u (1 - v), eta = v, dxi deta = (1 - v) du dv: the integrand gains
  // one degree in v.
  const LineRule ru = gauss_legendre(degree / 2 + 1);
  const LineRule rv = gauss_legendre((degree + 1) / 2 + 1);
  QuadratureRule rule;
  rule.degree = degree;
  rule.points.reserve(ru.points.size() * rv.points.size());
  rule.weights.reserve(ru.points.size() * rv.points.size());
  for (std::size_t j = 0; j < rv.points.size(); ++j) {
    const double v = rv.points[j];
    for (std::size_t i = 0; i < ru.points.size(); ++i) {
      const double u = ru.points[i];
      rule.points.emplace_back(u * (1.0 - v), v);
      rule.weights.push_back(ru.weights[i] * rv.weights[j] * (1.0 - v));
    }
  }
  return rule;
}

}  // namespace ripg
