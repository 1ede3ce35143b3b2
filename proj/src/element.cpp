#include "element.hpp"

#include "error.hpp"

namespace ripg {

namespace {

// Barycentric coordinates and their (constant) reference gradients.
std::array<double, 3> barycentric(const Vec2& xi) {
  return {1.0 - xi.x() - xi.y(), xi.x(), xi.y()};
}

const std::array<Vec2, 3> kBarycentricGradient = {Vec2(-1.0, -1.0), Vec2(1.0, 0.0),
                                                  Vec2(0.0, 1.0)};

// Silvester factor prod_{a<n} (p*lambda - a)/(a + 1) with first and second
// derivatives in lambda.
struct Factor {
  double v, d1, d2;
};

Factor silvester(int n, int p, double lambda) {
  Factor f{1.0, 0.0, 0.0};
  for (int a = 0; a < n; ++a) {
    const double l = (p * lambda - a) / (a + 1);
    const double dl = static_cast<double>(p) / (a + 1);
    f.d2 = f.d2 * l + 2.0 * f.d1 * dl;
    f.d1 = f.d1 * l + f.v * dl;
    f.v *= l;
  }
  return f;
}

}  // namespace

LagrangeElement::LagrangeElement(int degree) : degree_(degree) {
  require(degree >= 1 && degree <= kMaxDegree, "element degree must be in [1, 6]");
  const int p = degree;
  // Vertices: lattice (p,0,0), (0,p,0), (0,0,p).
  lattice_.push_back({p, 0, 0});
  lattice_.push_back({0, p, 0});
  lattice_.push_back({0, 0, p});
  // Facet f joins vertex f to vertex f+1.
  for (int f = 0; f < 3; ++f) {
    for (int m = 1; m < p; ++m) {
      std::array<int, 3> idx{0, 0, 0};
      idx[f] = p - m;
      idx[(f + 1) % 3] = m;
      lattice_.push_back(idx);
    }
  }
  for (int j = 1; j < p; ++j) {
    for (int k = 1; j + k < p; ++k) lattice_.push_back({p - j - k, j, k});
  }
  nodes_.reserve(lattice_.size());
  for (const auto& idx : lattice_) {
    nodes_.emplace_back(static_cast<double>(idx[1]) / p, static_cast<double>(idx[2]) / p);
  }
}

void LagrangeElement::evaluate(const Vec2& reference, double* values, Vec2* gradients,
                               Mat2* hessians) const {
  const auto lambda = barycentric(reference);
  const auto& g = kBarycentricGradient;
  for (std::size_t i = 0; i < lattice_.size(); ++i) {
    const auto& idx = lattice_[i];
    const Factor a = silvester(idx[0], degree_, lambda[0]);
    const Factor b = silvester(idx[1], degree_, lambda[1]);
    const Factor c = silvester(idx[2], degree_, lambda[2]);
    if (values) values[i] = a.v * b.v * c.v;
    if (gradients) {
      gradients[i] = a.d1 * b.v * c.v * g[0] + a.v * b.d1 * c.v * g[1] + a.v * b.v * c.d1 * g[2];
    }
    if (hessians) {
      Mat2 h = a.d2 * b.v * c.v * g[0] * g[0].transpose() +
               a.v * b.d2 * c.v * g[1] * g[1].transpose() +
               a.v * b.v * c.d2 * g[2] * g[2].transpose();
      h += a.d1 * b.d1 * c.v * (g[0] * g[1].transpose() + g[1] * g[0].transpose());
      h += a.d1 * b.v * c.d1 * (g[0] * g[2].transpose() + g[2] * g[0].transpose());
      h += a.v * b.d1 * c.d1 * (g[1] * g[2].transpose() + g[2] * g[1].transpose());
      hessians[i] = h;
    }
  }
}

BasisTables LagrangeElement::tabulate(std::span<const Vec2> points,
                                      int derivative_order) const {
  require(derivative_order >= 0 && derivative_order <= 2, "derivative order must be 0, 1 or 2");
  BasisTables t;
  t.num_points = static_cast<int>(points.size());
  t.num_dofs = dof_count();
  t.derivative_order = derivative_order;
  const std::size_t n = static_cast<std::size_t>(t.num_points) * t.num_dofs;
  t.values.resize(n);
  if (derivative_order >= 1) t.gradients.resize(n);
  if (derivative_order >= 2) t.hessians.resize(n);
  for (int q = 0; q < t.num_points; ++q) {
    const std::size_t off = static_cast<std::size_t>(q) * t.num_dofs;
    evaluate(points[q], t.values.data() + off,
             derivative_order >= 1 ? t.gradients.data() + off : nullptr,
             derivative_order >= 2 ? t.hessians.data() + off : nullptr);
  }
  return t;
}

BasisTables tabulate(int degree, const QuadratureRule& rule, int derivative_order) {
  return LagrangeElement(degree).tabulate(rule.points, derivative_order);
}

BasisTables push_forward(const AffineMap& map, const BasisTables& reference) {
  if (!(map.determinant > 0.0)) fail(ErrorCode::kDegenerateGeometry, "singular cell Jacobian");
  BasisTables t = reference;
  const Mat2 inv_t = map.inverse.transpose();
  for (auto& grad : t.gradients) grad = inv_t * grad;
  for (auto& hess : t.hessians) hess = inv_t * hess * map.inverse;
  return t;
}

std::vector<Vec2> curl_of_scalar_basis(const BasisTables& physical) {
  require(physical.derivative_order >= 1, "curl needs gradient tables");
  std::vector<Vec2> out;
  out.reserve(physical.gradients.size());
  for (const Vec2& grad : physical.gradients) out.push_back(curl(grad));
  return out;
}

}  // namespace ripg
