#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "error.hpp"
#include "quadrature.hpp"

namespace ripg {
namespace {

double frobenius2(const Mat2& m) { return m.squaredNorm(); }

template <typename Fn>
void for_each_volume_point(const TriangularMesh& mesh, int degree, Fn&& fn) {
  const QuadratureRule rule = triangle_rule(degree);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const AffineMap& map = mesh.cell_map(c);
    const double det = std::abs(map.determinant);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2& xi = rule.points[q];
      fn(CellPoint{static_cast<std::int32_t>(c), xi, map.to_physical(xi)},
         rule.weights[q] * det);
    }
  }
}

// Visits the quadrature points of facet f from side s.
template <typename Fn>
void for_each_facet_point(const TriangularMesh& mesh, const LineRule& rule, std::size_t f, int s,
                          Fn&& fn) {
  const Facet& facet = mesh.facet(f);
  const FacetSide& side = facet.sides[s];
  const AffineMap& map = mesh.cell_map(side.cell);
  const Vec2& a = mesh.vertex(facet.vertices[0]);
  const Vec2& b = mesh.vertex(facet.vertices[1]);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Vec2 x = a + rule.points[q] * (b - a);
    fn(q, CellPoint{side.cell, map.to_reference(x), x}, rule.weights[q] * facet.length);
  }
}

// Shared DG-norm facet part: jumps of (exact - curl phi_h).
double dg_facet_part(const ScalarField& stream, const VectorFunction& exact_velocity,
                     const PenaltyData& penalty, const StokesBoundary& boundary, int degree) {
  const TriangularMesh& mesh = stream.space().mesh();
  const LineRule rule = edge_rule(degree);
  double sum = 0.0;
  std::vector<Vec2> plus(rule.points.size());
  for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
    const Facet& facet = mesh.facet(f);
    if (!facet.is_interior() &&
        boundary.condition(facet.tag) != WallCondition::kZeroPenetration) {
      continue;
    }
    const double beta = penalty.beta[f];
    if (facet.is_interior()) {
      for_each_facet_point(mesh, rule, f, 0, [&](std::size_t q, const CellPoint& pt, double) {
        plus[q] = velocity(stream, pt.cell, pt.reference);
      });
      // |v+ (x) n+ + v- (x) n-|^2 = |v+ - v-|^2; the exact part is continuous.
      for_each_facet_point(mesh, rule, f, 1, [&](std::size_t q, const CellPoint& pt, double w) {
        const Vec2 jump = plus[q] - velocity(stream, pt.cell, pt.reference);
        sum += w * beta * jump.squaredNorm();
      });
    } else {
      const VectorFunction& wall =
          exact_velocity ? exact_velocity : boundary.wall_velocity;
      for_each_facet_point(mesh, rule, f, 0, [&](std::size_t, const CellPoint& pt, double w) {
        Vec2 e = -velocity(stream, pt.cell, pt.reference);
        if (wall) e += wall(pt.physical);
        sum += w * beta * e.squaredNorm();
      });
    }
  }
  return sum;
}

}  // namespace

ErrorNorms error_norms(const ScalarField& stream, const ExactFlow& exact,
                       const ViscosityField& viscosity, const PenaltyData& penalty,
                       const StokesBoundary& boundary) {
  require(exact.stream && exact.velocity && exact.velocity_gradient,
          "exact solution is incomplete");
  const TriangularMesh& mesh = stream.space().mesh();
  require(penalty.beta.size() == mesh.num_facets(), "penalty data does not match the mesh");
  const int degree = 2 * stream.space().degree() + 4;
  double l2s = 0.0, l2u = 0.0, h1u = 0.0, dg = 0.0;
  for_each_volume_point(mesh, degree, [&](const CellPoint& pt, double w) {
    const PointValue v = stream.evaluate(pt.cell, pt.reference, 2);
    const double es = exact.stream(pt.physical) - v.value;
    const Vec2 eu = exact.velocity(pt.physical) - curl(v.gradient);
    const Mat2 eg = exact.velocity_gradient(pt.physical) - gradient_of_curl(v.hessian);
    const Mat2 ee = 0.5 * (eg + eg.transpose());
    l2s += w * es * es;
    l2u += w * eu.squaredNorm();
    h1u += w * frobenius2(eg);
    dg += w * 2.0 * viscosity(pt) * frobenius2(ee);
  });
  dg += dg_facet_part(stream, exact.velocity, penalty, boundary, degree);
  return {std::sqrt(l2s), std::sqrt(l2u), std::sqrt(h1u), std::sqrt(dg)};
}

double dg_norm(const ScalarField& stream, const ViscosityField& viscosity,
               const PenaltyData& penalty, const StokesBoundary& boundary) {
  const TriangularMesh& mesh = stream.space().mesh();
  require(penalty.beta.size() == mesh.num_facets(), "penalty data does not match the mesh");
  const int degree = 2 * stream.space().degree();
  double sum = 0.0;
  for_each_volume_point(mesh, degree, [&](const CellPoint& pt, double w) {
    const Mat2 e = strain_of_curl(stream.evaluate(pt.cell, pt.reference, 2).hessian);
    sum += w * 2.0 * viscosity(pt) * frobenius2(e);
  });
  StokesBoundary homogeneous = boundary;
  homogeneous.wall_velocity = nullptr;
  sum += dg_facet_part(stream, nullptr, penalty, homogeneous, degree);
  return std::sqrt(sum);
}

double nusselt(const ScalarField& temperature) {
  const TriangularMesh& mesh = temperature.space().mesh();
  const LineRule rule = edge_rule(2 * temperature.space().degree());
  double sum = 0.0;
  for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
    const Facet& facet = mesh.facet(f);
    if (facet.tag != BoundaryTag::kTop) continue;
    const Vec2& n = facet.sides[0].normal;
    for_each_facet_point(mesh, rule, f, 0, [&](std::size_t, const CellPoint& pt, double w) {
      sum += w * temperature.evaluate(pt.cell, pt.reference, 1).gradient.dot(n);
    });
  }
  return sum;
}

double velocity_rms(const ScalarField& stream, int quadrature_degree) {
  const int degree = quadrature_degree > 0 ? quadrature_degree : 2 * stream.space().degree();
  double sum = 0.0;
  for_each_volume_point(stream.space().mesh(), degree, [&](const CellPoint& pt, double w) {
    sum += w * velocity(stream, pt.cell, pt.reference).squaredNorm();
  });
  return std::sqrt(sum);
}

FunctionalReport functionals(const ScalarField& stream, const ScalarField& temperature,
                             const ViscosityField& viscosity, double rayleigh) {
  require(stream.space().mesh().num_cells() == temperature.space().mesh().num_cells(),
          "stream function and temperature live on different meshes");
  const int p = stream.space().degree();
  const Vec2 up(0.0, -1.0);
  double work = 0.0, dissipation = 0.0, speed2 = 0.0;
  for_each_volume_point(stream.space().mesh(), 2 * p + 2, [&](const CellPoint& pt, double w) {
    const PointValue s = stream.evaluate(pt.cell, pt.reference, 2);
    const Vec2 u = curl(s.gradient);
    const Mat2 e = strain_of_curl(s.hessian);
    const double t = temperature.value(pt.cell, pt.reference);
    work += w * t * u.dot(up);
    dissipation += w * 2.0 * viscosity(pt) * frobenius2(e);
    speed2 += w * u.squaredNorm();
  });
  FunctionalReport r;
  r.nusselt = nusselt(temperature);
  r.u_rms = std::sqrt(speed2);
  r.work = work;
  r.dissipation = dissipation;
  r.negative_work = work < 0.0;
  const double scaled = rayleigh != 0.0 ? dissipation / rayleigh : 0.0;
  const double denom = std::max(work, scaled);
  r.balance = (rayleigh == 0.0 || !(denom > 0.0)) ? std::numeric_limits<double>::quiet_NaN()
                                                  : std::abs(work - scaled) / denom;
  r.dof_count = stream.space().size();
  r.h = stream.space().mesh().mesh_size();
  r.degree = p;
  return r;
}

double relative_error(double value, double reference) {
  require(reference != 0.0, "relative error against a zero reference");
  return std::abs(value - reference) / std::abs(reference);
}

RateEstimate convergence_rate(std::span<const double> h, std::span<const double> errors,
                              std::size_t levels) {
  require(h.size() == errors.size(), "h and error sequences differ in length");
  const std::size_t used = levels == 0 ? h.size() : levels;
  require(used >= 2 && used <= h.size(), "convergence rate needs at least two levels");
  std::vector<std::size_t> order(h.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < h.size(); ++i) {
    require(h[i] > 0.0 && errors[i] > 0.0 && std::isfinite(errors[i]),
            "convergence rate needs positive h and errors");
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return h[a] > h[b]; });

  RateEstimate out;
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (!(errors[order[k]] < errors[order[k - 1]])) out.monotone = false;
  }
  const std::size_t first = order.size() - used;
  double mx = 0.0, my = 0.0;
  for (std::size_t k = first; k < order.size(); ++k) {
    mx += std::log(h[order[k]]);
    my += std::log(errors[order[k]]);
  }
  mx /= static_cast<double>(used);
  my /= static_cast<double>(used);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = first; k < order.size(); ++k) {
    const double dx = std::log(h[order[k]]) - mx;
    sxy += dx * (std::log(errors[order[k]]) - my);
    sxx += dx * dx;
  }
  require(sxx > 0.0, "convergence rate needs distinct mesh sizes");
  out.slope = sxy / sxx;
  return out;
}

FlowDiagnostics flow_diagnostics(const ScalarField& stream) {
  const TriangularMesh& mesh = stream.space().mesh();
  const int degree = 2 * stream.space().degree();
  FlowDiagnostics d;
  for_each_volume_point(mesh, degree, [&](const CellPoint& pt, double) {
    const PointValue v = stream.evaluate(pt.cell, pt.reference, 2);
    d.max_divergence = std::max(d.max_divergence, std::abs(divergence_of_curl(v.hessian)));
    d.max_speed = std::max(d.max_speed, curl(v.gradient).norm());
  });
  const LineRule rule = edge_rule(degree);
  for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
    const Facet& facet = mesh.facet(f);
    if (facet.is_interior()) continue;
    for_each_facet_point(mesh, rule, f, 0, [&](std::size_t, const CellPoint& pt, double) {
      const Vec2 u = velocity(stream, pt.cell, pt.reference);
      d.max_normal_flux = std::max(d.max_normal_flux, std::abs(u.dot(facet.sides[0].normal)));
      d.max_speed = std::max(d.max_speed, u.norm());
    });
  }
  return d;
}

}  // namespace ripg
