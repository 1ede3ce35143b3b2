#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "element.hpp"
#include "error.hpp"
#include "quadrature.hpp"

using namespace ripg;

namespace {

std::vector<Vec2> random_reference_points(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec2> pts;
  while (static_cast<int>(pts.size()) < n) {
    const Vec2 x(u(rng), u(rng));
    if (x.sum() <= 1.0) pts.push_back(x);
  }
  return pts;
}

// Nodal basis through the inverse of the monomial Vandermonde matrix.
struct VandermondeBasis {
  int p;
  std::vector<std::pair<int, int>> powers;
  Eigen::MatrixXd coeffs;  // column i = monomial coefficients of basis i

  VandermondeBasis(int degree, std::span<const Vec2> nodes) : p(degree) {
    for (int a = 0; a <= p; ++a) {
      for (int b = 0; a + b <= p; ++b) powers.emplace_back(a, b);
    }
    const int n = static_cast<int>(powers.size());
    Eigen::MatrixXd v(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) v(i, j) = mono(nodes[i], j, 0, 0);
    }
    coeffs = v.inverse();
  }

  double mono(const Vec2& x, int j, int dx, int dy) const {
    const auto [a, b] = powers[j];
    if (dx > a || dy > b) return 0.0;
    double c = 1.0;
    for (int k = 0; k < dx; ++k) c *= a - k;
    for (int k = 0; k < dy; ++k) c *= b - k;
    return c * std::pow(x.x(), a - dx) * std::pow(x.y(), b - dy);
  }

  double eval(const Vec2& x, int i, int dx, int dy) const {
    double s = 0.0;
    for (int j = 0; j < coeffs.rows(); ++j) s += coeffs(j, i) * mono(x, j, dx, dy);
    return s;
  }
};

}  // namespace

TEST_CASE("dof counts and layout") {
  for (int p = 1; p <= LagrangeElement::kMaxDegree; ++p) {
    const LagrangeElement el(p);
    CHECK(el.dof_count() == (p + 1) * (p + 2) / 2);
    CHECK(3 + 3 * el.dofs_per_edge() + el.interior_dof_count() == el.dof_count());
  }
  CHECK_THROWS_AS(LagrangeElement(0), Error);
  CHECK_THROWS_AS(LagrangeElement(LagrangeElement::kMaxDegree + 1), Error);
}

TEST_CASE("edge nodes run from the facet's first vertex to its second") {
  const Vec2 v[3] = {{0, 0}, {1, 0}, {0, 1}};
  for (int p = 2; p <= 5; ++p) {
    const LagrangeElement el(p);
    for (int f = 0; f < 3; ++f) {
      for (int m = 0; m < p - 1; ++m) {
        const Vec2 expected = v[f] + (m + 1.0) / p * (v[(f + 1) % 3] - v[f]);
        CHECK((el.nodes()[el.edge_dof(f, m)] - expected).norm() <= 1e-15);
      }
    }
  }
}

TEST_CASE("Kronecker property and partition of unity") {
  for (int p = 1; p <= LagrangeElement::kMaxDegree; ++p) {
    const LagrangeElement el(p);
    const int n = el.dof_count();
    std::vector<Vec2> nodes(el.nodes().begin(), el.nodes().end());
    const BasisTables at_nodes = el.tabulate(nodes, 0);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        CHECK(std::abs(at_nodes.value(j, i) - (i == j ? 1.0 : 0.0)) <= 1e-10);
      }
    }
    const auto pts = random_reference_points(20, 7u + p);
    const BasisTables t = el.tabulate(pts, 2);
    for (int q = 0; q < t.num_points; ++q) {
      double s = 0.0;
      Vec2 g = Vec2::Zero();
      Mat2 h = Mat2::Zero();
      for (int i = 0; i < n; ++i) {
        s += t.value(q, i);
        g += t.gradient(q, i);
        h += t.hessian(q, i);
      }
      CHECK(std::abs(s - 1.0) <= 1e-12);
      CHECK(g.norm() <= 1e-10);
      CHECK(h.norm() <= 1e-8);
    }
  }
}

TEST_CASE("basis matches an independent Vandermonde construction") {
  for (int p = 1; p <= LagrangeElement::kMaxDegree; ++p) {
    const LagrangeElement el(p);
    const VandermondeBasis oracle(p, el.nodes());
    const auto pts = random_reference_points(15, 100u + p);
    const BasisTables t = el.tabulate(pts, 2);
    for (int q = 0; q < t.num_points; ++q) {
      for (int i = 0; i < el.dof_count(); ++i) {
        const Vec2& x = pts[q];
        CHECK(t.value(q, i) == doctest::Approx(oracle.eval(x, i, 0, 0)).epsilon(1e-9));
        CHECK(std::abs(t.gradient(q, i).x() - oracle.eval(x, i, 1, 0)) <= 1e-8);
        CHECK(std::abs(t.gradient(q, i).y() - oracle.eval(x, i, 0, 1)) <= 1e-8);
        CHECK(std::abs(t.hessian(q, i)(0, 0) - oracle.eval(x, i, 2, 0)) <= 1e-7);
        CHECK(std::abs(t.hessian(q, i)(0, 1) - oracle.eval(x, i, 1, 1)) <= 1e-7);
        CHECK(std::abs(t.hessian(q, i)(1, 0) - oracle.eval(x, i, 1, 1)) <= 1e-7);
        CHECK(std::abs(t.hessian(q, i)(1, 1) - oracle.eval(x, i, 0, 2)) <= 1e-7);
      }
    }
  }
}

TEST_CASE("p=2 vertex function at the origin") {
  const LagrangeElement el(2);
  const std::vector<Vec2> origin{{0.0, 0.0}};
  const BasisTables t = el.tabulate(origin, 0);
  CHECK(t.value(0, 0) == 1.0);
  for (int i = 1; i < el.dof_count(); ++i) CHECK(t.value(0, i) == 0.0);
}

TEST_CASE("p=2 Hessians are constant") {
  const QuadratureRule rule = triangle_rule(6);
  const BasisTables t = tabulate(2, rule, 2);
  for (int i = 0; i < t.num_dofs; ++i) {
    for (int q = 1; q < t.num_points; ++q) {
      CHECK((t.hessian(q, i) - t.hessian(0, i)).norm() <= 1e-12);
    }
  }
}

TEST_CASE("p=3 basis integrals sum to the reference area") {
  const QuadratureRule rule = triangle_rule(3);
  const BasisTables t = tabulate(3, rule, 0);
  double sum = 0.0;
  for (int q = 0; q < t.num_points; ++q) {
    for (int i = 0; i < t.num_dofs; ++i) sum += rule.weights[q] * t.value(q, i);
  }
  CHECK(std::abs(sum - 0.5) <= 1e-14);
}

TEST_CASE("div(curl) vanishes on tabulated Hessians") {
  for (int p = 2; p <= LagrangeElement::kMaxDegree; ++p) {
    const BasisTables t = tabulate(p, triangle_rule(2 * p), 2);
    for (const Mat2& h : t.hessians) CHECK(std::abs(divergence_of_curl(h)) <= 1e-12 * (1.0 + h.norm()));
  }
}

TEST_CASE("push_forward") {
  const BasisTables ref = tabulate(3, triangle_rule(4), 2);

  SUBCASE("identity map") {
    const AffineMap id{Vec2::Zero(), Mat2::Identity(), Mat2::Identity(), 1.0};
    const BasisTables phys = push_forward(id, ref);
    for (std::size_t k = 0; k < ref.gradients.size(); ++k) {
      CHECK((phys.gradients[k] - ref.gradients[k]).norm() == 0.0);
      CHECK((phys.hessians[k] - ref.hessians[k]).norm() == 0.0);
    }
  }
  SUBCASE("scaling by two") {
    const AffineMap map{Vec2(3, -1), 2.0 * Mat2::Identity(), 0.5 * Mat2::Identity(), 4.0};
    const BasisTables phys = push_forward(map, ref);
    for (std::size_t k = 0; k < ref.gradients.size(); ++k) {
      CHECK((phys.gradients[k] - 0.5 * ref.gradients[k]).norm() <= 1e-14);
      CHECK((phys.hessians[k] - 0.25 * ref.hessians[k]).norm() <= 1e-13);
      CHECK(phys.values[k] == ref.values[k]);
    }
  }
  SUBCASE("Hessian of interpolated x^2 + y^2 on a random cell") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
      Vec2 a(u(rng), u(rng)), b(u(rng), u(rng)), c(u(rng), u(rng));
      Mat2 j;
      j.col(0) = b - a;
      j.col(1) = c - a;
      if (j.determinant() < 0.1) continue;  // counter-clockwise cells only
      const AffineMap map{a, j, j.inverse(), j.determinant()};
      const LagrangeElement el(2);
      const BasisTables phys = push_forward(map, el.tabulate(random_reference_points(5, trial), 2));
      for (int q = 0; q < phys.num_points; ++q) {
        Mat2 h = Mat2::Zero();
        for (int i = 0; i < el.dof_count(); ++i) {
          h += map.to_physical(el.nodes()[i]).squaredNorm() * phys.hessian(q, i);
        }
        CHECK((h - 2.0 * Mat2::Identity()).norm() <= 1e-9);
      }
    }
  }
  SUBCASE("singular map") {
    const AffineMap bad{Vec2::Zero(), Mat2::Zero(), Mat2::Zero(), 0.0};
    CHECK_THROWS_AS(push_forward(bad, ref), Error);
  }
}

TEST_CASE("curl of scalar fields") {
  const LagrangeElement el(2);
  const auto pts = random_reference_points(6, 11);
  const BasisTables t = el.tabulate(pts, 1);
  // interpolants of y and x
  std::vector<double> fy, fx;
  for (const Vec2& n : el.nodes()) {
    fy.push_back(n.y());
    fx.push_back(n.x());
  }
  const std::vector<Vec2> curls = curl_of_scalar_basis(t);
  for (int q = 0; q < t.num_points; ++q) {
    Vec2 cy = Vec2::Zero(), cx = Vec2::Zero();
    for (int i = 0; i < el.dof_count(); ++i) {
      cy += fy[i] * curls[q * t.num_dofs + i];
      cx += fx[i] * curls[q * t.num_dofs + i];
    }
    CHECK((cy - Vec2(1, 0)).norm() <= 1e-13);
    CHECK((cx - Vec2(0, -1)).norm() <= 1e-13);
  }
  // analytic gradient of sin(pi x) sin(pi y)/pi
  constexpr double pi = std::numbers::pi;
  const Vec2 x(0.3, -0.7);
  const Vec2 grad(std::cos(pi * x.x()) * std::sin(pi * x.y()),
                  std::sin(pi * x.x()) * std::cos(pi * x.y()));
  const Vec2 u(std::sin(pi * x.x()) * std::cos(pi * x.y()),
               -std::cos(pi * x.x()) * std::sin(pi * x.y()));
  CHECK((curl(grad) - u).norm() <= 1e-15);
}

TEST_CASE("strain and gradient of curl") {
  Mat2 h;
  h << 2.0, 3.0, 3.0, -5.0;  // Hessian of phi
  const Mat2 g = gradient_of_curl(h);
  CHECK(g(0, 0) == 3.0);
  CHECK(g(0, 1) == -5.0);
  CHECK(g(1, 0) == -2.0);
  CHECK(g(1, 1) == -3.0);
  const Mat2 e = strain_of_curl(h);
  CHECK(e(0, 1) == doctest::Approx((-5.0 - 2.0) / 2.0));
  CHECK(e(0, 0) + e(1, 1) == 0.0);
}

TEST_CASE("edge rule of degree 2p integrates products of traces exactly") {
  for (int p = 1; p <= 5; ++p) {
    const LagrangeElement el(p);
    const LineRule low = edge_rule(2 * p);
    const LineRule high = gauss_legendre(20);
    auto trace_gram = [&](const LineRule& r) {
      std::vector<Vec2> pts;
      for (double t : r.points) pts.emplace_back(1.0 - t, t);  // facet 1
      const BasisTables tab = el.tabulate(pts, 0);
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(el.dof_count(), el.dof_count());
      for (int q = 0; q < tab.num_points; ++q) {
        for (int i = 0; i < el.dof_count(); ++i) {
          for (int j = 0; j < el.dof_count(); ++j) {
            m(i, j) += r.weights[q] * tab.value(q, i) * tab.value(q, j);
          }
        }
      }
      return m;
    };
    CHECK((trace_gram(low) - trace_gram(high)).cwiseAbs().maxCoeff() <= 1e-13);
  }
}
