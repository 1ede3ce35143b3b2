#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "analysis.hpp"
#include "error.hpp"
#include "heat_coupling.hpp"
#include "manufactured.hpp"

using namespace ripg;

namespace {

std::shared_ptr<const TriangularMesh> square(int n, Rectangle box = {0, 0, 1, 1}) {
  return std::make_shared<const TriangularMesh>(build_structured(box, n));
}

// phi = x^2 y - y^3 / 3 + x y: a cubic stream function
ExactFlow cubic_flow() {
  return {[](const Vec2& x) { return x.x() * x.x() * x.y() - x.y() * x.y() * x.y() / 3 + x.x() * x.y(); },
          [](const Vec2& x) {
            return Vec2(x.x() * x.x() - x.y() * x.y() + x.x(), -(2 * x.x() * x.y() + x.y()));
          },
          [](const Vec2& x) {
            Mat2 g;
            g << 2 * x.x() + 1, -2 * x.y(), -2 * x.y(), -(2 * x.x() + 1);
            return g;
          }};
}

const ViscosityField kMu([](const CellPoint& pt) { return manufactured::viscosity(pt.physical); });

}  // namespace

TEST_CASE("exact fields have zero error") {
  auto mesh = square(3, {-1, -1, 1, 1});
  const ExactFlow flow = cubic_flow();
  const StokesBoundary b = StokesBoundary::zero_penetration(flow.velocity);
  for (int p : {3, 4}) {
    auto space = build_stream_space(mesh, p, StokesBoundary{{}, WallCondition::kTraction});
    const ScalarField phi = interpolate(flow.stream, space);
    const PenaltyData pen = compute_penalty(*mesh, kMu, p, 2.0);
    const ErrorNorms e = error_norms(phi, flow, kMu, pen, b);
    CHECK(e.l2_stream <= 1e-12);
    CHECK(e.l2_velocity <= 1e-12);
    CHECK(e.h1_velocity <= 1e-12);
    CHECK(e.dg <= 1e-12);
    CHECK(dg_norm(phi, kMu, pen, b) > 1.0);
  }
}

TEST_CASE("interpolation errors decrease with N") {
  const ExactFlow flow{manufactured::stream, manufactured::velocity, manufactured::velocity_gradient};
  const StokesBoundary b = StokesBoundary::zero_penetration(flow.velocity);
  std::vector<double> h, dg, l2u;
  for (int n : {4, 8, 16}) {
    auto mesh = square(n, manufactured::domain());
    auto space = build_stream_space(mesh, 3, b);
    const ScalarField phi = interpolate(flow.stream, space);
    const PenaltyData pen = compute_penalty(*mesh, kMu, 3, 2.0);
    const ErrorNorms e = error_norms(phi, flow, kMu, pen, b);
    h.push_back(mesh->mesh_size());
    dg.push_back(e.dg);
    l2u.push_back(e.l2_velocity);
  }
  const RateEstimate r = convergence_rate(h, dg);
  CHECK(r.monotone);
  CHECK(r.slope == doctest::Approx(2.0).epsilon(0.15));
  CHECK(convergence_rate(h, l2u).slope > 2.7);
}

TEST_CASE("Nusselt number of a linear profile") {
  for (int p : {1, 2, 3}) {
    for (int n : {1, 3, 6}) {
      auto space = build_temperature_space(square(n), p);
      CHECK(nusselt(interpolate([](const Vec2& x) { return x.y(); }, space)) ==
            doctest::Approx(1.0).epsilon(1e-13));
    }
  }
  // flux of T = y^2 through the top wall is 2
  auto space = build_temperature_space(square(4), 2);
  CHECK(nusselt(interpolate([](const Vec2& x) { return x.y() * x.y(); }, space)) ==
        doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("rms velocity") {
  auto mesh = square(4);
  auto space = build_stream_space(mesh, 2, StokesBoundary{{}, WallCondition::kTraction});
  const ScalarField rotation = interpolate([](const Vec2& x) { return -0.5 * x.squaredNorm(); }, space);
  CHECK(velocity_rms(rotation) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
  CHECK(velocity_rms(rotation, 8) == doctest::Approx(velocity_rms(rotation, 4)).epsilon(1e-14));
  const ScalarField zero(space);
  CHECK(velocity_rms(zero) == 0.0);
}

TEST_CASE("functionals of the conductive state") {
  auto mesh = square(4);
  auto stream_space = build_stream_space(mesh, 2, StokesBoundary::free_slip());
  auto temp_space = build_temperature_space(mesh, 2);
  const ScalarField zero(stream_space);
  const ScalarField t = interpolate([](const Vec2& x) { return x.y(); }, temp_space);
  const FunctionalReport r = functionals(zero, t, ViscosityField::constant(1.0), 1e4);
  CHECK(r.nusselt == doctest::Approx(1.0));
  CHECK(r.u_rms == 0.0);
  CHECK(r.work == 0.0);
  CHECK(r.dissipation == 0.0);
  CHECK(std::isnan(r.balance));
  CHECK(r.degree == 2);
  CHECK(r.dof_count == stream_space->size());
  CHECK(std::isnan(functionals(zero, t, ViscosityField::constant(1.0), 0.0).balance));
}

TEST_CASE("work and dissipation of a rotation") {
  // phi = -(x^2+y^2)/2: u = (-y, x), eps = 0; T = x gives W = int x * (-x) = -1/3
  auto mesh = square(3);
  auto stream_space = build_stream_space(mesh, 2, StokesBoundary{{}, WallCondition::kTraction});
  auto temp_space = build_space(mesh, 1, {});
  const ScalarField phi = interpolate([](const Vec2& x) { return -0.5 * x.squaredNorm(); }, stream_space);
  const ScalarField t = interpolate([](const Vec2& x) { return x.x(); }, temp_space);
  const FunctionalReport r = functionals(phi, t, ViscosityField::constant(2.0), 1.0);
  CHECK(r.work == doctest::Approx(-1.0 / 3.0).epsilon(1e-13));
  CHECK(r.negative_work);
  CHECK(std::abs(r.dissipation) <= 1e-13);
}

TEST_CASE("convergence rate") {
  const std::vector<double> h{1.0, 0.5, 0.25};
  const RateEstimate r = convergence_rate(h, std::vector<double>{1.0, 0.25, 0.0625});
  CHECK(r.slope == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.monotone);
  // input order does not matter; only the finest levels are fitted
  const std::vector<double> h4{0.125, 1.0, 0.25, 0.5};
  const std::vector<double> e4{1.0 / 512, 5.0, 1.0 / 64, 1.0 / 8};
  CHECK(convergence_rate(h4, e4).slope == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(convergence_rate(h4, e4, 0).slope > 3.0);
  CHECK_FALSE(convergence_rate(h, std::vector<double>{1.0, 2.0, 0.5}).monotone);
  CHECK_THROWS_AS(convergence_rate(h, std::vector<double>{1.0, 0.0, 0.5}), Error);
  CHECK_THROWS_AS(convergence_rate(h, std::vector<double>{1.0, 0.5}), Error);
  CHECK(relative_error(1.01, 1.0) == doctest::Approx(0.01));
}

TEST_CASE("flow diagnostics of an interpolated stream function") {
  auto mesh = square(5, manufactured::domain());
  for (int p : {2, 3, 5}) {
    auto space = build_stream_space(mesh, p, StokesBoundary::free_slip());
    ScalarField phi = interpolate(manufactured::stream, space);
    phi.apply_constraints();
    const FlowDiagnostics d = flow_diagnostics(phi);
    CHECK(d.max_speed > 0.5);
    CHECK(d.max_divergence <= 1e-12 * d.max_speed);
    CHECK(d.max_normal_flux <= 1e-12 * d.max_speed);
  }
}
