#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "manufactured.hpp"

using namespace ripg;
namespace mms = ripg::manufactured;

namespace {

constexpr double kStep = 1e-5;

Mat2 stress(const Vec2& x) {
  const Mat2 g = mms::velocity_gradient(x);
  return mms::viscosity(x) * (g + g.transpose());
}

std::vector<Vec2> samples() {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-0.99, 0.99);
  std::vector<Vec2> pts;
  for (int i = 0; i < 50; ++i) pts.emplace_back(u(rng), u(rng));
  return pts;
}

}  // namespace

TEST_CASE("velocity is the curl of the stream function") {
  for (const Vec2& x : samples()) {
    const Vec2 ex(kStep, 0), ey(0, kStep);
    const double dx = (mms::stream(x + ex) - mms::stream(x - ex)) / (2 * kStep);
    const double dy = (mms::stream(x + ey) - mms::stream(x - ey)) / (2 * kStep);
    CHECK((mms::velocity(x) - Vec2(dy, -dx)).norm() <= 1e-8);
  }
}

TEST_CASE("velocity gradient") {
  for (const Vec2& x : samples()) {
    const Vec2 ex(kStep, 0), ey(0, kStep);
    const Vec2 gx = (mms::velocity(x + ex) - mms::velocity(x - ex)) / (2 * kStep);
    const Vec2 gy = (mms::velocity(x + ey) - mms::velocity(x - ey)) / (2 * kStep);
    Mat2 g;
    g << gx.x(), gy.x(), gx.y(), gy.y();
    CHECK((mms::velocity_gradient(x) - g).norm() <= 1e-8);
    CHECK(mms::velocity_gradient(x).trace() == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("forcing balances the viscous stress") {
  for (const Vec2& x : samples()) {
    const Vec2 ex(kStep, 0), ey(0, kStep);
    const Mat2 sx = (stress(x + ex) - stress(x - ex)) / (2 * kStep);
    const Mat2 sy = (stress(x + ey) - stress(x - ey)) / (2 * kStep);
    const Vec2 div(sx(0, 0) + sy(0, 1), sx(1, 0) + sy(1, 1));
    CHECK((mms::forcing(x) + div).norm() <= 1e-6);
  }
}

TEST_CASE("boundary values") {
  for (double t : {-1.0, -0.3, 0.4, 1.0}) {
    for (const Vec2& x : {Vec2(t, -1), Vec2(t, 1), Vec2(-1, t), Vec2(1, t)}) {
      CHECK(std::abs(mms::stream(x)) <= 1e-15);
      CHECK(mms::viscosity(x) == doctest::Approx(1.0));
    }
  }
  CHECK(mms::viscosity({0.5, 0.5}) == doctest::Approx(2.0));
}
