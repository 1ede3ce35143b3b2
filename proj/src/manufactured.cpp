#include "manufactured.hpp"

#include <cmath>
#include <numbers>

namespace ripg::manufactured {
namespace {

constexpr double kPi = std::numbers::pi;

struct Trig {
  double sx, cx, sy, cy;
  explicit Trig(const Vec2& x)
      : sx(std::sin(kPi * x.x())), cx(std::cos(kPi * x.x())),
        sy(std::sin(kPi * x.y())), cy(std::cos(kPi * x.y())) {}
};

}  // namespace

double stream(const Vec2& x) {
  const Trig t(x);
  return t.sx * t.sy / kPi;
}

Vec2 velocity(const Vec2& x) {
  const Trig t(x);
  return {t.sx * t.cy, -t.cx * t.sy};
}

Mat2 velocity_gradient(const Vec2& x) {
  const Trig t(x);
  Mat2 g;
  g << kPi * t.cx * t.cy, -kPi * t.sx * t.sy,
       kPi * t.sx * t.sy, -kPi * t.cx * t.cy;
  return g;
}

double viscosity(const Vec2& x) {
  const Trig t(x);
  return 1.0 + t.sx * t.sx * t.sy * t.sy;
}

Vec2 forcing(const Vec2& x) {
  const Trig t(x);
  const double s2 = t.sx * t.sx * t.sy * t.sy;
  const double k = 2.0 * kPi * kPi;
  return {k * t.cy * t.sx * (3.0 * s2 - 2.0 * t.sy * t.sy + 1.0),
          -k * t.cx * t.sy * (3.0 * s2 - 2.0 * t.sx * t.sx + 1.0)};
}

}  // namespace ripg::manufactured
