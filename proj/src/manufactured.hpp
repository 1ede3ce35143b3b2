#pragma once

#include "mesh.hpp"

namespace ripg::manufactured {

// Smooth Stokes solution on (-1, 1)^2 with variable viscosity:
// phi = sin(pi x) sin(pi y) / pi, mu = 1 + sin^2(pi x) sin^2(pi y).
// The velocity vanishes in the normal direction on the square's boundary.

inline Rectangle domain() { return {-1.0, -1.0, 1.0, 1.0}; }

double stream(const Vec2& x);
Vec2 velocity(const Vec2& x);
Mat2 velocity_gradient(const Vec2& x);  // row i = grad u_i
double viscosity(const Vec2& x);
/// -div(2 mu eps(u)) with zero pressure.
Vec2 forcing(const Vec2& x);

}  // namespace ripg::manufactured
