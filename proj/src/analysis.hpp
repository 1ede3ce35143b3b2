#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "ripg_stokes.hpp"
#include "space.hpp"

namespace ripg {

struct ExactFlow {
  ScalarFunction stream;
  VectorFunction velocity;
  std::function<Mat2(const Vec2&)> velocity_gradient;  // row i = grad u_i
};

struct ErrorNorms {
  double l2_stream = 0.0;
  double l2_velocity = 0.0;
  double h1_velocity = 0.0;  // seminorm
  double dg = 0.0;
};

/// Errors of a stream-function approximation. The DG norm uses the jumps of
/// the error on interior facets and on zero-penetration walls, weighted by
/// the same penalty as the assembly.
ErrorNorms error_norms(const ScalarField& stream, const ExactFlow& exact,
                       const ViscosityField& viscosity, const PenaltyData& penalty,
                       const StokesBoundary& boundary);

/// DG norm of curl(stream) itself (no exact part).
double dg_norm(const ScalarField& stream, const ViscosityField& viscosity,
               const PenaltyData& penalty, const StokesBoundary& boundary);

/// Heat flux through the top wall, int grad T . n ds.
double nusselt(const ScalarField& temperature);

/// sqrt(int |curl phi|^2). quadrature_degree <= 0 picks 2p.
double velocity_rms(const ScalarField& stream, int quadrature_degree = 0);

struct FunctionalReport {
  double nusselt = 0.0;
  double u_rms = 0.0;
  double work = 0.0;         // int T u . g_up, g_up = (0, -1)
  double dissipation = 0.0;  // int 2 mu eps(u):eps(u)
  double balance = 0.0;      // |W - Phi/Ra| / max(W, Phi/Ra); NaN when Ra = 0
  bool negative_work = false;
  std::size_t dof_count = 0;
  double h = 0.0;
  int degree = 0;
};

FunctionalReport functionals(const ScalarField& stream, const ScalarField& temperature,
                             const ViscosityField& viscosity, double rayleigh);

/// |value - reference| / reference.
double relative_error(double value, double reference);

struct RateEstimate {
  double slope = 0.0;
  bool monotone = true;  // errors strictly decrease with h over all levels
};

/// Least-squares slope of log(error) against log(h) over the `levels` finest
/// levels (0 = all of them). Errors and h must be positive.
RateEstimate convergence_rate(std::span<const double> h, std::span<const double> errors,
                              std::size_t levels = 3);

struct FlowDiagnostics {
  double max_divergence = 0.0;     // |div u_h| over volume quadrature points
  double max_normal_flux = 0.0;    // |u_h . n| over exterior-facet quadrature points
  double max_speed = 0.0;          // |u_h| over both point sets
};

FlowDiagnostics flow_diagnostics(const ScalarField& stream);

}  // namespace ripg
