#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "linalg.hpp"
#include "ripg_stokes.hpp"
#include "space.hpp"

namespace ripg {

/// Steady convection benchmark in the unit square.
struct BenchmarkCase {
  std::string name;
  double rayleigh = 0.0;
  double viscosity_contrast_temperature = 1.0;
  double viscosity_contrast_depth = 1.0;
  double yield_stress = 0.0;
  double nusselt_ref = 0.0;
  double u_rms_ref = 0.0;
};

std::span<const BenchmarkCase> benchmark_cases();
/// Throws Error(kInvalidArgument) for an unknown name.
const BenchmarkCase& find_case(std::string_view name);

/// Temperature- and depth-dependent viscosity with optional plastic yielding.
class ViscosityModel {
 public:
  static constexpr double kPlasticFloor = 1e-3;
  static constexpr double kStrainFloor = 1e-12;

  explicit ViscosityModel(const BenchmarkCase& c);

  double linear(double temperature, double depth) const;
  double plastic(double strain_invariant) const;
  /// strain_invariant = sqrt(eps:eps).
  double operator()(double temperature, double strain_invariant, double depth) const;

  bool depends_on_strain() const { return yield_stress_ > 0.0; }
  bool depends_on_temperature() const { return log_temperature_ != 0.0; }
  bool is_constant() const {
    return !depends_on_strain() && !depends_on_temperature() && log_depth_ == 0.0;
  }

 private:
  double log_temperature_;
  double log_depth_;
  double yield_stress_;
};

/// Depth below the cold wall: the buoyancy force points along -y, so the
/// cold wall at y = 0 is the top of the convecting layer.
inline double depth_of(const Vec2& x) { return x.y(); }

/// Viscosity from the current temperature and stream function (lagged).
ViscosityField evaluate_viscosity(const ViscosityModel& model, const ScalarField& temperature,
                                  const ScalarField& stream);

using CellVectorField = std::function<Vec2(const CellPoint&)>;

/// Temperature space of degree p with T = 0 on the bottom and T = 1 on the top.
std::shared_ptr<const DofMap> build_temperature_space(std::shared_ptr<const TriangularMesh> mesh,
                                                      int degree);

struct HeatSystem {
  SparseMatrix matrix;
  std::vector<double> rhs;
};

/// (u . grad T, s) + (grad T, grad s) with Dirichlet values lifted into the
/// load; constrained rows become identity rows.
HeatSystem assemble_heat(const DofMap& temperature_space, const CellVectorField& velocity);
ScalarField solve_heat(std::shared_ptr<const DofMap> temperature_space,
                       const CellVectorField& velocity);

/// Velocity of a stream function on the same mesh, as a cell field.
CellVectorField velocity_field(const ScalarField& stream);

struct PicardOptions {
  int max_iterations = 300;
  double relaxation = 0.0;  // <= 0 picks 1 for isoviscous cases, 0.5 otherwise
  double temperature_tolerance = 1e-8;
  double nusselt_tolerance = 1e-8;
  double delta = 2.0;
  std::function<double(const Vec2&)> initial_temperature;  // empty: default guess
};

double default_relaxation(const BenchmarkCase& c);
double default_initial_temperature(const Vec2& x);

struct PicardIterate {
  int iteration = 0;
  double nusselt = 0.0;
  double u_rms = 0.0;
  double temperature_change = 0.0;  // max nodal |T_heat - T_old|
  double viscosity_min = 0.0;
  double viscosity_max = 0.0;
};

struct SteadyState {
  ScalarField stream;
  ScalarField temperature;
  PenaltyData penalty;
  std::vector<PicardIterate> trace;
  bool converged = false;
  double relaxation = 1.0;
};

/// Picard iteration between the Stokes solve (free-slip walls, buoyancy
/// Ra T (0, -1)) and the heat solve. Does not throw on non-convergence;
/// check SteadyState::converged. Throws Error(kNonFinite) on divergence.
SteadyState solve_steady(const BenchmarkCase& c, std::shared_ptr<const TriangularMesh> mesh,
                         int degree, const PicardOptions& options = {});

/// Viscosity of a steady state (from its final temperature and flow).
ViscosityField steady_viscosity(const BenchmarkCase& c, const SteadyState& state);

void write_trace_csv(std::span<const PicardIterate> trace, std::ostream& out);

}  // namespace ripg
