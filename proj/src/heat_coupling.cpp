#include "heat_coupling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>

#include "analysis.hpp"
#include "error.hpp"
#include "quadrature.hpp"

namespace ripg {
namespace {

const std::array<BenchmarkCase, 5> kCases = {{
    {"BB1a", 1e4, 1.0, 1.0, 0.0, 4.884409, 42.864947},
    {"BB2a", 1e4, 1e4, 1.0, 0.0, 10.065899, 480.433425},
    // Same references with the viscosity contrast of the original case
    // definition (exp(-ln(1000) T)); see README.
    {"BB2a-classic", 1e4, 1e3, 1.0, 0.0, 10.065899, 480.433425},
    {"T2", 1e2, 1e5, 1.0, 1.0, 8.559459, 140.775535},
    {"T4", 1e2, 1e5, 10.0, 1.0, 6.615419, 79.088809},
}};

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) fail(ErrorCode::kNonFinite, std::string(what) + " is not finite");
  }
}

}  // namespace

std::span<const BenchmarkCase> benchmark_cases() { return kCases; }

const BenchmarkCase& find_case(std::string_view name) {
  for (const BenchmarkCase& c : kCases) {
    if (c.name == name) return c;
  }
  fail(ErrorCode::kInvalidArgument, "unknown benchmark case '" + std::string(name) + "'");
}

ViscosityModel::ViscosityModel(const BenchmarkCase& c)
    : log_temperature_(std::log(c.viscosity_contrast_temperature)),
      log_depth_(std::log(c.viscosity_contrast_depth)),
      yield_stress_(c.yield_stress) {
  require(c.viscosity_contrast_temperature > 0.0 && c.viscosity_contrast_depth > 0.0,
          "viscosity contrasts must be positive");
  require(c.yield_stress >= 0.0, "yield stress must be non-negative");
}

double ViscosityModel::linear(double temperature, double depth) const {
  return std::exp(-log_temperature_ * temperature + log_depth_ * depth);
}

double ViscosityModel::plastic(double strain_invariant) const {
  return kPlasticFloor + yield_stress_ / std::max(strain_invariant, kStrainFloor);
}

double ViscosityModel::operator()(double temperature, double strain_invariant,
                                  double depth) const {
  const double lin = linear(temperature, depth);
  if (yield_stress_ <= 0.0) return lin;
  return 2.0 / (1.0 / lin + 1.0 / plastic(strain_invariant));
}

ViscosityField evaluate_viscosity(const ViscosityModel& model, const ScalarField& temperature,
                                  const ScalarField& stream) {
  require(temperature.space().mesh().num_cells() == stream.space().mesh().num_cells(),
          "temperature and stream function live on different meshes");
  return ViscosityField([model, temperature, stream](const CellPoint& pt) {
    const double t = temperature.value(pt.cell, pt.reference);
    double invariant = 0.0;
    if (model.depends_on_strain()) {
      invariant = strain_of_curl(stream.evaluate(pt.cell, pt.reference, 2).hessian).norm();
    }
    const double mu = model(t, invariant, depth_of(pt.physical));
    if (!std::isfinite(mu)) fail(ErrorCode::kNonFinite, "viscosity is not finite");
    return mu;
  });
}

std::shared_ptr<const DofMap> build_temperature_space(std::shared_ptr<const TriangularMesh> mesh,
                                                      int degree) {
  return build_space(std::move(mesh), degree,
                     {{BoundaryTag::kBottom, [](const Vec2&) { return 0.0; }},
                      {BoundaryTag::kTop, [](const Vec2&) { return 1.0; }}});
}

HeatSystem assemble_heat(const DofMap& space, const CellVectorField& velocity) {
  const TriangularMesh& mesh = space.mesh();
  const int p = space.degree();
  const int nd = space.dofs_per_cell();
  const std::size_t n = space.size();
  const QuadratureRule rule = triangle_rule(3 * p);
  const BasisTables ref = tabulate(p, rule, 1);

  TripletAccumulator triplets(n);
  triplets.reserve(n + mesh.num_cells() * nd * nd);
  for (std::size_t i = 0; i < n; ++i) {
    triplets.add(static_cast<std::int32_t>(i), static_cast<std::int32_t>(i), 0.0);
  }
  std::vector<double> local(static_cast<std::size_t>(nd) * nd);
  std::vector<Vec2> grad(nd);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const AffineMap& map = mesh.cell_map(c);
    const Mat2 jit = map.inverse.transpose();
    const double det = std::abs(map.determinant);
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2& xi = rule.points[q];
      const Vec2 u = velocity
                         ? velocity({static_cast<std::int32_t>(c), xi, map.to_physical(xi)})
                         : Vec2::Zero();
      const double w = rule.weights[q] * det;
      for (int j = 0; j < nd; ++j) grad[j] = jit * ref.gradient(q, j);
      for (int i = 0; i < nd; ++i) {
        const double s = ref.value(q, i);
        for (int j = 0; j < nd; ++j) {
          local[i * nd + j] += w * (s * u.dot(grad[j]) + grad[i].dot(grad[j]));
        }
      }
    }
    const auto dofs = space.cell_dofs(c);
    triplets.add_block(dofs, dofs, local);
  }
  SparseMatrix a = triplets.build();

  std::vector<double> rhs(n, 0.0);
  for (int j = 0; j < a.outerSize(); ++j) {
    if (!space.is_constrained(j)) continue;
    const double g = space.constraint_value(j);
    if (g == 0.0) continue;
    for (SparseMatrix::InnerIterator it(a, j); it; ++it) {
      if (!space.is_constrained(it.row())) rhs[it.row()] -= it.value() * g;
    }
  }
  a.prune([&space](const int& row, const int& col, const double&) {
    return row == col || (!space.is_constrained(row) && !space.is_constrained(col));
  });
  for (std::int32_t c : space.constrained_dofs()) {
    a.coeffRef(c, c) = 1.0;
    rhs[c] = space.constraint_value(c);
  }
  return {std::move(a), std::move(rhs)};
}

ScalarField solve_heat(std::shared_ptr<const DofMap> space, const CellVectorField& velocity) {
  require(space != nullptr, "space is null");
  HeatSystem system = assemble_heat(*space, velocity);
  std::vector<double> t = lu_solve(system.matrix, system.rhs);
  require_finite(t, "temperature");
  return ScalarField(std::move(space), std::move(t));
}

CellVectorField velocity_field(const ScalarField& stream) {
  return [stream](const CellPoint& pt) { return velocity(stream, pt.cell, pt.reference); };
}

double default_relaxation(const BenchmarkCase& c) {
  // Undamped iteration falls into a period-two cycle once mu depends on T.
  return ViscosityModel(c).is_constant() ? 1.0 : 0.5;
}

double default_initial_temperature(const Vec2& x) {
  constexpr double pi = std::numbers::pi;
  return x.y() + 0.1 * std::cos(pi * x.x()) * std::sin(pi * x.y());
}

SteadyState solve_steady(const BenchmarkCase& c, std::shared_ptr<const TriangularMesh> mesh,
                         int degree, const PicardOptions& options) {
  require(mesh != nullptr, "mesh is null");
  require(options.max_iterations > 0, "max_iterations must be positive");
  const double omega = options.relaxation > 0.0 ? options.relaxation : default_relaxation(c);
  require(omega > 0.0 && omega <= 1.0, "relaxation must lie in (0, 1]");
  const ViscosityModel model(c);

  auto stream_space = build_stream_space(mesh, degree, StokesBoundary::free_slip());
  auto temperature_space = build_temperature_space(mesh, degree);
  ScalarField temperature = interpolate(
      options.initial_temperature ? options.initial_temperature : default_initial_temperature,
      temperature_space);
  temperature.apply_constraints();
  ScalarField stream(stream_space);

  const double rayleigh = c.rayleigh;
  StokesProblem problem;
  problem.boundary = StokesBoundary::free_slip();
  problem.body_force = [&temperature, rayleigh](const CellPoint& pt) {
    return Vec2(0.0, -rayleigh * temperature.value(pt.cell, pt.reference));
  };

  // The operator only changes between iterations through mu(T, eps(u)).
  const bool operator_fixed = !model.depends_on_strain() && !model.depends_on_temperature();
  CholeskySolver cholesky;
  bool factored = false;
  PenaltyData penalty;

  SteadyState out{stream, temperature, {}, {}, false, omega};
  double previous_nusselt = std::numeric_limits<double>::quiet_NaN();
  for (int k = 1; k <= options.max_iterations; ++k) {
    const ViscosityField mu = evaluate_viscosity(model, temperature, stream);
    std::vector<double> rhs;
    if (!operator_fixed || !factored) {
      penalty = compute_penalty(*mesh, mu, degree, options.delta);
      AssembledSystem system = assemble_system(*stream_space, mu, penalty, problem);
      if (!cholesky.factorize(system.matrix)) {
        fail(ErrorCode::kNotSpd, "Stokes operator is not positive definite");
      }
      factored = true;
      rhs = std::move(system.rhs);
    } else {
      rhs = assemble_load(*stream_space, mu, penalty, problem);
    }
    std::vector<double> phi = cholesky.solve(rhs);
    require_finite(phi, "stream function");
    stream = ScalarField(stream_space, std::move(phi));

    const ScalarField heat = solve_heat(temperature_space, velocity_field(stream));
    double change = 0.0;
    auto t = temperature.coefficients();
    const auto t_new = heat.coefficients();
    for (std::size_t i = 0; i < t.size(); ++i) {
      change = std::max(change, std::abs(t_new[i] - t[i]));
      t[i] += omega * (t_new[i] - t[i]);
    }

    PicardIterate it;
    it.iteration = k;
    it.nusselt = nusselt(temperature);
    it.u_rms = velocity_rms(stream);
    it.temperature_change = change;
    it.viscosity_min = penalty.viscosity_min;
    it.viscosity_max = penalty.viscosity_max;
    out.trace.push_back(it);
    if (!std::isfinite(it.nusselt) || !std::isfinite(it.u_rms)) {
      fail(ErrorCode::kNonFinite, "Picard iterate diverged");
    }
    const bool nu_settled = std::abs(it.nusselt - previous_nusselt) <=
                            options.nusselt_tolerance * std::abs(it.nusselt);
    previous_nusselt = it.nusselt;
    if (change <= options.temperature_tolerance && nu_settled) {
      out.converged = true;
      break;
    }
  }
  out.stream = std::move(stream);
  out.temperature = std::move(temperature);
  out.penalty = std::move(penalty);
  return out;
}

ViscosityField steady_viscosity(const BenchmarkCase& c, const SteadyState& state) {
  return evaluate_viscosity(ViscosityModel(c), state.temperature, state.stream);
}

void write_trace_csv(std::span<const PicardIterate> trace, std::ostream& out) {
  out << "iter,Nu,u_rms,dT_inf,mu_min,mu_max\n";
  out << std::setprecision(17);
  for (const PicardIterate& it : trace) {
    out << it.iteration << ',' << it.nusselt << ',' << it.u_rms << ',' << it.temperature_change
        << ',' << it.viscosity_min << ',' << it.viscosity_max << '\n';
  }
}

}  // namespace ripg
