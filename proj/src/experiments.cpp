#include "experiments.hpp"

#include <limits>

#include "linalg.hpp"
#include "manufactured.hpp"

namespace ripg {

ManufacturedResult solve_manufactured(int n, int degree, double delta) {
  auto mesh = std::make_shared<const TriangularMesh>(build_structured(manufactured::domain(), n));
  const StokesBoundary boundary = StokesBoundary::zero_penetration(manufactured::velocity);
  auto space = build_stream_space(mesh, degree, boundary);
  const ViscosityField mu([](const CellPoint& pt) { return manufactured::viscosity(pt.physical); });
  const PenaltyData penalty = compute_penalty(*mesh, mu, degree, delta);
  const StokesProblem problem{
      [](const CellPoint& pt) { return manufactured::forcing(pt.physical); }, boundary};
  const AssembledSystem system = assemble_system(*space, mu, penalty, problem);

  ManufacturedResult out;
  out.dofs = space->size();
  out.h = mesh->mesh_size();
  CholeskySolver solver;
  out.spd = solver.factorize(system.matrix);
  if (!out.spd) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.errors = {nan, nan, nan, nan};
    out.flow = {nan, nan, nan};
    out.relative_residual = nan;
    return out;
  }
  std::vector<double> x = solver.solve(system.rhs);
  out.relative_residual = relative_residual(system.matrix.eigen(), x, system.rhs);
  const ScalarField stream(space, std::move(x));
  out.errors = error_norms(stream,
                           {manufactured::stream, manufactured::velocity,
                            manufactured::velocity_gradient},
                           mu, penalty, boundary);
  out.flow = flow_diagnostics(stream);
  return out;
}

}  // namespace ripg
