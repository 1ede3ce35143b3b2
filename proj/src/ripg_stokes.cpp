#include "ripg_stokes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "error.hpp"
#include "quadrature.hpp"

namespace ripg {
namespace {

const Vec2 kReferenceVertex[3] = {Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0)};

Vec2 facet_reference_point(int local_facet, double t) {
  const Vec2& a = kReferenceVertex[local_facet];
  const Vec2& b = kReferenceVertex[(local_facet + 1) % 3];
  return a + t * (b - a);
}

// True when the cell's local facet runs the same way as the global facet.
bool aligned_with_facet(const TriangularMesh& mesh, const Facet& facet, const FacetSide& side) {
  return mesh.cell(side.cell)[side.local_facet] == facet.vertices[0];
}

double checked_viscosity(const ViscosityField& mu, const CellPoint& point) {
  const double value = mu(point);
  if (!std::isfinite(value)) {
    fail(ErrorCode::kNonFinite, "viscosity is not finite");
  }
  if (value <= 0.0) {
    std::ostringstream msg;
    msg << "viscosity must be positive, got " << value << " at (" << point.physical.x() << ", "
        << point.physical.y() << ")";
    fail(ErrorCode::kInvalidArgument, msg.str());
  }
  return value;
}

std::array<double, 3> sym(const Mat2& m) { return {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1)}; }

double contract(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + 2.0 * a[1] * b[1] + a[2] * b[2];
}

// A(:) : B(:) for a general 2x2 and a symmetric one stored as (xx, xy, yy).
double contract(const Mat2& a, const std::array<double, 3>& s) {
  return a(0, 0) * s[0] + (a(0, 1) + a(1, 0)) * s[1] + a(1, 1) * s[2];
}

void require_stream_degree(int degree) {
  if (degree < 2) {
    fail(ErrorCode::kInvalidArgument,
         "stream-function discretization needs degree >= 2, got " + std::to_string(degree));
  }
}

// Quadrature data along one facet, traced from the cells on each side.
struct FacetTrace {
  int sides = 0;
  int num_points = 0;
  int dofs_per_cell = 0;
  std::vector<double> weights;  // include the facet length
  std::vector<Vec2> points;
  std::array<std::int32_t, 2> cells{};
  std::array<Vec2, 2> normals{};
  std::array<std::vector<double>, 2> mu;          // per point
  std::array<std::vector<Vec2>, 2> velocity;      // per point x dof: curl of basis
  std::array<std::vector<std::array<double, 3>>, 2> strain;  // per point x dof
};

class FacetEvaluator {
 public:
  FacetEvaluator(const DofMap& space, int rule_degree)
      : space_(space), rule_(edge_rule(rule_degree)) {
    const LagrangeElement& element = space.element();
    for (int lf = 0; lf < 3; ++lf) {
      for (int orient = 0; orient < 2; ++orient) {
        std::vector<Vec2> pts;
        for (double t : rule_.points) {
          pts.push_back(facet_reference_point(lf, orient == 0 ? t : 1.0 - t));
        }
        tables_[lf][orient] = element.tabulate(pts, 2);
        reference_points_[lf][orient] = std::move(pts);
      }
    }
  }

  const LineRule& rule() const { return rule_; }

  void trace(std::size_t f, const ViscosityField& mu, FacetTrace& out) const {
    const TriangularMesh& mesh = space_.mesh();
    const Facet& facet = mesh.facet(f);
    const int nq = static_cast<int>(rule_.points.size());
    const int nd = space_.dofs_per_cell();
    out.sides = facet.side_count();
    out.num_points = nq;
    out.dofs_per_cell = nd;
    out.weights.resize(nq);
    out.points.resize(nq);
    const Vec2& a = mesh.vertex(facet.vertices[0]);
    const Vec2& b = mesh.vertex(facet.vertices[1]);
    for (int q = 0; q < nq; ++q) {
      out.weights[q] = rule_.weights[q] * facet.length;
      out.points[q] = a + rule_.points[q] * (b - a);
    }
    for (int s = 0; s < out.sides; ++s) {
      const FacetSide& side = facet.sides[s];
      const int orient = aligned_with_facet(mesh, facet, side) ? 0 : 1;
      const BasisTables& ref = tables_[side.local_facet][orient];
      const auto& refpts = reference_points_[side.local_facet][orient];
      const AffineMap& map = mesh.cell_map(side.cell);
      const Mat2 jit = map.inverse.transpose();
      out.cells[s] = side.cell;
      out.normals[s] = side.normal;
      out.mu[s].resize(nq);
      out.velocity[s].resize(static_cast<std::size_t>(nq) * nd);
      out.strain[s].resize(static_cast<std::size_t>(nq) * nd);
      for (int q = 0; q < nq; ++q) {
        out.mu[s][q] = checked_viscosity(mu, {side.cell, refpts[q], out.points[q]});
        for (int i = 0; i < nd; ++i) {
          const Vec2 g = jit * ref.gradient(q, i);
          const Mat2 h = jit * ref.hessian(q, i) * map.inverse;
          out.velocity[s][q * nd + i] = curl(g);
          out.strain[s][q * nd + i] = sym(strain_of_curl(h));
        }
      }
    }
  }

 private:
  const DofMap& space_;
  LineRule rule_;
  BasisTables tables_[3][2];
  std::vector<Vec2> reference_points_[3][2];
};

bool has_tag(const TriangularMesh& mesh, BoundaryTag tag) {
  for (const Facet& f : mesh.facets()) {
    if (f.tag == tag) return true;
  }
  return false;
}

// Facet terms for one facet on an already traced facet; K is row-major with
// rows = test functions. Side-major local ordering.
void facet_matrix(const FacetTrace& tr, const std::array<double, 2>& weight, double beta,
                  unsigned terms, std::vector<double>& k) {
  const int nd = tr.dofs_per_cell;
  const int n = tr.sides * nd;
  k.assign(static_cast<std::size_t>(n) * n, 0.0);
  const bool consistency = (terms & kConsistencyTerm) != 0;
  const bool penalty = (terms & kPenaltyTerm) != 0;
  if (!consistency && !penalty) return;

  std::vector<Mat2> jump(n);
  std::vector<std::array<double, 3>> avg(n);
  for (int q = 0; q < tr.num_points; ++q) {
    for (int s = 0; s < tr.sides; ++s) {
      const double scale = weight[s] * 2.0 * tr.mu[s][q];
      for (int i = 0; i < nd; ++i) {
        const int a = s * nd + i;
        jump[a] = tr.velocity[s][q * nd + i] * tr.normals[s].transpose();
        const auto& e = tr.strain[s][q * nd + i];
        avg[a] = {scale * e[0], scale * e[1], scale * e[2]};
      }
    }
    const double wq = tr.weights[q];
    for (int a = 0; a < n; ++a) {
      double* row = k.data() + static_cast<std::size_t>(a) * n;
      for (int b = 0; b < n; ++b) {
        double v = 0.0;
        if (consistency) v -= contract(jump[b], avg[a]) + contract(jump[a], avg[b]);
        if (penalty) v += beta * (jump[a].array() * jump[b].array()).sum();
        row[b] += wq * v;
      }
    }
  }
}

}  // namespace

ViscosityField ViscosityField::constant(double mu) {
  return ViscosityField([mu](const CellPoint&) { return mu; });
}

double inverse_constant(double cell_area, double facet_length, int degree) {
  require(cell_area > 0.0 && facet_length > 0.0, "inverse_constant needs positive measures");
  require(degree >= 0, "inverse_constant needs a non-negative degree");
  return std::sqrt(0.5 * (degree + 1) * (degree + 2) * facet_length / cell_area);
}

WallCondition StokesBoundary::condition(BoundaryTag tag) const {
  for (const auto& [t, c] : walls) {
    if (t == tag) return c;
  }
  return default_condition;
}

StokesBoundary StokesBoundary::zero_penetration(VectorFunction wall_velocity) {
  StokesBoundary b;
  b.default_condition = WallCondition::kZeroPenetration;
  b.wall_velocity = std::move(wall_velocity);
  return b;
}

PenaltyData compute_penalty(const TriangularMesh& mesh, const ViscosityField& viscosity,
                            int degree, double delta) {
  require_stream_degree(degree);
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    fail(ErrorCode::kInvalidArgument, "penalty parameter delta must be positive");
  }
  if (delta <= kCoercivityThreshold) {
    std::ostringstream msg;
    msg << "delta = " << delta << " <= sqrt(2); coercivity is not guaranteed";
    warn(msg.str());
  }

  const QuadratureRule volume = triangle_rule(2 * degree);
  const LineRule edge = edge_rule(2 * degree);
  const std::size_t nc = mesh.num_cells();
  const std::size_t nf = mesh.num_facets();

  // max over F of 2 mu traced from each side; min of mu over each closed cell.
  std::vector<std::array<double, 2>> facet_max(nf, {0.0, 0.0});
  std::vector<double> cell_min(nc, std::numeric_limits<double>::infinity());
  double sampled_max = 0.0;
  for (std::size_t c = 0; c < nc; ++c) {
    const AffineMap& map = mesh.cell_map(c);
    for (const Vec2& xi : volume.points) {
      const double m = checked_viscosity(viscosity, {static_cast<std::int32_t>(c), xi,
                                                     map.to_physical(xi)});
      cell_min[c] = std::min(cell_min[c], m);
      sampled_max = std::max(sampled_max, m);
    }
  }
  for (std::size_t f = 0; f < nf; ++f) {
    const Facet& facet = mesh.facet(f);
    const Vec2& a = mesh.vertex(facet.vertices[0]);
    const Vec2& b = mesh.vertex(facet.vertices[1]);
    for (int s = 0; s < facet.side_count(); ++s) {
      const FacetSide& side = facet.sides[s];
      const AffineMap& map = mesh.cell_map(side.cell);
      for (double t : edge.points) {
        const Vec2 x = a + t * (b - a);
        const double m = checked_viscosity(viscosity, {side.cell, map.to_reference(x), x});
        facet_max[f][s] = std::max(facet_max[f][s], 2.0 * m);
        cell_min[side.cell] = std::min(cell_min[side.cell], m);
        sampled_max = std::max(sampled_max, m);
      }
    }
  }

  PenaltyData out;
  out.viscosity_min = *std::min_element(cell_min.begin(), cell_min.end());
  out.viscosity_max = sampled_max;
  out.delta = delta;
  out.degree = degree;
  out.zeta.assign(nf, {0.0, 0.0});
  out.weight.assign(nf, {0.0, 0.0});
  out.beta.assign(nf, 0.0);
  for (std::size_t f = 0; f < nf; ++f) {
    const Facet& facet = mesh.facet(f);
    for (int s = 0; s < facet.side_count(); ++s) {
      const std::int32_t c = facet.sides[s].cell;
      // sqrt(3 p (p-1)/2 |F|/|K|), the trace constant for degree p-2 strains
      const double trace = std::sqrt(3.0) * inverse_constant(mesh.cell_area(c), facet.length,
                                                             degree - 2);
      const double inv_sqrt = 1.0 / std::sqrt(2.0 * cell_min[c]);
      out.zeta[f][s] = 1.0 / (delta * trace * facet_max[f][s] * inv_sqrt);
    }
    if (facet.is_interior()) {
      const double sum = out.zeta[f][0] + out.zeta[f][1];
      out.weight[f] = {out.zeta[f][0] / sum, out.zeta[f][1] / sum};
      out.beta[f] = 1.0 / (sum * sum);
    } else {
      out.weight[f] = {1.0, 0.0};
      out.beta[f] = 1.0 / (out.zeta[f][0] * out.zeta[f][0]);
    }
  }
  return out;
}

std::shared_ptr<const DofMap> build_stream_space(std::shared_ptr<const TriangularMesh> mesh,
                                                 int degree, const StokesBoundary& boundary) {
  require_stream_degree(degree);
  require(mesh != nullptr, "mesh is null");
  std::vector<DirichletCondition> dirichlet;
  for (BoundaryTag tag : {BoundaryTag::kBottom, BoundaryTag::kTop, BoundaryTag::kLeft,
                          BoundaryTag::kRight, BoundaryTag::kOther}) {
    if (!has_tag(*mesh, tag)) continue;
    if (boundary.condition(tag) == WallCondition::kTraction) continue;
    dirichlet.push_back({tag, nullptr});
  }
  return build_space(std::move(mesh), degree, dirichlet);
}

LocalFacetMatrix assemble_facet(const DofMap& space, const ViscosityField& viscosity,
                                const PenaltyData& penalty, const StokesBoundary& boundary,
                                std::size_t facet, unsigned terms) {
  require_stream_degree(space.degree());
  const TriangularMesh& mesh = space.mesh();
  require(facet < mesh.num_facets(), "facet index out of range");
  require(penalty.beta.size() == mesh.num_facets(), "penalty data does not match the mesh");
  const Facet& f = mesh.facet(facet);

  LocalFacetMatrix out;
  for (int s = 0; s < f.side_count(); ++s) {
    const auto dofs = space.cell_dofs(f.sides[s].cell);
    out.dofs.insert(out.dofs.end(), dofs.begin(), dofs.end());
  }
  if (!f.is_interior() && boundary.condition(f.tag) != WallCondition::kZeroPenetration) {
    out.values.assign(out.dofs.size() * out.dofs.size(), 0.0);
    return out;
  }
  FacetEvaluator evaluator(space, 2 * space.degree());
  FacetTrace trace;
  evaluator.trace(facet, viscosity, trace);
  facet_matrix(trace, penalty.weight[facet], penalty.beta[facet], terms, out.values);
  return out;
}

namespace {

void check_space(const DofMap& space, const PenaltyData& penalty) {
  require_stream_degree(space.degree());
  require(penalty.beta.size() == space.mesh().num_facets() && penalty.degree == space.degree(),
          "penalty data does not match the space");
}

// Load vector before constraint elimination.
void add_load(const DofMap& space, const ViscosityField& viscosity, const PenaltyData& penalty,
              const StokesProblem& problem, unsigned terms, std::vector<double>& rhs) {
  const int p = space.degree();
  const int nd = space.dofs_per_cell();
  const TriangularMesh& mesh = space.mesh();

  if (problem.body_force) {
    const QuadratureRule volume = triangle_rule(2 * p);
    const BasisTables reference = tabulate(p, volume, 1);
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
      const AffineMap& map = mesh.cell_map(c);
      const Mat2 jit = map.inverse.transpose();
      const double det = std::abs(map.determinant);
      const auto dofs = space.cell_dofs(c);
      for (std::size_t q = 0; q < volume.size(); ++q) {
        const Vec2& xi = volume.points[q];
        const Vec2 force =
            problem.body_force({static_cast<std::int32_t>(c), xi, map.to_physical(xi)});
        const double w = volume.weights[q] * det;
        for (int i = 0; i < nd; ++i) {
          rhs[dofs[i]] += w * force.dot(curl(jit * reference.gradient(q, i)));
        }
      }
    }
  }

  const StokesBoundary& boundary = problem.boundary;
  if (!boundary.traction && !boundary.wall_velocity) return;
  FacetEvaluator evaluator(space, 2 * p);
  FacetTrace trace;
  for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
    const Facet& facet = mesh.facet(f);
    if (facet.is_interior()) continue;
    const WallCondition wall = boundary.condition(facet.tag);
    if (wall == WallCondition::kFreeSlip) continue;
    if (wall == WallCondition::kTraction && !boundary.traction) continue;
    if (wall == WallCondition::kZeroPenetration && !boundary.wall_velocity) continue;
    evaluator.trace(f, viscosity, trace);
    const auto cd = space.cell_dofs(trace.cells[0]);
    if (wall == WallCondition::kTraction) {
      for (int q = 0; q < trace.num_points; ++q) {
        const Vec2 g = boundary.traction(trace.points[q]);
        for (int i = 0; i < nd; ++i) {
          rhs[cd[i]] += trace.weights[q] * g.dot(trace.velocity[0][q * nd + i]);
        }
      }
      continue;
    }
    // <u_D (x) n, beta v (x) n - 2 mu eps(v)>
    const Vec2& normal = trace.normals[0];
    const double beta = penalty.beta[f];
    for (int q = 0; q < trace.num_points; ++q) {
      const Vec2 ud = boundary.wall_velocity(trace.points[q]);
      const Mat2 jump = ud * normal.transpose();
      const double two_mu = 2.0 * trace.mu[0][q];
      for (int i = 0; i < nd; ++i) {
        double v = 0.0;
        if (terms & kPenaltyTerm) v += beta * ud.dot(trace.velocity[0][q * nd + i]);
        if (terms & kConsistencyTerm) v -= two_mu * contract(jump, trace.strain[0][q * nd + i]);
        rhs[cd[i]] += trace.weights[q] * v;
      }
    }
  }
}

}  // namespace

AssembledSystem assemble_system(const DofMap& space, const ViscosityField& viscosity,
                                const PenaltyData& penalty, const StokesProblem& problem,
                                unsigned terms) {
  check_space(space, penalty);
  const int p = space.degree();
  const TriangularMesh& mesh = space.mesh();
  const std::size_t n = space.size();
  const int nd = space.dofs_per_cell();

  TripletAccumulator triplets(n);
  triplets.reserve(n + mesh.num_cells() * nd * nd + mesh.num_facets() * 4 * nd * nd);
  for (std::size_t i = 0; i < n; ++i) {
    triplets.add(static_cast<std::int32_t>(i), static_cast<std::int32_t>(i), 0.0);
  }

  // Volume terms.
  const QuadratureRule volume = triangle_rule(2 * p);
  const BasisTables reference = tabulate(p, volume, 2);
  std::vector<double> local(static_cast<std::size_t>(nd) * nd);
  std::vector<std::array<double, 3>> strain(nd);
  if (terms & kVolumeTerm) {
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
      const AffineMap& map = mesh.cell_map(c);
      const Mat2 jit = map.inverse.transpose();
      const double det = std::abs(map.determinant);
      std::fill(local.begin(), local.end(), 0.0);
      for (std::size_t q = 0; q < volume.size(); ++q) {
        const Vec2& xi = volume.points[q];
        const CellPoint point{static_cast<std::int32_t>(c), xi, map.to_physical(xi)};
        const double s = volume.weights[q] * det * 2.0 * checked_viscosity(viscosity, point);
        for (int i = 0; i < nd; ++i) {
          strain[i] = sym(strain_of_curl(jit * reference.hessian(q, i) * map.inverse));
        }
        for (int i = 0; i < nd; ++i) {
          for (int j = i; j < nd; ++j) {
            const double v = s * contract(strain[i], strain[j]);
            local[i * nd + j] += v;
            if (j != i) local[j * nd + i] += v;
          }
        }
      }
      const auto dofs = space.cell_dofs(c);
      triplets.add_block(dofs, dofs, local);
    }
  }

  // Facet terms on interior facets and zero-penetration walls.
  if (terms & (kConsistencyTerm | kPenaltyTerm)) {
    FacetEvaluator evaluator(space, 2 * p);
    FacetTrace trace;
    std::vector<double> k;
    std::vector<std::int32_t> dofs;
    for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
      const Facet& facet = mesh.facet(f);
      if (!facet.is_interior() &&
          problem.boundary.condition(facet.tag) != WallCondition::kZeroPenetration) {
        continue;
      }
      evaluator.trace(f, viscosity, trace);
      dofs.clear();
      for (int s = 0; s < trace.sides; ++s) {
        const auto cd = space.cell_dofs(trace.cells[s]);
        dofs.insert(dofs.end(), cd.begin(), cd.end());
      }
      facet_matrix(trace, penalty.weight[f], penalty.beta[f], terms, k);
      triplets.add_block(dofs, dofs, k);
    }
  }

  std::vector<double> rhs(n, 0.0);
  add_load(space, viscosity, penalty, problem, terms, rhs);
  SparseMatrix a = triplets.build();

  // Symmetric elimination of constrained dofs.
  std::vector<double> g(n, 0.0);
  for (std::int32_t c : space.constrained_dofs()) g[c] = space.constraint_value(c);
  for (int j = 0; j < a.outerSize(); ++j) {
    if (!space.is_constrained(j) || g[j] == 0.0) continue;
    for (SparseMatrix::InnerIterator it(a, j); it; ++it) {
      if (!space.is_constrained(it.row())) rhs[it.row()] -= it.value() * g[j];
    }
  }
  a.prune([&space](const int& row, const int& col, const double&) {
    return row == col || (!space.is_constrained(row) && !space.is_constrained(col));
  });
  for (std::int32_t c : space.constrained_dofs()) {
    a.coeffRef(c, c) = 1.0;
    rhs[c] = g[c];
  }
  return {SparseSymmetricMatrix(std::move(a)), std::move(rhs)};
}

std::vector<double> assemble_load(const DofMap& space, const ViscosityField& viscosity,
                                  const PenaltyData& penalty, const StokesProblem& problem) {
  check_space(space, penalty);
  for (std::int32_t c : space.constrained_dofs()) {
    require(space.constraint_value(c) == 0.0, "assemble_load needs homogeneous constraints");
  }
  std::vector<double> rhs(space.size(), 0.0);
  add_load(space, viscosity, penalty, problem, kAllTerms, rhs);
  for (std::int32_t c : space.constrained_dofs()) rhs[c] = 0.0;
  return rhs;
}

ScalarField solve_stokes(std::shared_ptr<const DofMap> space, const ViscosityField& viscosity,
                         const PenaltyData& penalty, const StokesProblem& problem) {
  require(space != nullptr, "space is null");
  AssembledSystem system = assemble_system(*space, viscosity, penalty, problem);
  std::vector<double> x = cholesky_solve(system.matrix, system.rhs);
  return ScalarField(std::move(space), std::move(x));
}

Vec2 velocity(const ScalarField& stream, std::size_t cell, const Vec2& reference) {
  return curl(stream.evaluate(cell, reference, 1).gradient);
}

}  // namespace ripg
