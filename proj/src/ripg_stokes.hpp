#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "linalg.hpp"
#include "mesh.hpp"
#include "space.hpp"

namespace ripg {

/// A point inside a known cell. Fields that are only piecewise smooth
/// (strain rates of the discrete velocity) need the cell, not just x.
struct CellPoint {
  std::int32_t cell = -1;
  Vec2 reference = Vec2::Zero();
  Vec2 physical = Vec2::Zero();
};

/// Positive viscosity mu(x), evaluated cell-wise.
class ViscosityField {
 public:
  using Evaluator = std::function<double(const CellPoint&)>;

  explicit ViscosityField(Evaluator evaluator) : evaluator_(std::move(evaluator)) {}
  static ViscosityField constant(double mu);

  double operator()(const CellPoint& point) const { return evaluator_(point); }

 private:
  Evaluator evaluator_;
};

/// Trace inverse constant for P_p on a triangle:
/// ||v||_F <= sqrt((p+1)(p+2)/2 * |F|/|K|) ||v||_K.
double inverse_constant(double cell_area, double facet_length, int degree);

/// Weighted-average weights and interior penalty per facet. Index 0 is the
/// "+" side (lower cell index); index 1 is unused on exterior facets.
struct PenaltyData {
  double delta = 2.0;
  int degree = 0;
  std::vector<std::array<double, 2>> zeta;
  std::vector<std::array<double, 2>> weight;
  std::vector<double> beta;
  double viscosity_min = 0.0;  // over all sampled points
  double viscosity_max = 0.0;
};

/// Sup norms in the penalty are estimated by sampling mu at the degree-2p
/// facet and cell quadrature points.
PenaltyData compute_penalty(const TriangularMesh& mesh, const ViscosityField& viscosity,
                            int degree, double delta = 2.0);

/// Coercivity is guaranteed only above this value of delta.
inline constexpr double kCoercivityThreshold = 1.4142135623730951;

enum class WallCondition {
  kFreeSlip,          // u.n = 0 strongly, zero tangential traction
  kZeroPenetration,   // u.n = 0 strongly, u.t = u_D.t weakly
  kTraction,          // 2 mu eps(u) n - P n = g_N
};

using VectorFunction = std::function<Vec2(const Vec2&)>;

struct StokesBoundary {
  std::vector<std::pair<BoundaryTag, WallCondition>> walls;
  WallCondition default_condition = WallCondition::kFreeSlip;
  VectorFunction wall_velocity;  // u_D on zero-penetration walls; zero if empty
  VectorFunction traction;       // g_N on traction walls; zero if empty

  WallCondition condition(BoundaryTag tag) const;
  static StokesBoundary free_slip() { return {}; }
  static StokesBoundary zero_penetration(VectorFunction wall_velocity);
};

struct StokesProblem {
  std::function<Vec2(const CellPoint&)> body_force;  // zero if empty
  StokesBoundary boundary;
};

/// Stream-function space: phi = 0 on every free-slip and zero-penetration
/// wall, which makes u_h . n vanish there pointwise. Requires p >= 2.
std::shared_ptr<const DofMap> build_stream_space(std::shared_ptr<const TriangularMesh> mesh,
                                                 int degree, const StokesBoundary& boundary);

enum AssemblyTerm : unsigned {
  kVolumeTerm = 1u,
  kConsistencyTerm = 2u,  // the two weighted-average facet terms
  kPenaltyTerm = 4u,
  kAllTerms = 7u,
};

/// Dense facet contribution over the dofs of the "+" cell followed by the
/// dofs of the "-" cell (shared dofs appear twice; scatter-add is exact).
struct LocalFacetMatrix {
  std::vector<std::int32_t> dofs;
  std::vector<double> values;  // row-major, dofs.size()^2; row = test function
};

LocalFacetMatrix assemble_facet(const DofMap& space, const ViscosityField& viscosity,
                                const PenaltyData& penalty, const StokesBoundary& boundary,
                                std::size_t facet, unsigned terms = kAllTerms);

struct AssembledSystem {
  SparseSymmetricMatrix matrix;
  std::vector<double> rhs;
};

/// Assembles the C0 interior-penalty operator and load vector, then
/// eliminates constrained dofs symmetrically (identity rows, lifted RHS).
AssembledSystem assemble_system(const DofMap& space, const ViscosityField& viscosity,
                                const PenaltyData& penalty, const StokesProblem& problem,
                                unsigned terms = kAllTerms);

/// Load vector alone, for re-solves with an unchanged operator. Requires
/// homogeneous constraints (no lifting).
std::vector<double> assemble_load(const DofMap& space, const ViscosityField& viscosity,
                                  const PenaltyData& penalty, const StokesProblem& problem);

/// Assemble and solve with sparse Cholesky. Throws Error(kNotSpd).
ScalarField solve_stokes(std::shared_ptr<const DofMap> space, const ViscosityField& viscosity,
                         const PenaltyData& penalty, const StokesProblem& problem);

/// Velocity u_h = curl phi_h at a point of a cell.
Vec2 velocity(const ScalarField& stream, std::size_t cell, const Vec2& reference);

}  // namespace ripg
