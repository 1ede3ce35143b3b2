#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "element.hpp"
#include "mesh.hpp"

namespace ripg {

using ScalarFunction = std::function<double(const Vec2&)>;

/// Prescribed nodal values on every node lying on facets carrying `tag`.
struct DirichletCondition {
  BoundaryTag tag;
  ScalarFunction value;
};

/// Global numbering of a continuous degree-p Lagrange space.
///
/// Order: mesh vertices, then p-1 dofs per facet (ascending from the facet's
/// lower-index vertex), then interior dofs cell by cell. Immutable.
class DofMap {
 public:
  const TriangularMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const TriangularMesh>& mesh_ptr() const { return mesh_; }
  const LagrangeElement& element() const { return element_; }
  int degree() const { return element_.degree(); }
  int dofs_per_cell() const { return element_.dof_count(); }
  std::size_t size() const { return nodes_.size(); }

  std::span<const std::int32_t> cell_dofs(std::size_t c) const {
    return {cell_to_global_.data() + c * dofs_per_cell(),
            static_cast<std::size_t>(dofs_per_cell())};
  }
  const Vec2& node(std::size_t dof) const { return nodes_[dof]; }

  bool is_constrained(std::size_t dof) const { return constrained_[dof] != 0; }
  double constraint_value(std::size_t dof) const { return constraint_values_[dof]; }
  std::span<const std::int32_t> constrained_dofs() const { return constrained_list_; }

  /// Global dofs whose nodes lie on facet f (its two vertices and edge nodes).
  std::vector<std::int32_t> facet_dofs(std::size_t f) const;

  friend std::shared_ptr<const DofMap> build_space(std::shared_ptr<const TriangularMesh>, int,
                                                   const std::vector<DirichletCondition>&);

 private:
  DofMap(std::shared_ptr<const TriangularMesh> mesh, int degree)
      : mesh_(std::move(mesh)), element_(degree) {}

  std::shared_ptr<const TriangularMesh> mesh_;
  LagrangeElement element_;
  std::vector<std::int32_t> cell_to_global_;
  std::vector<Vec2> nodes_;
  std::vector<std::uint8_t> constrained_;
  std::vector<double> constraint_values_;
  std::vector<std::int32_t> constrained_list_;
};

/// Later conditions override earlier ones on shared nodes (corners).
std::shared_ptr<const DofMap> build_space(std::shared_ptr<const TriangularMesh> mesh, int degree,
                                          const std::vector<DirichletCondition>& dirichlet = {});

/// Values of a field and its derivatives at one point of one cell.
struct PointValue {
  double value = 0.0;
  Vec2 gradient = Vec2::Zero();
  Mat2 hessian = Mat2::Zero();
};

class ScalarField {
 public:
  explicit ScalarField(std::shared_ptr<const DofMap> space);
  ScalarField(std::shared_ptr<const DofMap> space, std::vector<double> coefficients);

  const DofMap& space() const { return *space_; }
  const std::shared_ptr<const DofMap>& space_ptr() const { return space_; }
  std::span<double> coefficients() { return coefficients_; }
  std::span<const double> coefficients() const { return coefficients_; }

  /// derivative_order selects which members of the result are filled.
  PointValue evaluate(std::size_t cell, const Vec2& reference, int derivative_order = 2) const;
  double value(std::size_t cell, const Vec2& reference) const {
    return evaluate(cell, reference, 0).value;
  }

  /// Overwrite constrained coefficients with their prescribed values.
  void apply_constraints();

 private:
  std::shared_ptr<const DofMap> space_;
  std::vector<double> coefficients_;
};

/// Nodal interpolant.
ScalarField interpolate(const ScalarFunction& field, std::shared_ptr<const DofMap> space);

/// Node samples as CSV rows x,y,value.
void write_field_csv(const ScalarField& field, std::ostream& out);

}  // namespace ripg
