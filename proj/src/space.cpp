#include "space.hpp"

#include <algorithm>
#include <ostream>

#include "error.hpp"

namespace ripg {

namespace {
constexpr int kMaxDofs = (LagrangeElement::kMaxDegree + 1) * (LagrangeElement::kMaxDegree + 2) / 2;
}

std::shared_ptr<const DofMap> build_space(std::shared_ptr<const TriangularMesh> mesh, int degree,
                                          const std::vector<DirichletCondition>& dirichlet) {
  require(mesh != nullptr, "space needs a mesh");
  std::shared_ptr<DofMap> space(new DofMap(mesh, degree));
  const TriangularMesh& m = *mesh;
  const LagrangeElement& el = space->element_;
  const int p = degree;
  const int per_edge = p - 1;
  const int per_cell_interior = el.interior_dof_count();
  const std::size_t nv = m.num_vertices();
  const std::size_t edge_offset = nv;
  const std::size_t interior_offset = nv + m.num_facets() * per_edge;
  const std::size_t total = interior_offset + m.num_cells() * per_cell_interior;

  const int ndofs = el.dof_count();
  space->cell_to_global_.resize(m.num_cells() * ndofs);
  space->nodes_.assign(total, Vec2::Zero());
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    std::int32_t* dofs = space->cell_to_global_.data() + c * ndofs;
    const auto& cell = m.cell(c);
    for (int v = 0; v < 3; ++v) dofs[v] = cell[v];
    for (int f = 0; f < 3; ++f) {
      const std::int32_t facet = m.cell_facets(c)[f];
      const bool aligned = m.facet(facet).vertices[0] == cell[f];
      for (int k = 0; k < per_edge; ++k) {
        const int g = aligned ? k : per_edge - 1 - k;
        dofs[el.edge_dof(f, k)] =
            static_cast<std::int32_t>(edge_offset + static_cast<std::size_t>(facet) * per_edge + g);
      }
    }
    for (int k = 0; k < per_cell_interior; ++k) {
      dofs[el.interior_dof(k)] =
          static_cast<std::int32_t>(interior_offset + c * per_cell_interior + k);
    }
    const AffineMap& map = m.cell_map(c);
    for (int i = 0; i < ndofs; ++i) space->nodes_[dofs[i]] = map.to_physical(el.nodes()[i]);
  }

  space->constrained_.assign(total, 0);
  space->constraint_values_.assign(total, 0.0);
  for (const DirichletCondition& bc : dirichlet) {
    require(bc.tag != BoundaryTag::kInterior, "Dirichlet condition on interior facets");
    bool found = false;
    for (std::size_t f = 0; f < m.num_facets(); ++f) {
      if (m.facet(f).tag != bc.tag) continue;
      found = true;
      for (std::int32_t dof : space->facet_dofs(f)) {
        space->constrained_[dof] = 1;
        space->constraint_values_[dof] = bc.value ? bc.value(space->nodes_[dof]) : 0.0;
      }
    }
    if (!found) {
      fail(ErrorCode::kInvalidArgument,
           std::string("Dirichlet tag '") + to_string(bc.tag) + "' is not present in the mesh");
    }
  }
  for (std::size_t i = 0; i < total; ++i) {
    if (space->constrained_[i]) space->constrained_list_.push_back(static_cast<std::int32_t>(i));
  }
  return space;
}

std::vector<std::int32_t> DofMap::facet_dofs(std::size_t f) const {
  const Facet& facet = mesh_->facet(f);
  const FacetSide& side = facet.sides[0];
  const auto dofs = cell_dofs(side.cell);
  const int lf = side.local_facet;
  std::vector<std::int32_t> out;
  out.reserve(degree() + 1);
  out.push_back(dofs[lf]);
  out.push_back(dofs[(lf + 1) % 3]);
  for (int k = 0; k < element_.dofs_per_edge(); ++k) out.push_back(dofs[element_.edge_dof(lf, k)]);
  return out;
}

ScalarField::ScalarField(std::shared_ptr<const DofMap> space)
    : space_(std::move(space)), coefficients_(space_->size(), 0.0) {}

ScalarField::ScalarField(std::shared_ptr<const DofMap> space, std::vector<double> coefficients)
    : space_(std::move(space)), coefficients_(std::move(coefficients)) {
  require(coefficients_.size() == space_->size(), "coefficient vector does not match the space");
}

PointValue ScalarField::evaluate(std::size_t cell, const Vec2& reference,
                                 int derivative_order) const {
  std::array<double, kMaxDofs> values;
  std::array<Vec2, kMaxDofs> grads;
  std::array<Mat2, kMaxDofs> hessians;
  const LagrangeElement& el = space_->element();
  el.evaluate(reference, values.data(), derivative_order >= 1 ? grads.data() : nullptr,
              derivative_order >= 2 ? hessians.data() : nullptr);
  const auto dofs = space_->cell_dofs(cell);
  PointValue out;
  for (int i = 0; i < el.dof_count(); ++i) {
    const double c = coefficients_[dofs[i]];
    out.value += c * values[i];
    if (derivative_order >= 1) out.gradient += c * grads[i];
    if (derivative_order >= 2) out.hessian += c * hessians[i];
  }
  const AffineMap& map = space_->mesh().cell_map(cell);
  if (derivative_order >= 1) out.gradient = map.inverse.transpose() * out.gradient;
  if (derivative_order >= 2) out.hessian = map.inverse.transpose() * out.hessian * map.inverse;
  return out;
}

void ScalarField::apply_constraints() {
  for (std::int32_t dof : space_->constrained_dofs()) {
    coefficients_[dof] = space_->constraint_value(dof);
  }
}

ScalarField interpolate(const ScalarFunction& field, std::shared_ptr<const DofMap> space) {
  std::vector<double> coefficients(space->size());
  for (std::size_t i = 0; i < space->size(); ++i) coefficients[i] = field(space->node(i));
  return ScalarField(std::move(space), std::move(coefficients));
}

void write_field_csv(const ScalarField& field, std::ostream& out) {
  out.precision(17);
  out << "x,y,value\n";
  const DofMap& space = field.space();
  for (std::size_t i = 0; i < space.size(); ++i) {
    out << space.node(i).x() << ',' << space.node(i).y() << ',' << field.coefficients()[i] << '\n';
  }
}

}  // namespace ripg
