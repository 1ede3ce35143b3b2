#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ripg {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

enum class BoundaryTag : std::uint8_t {
  kInterior = 0,
  kBottom,
  kTop,
  kLeft,
  kRight,
  // Exterior facet that does not lie on a side of the bounding rectangle.
  kOther,
};

const char* to_string(BoundaryTag tag);

struct Rectangle {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
};

/// Affine map from the reference triangle (0,0),(1,0),(0,1) onto a cell.
struct AffineMap {
  Vec2 origin;
  Mat2 jacobian;
  Mat2 inverse;
  double determinant = 0.0;

  Vec2 to_physical(const Vec2& reference) const {
    return origin + jacobian * reference;
  }
  Vec2 to_reference(const Vec2& physical) const {
    return inverse * (physical - origin);
  }
};

/// One incident cell of a facet, seen from that cell.
struct FacetSide {
  std::int32_t cell = -1;
  std::int8_t local_facet = -1;
  Vec2 normal = Vec2::Zero();  // unit, outward from `cell`
};

struct Facet {
  // Ascending global vertex indices; quadrature along the facet runs from
  // vertices[0] to vertices[1].
  std::array<std::int32_t, 2> vertices{};
  // sides[0] is the "+" side (lower cell index); sides[1] is valid only for
  // interior facets.
  std::array<FacetSide, 2> sides{};
  BoundaryTag tag = BoundaryTag::kInterior;
  double length = 0.0;

  bool is_interior() const { return tag == BoundaryTag::kInterior; }
  int side_count() const { return is_interior() ? 2 : 1; }
};

/// Conforming triangulation of a planar polygon. Cells are counter-clockwise;
/// local facet i of a cell joins its local vertices i and (i+1) mod 3.
/// Immutable after construction.
class TriangularMesh {
 public:
  static TriangularMesh from_cells(std::vector<Vec2> vertices,
                                   std::vector<std::array<std::int32_t, 3>> cells);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return cells_.size(); }
  std::size_t num_facets() const { return facets_.size(); }

  const Vec2& vertex(std::size_t v) const { return vertices_[v]; }
  std::span<const Vec2> vertices() const { return vertices_; }
  const std::array<std::int32_t, 3>& cell(std::size_t c) const { return cells_[c]; }
  std::span<const std::array<std::int32_t, 3>> cells() const { return cells_; }
  const Facet& facet(std::size_t f) const { return facets_[f]; }
  std::span<const Facet> facets() const { return facets_; }
  const std::array<std::int32_t, 3>& cell_facets(std::size_t c) const {
    return cell_facets_[c];
  }

  double cell_area(std::size_t c) const { return cell_area_[c]; }
  const AffineMap& cell_map(std::size_t c) const { return cell_map_[c]; }
  Vec2 centroid(std::size_t c) const;
  const Rectangle& bounding_box() const { return bbox_; }
  // Largest cell diameter.
  double mesh_size() const { return mesh_size_; }

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::array<std::int32_t, 3>> cells_;
  std::vector<std::array<std::int32_t, 3>> cell_facets_;
  std::vector<Facet> facets_;
  std::vector<double> cell_area_;
  std::vector<AffineMap> cell_map_;
  Rectangle bbox_;
  double mesh_size_ = 0.0;
};

/// N x N quadrilaterals over `domain`, each split along its
/// bottom-left to top-right diagonal.
TriangularMesh build_structured(const Rectangle& domain, int n);

struct FacetPartition {
  std::vector<std::int32_t> interior;
  std::vector<std::int32_t> exterior;
};

FacetPartition classify_facets(const TriangularMesh& mesh);

// Debug dumps: vertices.csv (id,x,y) and cells.csv (id,v0,v1,v2).
void write_vertices_csv(const TriangularMesh& mesh, std::ostream& out);
void write_cells_csv(const TriangularMesh& mesh, std::ostream& out);
void write_mesh_csv(const TriangularMesh& mesh, const std::string& directory);

}  // namespace ripg
