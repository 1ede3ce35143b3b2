#include "mesh.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include "error.hpp"

namespace ripg {

const char* to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::kInterior: return "interior";
    case BoundaryTag::kBottom: return "bottom";
    case BoundaryTag::kTop: return "top";
    case BoundaryTag::kLeft: return "left";
    case BoundaryTag::kRight: return "right";
    case BoundaryTag::kOther: return "other";
  }
  return "unknown";
}

namespace {

BoundaryTag tag_exterior(const Vec2& a, const Vec2& b, const Rectangle& box) {
  const double tol = 1e-12 * std::max(box.width(), box.height());
  auto on = [tol](double u, double v, double line) {
    return std::abs(u - line) <= tol && std::abs(v - line) <= tol;
  };
  if (on(a.y(), b.y(), box.y0)) return BoundaryTag::kBottom;
  if (on(a.y(), b.y(), box.y1)) return BoundaryTag::kTop;
  if (on(a.x(), b.x(), box.x0)) return BoundaryTag::kLeft;
  if (on(a.x(), b.x(), box.x1)) return BoundaryTag::kRight;
  return BoundaryTag::kOther;
}

}  // namespace

TriangularMesh TriangularMesh::from_cells(std::vector<Vec2> vertices,
                                          std::vector<std::array<std::int32_t, 3>> cells) {
  require(!cells.empty(), "mesh needs at least one cell");
  TriangularMesh mesh;
  mesh.vertices_ = std::move(vertices);
  mesh.cells_ = std::move(cells);
  const auto nv = static_cast<std::int32_t>(mesh.vertices_.size());

  Rectangle box{mesh.vertices_.front().x(), mesh.vertices_.front().y(),
                mesh.vertices_.front().x(), mesh.vertices_.front().y()};
  for (const Vec2& v : mesh.vertices_) {
    require(std::isfinite(v.x()) && std::isfinite(v.y()), "non-finite vertex coordinate");
    box.x0 = std::min(box.x0, v.x());
    box.y0 = std::min(box.y0, v.y());
    box.x1 = std::max(box.x1, v.x());
    box.y1 = std::max(box.y1, v.y());
  }
  mesh.bbox_ = box;

  const std::size_t nc = mesh.cells_.size();
  mesh.cell_area_.resize(nc);
  mesh.cell_map_.resize(nc);
  mesh.cell_facets_.resize(nc);

  std::map<std::pair<std::int32_t, std::int32_t>, std::int32_t> edge_index;
  for (std::size_t c = 0; c < nc; ++c) {
    const auto& cell = mesh.cells_[c];
    for (std::int32_t v : cell) require(v >= 0 && v < nv, "cell references a missing vertex");
    const Vec2& p0 = mesh.vertices_[cell[0]];
    const Vec2& p1 = mesh.vertices_[cell[1]];
    const Vec2& p2 = mesh.vertices_[cell[2]];

    AffineMap map;
    map.origin = p0;
    map.jacobian.col(0) = p1 - p0;
    map.jacobian.col(1) = p2 - p0;
    map.determinant = map.jacobian.determinant();
    if (!(map.determinant > 0.0)) {
      fail(ErrorCode::kDegenerateGeometry,
           "cell " + std::to_string(c) + " is degenerate or clockwise");
    }
    map.inverse = map.jacobian.inverse();
    mesh.cell_map_[c] = map;
    mesh.cell_area_[c] = 0.5 * map.determinant;

    for (int i = 0; i < 3; ++i) {
      const std::int32_t a = cell[i];
      const std::int32_t b = cell[(i + 1) % 3];
      const Vec2 edge = mesh.vertices_[b] - mesh.vertices_[a];
      mesh.mesh_size_ = std::max(mesh.mesh_size_, edge.norm());
      FacetSide side;
      side.cell = static_cast<std::int32_t>(c);
      side.local_facet = static_cast<std::int8_t>(i);
      side.normal = Vec2(edge.y(), -edge.x()).normalized();

      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_index.try_emplace({key.first, key.second},
                                                   static_cast<std::int32_t>(mesh.facets_.size()));
      if (inserted) {
        Facet facet;
        facet.vertices = {key.first, key.second};
        facet.sides[0] = side;
        facet.tag = BoundaryTag::kOther;  // provisional until a second side shows up
        facet.length = edge.norm();
        mesh.facets_.push_back(facet);
      } else {
        Facet& facet = mesh.facets_[it->second];
        if (facet.tag == BoundaryTag::kInterior) {
          fail(ErrorCode::kInvalidArgument, "facet shared by more than two cells");
        }
        facet.sides[1] = side;
        facet.tag = BoundaryTag::kInterior;
      }
      mesh.cell_facets_[c][i] = it->second;
    }
  }

  for (Facet& facet : mesh.facets_) {
    if (!facet.is_interior()) {
      facet.tag = tag_exterior(mesh.vertices_[facet.vertices[0]],
                               mesh.vertices_[facet.vertices[1]], box);
    }
  }
  return mesh;
}

Vec2 TriangularMesh::centroid(std::size_t c) const {
  const auto& cell = cells_[c];
  return (vertices_[cell[0]] + vertices_[cell[1]] + vertices_[cell[2]]) / 3.0;
}

TriangularMesh build_structured(const Rectangle& domain, int n) {
  require(n >= 1, "structured mesh needs N >= 1");
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) {
    fail(ErrorCode::kDegenerateGeometry, "rectangle must have positive width and height");
  }
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    const double y = j == n ? domain.y1 : domain.y0 + domain.height() * j / n;
    for (int i = 0; i <= n; ++i) {
      const double x = i == n ? domain.x1 : domain.x0 + domain.width() * i / n;
      vertices.emplace_back(x, y);
    }
  }
  auto id = [n](int i, int j) { return static_cast<std::int32_t>(j * (n + 1) + i); };
  std::vector<std::array<std::int32_t, 3>> cells;
  cells.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const auto v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      cells.push_back({v00, v10, v11});
      cells.push_back({v00, v11, v01});
    }
  }
  return TriangularMesh::from_cells(std::move(vertices), std::move(cells));
}

FacetPartition classify_facets(const TriangularMesh& mesh) {
  FacetPartition out;
  for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
    (mesh.facet(f).is_interior() ? out.interior : out.exterior)
        .push_back(static_cast<std::int32_t>(f));
  }
  return out;
}

void write_vertices_csv(const TriangularMesh& mesh, std::ostream& out) {
  out.precision(17);
  out << "id,x,y\n";
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    out << v << ',' << mesh.vertex(v).x() << ',' << mesh.vertex(v).y() << '\n';
  }
}

void write_cells_csv(const TriangularMesh& mesh, std::ostream& out) {
  out << "id,v0,v1,v2\n";
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cell(c);
    out << c << ',' << cell[0] << ',' << cell[1] << ',' << cell[2] << '\n';
  }
}

void write_mesh_csv(const TriangularMesh& mesh, const std::string& directory) {
  std::filesystem::create_directories(directory);
  std::ofstream vertices(std::filesystem::path(directory) / "vertices.csv");
  std::ofstream cells(std::filesystem::path(directory) / "cells.csv");
  if (!vertices || !cells) fail(ErrorCode::kIo, "cannot write mesh csv to " + directory);
  write_vertices_csv(mesh, vertices);
  write_cells_csv(mesh, cells);
}

}  // namespace ripg
