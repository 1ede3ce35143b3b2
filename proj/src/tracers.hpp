#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "mesh.hpp"
#include "space.hpp"

namespace ripg {

struct Location {
  std::int32_t cell = -1;
  Vec2 reference = Vec2::Zero();
  std::array<double, 3> barycentric{};
};

/// Point location on a triangulation through a uniform bucket grid.
/// Points on shared edges or vertices go to the lowest-index cell.
class PointLocator {
 public:
  static constexpr double kTolerance = 1e-12;

  explicit PointLocator(std::shared_ptr<const TriangularMesh> mesh);

  const TriangularMesh& mesh() const { return *mesh_; }
  std::optional<Location> find(const Vec2& x) const;
  /// Throws Error(kOutsideDomain).
  Location locate(const Vec2& x) const;
  /// Closest point of the boundary.
  Vec2 project_to_boundary(const Vec2& x) const;

 private:
  std::shared_ptr<const TriangularMesh> mesh_;
  Rectangle box_;
  int nx_ = 1;
  int ny_ = 1;
  std::vector<std::vector<std::int32_t>> buckets_;
  std::vector<std::int32_t> boundary_facets_;
};

struct ParticleSet {
  std::vector<Vec2> positions;
  std::size_t count() const { return positions.size(); }
};

/// nx * ny particles at ((i + 1/2)/nx, (j + 1/2)/ny) scaled onto the box,
/// ordered row by row from the bottom.
ParticleSet equidistant_particles(const Rectangle& box, int nx, int ny);

/// Velocity curl(phi_h) at a physical point.
Vec2 velocity_at(const ScalarField& stream, const PointLocator& locator, const Vec2& x);

struct AdvectionReport {
  std::size_t projected = 0;  // stage positions that left the domain
};

/// n_steps of the three-stage strong-stability-preserving RK3 scheme in the
/// frozen field curl(phi_h). Stage points outside the domain are projected
/// back onto the boundary and counted.
AdvectionReport advect_rk3(ParticleSet& particles, const ScalarField& stream,
                           const PointLocator& locator, double dt, int n_steps);

struct OccupancyStats {
  double mean = 0.0;
  double std = 0.0;  // population
};

std::vector<std::int64_t> cell_counts(const ParticleSet& particles, const PointLocator& locator);
OccupancyStats occupancy_stats(const ParticleSet& particles, const PointLocator& locator);

/// Rows step,id,x,y (header written when requested).
void write_snapshot_csv(const ParticleSet& particles, int step, std::ostream& out,
                        bool header);

}  // namespace ripg
