#include "tracers.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "error.hpp"

namespace ripg {
namespace {

Vec2 closest_on_segment(const Vec2& a, const Vec2& b, const Vec2& x) {
  const Vec2 d = b - a;
  const double t = std::clamp((x - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
  return a + t * d;
}

}  // namespace

PointLocator::PointLocator(std::shared_ptr<const TriangularMesh> mesh)
    : mesh_(std::move(mesh)) {
  require(mesh_ != nullptr && mesh_->num_cells() > 0, "locator needs a non-empty mesh");
  box_ = mesh_->bounding_box();
  const int side = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(mesh_->num_cells()))));
  const double aspect = box_.width() / box_.height();
  nx_ = std::max(1, static_cast<int>(std::lround(side * std::sqrt(aspect))));
  ny_ = std::max(1, static_cast<int>(std::lround(side / std::sqrt(aspect))));
  buckets_.resize(static_cast<std::size_t>(nx_) * ny_);

  const double pad = 1e-9 * std::max(box_.width(), box_.height());
  auto bucket_x = [&](double x) {
    return std::clamp(static_cast<int>(std::floor((x - box_.x0) / box_.width() * nx_)), 0, nx_ - 1);
  };
  auto bucket_y = [&](double y) {
    return std::clamp(static_cast<int>(std::floor((y - box_.y0) / box_.height() * ny_)), 0, ny_ - 1);
  };
  for (std::size_t c = 0; c < mesh_->num_cells(); ++c) {
    Vec2 lo(std::numeric_limits<double>::max(), std::numeric_limits<double>::max());
    Vec2 hi = -lo;
    for (std::int32_t v : mesh_->cell(c)) {
      lo = lo.cwiseMin(mesh_->vertex(v));
      hi = hi.cwiseMax(mesh_->vertex(v));
    }
    for (int j = bucket_y(lo.y() - pad); j <= bucket_y(hi.y() + pad); ++j) {
      for (int i = bucket_x(lo.x() - pad); i <= bucket_x(hi.x() + pad); ++i) {
        buckets_[static_cast<std::size_t>(j) * nx_ + i].push_back(static_cast<std::int32_t>(c));
      }
    }
  }
  for (std::size_t f = 0; f < mesh_->num_facets(); ++f) {
    if (!mesh_->facet(f).is_interior()) boundary_facets_.push_back(static_cast<std::int32_t>(f));
  }
}

std::optional<Location> PointLocator::find(const Vec2& x) const {
  const double fx = (x.x() - box_.x0) / box_.width();
  const double fy = (x.y() - box_.y0) / box_.height();
  const double slack = 1e-9;
  if (!(fx >= -slack && fx <= 1.0 + slack && fy >= -slack && fy <= 1.0 + slack)) {
    return std::nullopt;
  }
  const int i = std::clamp(static_cast<int>(std::floor(fx * nx_)), 0, nx_ - 1);
  const int j = std::clamp(static_cast<int>(std::floor(fy * ny_)), 0, ny_ - 1);
  for (std::int32_t c : buckets_[static_cast<std::size_t>(j) * nx_ + i]) {
    const Vec2 xi = mesh_->cell_map(c).to_reference(x);
    const std::array<double, 3> lambda{1.0 - xi.x() - xi.y(), xi.x(), xi.y()};
    if (lambda[0] >= -kTolerance && lambda[1] >= -kTolerance && lambda[2] >= -kTolerance) {
      return Location{c, xi, lambda};
    }
  }
  return std::nullopt;
}

Location PointLocator::locate(const Vec2& x) const {
  auto loc = find(x);
  if (!loc) {
    std::ostringstream msg;
    msg << std::setprecision(17) << "point (" << x.x() << ", " << x.y()
        << ") is outside the domain";
    fail(ErrorCode::kOutsideDomain, msg.str());
  }
  return *loc;
}

Vec2 PointLocator::project_to_boundary(const Vec2& x) const {
  Vec2 best = x;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::int32_t f : boundary_facets_) {
    const Facet& facet = mesh_->facet(f);
    const Vec2 y = closest_on_segment(mesh_->vertex(facet.vertices[0]),
                                      mesh_->vertex(facet.vertices[1]), x);
    const double d = (y - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = y;
    }
  }
  return best;
}

ParticleSet equidistant_particles(const Rectangle& box, int nx, int ny) {
  require(nx > 0 && ny > 0, "particle counts must be positive");
  ParticleSet set;
  set.positions.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      set.positions.emplace_back(box.x0 + (i + 0.5) / nx * box.width(),
                                 box.y0 + (j + 0.5) / ny * box.height());
    }
  }
  return set;
}

Vec2 velocity_at(const ScalarField& stream, const PointLocator& locator, const Vec2& x) {
  const Location loc = locator.locate(x);
  return curl(stream.evaluate(loc.cell, loc.reference, 1).gradient);
}

AdvectionReport advect_rk3(ParticleSet& particles, const ScalarField& stream,
                           const PointLocator& locator, double dt, int n_steps) {
  require(dt > 0.0 && std::isfinite(dt), "time step must be positive");
  require(n_steps >= 0, "step count must be non-negative");
  AdvectionReport report;
  auto inside = [&](Vec2 x) {
    if (!locator.find(x)) {
      ++report.projected;
      x = locator.project_to_boundary(x);
    }
    return x;
  };
  for (Vec2& x : particles.positions) {
    for (int s = 0; s < n_steps; ++s) {
      // Shu-Osher stages written as increments from x, so u = 0 is exact
      const Vec2 x1 = inside(x + dt * velocity_at(stream, locator, x));
      const Vec2 x2 = inside(x + 0.25 * ((x1 - x) + dt * velocity_at(stream, locator, x1)));
      x = inside(x + (2.0 / 3.0) * ((x2 - x) + dt * velocity_at(stream, locator, x2)));
    }
  }
  return report;
}

std::vector<std::int64_t> cell_counts(const ParticleSet& particles, const PointLocator& locator) {
  std::vector<std::int64_t> counts(locator.mesh().num_cells(), 0);
  for (const Vec2& x : particles.positions) ++counts[locator.locate(x).cell];
  return counts;
}

OccupancyStats occupancy_stats(const ParticleSet& particles, const PointLocator& locator) {
  const std::vector<std::int64_t> counts = cell_counts(particles, locator);
  const double m = static_cast<double>(counts.size());
  OccupancyStats s;
  s.mean = static_cast<double>(particles.count()) / m;
  double sum = 0.0;
  for (std::int64_t c : counts) {
    const double d = static_cast<double>(c) - s.mean;
    sum += d * d;
  }
  s.std = std::sqrt(sum / m);
  return s;
}

void write_snapshot_csv(const ParticleSet& particles, int step, std::ostream& out, bool header) {
  if (header) out << "step,id,x,y\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < particles.count(); ++i) {
    out << step << ',' << i << ',' << particles.positions[i].x() << ','
        << particles.positions[i].y() << '\n';
  }
}

}  // namespace ripg
