#include "ripg/ripg.h"

#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "analysis.hpp"
#include "error.hpp"
#include "experiments.hpp"
#include "heat_coupling.hpp"
#include "mesh.hpp"
#include "tracers.hpp"

struct ripg_mesh {
  std::shared_ptr<const ripg::TriangularMesh> mesh;
};

struct ripg_steady {
  ripg::BenchmarkCase benchmark;
  std::shared_ptr<const ripg::TriangularMesh> mesh;
  ripg::SteadyState state;
};

struct ripg_tracers {
  ripg::ScalarField stream;
  ripg::PointLocator locator;
  ripg::ParticleSet particles;
};

namespace {

thread_local std::string last_error;

ripg_status to_status(ripg::ErrorCode code) {
  using ripg::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return RIPG_INVALID_ARGUMENT;
    case ErrorCode::kDegenerateGeometry: return RIPG_DEGENERATE_GEOMETRY;
    case ErrorCode::kNotSpd: return RIPG_NOT_SPD;
    case ErrorCode::kSingular: return RIPG_SINGULAR;
    case ErrorCode::kNotConverged: return RIPG_NOT_CONVERGED;
    case ErrorCode::kNonFinite: return RIPG_NON_FINITE;
    case ErrorCode::kOutsideDomain: return RIPG_OUTSIDE_DOMAIN;
    case ErrorCode::kIo: return RIPG_IO;
  }
  return RIPG_INTERNAL;
}

ripg_status set_error(ripg_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <typename Fn>
ripg_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const ripg::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(RIPG_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(RIPG_INTERNAL, e.what());
  }
}

ripg_status null_argument(const char* name) {
  return set_error(RIPG_INVALID_ARGUMENT, std::string(name) + " is null");
}

void fill_case(const ripg::BenchmarkCase& c, ripg_case_info* info) {
  info->name = c.name.c_str();
  info->rayleigh = c.rayleigh;
  info->viscosity_contrast_temperature = c.viscosity_contrast_temperature;
  info->viscosity_contrast_depth = c.viscosity_contrast_depth;
  info->yield_stress = c.yield_stress;
  info->nusselt_ref = c.nusselt_ref;
  info->u_rms_ref = c.u_rms_ref;
}

std::ofstream open_output(const char* path, bool append = false) {
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) ripg::fail(ripg::ErrorCode::kIo, std::string("cannot open ") + path);
  return out;
}

ripg_warning_callback warning_callback = nullptr;
void* warning_user_data = nullptr;

}  // namespace

extern "C" {

const char* ripg_status_string(ripg_status status) {
  switch (status) {
    case RIPG_OK: return "ok";
    case RIPG_INVALID_ARGUMENT: return "invalid argument";
    case RIPG_DEGENERATE_GEOMETRY: return "degenerate geometry";
    case RIPG_NOT_SPD: return "matrix is not symmetric positive definite";
    case RIPG_SINGULAR: return "singular matrix";
    case RIPG_NOT_CONVERGED: return "iteration did not converge";
    case RIPG_NON_FINITE: return "non-finite value";
    case RIPG_OUTSIDE_DOMAIN: return "point outside the domain";
    case RIPG_IO: return "i/o failure";
    case RIPG_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ripg_last_error(void) { return last_error.c_str(); }

const char* ripg_version(void) { return "0.1.0"; }

void ripg_set_warning_callback(ripg_warning_callback callback, void* user_data) {
  warning_callback = callback;
  warning_user_data = user_data;
  if (callback) {
    ripg::set_warning_handler([](const std::string& message) {
      if (warning_callback) warning_callback(message.c_str(), warning_user_data);
    });
  } else {
    ripg::set_warning_handler(nullptr);
  }
}

ripg_status ripg_mesh_create_structured(double x0, double y0, double x1, double y1, int n,
                                        ripg_mesh** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    auto mesh = std::make_shared<const ripg::TriangularMesh>(
        ripg::build_structured({x0, y0, x1, y1}, n));
    *out = new ripg_mesh{std::move(mesh)};
    return RIPG_OK;
  });
}

ripg_status ripg_mesh_create(const double* xy, size_t num_vertices, const int32_t* cells,
                             size_t num_cells, ripg_mesh** out) {
  if (!out) return null_argument("out");
  if (!xy || !cells) return null_argument("xy or cells");
  return guarded([&] {
    std::vector<ripg::Vec2> vertices(num_vertices);
    for (size_t i = 0; i < num_vertices; ++i) vertices[i] = {xy[2 * i], xy[2 * i + 1]};
    std::vector<std::array<std::int32_t, 3>> connectivity(num_cells);
    for (size_t c = 0; c < num_cells; ++c) {
      connectivity[c] = {cells[3 * c], cells[3 * c + 1], cells[3 * c + 2]};
    }
    auto mesh = std::make_shared<const ripg::TriangularMesh>(
        ripg::TriangularMesh::from_cells(std::move(vertices), std::move(connectivity)));
    *out = new ripg_mesh{std::move(mesh)};
    return RIPG_OK;
  });
}

void ripg_mesh_destroy(ripg_mesh* mesh) { delete mesh; }

ripg_status ripg_mesh_counts(const ripg_mesh* mesh, size_t* num_vertices, size_t* num_cells,
                             size_t* num_facets) {
  if (!mesh) return null_argument("mesh");
  if (num_vertices) *num_vertices = mesh->mesh->num_vertices();
  if (num_cells) *num_cells = mesh->mesh->num_cells();
  if (num_facets) *num_facets = mesh->mesh->num_facets();
  return RIPG_OK;
}

ripg_status ripg_mesh_size(const ripg_mesh* mesh, double* h) {
  if (!mesh || !h) return null_argument("mesh or h");
  *h = mesh->mesh->mesh_size();
  return RIPG_OK;
}

ripg_status ripg_mesh_write_csv(const ripg_mesh* mesh, const char* directory) {
  if (!mesh || !directory) return null_argument("mesh or directory");
  return guarded([&] {
    ripg::write_mesh_csv(*mesh->mesh, directory);
    return RIPG_OK;
  });
}

ripg_status ripg_mms_solve(int n, int degree, double delta, ripg_mms_result* result) {
  if (!result) return null_argument("result");
  return guarded([&] {
    const ripg::ManufacturedResult r = ripg::solve_manufactured(n, degree, delta);
    result->spd = r.spd ? 1 : 0;
    result->dofs = r.dofs;
    result->h = r.h;
    result->l2_stream = r.errors.l2_stream;
    result->l2_velocity = r.errors.l2_velocity;
    result->h1_velocity = r.errors.h1_velocity;
    result->dg = r.errors.dg;
    result->max_divergence = r.flow.max_divergence;
    result->max_normal_flux = r.flow.max_normal_flux;
    result->max_speed = r.flow.max_speed;
    result->relative_residual = r.relative_residual;
    if (!r.spd) return set_error(RIPG_NOT_SPD, "manufactured operator is not positive definite");
    return RIPG_OK;
  });
}

size_t ripg_case_count(void) { return ripg::benchmark_cases().size(); }

ripg_status ripg_case_get(size_t index, ripg_case_info* info) {
  if (!info) return null_argument("info");
  const auto cases = ripg::benchmark_cases();
  if (index >= cases.size()) return set_error(RIPG_INVALID_ARGUMENT, "case index out of range");
  fill_case(cases[index], info);
  return RIPG_OK;
}

ripg_status ripg_case_find(const char* name, ripg_case_info* info) {
  if (!name || !info) return null_argument("name or info");
  return guarded([&] {
    fill_case(ripg::find_case(name), info);
    return RIPG_OK;
  });
}

void ripg_picard_options_default(ripg_picard_options* options) {
  if (!options) return;
  const ripg::PicardOptions d;
  options->max_iterations = d.max_iterations;
  options->relaxation = d.relaxation;
  options->temperature_tolerance = d.temperature_tolerance;
  options->nusselt_tolerance = d.nusselt_tolerance;
  options->delta = d.delta;
}

ripg_status ripg_steady_solve(const char* case_name, int n, int degree,
                              const ripg_picard_options* options, ripg_steady** out) {
  if (!case_name || !out) return null_argument("case_name or out");
  return guarded([&] {
    const ripg::BenchmarkCase& c = ripg::find_case(case_name);
    ripg::PicardOptions opts;
    if (options) {
      opts.max_iterations = options->max_iterations;
      opts.relaxation = options->relaxation;
      opts.temperature_tolerance = options->temperature_tolerance;
      opts.nusselt_tolerance = options->nusselt_tolerance;
      opts.delta = options->delta;
    }
    auto mesh = std::make_shared<const ripg::TriangularMesh>(
        ripg::build_structured({0.0, 0.0, 1.0, 1.0}, n));
    ripg::SteadyState state = ripg::solve_steady(c, mesh, degree, opts);
    const bool converged = state.converged;
    *out = new ripg_steady{c, std::move(mesh), std::move(state)};
    if (!converged) {
      return set_error(RIPG_NOT_CONVERGED, "Picard iteration hit the iteration limit");
    }
    return RIPG_OK;
  });
}

void ripg_steady_destroy(ripg_steady* state) { delete state; }

ripg_status ripg_steady_functionals(const ripg_steady* s, ripg_functionals* out) {
  if (!s || !out) return null_argument("state or out");
  return guarded([&] {
    const ripg::FunctionalReport r = ripg::functionals(
        s->state.stream, s->state.temperature, ripg::steady_viscosity(s->benchmark, s->state),
        s->benchmark.rayleigh);
    const ripg::FlowDiagnostics d = ripg::flow_diagnostics(s->state.stream);
    out->nusselt = r.nusselt;
    out->u_rms = r.u_rms;
    out->work = r.work;
    out->dissipation = r.dissipation;
    out->balance = r.balance;
    out->negative_work = r.negative_work ? 1 : 0;
    out->dofs = r.dof_count;
    out->h = r.h;
    out->degree = r.degree;
    out->eps_nusselt = ripg::relative_error(r.nusselt, s->benchmark.nusselt_ref);
    out->eps_u_rms = ripg::relative_error(r.u_rms, s->benchmark.u_rms_ref);
    out->converged = s->state.converged ? 1 : 0;
    out->iterations = static_cast<int>(s->state.trace.size());
    out->relaxation = s->state.relaxation;
    out->max_divergence = d.max_divergence;
    out->max_normal_flux = d.max_normal_flux;
    out->max_speed = d.max_speed;
    return RIPG_OK;
  });
}

ripg_status ripg_steady_velocity(const ripg_steady* s, double x, double y, double* u) {
  if (!s || !u) return null_argument("state or u");
  return guarded([&] {
    const ripg::PointLocator locator(s->mesh);
    const ripg::Vec2 v = ripg::velocity_at(s->state.stream, locator, {x, y});
    u[0] = v.x();
    u[1] = v.y();
    return RIPG_OK;
  });
}

ripg_status ripg_steady_write_trace(const ripg_steady* s, const char* path) {
  if (!s || !path) return null_argument("state or path");
  return guarded([&] {
    std::ofstream out = open_output(path);
    ripg::write_trace_csv(s->state.trace, out);
    return RIPG_OK;
  });
}

ripg_status ripg_steady_write_fields(const ripg_steady* s, const char* stream_path,
                                     const char* temperature_path) {
  if (!s) return null_argument("state");
  return guarded([&] {
    if (stream_path) {
      std::ofstream out = open_output(stream_path);
      ripg::write_field_csv(s->state.stream, out);
    }
    if (temperature_path) {
      std::ofstream out = open_output(temperature_path);
      ripg::write_field_csv(s->state.temperature, out);
    }
    return RIPG_OK;
  });
}

ripg_status ripg_tracers_create(const ripg_steady* s, int nx, int ny, ripg_tracers** out) {
  if (!s || !out) return null_argument("state or out");
  return guarded([&] {
    ripg::ParticleSet particles =
        ripg::equidistant_particles(s->mesh->bounding_box(), nx, ny);
    *out = new ripg_tracers{s->state.stream, ripg::PointLocator(s->mesh), std::move(particles)};
    return RIPG_OK;
  });
}

void ripg_tracers_destroy(ripg_tracers* tracers) { delete tracers; }

ripg_status ripg_tracers_advect(ripg_tracers* t, double dt, int steps, size_t* projected) {
  if (!t) return null_argument("tracers");
  return guarded([&] {
    const ripg::AdvectionReport r = ripg::advect_rk3(t->particles, t->stream, t->locator, dt, steps);
    if (projected) *projected = r.projected;
    return RIPG_OK;
  });
}

ripg_status ripg_tracers_stats(const ripg_tracers* t, double* mean, double* std) {
  if (!t || !mean || !std) return null_argument("tracers, mean or std");
  return guarded([&] {
    const ripg::OccupancyStats s = ripg::occupancy_stats(t->particles, t->locator);
    *mean = s.mean;
    *std = s.std;
    return RIPG_OK;
  });
}

ripg_status ripg_tracers_count(const ripg_tracers* t, size_t* count) {
  if (!t || !count) return null_argument("tracers or count");
  *count = t->particles.count();
  return RIPG_OK;
}

ripg_status ripg_tracers_positions(const ripg_tracers* t, double* xy, size_t capacity) {
  if (!t || !xy) return null_argument("tracers or xy");
  const size_t n = std::min(capacity, t->particles.count());
  for (size_t i = 0; i < n; ++i) {
    xy[2 * i] = t->particles.positions[i].x();
    xy[2 * i + 1] = t->particles.positions[i].y();
  }
  return RIPG_OK;
}

ripg_status ripg_tracers_write_snapshot(const ripg_tracers* t, int step, const char* path,
                                        int append) {
  if (!t || !path) return null_argument("tracers or path");
  return guarded([&] {
    const bool header = !append || !std::ifstream(path).good();
    std::ofstream out = open_output(path, append != 0);
    ripg::write_snapshot_csv(t->particles, step, out, header);
    return RIPG_OK;
  });
}

ripg_status ripg_convergence_rate(const double* h, const double* errors, size_t n,
                                  size_t levels, double* slope, int* monotone) {
  if (!h || !errors || !slope) return null_argument("h, errors or slope");
  return guarded([&] {
    const ripg::RateEstimate r = ripg::convergence_rate({h, n}, {errors, n}, levels);
    *slope = r.slope;
    if (monotone) *monotone = r.monotone ? 1 : 0;
    return RIPG_OK;
  });
}

}  // extern "C"
