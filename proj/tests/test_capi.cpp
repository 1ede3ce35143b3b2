#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ripg/ripg.h"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void collect(const char* message, void* user_data) {
  static_cast<std::vector<std::string>*>(user_data)->push_back(message);
}

fs::path scratch_dir() {
  fs::path d = fs::temp_directory_path() / "ripg_capi_test";
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("status strings and version") {
  CHECK(std::string(ripg_status_string(RIPG_OK)) == "ok");
  CHECK(std::string(ripg_status_string(RIPG_NOT_SPD)).size() > 0);
  CHECK(std::string(ripg_version()).size() > 0);
}

TEST_CASE("meshes") {
  ripg_mesh* mesh = nullptr;
  REQUIRE(ripg_mesh_create_structured(0, 0, 1, 1, 2, &mesh) == RIPG_OK);
  size_t nv = 0, nc = 0, nf = 0;
  REQUIRE(ripg_mesh_counts(mesh, &nv, &nc, &nf) == RIPG_OK);
  CHECK(nv == 9);
  CHECK(nc == 8);
  CHECK(nf == 16);
  double h = 0.0;
  CHECK(ripg_mesh_size(mesh, &h) == RIPG_OK);
  CHECK(h == doctest::Approx(std::sqrt(2.0) / 2.0));
  const fs::path dir = scratch_dir() / "mesh";
  CHECK(ripg_mesh_write_csv(mesh, dir.c_str()) == RIPG_OK);
  CHECK(fs::exists(dir / "vertices.csv"));
  CHECK(fs::exists(dir / "cells.csv"));
  ripg_mesh_destroy(mesh);
  ripg_mesh_destroy(nullptr);

  ripg_mesh* bad = nullptr;
  CHECK(ripg_mesh_create_structured(0, 0, 1, 1, 0, &bad) == RIPG_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
  CHECK(std::string(ripg_last_error()).size() > 0);
  CHECK(ripg_mesh_create_structured(0, 0, 0, 1, 2, &bad) != RIPG_OK);

  const double xy[] = {-1, 0, 0, 0, 1, 0, 0, 1};
  const int32_t cells[] = {1, 2, 3, 1, 3, 0};
  REQUIRE(ripg_mesh_create(xy, 4, cells, 2, &mesh) == RIPG_OK);
  REQUIRE(ripg_mesh_counts(mesh, &nv, &nc, &nf) == RIPG_OK);
  CHECK(nf == 5);
  ripg_mesh_destroy(mesh);
  const int32_t clockwise[] = {1, 3, 2};
  CHECK(ripg_mesh_create(xy, 4, clockwise, 1, &mesh) == RIPG_DEGENERATE_GEOMETRY);
  CHECK(ripg_mesh_counts(nullptr, &nv, &nc, &nf) == RIPG_INVALID_ARGUMENT);
}

TEST_CASE("manufactured solve") {
  ripg_mms_result r{};
  REQUIRE(ripg_mms_solve(8, 2, 2.0, &r) == RIPG_OK);
  CHECK(r.spd == 1);
  CHECK(r.l2_velocity < 0.6);
  CHECK(r.max_divergence <= 1e-10 * r.max_speed);
  CHECK(r.relative_residual <= 1e-9);
  ripg_mms_result weak{};
  std::vector<std::string> warnings;
  ripg_set_warning_callback(collect, &warnings);
  CHECK(ripg_mms_solve(8, 2, 0.1, &weak) == RIPG_NOT_SPD);
  ripg_set_warning_callback(nullptr, nullptr);
  CHECK(weak.spd == 0);
  CHECK(std::isnan(weak.dg));
  CHECK(warnings.size() == 1);
  CHECK(ripg_mms_solve(8, 1, 2.0, &r) == RIPG_INVALID_ARGUMENT);
}

TEST_CASE("benchmark cases") {
  CHECK(ripg_case_count() >= 4);
  ripg_case_info info{};
  REQUIRE(ripg_case_find("T4", &info) == RIPG_OK);
  CHECK(std::string(info.name) == "T4");
  CHECK(info.nusselt_ref == 6.615419);
  CHECK(ripg_case_find("nope", &info) == RIPG_INVALID_ARGUMENT);
  CHECK(ripg_case_get(ripg_case_count(), &info) == RIPG_INVALID_ARGUMENT);
  REQUIRE(ripg_case_get(0, &info) == RIPG_OK);
  CHECK(std::string(info.name) == "BB1a");
}

TEST_CASE("steady state, fields and tracers") {
  ripg_picard_options opt;
  ripg_picard_options_default(&opt);
  CHECK(opt.delta == 2.0);
  ripg_steady* state = nullptr;
  REQUIRE(ripg_steady_solve("BB1a", 8, 2, &opt, &state) == RIPG_OK);
  ripg_functionals f{};
  REQUIRE(ripg_steady_functionals(state, &f) == RIPG_OK);
  CHECK(f.converged == 1);
  CHECK(f.relaxation == 1.0);
  CHECK(f.eps_nusselt < 0.15);
  CHECK(f.nusselt == doctest::Approx(4.884409 * (1.0 + (f.nusselt > 4.884409 ? f.eps_nusselt : -f.eps_nusselt))));
  CHECK(f.max_normal_flux <= 1e-10 * f.max_speed);
  CHECK(f.work > 0.0);
  CHECK(f.balance < 0.2);

  double u[2] = {0, 0};
  CHECK(ripg_steady_velocity(state, 0.5, 0.0, u) == RIPG_OK);
  CHECK(std::abs(u[1]) <= 1e-12);
  CHECK(ripg_steady_velocity(state, 2.0, 0.5, u) == RIPG_OUTSIDE_DOMAIN);

  const fs::path dir = scratch_dir();
  CHECK(ripg_steady_write_trace(state, (dir / "trace.csv").c_str()) == RIPG_OK);
  CHECK(slurp(dir / "trace.csv").rfind("iter,Nu,", 0) == 0);
  CHECK(ripg_steady_write_fields(state, (dir / "phi.csv").c_str(), (dir / "T.csv").c_str()) == RIPG_OK);
  CHECK(slurp(dir / "T.csv").rfind("x,y,value\n", 0) == 0);
  CHECK(ripg_steady_write_trace(state, "/nonexistent/dir/trace.csv") == RIPG_IO);

  ripg_tracers* tracers = nullptr;
  REQUIRE(ripg_tracers_create(state, 32, 32, &tracers) == RIPG_OK);
  ripg_steady_destroy(state);  // tracers keep the field alive
  size_t n = 0;
  CHECK(ripg_tracers_count(tracers, &n) == RIPG_OK);
  CHECK(n == 1024);
  double mean = 0, sd = 0;
  CHECK(ripg_tracers_stats(tracers, &mean, &sd) == RIPG_OK);
  CHECK(mean == 8.0);
  size_t projected = 99;
  CHECK(ripg_tracers_advect(tracers, 1e-4, 5, &projected) == RIPG_OK);
  std::vector<double> xy(2 * n);
  CHECK(ripg_tracers_positions(tracers, xy.data(), n) == RIPG_OK);
  for (double v : xy) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  const fs::path snap = dir / "snap.csv";
  CHECK(ripg_tracers_write_snapshot(tracers, 0, snap.c_str(), 0) == RIPG_OK);
  CHECK(ripg_tracers_write_snapshot(tracers, 1, snap.c_str(), 1) == RIPG_OK);
  const std::string text = slurp(snap);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 2 * 1024);
  ripg_tracers_destroy(tracers);
  ripg_tracers_destroy(nullptr);
  ripg_steady_destroy(nullptr);
}

TEST_CASE("iteration cap") {
  ripg_picard_options opt;
  ripg_picard_options_default(&opt);
  opt.max_iterations = 2;
  ripg_steady* state = nullptr;
  CHECK(ripg_steady_solve("BB1a", 4, 2, &opt, &state) == RIPG_NOT_CONVERGED);
  REQUIRE(state != nullptr);
  ripg_functionals f{};
  CHECK(ripg_steady_functionals(state, &f) == RIPG_OK);
  CHECK(f.converged == 0);
  CHECK(f.iterations == 2);
  ripg_steady_destroy(state);
  CHECK(ripg_steady_solve("BB1a", 4, 1, nullptr, &state) == RIPG_INVALID_ARGUMENT);
}

TEST_CASE("convergence rate") {
  const double h[] = {0.5, 0.25, 0.125};
  const double e[] = {4.0, 1.0, 0.25};
  double slope = 0;
  int monotone = 0;
  CHECK(ripg_convergence_rate(h, e, 3, 0, &slope, &monotone) == RIPG_OK);
  CHECK(slope == doctest::Approx(2.0));
  CHECK(monotone == 1);
  CHECK(ripg_convergence_rate(h, e, 3, 5, &slope, &monotone) == RIPG_INVALID_ARGUMENT);
}
