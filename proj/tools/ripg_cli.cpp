// Batch driver: manufactured-solution convergence, penalty sweep, convection
// benchmarks and tracer advection. Talks to the solver through the C API only.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ripg/ripg.h"

namespace fs = std::filesystem;

namespace {

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(ripg_status s, const std::string& what) {
  if (s != RIPG_OK) {
    throw CliError(what + ": " + ripg_status_string(s) + " (" + ripg_last_error() + ")");
  }
}

std::ofstream open_csv(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw CliError("cannot write " + path.string());
  return out;
}

std::string run_name(int n, int p) { return std::to_string(n) + "_" + std::to_string(p); }

// CSV rows kept in memory so they can go both to per-run files and to the
// combined summary.
class Table {
 public:
  explicit Table(std::string header) : header_(std::move(header)) {}

  std::ostream& row() {
    rows_.push_back(std::make_unique<std::ostringstream>());
    *rows_.back() << std::setprecision(17);
    return *rows_.back();
  }
  void write(const fs::path& path, std::size_t first = 0) const {
    std::ofstream out = open_csv(path);
    out << header_ << '\n';
    for (std::size_t i = first; i < rows_.size(); ++i) out << rows_[i]->str() << '\n';
  }

 private:
  std::string header_;
  std::vector<std::unique_ptr<std::ostringstream>> rows_;
};

struct Common {
  std::string out = "out";
  std::vector<int> n;
  std::vector<int> p;
};

// ---- manufactured solution -------------------------------------------------

const std::string kMmsHeader =
    "N,p,delta,dofs,h,spd,L2_phi,L2_u,H1_u,DG,max_div,max_flux,max_speed,residual";

std::ostream& mms_row(Table& t, int n, int p, double delta, const ripg_mms_result& r) {
  return t.row() << n << ',' << p << ',' << delta << ',' << r.dofs << ',' << r.h << ','
                 << r.spd << ',' << r.l2_stream << ',' << r.l2_velocity << ',' << r.h1_velocity
                 << ',' << r.dg << ',' << r.max_divergence << ',' << r.max_normal_flux << ','
                 << r.max_speed << ',' << r.relative_residual;
}

ripg_mms_result solve_mms(int n, int p, double delta) {
  ripg_mms_result r{};
  const ripg_status s = ripg_mms_solve(n, p, delta, &r);
  if (s != RIPG_NOT_SPD) check(s, "manufactured solve N=" + std::to_string(n));
  return r;
}

void run_mms(const Common& c, double delta) {
  const fs::path dir = fs::path(c.out) / "mms";
  Table summary(kMmsHeader);
  Table rates("p,norm,slope,slope_finest3,monotone");
  for (int p : c.p) {
    std::vector<double> h, norms[4];
    for (int n : c.n) {
      const ripg_mms_result r = solve_mms(n, p, delta);
      Table one(kMmsHeader);
      mms_row(one, n, p, delta, r);
      mms_row(summary, n, p, delta, r);
      one.write(dir / "manufactured" / (run_name(n, p) + ".csv"));
      std::printf("mms N=%d p=%d dofs=%zu L2_u=%.6e DG=%.6e%s\n", n, p, r.dofs, r.l2_velocity,
                  r.dg, r.spd ? "" : " (not SPD)");
      if (!r.spd) continue;
      h.push_back(r.h);
      norms[0].push_back(r.l2_stream);
      norms[1].push_back(r.l2_velocity);
      norms[2].push_back(r.h1_velocity);
      norms[3].push_back(r.dg);
    }
    if (h.size() < 2) continue;
    const char* names[4] = {"L2_phi", "L2_u", "H1_u", "DG"};
    for (int k = 0; k < 4; ++k) {
      double all = NAN, finest = NAN;
      int monotone = 0;
      check(ripg_convergence_rate(h.data(), norms[k].data(), h.size(), 0, &all, &monotone),
            "rate");
      if (h.size() >= 3) {
        check(ripg_convergence_rate(h.data(), norms[k].data(), h.size(), 3, &finest, nullptr),
              "rate");
      }
      rates.row() << p << ',' << names[k] << ',' << all << ',' << finest << ',' << monotone;
      std::printf("  p=%d %-6s slope %.3f\n", p, names[k], all);
    }
  }
  summary.write(dir / "summary.csv");
  rates.write(dir / "rates.csv");
}

// A configuration is unstable when the operator is not SPD or its DG error
// exceeds ten times the delta = 2 error.
void run_delta_sweep(const Common& c, const std::vector<double>& deltas) {
  const fs::path dir = fs::path(c.out) / "delta_sweep";
  const std::string header = kMmsHeader + ",unstable";
  Table summary(header);
  for (int p : c.p) {
    for (int n : c.n) {
      const ripg_mms_result base = solve_mms(n, p, 2.0);
      Table one(header);
      for (double delta : deltas) {
        const ripg_mms_result r = delta == 2.0 ? base : solve_mms(n, p, delta);
        const int unstable = (!r.spd || !(r.dg <= 10.0 * base.dg)) ? 1 : 0;
        mms_row(one, n, p, delta, r) << ',' << unstable;
        mms_row(summary, n, p, delta, r) << ',' << unstable;
        std::printf("delta-sweep N=%d p=%d delta=%g spd=%d DG=%.6e%s\n", n, p, delta, r.spd,
                    r.dg, unstable ? " unstable" : "");
      }
      one.write(dir / "manufactured" / (run_name(n, p) + ".csv"));
    }
  }
  summary.write(dir / "summary.csv");
}

// ---- convection benchmarks -------------------------------------------------

struct PicardFlags {
  int max_picard = 300;
  double relax = 0.0;
  double delta = 2.0;

  ripg_picard_options options() const {
    ripg_picard_options o;
    ripg_picard_options_default(&o);
    o.max_iterations = max_picard;
    o.relaxation = relax;
    o.delta = delta;
    return o;
  }
};

struct SteadyHandle {
  ripg_steady* state = nullptr;
  bool converged = false;
  ~SteadyHandle() { ripg_steady_destroy(state); }
};

void solve_case(const std::string& name, int n, int p, const PicardFlags& flags,
                SteadyHandle& out) {
  const ripg_picard_options o = flags.options();
  const ripg_status s = ripg_steady_solve(name.c_str(), n, p, &o, &out.state);
  out.converged = s == RIPG_OK;
  if (s != RIPG_NOT_CONVERGED) check(s, name + " N=" + std::to_string(n));
}

const std::string kBenchmarkHeader =
    "case,N,p,delta,dofs,Nu,u_rms,W,Phi,Delta,eps_Nu,eps_urms,converged,iterations,relax,"
    "max_div,max_flux";

std::vector<std::string> case_names(const std::string& selection) {
  std::vector<std::string> names;
  if (selection != "all") {
    ripg_case_info info;
    check(ripg_case_find(selection.c_str(), &info), "case " + selection);
    return {selection};
  }
  for (std::size_t i = 0; i < ripg_case_count(); ++i) {
    ripg_case_info info;
    check(ripg_case_get(i, &info), "case table");
    names.emplace_back(info.name);
  }
  return names;
}

void run_benchmark(const Common& c, const std::string& selection, const PicardFlags& flags,
                   bool fields) {
  const fs::path dir = fs::path(c.out) / "benchmark";
  Table summary(kBenchmarkHeader);
  for (const std::string& name : case_names(selection)) {
    for (int p : c.p) {
      for (int n : c.n) {
        SteadyHandle run;
        solve_case(name, n, p, flags, run);
        ripg_functionals f;
        check(ripg_steady_functionals(run.state, &f), "functionals");
        Table one(kBenchmarkHeader);
        for (Table* t : {&one, &summary}) {
          t->row() << name << ',' << n << ',' << p << ',' << flags.delta << ',' << f.dofs << ','
                   << f.nusselt << ',' << f.u_rms << ',' << f.work << ',' << f.dissipation << ','
                   << f.balance << ',' << f.eps_nusselt << ',' << f.eps_u_rms << ','
                   << f.converged << ',' << f.iterations << ',' << f.relaxation << ','
                   << f.max_divergence << ',' << f.max_normal_flux;
        }
        const fs::path base = dir / name / run_name(n, p);
        one.write(base.string() + ".csv");
        check(ripg_steady_write_trace(run.state, (base.string() + "_trace.csv").c_str()),
              "trace");
        if (fields) {
          check(ripg_steady_write_fields(run.state, (base.string() + "_stream.csv").c_str(),
                                         (base.string() + "_temperature.csv").c_str()),
                "fields");
        }
        std::printf("%s N=%d p=%d Nu=%.8f (eps %.2e) u_rms=%.6f (eps %.2e) Delta=%.2e%s\n",
                    name.c_str(), n, p, f.nusselt, f.eps_nusselt, f.u_rms, f.eps_u_rms,
                    f.balance, f.converged ? "" : " NOT CONVERGED");
      }
    }
  }
  summary.write(dir / "summary.csv");
}

// ---- tracers ---------------------------------------------------------------

struct TracerFlags {
  std::string case_name = "BB1a";
  int particles = 256;
  double dt = 1e-4;
  int steps = 500;
  int every = 50;
  bool snapshots = false;
};

void run_tracers(const Common& c, const TracerFlags& t, const PicardFlags& flags) {
  if (t.every <= 0) throw CliError("--every must be positive");
  const fs::path dir = fs::path(c.out) / "tracers";
  Table summary("case,N,p,particles,dt,steps,mean,std_initial,std_final,growth,projected");
  for (int p : c.p) {
    for (int n : c.n) {
      SteadyHandle run;
      solve_case(t.case_name, n, p, flags, run);
      if (!run.converged) std::printf("warning: %s field did not converge\n", t.case_name.c_str());
      ripg_tracers* raw = nullptr;
      check(ripg_tracers_create(run.state, t.particles, t.particles, &raw), "tracers");
      std::unique_ptr<ripg_tracers, void (*)(ripg_tracers*)> tracers(raw, ripg_tracers_destroy);

      const fs::path base = dir / t.case_name / run_name(n, p);
      const std::string snap = base.string() + "_snapshots.csv";
      if (t.snapshots) fs::create_directories(base.parent_path());
      Table stats("step,time,mean,std,projected");
      double mean = 0.0, std0 = 0.0, sd = 0.0;
      std::size_t projected = 0;
      check(ripg_tracers_stats(tracers.get(), &mean, &std0), "stats");
      stats.row() << 0 << ',' << 0.0 << ',' << mean << ',' << std0 << ',' << 0;
      if (t.snapshots) check(ripg_tracers_write_snapshot(tracers.get(), 0, snap.c_str(), 0), "snapshot");
      sd = std0;
      for (int step = 0; step < t.steps;) {
        const int chunk = std::min(t.every, t.steps - step);
        std::size_t moved = 0;
        check(ripg_tracers_advect(tracers.get(), t.dt, chunk, &moved), "advect");
        projected += moved;
        step += chunk;
        check(ripg_tracers_stats(tracers.get(), &mean, &sd), "stats");
        stats.row() << step << ',' << step * t.dt << ',' << mean << ',' << sd << ',' << projected;
        if (t.snapshots) {
          check(ripg_tracers_write_snapshot(tracers.get(), step, snap.c_str(), 1), "snapshot");
        }
      }
      stats.write(base.string() + ".csv");
      const double growth = std0 > 0.0 ? sd / std0 - 1.0 : NAN;
      summary.row() << t.case_name << ',' << n << ',' << p << ',' << t.particles * t.particles
                    << ',' << t.dt << ',' << t.steps << ',' << mean << ',' << std0 << ',' << sd
                    << ',' << growth << ',' << projected;
      std::printf("tracers %s N=%d p=%d mean=%.3f std %.3f -> %.3f (growth %+.3f) projected=%zu\n",
                  t.case_name.c_str(), n, p, mean, std0, sd, growth, projected);
    }
  }
  summary.write(dir / "summary.csv");
}

void silence(const char*, void*) {}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stream-function Stokes solver experiments"};
  app.set_config("--config", "", "TOML/INI file; keys match the long flag names");
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet", quiet, "Suppress solver warnings");

  PicardFlags picard;

  CLI::App* mms = app.add_subcommand("mms", "Manufactured-solution convergence study");
  double mms_delta = 2.0;
  mms->add_option("--delta", mms_delta, "Penalty scaling")->capture_default_str();

  CLI::App* sweep = app.add_subcommand("delta-sweep", "Penalty-scaling stability sweep");
  std::vector<double> deltas{0.01, 0.05, 0.1, 0.2, 0.5, 1.0, 1.5, 2.0, 4.0, 8.0};
  sweep->add_option("--delta", deltas, "Penalty scalings (list)")->capture_default_str();

  CLI::App* bench = app.add_subcommand("benchmark", "Steady convection benchmark");
  std::string case_name = "BB1a";
  bool fields = false;
  bench->add_option("--case", case_name, "Case name or 'all'")->capture_default_str();
  bench->add_option("--delta", picard.delta, "Penalty scaling")->capture_default_str();
  bench->add_flag("--fields", fields, "Also write nodal stream function and temperature");

  CLI::App* tracer = app.add_subcommand("tracers", "Tracer advection in a steady field");
  TracerFlags tf;
  tracer->add_option("--case", tf.case_name, "Case providing the velocity field")->capture_default_str();
  tracer->add_option("--particles", tf.particles, "Particles per direction")->capture_default_str();
  tracer->add_option("--dt", tf.dt, "Time step")->capture_default_str();
  tracer->add_option("--steps", tf.steps, "Number of steps")->capture_default_str();
  tracer->add_option("--every", tf.every, "Statistics interval in steps")->capture_default_str();
  tracer->add_flag("--snapshots", tf.snapshots, "Write particle positions at each interval");

  for (CLI::App* sub : {bench, tracer}) {
    sub->add_option("--max-picard", picard.max_picard, "Picard iteration limit")->capture_default_str();
    sub->add_option("--relax", picard.relax, "Picard relaxation (<= 0: case default)")->capture_default_str();
  }

  // each subcommand gets its own defaults for the shared options
  std::vector<int> n_mms{8, 16, 32, 64}, p_mms{2, 3};
  std::vector<int> n_sweep{16}, p_sweep{2, 3};
  std::vector<int> n_bench{16, 32, 64}, p_bench{2};
  std::vector<int> n_tracer{8}, p_tracer{2};
  Common c_mms, c_sweep, c_bench, c_tracer;
  auto bind = [](CLI::App* sub, Common& c, std::vector<int> n, std::vector<int> p) {
    c.n = std::move(n);
    c.p = std::move(p);
    sub->add_option("--out", c.out, "Output directory")->capture_default_str();
    sub->add_option("--N", c.n, "Cells per direction (list)")->capture_default_str();
    sub->add_option("--p", c.p, "Polynomial degrees (list)")->capture_default_str();
  };
  bind(mms, c_mms, n_mms, p_mms);
  bind(sweep, c_sweep, n_sweep, p_sweep);
  bind(bench, c_bench, n_bench, p_bench);
  bind(tracer, c_tracer, n_tracer, p_tracer);

  CLI11_PARSE(app, argc, argv);
  if (quiet) ripg_set_warning_callback(silence, nullptr);

  try {
    if (mms->parsed()) run_mms(c_mms, mms_delta);
    if (sweep->parsed()) run_delta_sweep(c_sweep, deltas);
    if (bench->parsed()) run_benchmark(c_bench, case_name, picard, fields);
    if (tracer->parsed()) run_tracers(c_tracer, tf, picard);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ripg: %s\n", e.what());
    return 1;
  }
  return 0;
}
