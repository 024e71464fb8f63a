#include "nsfemdg/cli/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "nsfemdg/cli/checks.hpp"
#include "nsfemdg/cli/fields.hpp"
#include "nsfemdg/cli/presets.hpp"
#include "nsfemdg/diagnostics.hpp"
#include "nsfemdg/simulation.hpp"
#include "nsfemdg/studies.hpp"
#include "nsfemdg/vtk.hpp"

namespace nsfemdg::cli {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void report_warnings(const RunConfig& cfg, std::ostream& err) {
  for (const auto& w : cfg.warnings) err << "warning: " << w << '\n';
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
}

std::string brief(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string vtk_name(const std::string& dir, int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "state_%06d.vtk", step);
  return (std::filesystem::path(dir) / buf).string();
}

void report_failure(const StepFailure& f, std::ostream& err) {
  err << "step failure at step " << f.step() << ": " << f.what() << " (alpha=" << f.alpha()
      << ", iteration=" << f.iteration() << ", residual=" << f.residual_norm() << ")\n";
}

}  // namespace

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  report_warnings(cfg, err);
  const Mesh mesh = build_box_mesh(cfg.n, cfg.box);
  Discretization disc(mesh, cfg.params);
  if (cfg.corrupt_flux_sign) disc.set_mutation(Discretization::Mutation::kFlipFluxSign);
  const State s0 = make_initial_data(cfg)(mesh, cfg.params);

  ensure_dir(cfg.output_dir);
  const std::string csv_path = (std::filesystem::path(cfg.output_dir) / "diagnostics.csv").string();
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot open " + csv_path);
  csv << kDiagnosticsHeader << '\n';

  const EnergyLedger l0 = energy_ledger(s0, disc);
  EnergyTracker energy(l0, disc.dt());
  csv << 0 << ',' << num(s0.time) << ',' << num(l0.mass) << ',' << num(l0.kinetic) << ',' << num(l0.internal)
      << ",0,0,0," << num(l0.min_rho) << ",0,0,0,0\n";
  write_vtk(vtk_name(cfg.output_dir, 0), mesh, s0);

  bool checks_ok = true;
  RunOptions opt;
  opt.T = cfg.T;
  opt.keep_states = false;
  auto observer = [&](const State& prev, const State& cur, const SolveReport& rep) {
    const EnergyLedger l = energy_ledger(prev, cur, disc);
    const double margin = energy.add(l);
    const PositivityCheck pos = positivity_bound_check(prev, cur, disc);
    checks_ok = checks_ok && energy.pass() && pos.pass;
    csv << cur.step << ',' << num(cur.time) << ',' << num(l.mass) << ',' << num(l.kinetic) << ','
        << num(l.internal) << ',' << num(l.grad_diss) << ',' << num(l.d2) << ',' << num(l.d5) << ','
        << num(l.min_rho) << ',' << num(margin) << ',' << num(pos.slack) << ',' << rep.newton_iterations << ','
        << rep.alpha_nodes << '\n';
    csv.flush();
    if (cur.step % cfg.cadence == 0) write_vtk(vtk_name(cfg.output_dir, cur.step), mesh, cur);
  };
  try {
    const RunResult res = run(s0, disc, default_homotopy_settings(cfg.params), opt, observer);
    out << "completed " << res.steps << " steps, dt=" << num(disc.dt()) << ", diagnostics in " << csv_path << '\n';
  } catch (const StepFailure& f) {
    report_failure(f, err);
    return kExitNumerical;
  }
  if (!checks_ok) {
    err << "energy or positivity check violated; see " << csv_path << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  report_warnings(cfg, err);
  std::mt19937_64 rng(20240601);
  const Mesh mesh = build_box_mesh(cfg.n, cfg.box);
  Discretization disc(mesh, cfg.params);
  if (cfg.corrupt_flux_sign) disc.set_mutation(Discretization::Mutation::kFlipFluxSign);

  std::vector<CheckOutcome> results;
  results.push_back(check_commuting(mesh, rng));
  results.push_back(check_orthogonality(mesh, rng));

  const State prev = random_state(mesh, rng);
  State guess = random_state(mesh, rng);
  results.push_back(check_transport(guess, disc, rng));
  for (auto& r : check_fv_oracle(prev, guess, disc)) results.push_back(std::move(r));
  if (cfg.n <= 2) {
    separate_fluxes(guess, mesh, 0.01);
    results.push_back(check_jacobian(prev, guess, disc));
  }

  bool ok = true;
  for (const auto& r : results) {
    out << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << num(r.value) << " (limit " << brief(r.threshold) << ")\n";
    ok = ok && r.pass;
  }
  return ok ? kExitOk : kExitNumerical;
}

int cmd_study(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  report_warnings(cfg, err);
  ensure_dir(cfg.output_dir);
  const std::string path = (std::filesystem::path(cfg.output_dir) / (cfg.study + ".csv")).string();
  std::ostringstream table;
  bool pass = false;
  try {
    if (cfg.study == "rates") {
      const double pi = std::acos(-1.0);
      SmoothVectorField v;
      v.value = [pi](const Vec3& x) {
        const double s = std::sin(pi * x[0]) * std::sin(pi * x[1]) * std::sin(pi * x[2]);
        return Vec3(s, s, s);
      };
      v.jacobian = [pi](const Vec3& x) {
        const Vec3 s(std::sin(pi * x[0]), std::sin(pi * x[1]), std::sin(pi * x[2]));
        const Vec3 c(std::cos(pi * x[0]), std::cos(pi * x[1]), std::cos(pi * x[2]));
        const Vec3 g(pi * c[0] * s[1] * s[2], pi * s[0] * c[1] * s[2], pi * s[0] * s[1] * c[2]);
        Mat3 j;
        j.row(0) = j.row(1) = j.row(2) = g.transpose();
        return j;
      };
      const RatesStudy st = rates_study(v, cfg.study_n, cfg.box);
      table << "n,h,l2_error,broken_h1_error,l2_order,broken_h1_order\n";
      for (const auto& r : st.rows) {
        table << r.n << ',' << num(r.h) << ',' << num(r.l2) << ',' << num(r.broken_h1) << ',' << num(r.l2_order)
              << ',' << num(r.h1_order) << '\n';
      }
      pass = st.pass;
    } else if (cfg.study == "cauchy") {
      const CauchyStudy st = cauchy_study(make_initial_data(cfg), cfg.params, cfg.box, cfg.study_n, cfg.T);
      table << "n_coarse,n_fine,l2_space_time_difference\n";
      for (const auto& r : st.rows) table << r.n_coarse << ',' << r.n_fine << ',' << num(r.difference) << '\n';
      pass = st.pass;
    } else {
      const PDecayStudy st = p_decay_study(make_initial_data(cfg), cfg.params, cfg.box, cfg.study_n, cfg.T);
      table << "n,h,P1,P2,P3,P4,order_P1,order_P2,order_P3,order_P4\n";
      for (const auto& r : st.rows) {
        table << r.n << ',' << num(r.h) << ',' << num(r.magnitude.p1) << ',' << num(r.magnitude.p2) << ','
              << num(r.magnitude.p3) << ',' << num(r.magnitude.p4) << ',' << num(r.order.p1) << ','
              << num(r.order.p2) << ',' << num(r.order.p3) << ',' << num(r.order.p4) << '\n';
      }
      pass = st.pass;
    }
  } catch (const StepFailure& f) {
    report_failure(f, err);
    return kExitNumerical;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << table.str();
  out << table.str();
  out << (pass ? "PASS " : "FAIL ") << cfg.study << " study\n";
  return pass ? kExitOk : kExitNumerical;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Implicit FEM-DG solver for isentropic compressible Navier-Stokes"};
  app.require_subcommand(1);
  struct Sub {
    CLI::App* app = nullptr;
    std::string config;
    std::map<std::string, std::string> values;
  };
  std::map<std::string, Sub> subs;
  const std::map<std::string, std::string> help{
      {"run", "time integration with VTK and CSV output"},
      {"check", "structural verification suite"},
      {"study", "refinement study (rates, cauchy, pdecay)"}};
  for (const auto& [name, desc] : help) {
    Sub& s = subs[name];
    s.app = app.add_subcommand(name, desc);
    s.app->add_option("--config", s.config, "configuration file of 'key = value' lines");
    for (const auto& key : config_keys()) s.app->add_option("--" + key, s.values[key], "override of '" + key + "'");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  for (auto& [name, s] : subs) {
    if (!s.app->parsed()) continue;
    std::vector<std::pair<std::string, std::string>> overrides;
    for (const auto& key : config_keys()) {
      if (s.app->count("--" + key) > 0) overrides.emplace_back(key, s.values[key]);
    }
    RunConfig cfg;
    try {
      cfg = parse_config(s.config, overrides);
    } catch (const ConfigError& e) {
      err << "configuration error: " << e.what() << '\n';
      return kExitConfig;
    }
    try {
      if (name == "run") return cmd_run(cfg, out, err);
      if (name == "check") return cmd_check(cfg, out, err);
      return cmd_study(cfg, out, err);
    } catch (const StepFailure& f) {
      report_failure(f, err);
      return kExitNumerical;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitNumerical;
    }
  }
  return kExitConfig;
}

}  // namespace nsfemdg::cli
