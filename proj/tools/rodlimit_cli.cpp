// rodlimit command-line front end.
//
//   rodlimit solve1d     --config run.cfg [--out DIR]
//   rodlimit solve3d     --config run.cfg --delta 0.1 [--out DIR]
//   rodlimit recovery    --config run.cfg [--out DIR]
//   rodlimit gamma-study --config run.cfg [--out DIR] [--threads N]
//   rodlimit validate    --config run.cfg
//
// Exit codes: 0 success, 1 failed self-check (validate), 2 config error,
// 3 solver non-convergence, 4 I/O error. Failures print one JSON object on
// stderr.

#include "rodlimit/checks.hpp"
#include "rodlimit/config.hpp"
#include "rodlimit/io.hpp"
#include "rodlimit/recovery.hpp"
#include "rodlimit/solver.hpp"
#include "rodlimit/study.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace rodlimit;

namespace {

enum ExitCode { kOk = 0, kCheckFailed = 1, kConfigError = 2, kNotConverged = 3, kIoError = 4 };

struct Options {
  std::string config;
  std::string out;
  int threads = 1;
  std::optional<unsigned long long> seed;
  std::optional<double> delta;
  bool dump_mesh = false;
};

struct Context {
  RunConfig cfg;
  std::string hash;
  fs::path out;
};

int fail(ExitCode code, const std::string &kind, const json &details) {
  json j = {{"error", {{"code", int(code)}, {"kind", kind}, {"details", details}}}};
  std::cerr << j.dump() << "\n";
  return code;
}

Context load(const Options &o) {
  Context ctx;
  std::string text;
  ctx.cfg = load_config(o.config, &text);
  ctx.hash = config_hash(text);
  if (o.seed)
    ctx.cfg.solver.seed = *o.seed;
  ctx.out = o.out.empty() ? fs::path(ctx.cfg.study.output_dir) : fs::path(o.out);
  std::error_code ec;
  fs::create_directories(ctx.out, ec);
  if (ec)
    throw IoError("cannot create output directory " + ctx.out.string());
  return ctx;
}

std::string path(const Context &ctx, const char *name) { return (ctx.out / name).string(); }

int cmd_solve1d(const Options &o) {
  const auto ctx = load(o);
  const auto &c = ctx.cfg;
  const auto law = c.constitutive_law();
  const IntervalMesh mesh(c.mesh.nz1d);
  Field1D g = default_init_1d(c.material, mesh, c.solver);
  const auto rep = alternate_minimize(c.material, law, mesh, g, c.solver);
  write_json(path(ctx, "solve1d.json"), {{"config_hash", ctx.hash},
                                          {"nz", mesh.nz()},
                                          {"report", to_json(rep)},
                                          {"field", to_json(g)}});
  profile_csv(g, ctx.hash).write(path(ctx, "solve1d_profile.csv"));
  trace_csv(rep, ctx.hash).write(path(ctx, "solve1d_trace.csv"));
  std::cout << "solve1d: energy " << fmt17(rep.energy.total) << " after " << rep.iterations
            << " iterations" << (rep.converged ? "" : " (not converged)") << "\n";
  return rep.converged ? kOk : kNotConverged;
}

int cmd_solve3d(const Options &o) {
  const auto ctx = load(o);
  const auto &c = ctx.cfg;
  const double delta = o.delta.value_or(c.study.deltas.front());
  if (!(delta > 0.0 && delta <= 1.0))
    throw ConfigError(std::vector<ConfigIssue>{{"--delta", "must lie in (0,1]"}});
  const auto law = c.constitutive_law();
  const CylinderMesh mesh(c.mesh.nxy, c.mesh.nz);
  Field3D f = default_init_3d(c.material, mesh, delta, c.solver);
  const auto rep = alternate_minimize(c.material, law, mesh, f, c.solver);
  write_json(path(ctx, "solve3d.json"), {{"config_hash", ctx.hash},
                                          {"delta", delta},
                                          {"nxy", mesh.nxy()},
                                          {"nz", mesh.nz()},
                                          {"measure", mesh.measure()},
                                          {"report", to_json(rep)}});
  write_json(path(ctx, "solve3d_field.json"), {{"config_hash", ctx.hash}, {"field", to_json(f)}});
  profile_csv(f, mesh, ctx.hash).write(path(ctx, "solve3d_profile.csv"));
  trace_csv(rep, ctx.hash).write(path(ctx, "solve3d_trace.csv"));
  if (o.dump_mesh) {
    auto j = mesh_json(mesh);
    j["config_hash"] = ctx.hash;
    write_json(path(ctx, "mesh.json"), j);
  }
  std::cout << "solve3d: delta " << fmt17(delta) << " energy " << fmt17(rep.energy.total)
            << " after " << rep.iterations << " iterations"
            << (rep.converged ? "" : " (not converged)") << "\n";
  return rep.converged ? kOk : kNotConverged;
}

Field1D recovery_source(const RunConfig &c, const ConstitutiveLaw &law, const IntervalMesh &mesh,
                        bool &converged) {
  converged = true;
  const double eps = c.material.eps_z;
  Field1D g(mesh.num_nodes());
  if (c.recovery.source == "minimizer") {
    g = default_init_1d(c.material, mesh, c.solver);
    converged = alternate_minimize(c.material, law, mesh, g, c.solver).converged;
    return g;
  }
  const double z0 = c.recovery.kink_at;
  const double s1 = c.recovery.source == "affine" ? -eps : -c.recovery.first_slope_factor * eps;
  const double s2 = (-eps - s1 * z0) / (1.0 - z0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double z = mesh.nodes()[i];
    g.u3bar[i] = z <= z0 ? s1 * z : s1 * z0 + s2 * (z - z0);
  }
  apply_dirichlet(g, eps);
  return g;
}

int cmd_recovery(const Options &o) {
  const auto ctx = load(o);
  const auto &c = ctx.cfg;
  const auto law = c.constitutive_law();
  const CylinderMesh mesh(c.mesh.nxy, c.mesh.nz);
  const IntervalMesh mesh1d(c.mesh.nz);
  bool converged = true;
  const Field1D g = recovery_source(c, law, mesh1d, converged);
  const auto rows = limsup_check(c.material, law, mesh, mesh1d, g, c.recovery.deltas);
  limsup_csv(rows, ctx.hash).write(path(ctx, "recovery.csv"));
  json jr = json::array();
  std::vector<double> d, gap, extra;
  for (const auto &r : rows) {
    jr.push_back({{"delta", r.delta},
                  {"k", r.k},
                  {"E3d", r.e3d},
                  {"E1d", r.e1d},
                  {"gap", r.gap},
                  {"bound", r.extra},
                  {"strain_l2_error", r.err_l2},
                  {"strain_derivative_sup", r.dv_inf}});
    d.push_back(r.delta);
    gap.push_back(r.gap);
    extra.push_back(r.extra);
  }
  write_json(path(ctx, "recovery.json"),
             {{"config_hash", ctx.hash}, {"profile", to_json(g)}, {"rows", jr}});
  LogLogPlot plot("recovery energy gap", "delta", "E3d - E1d");
  plot.add_series("gap", d, gap);
  plot.add_series("delta^2 |v'|^2", d, extra);
  plot.write(path(ctx, "recovery_gap_vs_delta.svg"), ctx.hash);
  for (const auto &r : rows)
    std::cout << "recovery: delta " << fmt17(r.delta) << " k " << r.k << " gap "
              << fmt17(r.gap) << "\n";
  return converged ? kOk : kNotConverged;
}

int cmd_gamma_study(const Options &o) {
  const auto ctx = load(o);
  const auto &c = ctx.cfg;
  const auto law = c.constitutive_law();
  StudyOptions so;
  so.nxy = c.mesh.nxy;
  so.nz = c.mesh.nz;
  so.warm_start = c.study.warm_start;
  so.threads = o.threads;
  const auto res = gamma_sweep(c.material, law, c.solver, c.study.deltas, so);

  study_csv(res.records, ctx.hash).write(path(ctx, "study.csv"));
  json recs = json::array();
  for (const auto &r : res.records)
    recs.push_back(to_json(r));
  write_json(path(ctx, "study.json"), {{"config_hash", ctx.hash},
                                        {"energy_bound", res.energy_bound},
                                        {"minimizer_1d", to_json(res.minimizer_1d)},
                                        {"report_1d", to_json(res.report_1d)},
                                        {"records", recs},
                                        {"summary", to_json(res.summary)}});
  std::vector<double> d, gap, shear, atr, poisson, u3avg;
  for (const auto &r : res.records) {
    d.push_back(r.delta);
    gap.push_back(r.gap);
    shear.push_back(r.diag.shear);
    atr.push_back(r.diag.alpha_transverse);
    poisson.push_back(r.prop1.poisson);
    u3avg.push_back(r.u3_average_l2);
  }
  LogLogPlot gp("3D - 1D minimal energy", "delta", "|gap|");
  gp.add_series("|E3d - E1d|", d, gap);
  gp.write(path(ctx, "gap_vs_delta.svg"), ctx.hash);
  LogLogPlot rp("residuals of the 3D minimizers", "delta", "residual");
  rp.add_series("shear", d, shear);
  rp.add_series("grad_xy alpha", d, atr);
  rp.add_series("poisson", d, poisson);
  rp.add_series("slice mean u3", d, u3avg);
  rp.write(path(ctx, "residuals_vs_delta.svg"), ctx.hash);

  for (const auto &r : res.records)
    std::cout << "gamma-study: delta " << fmt17(r.delta) << " E3d " << fmt17(r.e3d_min)
              << " E1d " << fmt17(r.e1d_min) << " gap " << fmt17(r.gap) << "\n";
  const bool ok = res.summary.all_converged && res.report_1d.converged;
  return ok ? kOk : kNotConverged;
}

int cmd_validate(const Options &o) {
  std::string text;
  const auto cfg = load_config(o.config, &text);
  const auto law = cfg.constitutive_law();
  const double identity = verify_uniaxial_identity(cfg.material);
  const double identity_random = max_identity_residual(1000, cfg.solver.seed);

  std::mt19937_64 rng(cfg.solver.seed);
  const CylinderMesh mesh(6, 4);
  const IntervalMesh mesh1d(16);
  double worst3 = 0.0, worst1 = 0.0;
  for (int i = 0; i < 5; ++i) {
    const auto f = random_field_3d(mesh, cfg.material.eps_z, cfg.study.deltas.back(), rng);
    worst3 = std::max(worst3, gradient_check_3d(cfg.material, law, mesh, f, rng).relative_error());
    const auto g = random_field_1d(mesh1d, cfg.material.eps_z, rng);
    worst1 = std::max(worst1, gradient_check_1d(cfg.material, law, mesh1d, g, rng).relative_error());
  }
  const bool ok = identity <= 1e-14 && identity_random <= 1e-14 && worst3 <= 1e-6 && worst1 <= 1e-6;
  json j = {{"config_hash", config_hash(text)},
            {"identity_residual", identity},
            {"identity_residual_random_max", identity_random},
            {"gradient_rel_error_3d", worst3},
            {"gradient_rel_error_1d", worst1},
            {"ok", ok}};
  std::cout << j.dump(2) << "\n";
  return ok ? kOk : kCheckFailed;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Gradient-damage rod: 3D energy, 1D limit and dimension-reduction study"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--config", o.config, "configuration file")->required();
    sub->add_option("--out", o.out, "output directory (overrides study.output_dir)");
    sub->add_option("--threads", o.threads, "worker cap for the study")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "overrides solver.seed");
  };
  auto *s1 = app.add_subcommand("solve1d", "minimize the one-dimensional limit energy");
  auto *s3 = app.add_subcommand("solve3d", "minimize the 3D energy at one aspect ratio");
  auto *rc = app.add_subcommand("recovery", "recovery-sequence energy check");
  auto *gs = app.add_subcommand("gamma-study", "sweep the aspect ratio");
  auto *va = app.add_subcommand("validate", "identity and gradient self-checks");
  for (auto *s : {s1, s3, rc, gs, va})
    add_common(s);
  s3->add_option("--delta", o.delta, "aspect ratio (default: first study delta)");
  s3->add_flag("--dump-mesh", o.dump_mesh, "write mesh.json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*s1)
      return cmd_solve1d(o);
    if (*s3)
      return cmd_solve3d(o);
    if (*rc)
      return cmd_recovery(o);
    if (*gs)
      return cmd_gamma_study(o);
    return cmd_validate(o);
  } catch (const ConfigError &e) {
    json issues = json::array();
    for (const auto &i : e.issues())
      issues.push_back({{"key", i.key}, {"message", i.message}});
    return fail(kConfigError, "config", issues);
  } catch (const ParameterError &e) {
    return fail(kConfigError, "parameter", e.what());
  } catch (const IoError &e) {
    return fail(kIoError, "io", e.what());
  } catch (const std::ios_base::failure &e) {
    return fail(kIoError, "io", e.what());
  }
}
