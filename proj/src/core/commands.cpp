#include "core/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include "core/error.hpp"
#include "core/expansion.hpp"
#include "core/integrator.hpp"
#include "core/oracle.hpp"
#include "core/pipeline.hpp"
#include "core/reduced.hpp"
#include "core/surface.hpp"
#include "core/verifier.hpp"

namespace blowup {

namespace {

std::string join(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

Field datum_field(const RunConfig& cfg) {
  Field w0(static_cast<std::size_t>(cfg.grid.points));
  for (int j = 0; j < cfg.grid.points; ++j) w0[static_cast<std::size_t>(j)] = cfg.theta * cfg.datum.value(cfg.grid.x(j));
  return w0;
}

json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

void write_trace_csv(const std::string& path, const BoundaryTrace& tr, const GridSpec& grid) {
  CsvWriter csv(path, {"t", "point", "x", "value"});
  const double xl = grid.origin + tr.left * grid.spacing();
  const double xr = grid.origin + tr.right * grid.spacing();
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    csv.cell(tr.t[i]).cell(std::string("left")).cell(xl).cell(tr.left_values[i]);
    csv.end_row();
    csv.cell(tr.t[i]).cell(std::string("right")).cell(xr).cell(tr.right_values[i]);
    csv.end_row();
  }
}

// One named invariant of the check command.
struct Invariant {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
  std::string detail;
};

json to_json(const Invariant& v) {
  json j = {{"name", v.name}, {"value", number(v.value)}, {"limit", v.limit}, {"pass", v.pass}};
  if (!v.detail.empty()) j["detail"] = v.detail;
  return j;
}

Profile random_surface(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> a(3), b(3);
  double slope_bound = 0.0;
  for (int m = 1; m <= 3; ++m) {
    a[static_cast<std::size_t>(m - 1)] = unit(rng) / (m * m);
    b[static_cast<std::size_t>(m - 1)] = unit(rng) / (m * m);
    slope_bound += m * (std::abs(a[static_cast<std::size_t>(m - 1)]) + std::abs(b[static_cast<std::size_t>(m - 1)]));
  }
  const double target = 0.05 + 0.85 * (0.5 + 0.5 * unit(rng));
  const double f = target / slope_bound;
  for (double& v : a) v *= f;
  for (double& v : b) v *= f;
  const double offset = -0.025 * (1.0 + unit(rng));
  return Profile::cosine_series(offset, a, b);
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"expand", "simulate", "construct", "verify", "sweep", "check"};
  return names;
}

CommandResult cmd_expand(const RunConfig& cfg, const std::string& out) {
  const BlowupSurface s = build_surface(cfg.scaled_surface(), cfg.grid);
  const ExpansionCoefficients c = compute_coefficients(s);
  const SeriesResidualReport rep =
      residual_order_check(c, s, log_samples(cfg.expand.T_hi, cfg.expand.T_lo, cfg.expand.per_decade));

  {
    CsvWriter csv(join(out, "residual.csv"), {"T", "residual_sup", "fitted_p"});
    for (std::size_t i = 0; i < rep.T.size(); ++i) {
      csv.cell(rep.T[i]).cell(rep.residual_sup[i]).cell(rep.fitted_p);
      csv.end_row();
    }
  }
  const Field x = cfg.grid.coordinates();
  write_grid(join(out, "coefficients.txt"), {"x", "psi", "gamma", "u0", "u1", "u2", "u3", "u41"},
             {&x, &s.psi(), &s.gamma(), &c.u(0), &c.u(1), &c.u(2), &c.u(3), &c.u(ExpansionCoefficients::kU41)});

  // The oracle works pointwise; a coarse copy of the grid keeps it cheap.
  const int coarse = std::min(cfg.grid.points, 16);
  const BlowupSurface sc = build_surface(cfg.scaled_surface(), cfg.grid.with_points(coarse));
  const OracleResult orc = order_matching_oracle(sc, cfg.expand.oracle_order);

  CommandResult r;
  r.summary = {{"fitted_p", number(rep.fitted_p)},
               {"fitted_q", rep.fitted_q},
               {"log_correction", rep.log_correction},
               {"cancelled_max", rep.cancelled_max},
               {"residual_max", rep.residual_sup.empty() ? 0.0 : *std::max_element(rep.residual_sup.begin(), rep.residual_sup.end())},
               {"oracle_first_unmatched_power", orc.first_unmatched_power},
               {"oracle_first_unmatched_log_power", orc.first_unmatched_log_power},
               {"oracle_resonant_order", orc.resonant_order},
               {"inf_gamma", s.inf_gamma()}};
  return r;
}

CommandResult cmd_simulate(const RunConfig& cfg, const std::string& out) {
  const BlowupSurface s = build_surface(cfg.scaled_surface(), cfg.grid);
  const ExpansionCoefficients c = compute_coefficients(s);
  const ReducedModel model(s, c, datum_field(cfg), cfg.seed_order);
  IntegratorConfig icfg = cfg.integrator;
  icfg.energy_s = cfg.s;
  const ReducedTrajectory traj = integrate(model, icfg);

  {
    JsonlWriter log(join(out, "energy.jsonl"));
    for (const EnergyReading& e : traj.energy_log())
      log.write({{"T", e.T}, {"e0", e.e0}, {"es", e.es}, {"sup", e.sup_norm}, {"De0", e.De0}});
  }
  const Field x = cfg.grid.coordinates();
  auto dump = [&](const ReducedState& st, const std::string& name) {
    write_grid(join(out, name), {"x", "w", "w0c", "w1"}, {&x, &st.w, &st.w0c, &st.w1});
  };
  if (cfg.dump_every > 0) {
    for (int i = 0; i <= traj.steps(); i += cfg.dump_every) {
      char name[40];
      std::snprintf(name, sizeof name, "state_%07d.txt", i);
      dump(traj.states()[static_cast<std::size_t>(i)], name);
    }
  }
  const ReducedState& last = traj.states().back();
  dump(last, "final.txt");

  CommandResult r;
  r.summary = {{"steps", traj.steps()},
               {"T_start", traj.T_start()},
               {"T_end", traj.T_end()},
               {"shift", traj.shift()},
               {"sup_final", last.sup_norm()},
               {"energy_readings", traj.energy_log().size()}};
  return r;
}

CommandResult cmd_construct(const RunConfig& cfg, const std::string& out) {
  const PipelineConfig pc = cfg.pipeline();
  const CauchyDataRecord rec = run_pipeline(pc);

  json record = record_to_json(rec);
  record["run"] = provenance_header(cfg, "construct");
  write_json(join(out, "record.json"), record);

  const Field x = cfg.grid.coordinates();
  write_grid(join(out, "slice.txt"), {"x", "u", "ut", "exact_u", "exact_ut", "phi_u", "phi_ut", "tail_u", "tail_ut"},
             {&x, &rec.u, &rec.ut, &rec.exact.u, &rec.exact.ut, &rec.phi.u, &rec.phi.ut, &rec.tail.u, &rec.tail.ut});
  {
    const ControlBudget& b = rec.budget;
    CsvWriter csv(join(out, "budget.csv"), {"component", "norm", "limit", "pass"});
    auto row = [&](const char* name, double norm, double limit) {
      csv.cell(std::string(name)).cell(norm).cell(limit).cell(std::string(norm < limit ? "true" : "false"));
      csv.end_row();
    };
    row("exact", b.norm_exact, b.epsilon / 4.0);
    row("phi", b.norm_phi, b.epsilon / 4.0);
    row("tail", b.norm_tail, b.epsilon / 2.0);
    row("total", b.total, b.epsilon);
  }

  CommandResult r;
  r.summary = {{"alpha", rec.alpha}, {"budget", to_json(rec.budget)}, {"pass", rec.budget.pass}};
  if (cfg.write_trace) {
    const BlowupSurface s = build_surface(pc.surface, cfg.grid);
    const VerifierConfig vcfg = cfg.verifier_for(rec.alpha, min_of(s.psi()));
    vcfg.validate();
    const BoundaryTrace tr = extract_boundary_trace(rec, cfg.verify.omega, vcfg, cfg.verify.trace_stride);
    write_trace_csv(join(out, "trace.csv"), tr, cfg.grid);
    r.summary["trace_samples"] = tr.t.size();
  }
  return r;
}

CommandResult cmd_verify(const RunConfig& cfg, const std::string& out, const std::string& record_path) {
  CauchyDataRecord rec;
  const Profile surface = cfg.scaled_surface();
  bool predictable = true;
  if (record_path.empty()) {
    rec = run_pipeline(cfg.pipeline());
  } else {
    rec = record_from_json(read_json(record_path));
    predictable = rec.provenance.surface == surface.describe() && rec.grid.points == cfg.grid.points &&
                  rec.grid.length == cfg.grid.length && rec.grid.origin == cfg.grid.origin;
  }
  const BlowupSurface s = build_surface(surface, rec.grid.points == cfg.grid.points ? cfg.grid : rec.grid);
  const VerifierConfig vcfg = cfg.verifier_for(rec.alpha, min_of(s.psi()));
  vcfg.validate();

  DirectSolution sol;
  CommandResult r;
  const Field x = rec.grid.coordinates();
  if (cfg.verify.mode == "dirichlet") {
    const BoundaryTrace tr = extract_boundary_trace(rec, cfg.verify.omega, vcfg, 1);
    write_trace_csv(join(out, "trace.csv"), tr, rec.grid);
    sol = solve_dirichlet(rec.grid, rec.u, rec.ut, tr, vcfg);
    r.summary["trace_end"] = tr.t.empty() ? 0.0 : tr.t.back();
  } else {
    sol = solve_direct(rec.grid, rec.u, rec.ut, vcfg);
  }
  const BlowupMap& m = sol.map;
  {
    CsvWriter csv(join(out, "blowup_map.csv"), {"x", "t_blow", "t_raw", "sign", "fit_ok"});
    for (std::size_t j = 0; j < m.x.size(); ++j) {
      csv.cell(m.x[j]).cell(m.t_extrap[j]).cell(m.t_raw[j]).cell(m.sign[j]).cell(static_cast<int>(m.fit_ok[j]));
      csv.end_row();
    }
  }
  const auto earliest = std::min_element(m.t_extrap.begin(), m.t_extrap.end());
  r.summary["alpha"] = rec.alpha;
  r.summary["mode"] = cfg.verify.mode;
  r.summary["t_max"] = vcfg.t_max;
  r.summary["dt"] = m.dt;
  r.summary["steps"] = sol.steps;
  r.summary["t_first_raw"] = number(m.first_blowup());
  r.summary["t_b"] = number(*earliest);
  r.summary["t_b_relative_error"] = number(std::abs(*earliest - rec.alpha) / rec.alpha);
  r.summary["fit_failures"] = m.fit_failures;
  if (predictable && cfg.verify.mode == "periodic") {
    const std::vector<bool> K = zero_set_indicator(s, cfg.verify.K_tol);
    const BlowupComparison cmp = compare_blowup(m, predicted_blowup_time(s, rec.alpha), K, true);
    r.summary["comparison"] = {{"max_error", number(cmp.max_error)},
                               {"quantile_count", cmp.quantile_count},
                               {"quantile_time", number(cmp.quantile_time)},
                               {"argmin_index", cmp.argmin_index},
                               {"argmin_x", cmp.argmin_x},
                               {"min_time", number(cmp.min_time)},
                               {"argmin_in_K", cmp.argmin_in_K}};
  }
  return r;
}

CommandResult cmd_sweep(const RunConfig& cfg, const std::string& out) {
  PipelineConfig base = cfg.pipeline();
  base.surface = cfg.surface;  // lambda = 1 shape
  const SweepResult res = sweep(cfg.sweep_lambdas, cfg.sweep_thetas, base, cfg.threads);
  int passing = 0;
  {
    CsvWriter csv(join(out, "sweep.csv"),
                  {"lambda", "theta", "alpha", "norm_exact", "norm_phi", "norm_tail", "total", "pass", "error"});
    for (const SweepRow& row : res.rows) {
      passing += row.pass ? 1 : 0;
      csv.cell(row.lambda).cell(row.theta).cell(row.alpha).cell(row.norm_exact).cell(row.norm_phi).cell(row.norm_tail);
      csv.cell(row.total).cell(std::string(row.pass ? "true" : "false")).cell(row.error);
      csv.end_row();
    }
  }
  {
    CsvWriter csv(join(out, "argmin.csv"), {"lambda", "theta", "total"});
    for (const SweepArgmin& a : res.argmin) {
      csv.cell(a.lambda).cell(a.theta).cell(a.total);
      csv.end_row();
    }
  }
  CommandResult r;
  r.summary = {{"cells", res.rows.size()}, {"passing", passing}, {"any_pass", passing > 0}};
  if (!res.rows.empty() && res.rows.front().error.empty())
    r.summary["best"] = {{"lambda", res.rows.front().lambda},
                         {"theta", res.rows.front().theta},
                         {"total", res.rows.front().total}};
  return r;
}

CommandResult cmd_check(const RunConfig& cfg, const std::string& out) {
  std::vector<Invariant> inv;
  auto add = [&](std::string name, double value, double limit, std::string detail = {}) {
    inv.push_back({std::move(name), value, limit, value <= limit, std::move(detail)});
  };

  // Matrix identities over random admissible surfaces.
  {
    std::mt19937_64 rng(cfg.seed);
    double sym = 0.0, va1 = 0.0, psd = 0.0, spec = 0.0, null = 0.0;
    for (int i = 0; i < cfg.check.surfaces; ++i) {
      const BlowupSurface s = build_surface(random_surface(rng), cfg.grid);
      SystemMatrices m = assemble_matrices(s);
      m.A(0, 1) += cfg.check.perturb_A;
      const MatrixCheck mc = check_matrices(m);
      sym = std::max({sym, mc.q_asymmetry, mc.a1_asymmetry});
      va1 = std::max(va1, mc.va1_defect);
      psd = std::max(psd, -mc.min_vqa_eigenvalue);
      const std::array<double, 3> want{0.0, 2.0, 5.0};
      for (int k = 0; k < 3; ++k) spec = std::max(spec, std::abs(mc.a_spectrum[static_cast<std::size_t>(k)] - want[static_cast<std::size_t>(k)]));
      null = std::max(null, mc.null_defect);
    }
    add("matrix_symmetry", sym, 0.0);
    add("va1_equals_a1", va1, 0.0);
    add("vqa_psd", psd, 1e-12, "negative of the smallest eigenvalue");
    add("a_spectrum", spec, 1e-12);
    add("null_space", null, 1e-12);
  }

  // Closed-form coefficients against the order-matching oracle.
  {
    const std::vector<Profile> surfaces{cfg.scaled_surface(), Profile::cosine_well(0.1),
                                        Profile::bump(-0.3, 1.0, 1.5),
                                        Profile::cosine_series(-0.1, {0.05, 0.02}, {0.03, -0.01})};
    const GridSpec coarse = cfg.grid.with_points(16);
    double diff = 0.0, u0_gamma = 0.0;
    for (const Profile& p : surfaces) {
      const BlowupSurface s = build_surface(p, coarse);
      const ExpansionCoefficients c = compute_coefficients(s);
      OracleResult o = order_matching_oracle(s, 6);
      for (double& v : o.coefficients[{0, 0}]) v += cfg.check.perturb_oracle;
      const std::array<std::pair<int, int>, 5> slots{{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 1}}};
      const std::array<int, 5> index{0, 1, 2, 3, ExpansionCoefficients::kU41};
      for (std::size_t k = 0; k < slots.size(); ++k) {
        const Field oc = o.coefficient(slots[k].first, slots[k].second);
        for (int j = 0; j < s.size(); ++j)
          diff = std::max(diff, std::abs(oc[static_cast<std::size_t>(j)] - c.u(index[k])[static_cast<std::size_t>(j)]));
      }
      for (int j = 0; j < s.size(); ++j) {
        const double u0 = c.u(0)[static_cast<std::size_t>(j)];
        const double p1 = s.grad_psi()[static_cast<std::size_t>(j)];
        u0_gamma = std::max(u0_gamma, std::abs(u0 * u0 + p1 * p1 - 1.0));
      }
    }
    add("oracle_agreement", diff, 1e-10);
    add("u0_sqrt_gamma", u0_gamma, 1e-12);
  }

  // Orders below the first residual power cancel on the configured surface.
  {
    const BlowupSurface s = build_surface(cfg.scaled_surface(), cfg.grid);
    const SeriesResidualReport rep = residual_order_check(compute_coefficients(s), s, {0.1, 0.01});
    add("residual_cancellation", rep.cancelled_max, 1e-9);
  }

  // psi = 0, w0 = 0 reproduces 1/t.
  {
    RunConfig z = cfg;
    z.surface = Profile::zero();
    z.theta = 0.0;
    z.alpha = 11.0;
    const CauchyDataRecord rec = run_pipeline(z.pipeline());
    double err = 0.0;
    for (std::size_t j = 0; j < rec.u.size(); ++j) {
      err = std::max(err, std::abs(rec.u[j] - 1.0 / 11.0));
      err = std::max(err, std::abs(rec.ut[j] - 1.0 / 121.0));
    }
    add("exact_solution", err, 1e-10);
  }

  CommandResult r;
  bool all = true;
  json list = json::array();
  for (const Invariant& v : inv) {
    all = all && v.pass;
    list.push_back(to_json(v));
  }
  r.summary = {{"pass", all}, {"checks", list}};
  write_json(join(out, "check.json"), r.summary);
  r.exit_code = all ? kExitOk : kExitNumerical;
  return r;
}

CommandResult run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& opt) {
  const std::string out = opt.out_dir.empty() ? cfg.out : opt.out_dir;
  CommandResult r;
  try {
    if (std::find(command_names().begin(), command_names().end(), name) == command_names().end())
      throw Error(ErrorKind::InvalidConfig, "unknown command '" + name + "'");
    cfg.validate();
    ensure_directory(out);
    write_json(join(out, "provenance.json"), provenance_header(cfg, name));
    if (name == "expand") r = cmd_expand(cfg, out);
    else if (name == "simulate") r = cmd_simulate(cfg, out);
    else if (name == "construct") r = cmd_construct(cfg, out);
    else if (name == "verify") r = cmd_verify(cfg, out, opt.record_path);
    else if (name == "sweep") r = cmd_sweep(cfg, out);
    else r = cmd_check(cfg, out);
    r.summary["status"] = r.exit_code == kExitOk ? "ok" : "failed";
  } catch (const Error& e) {
    r.exit_code = static_cast<int>(e.category());
    r.summary = {{"status", "error"}, {"error_kind", to_string(e.kind())}, {"message", e.what()}};
  } catch (const std::exception& e) {
    r.exit_code = kExitNumerical;
    r.summary = {{"status", "error"}, {"error_kind", "Internal"}, {"message", e.what()}};
  }
  r.summary["command"] = name;
  try {
    if (std::filesystem::is_directory(out)) write_json(join(out, "summary.json"), r.summary);
  } catch (const std::exception&) {
  }
  return r;
}

}  // namespace blowup
