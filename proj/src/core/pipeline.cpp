#include "core/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "core/error.hpp"
#include "core/spectral.hpp"

namespace blowup {

double choose_alpha(double epsilon, double /*s0*/, const GridSpec& grid) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidConfig, "epsilon must be positive");
  const double root = std::sqrt(grid.length);
  // Only the k = 0 mode is present, so every Sobolev index gives the same norm.
  for (int i = 0;; ++i) {
    const double alpha = 2.5 + 0.5 * i;
    if (root * (1.0 / alpha + 1.0 / (alpha * alpha)) < epsilon / 4.0) return alpha;
  }
}

ConstructedSlice construct_solution(const BlowupSurface& s, const Field& w0, double alpha, const IntegratorConfig& cfg,
                                    int seed_order) {
  if (!(alpha > 2.0)) throw Error(ErrorKind::InvalidConfig, "alpha must exceed 2");
  if (max_of(s.psi()) > 0.0) throw Error(ErrorKind::ShapeViolation, "the construction needs psi <= 0");
  const double T_max = alpha - min_of(s.psi());
  if (cfg.b < T_max) {
    std::ostringstream os;
    os << "b = " << cfg.b << " but the slice needs T up to " << T_max;
    throw Error(ErrorKind::TrajectoryTooShort, os.str());
  }
  const ExpansionCoefficients c = compute_coefficients(s);
  const ReducedModel model(s, c, w0, seed_order);
  auto traj = std::make_shared<ReducedTrajectory>(integrate(model, cfg));

  const auto n = static_cast<std::size_t>(s.size());
  ConstructedSlice out;
  out.alpha = alpha;
  out.trajectory = traj;
  out.T.resize(n);
  out.exact = {Field(n, 1.0 / alpha), Field(n, -1.0 / (alpha * alpha))};
  const PhiSlice ph = evaluate_phi(c, s, alpha);
  out.phi = {ph.phi, ph.phi_t};
  out.tail = {Field(n), Field(n)};
  out.total = {Field(n), Field(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const double T = alpha - s.psi()[j];
    out.T[j] = T;
    const auto w = traj->sample_point(static_cast<int>(j), T);
    // d/dt at fixed x is d/dT at fixed X: (T^3 w)_T = T^2 (3w + Dw) = T^2 w_(0).
    out.tail.u[j] = T * T * T * w[0];
    out.tail.ut[j] = T * T * w[1];
    out.total.u[j] = out.exact.u[j] + out.phi.u[j] + out.tail.u[j];
    out.total.ut[j] = out.exact.ut[j] + out.phi.ut[j] + out.tail.ut[j];
  }
  return out;
}

namespace {

Field negated(const Field& f) {
  Field r(f);
  for (double& v : r) v = -v;
  return r;
}

}  // namespace

CauchyDataRecord time_reverse(const Field& u, const Field& ut, double alpha, const GridSpec& grid) {
  CauchyDataRecord r;
  r.alpha = alpha;
  r.grid = grid;
  r.u = u;
  r.ut = negated(ut);
  const std::size_t n = u.size();
  r.exact = {Field(n, 1.0 / alpha), Field(n, 1.0 / (alpha * alpha))};
  r.phi = {Field(n, 0.0), Field(n, 0.0)};
  r.tail = {Field(n), Field(n)};
  for (std::size_t j = 0; j < n; ++j) {
    r.tail.u[j] = r.u[j] - r.exact.u[j];
    r.tail.ut[j] = r.ut[j] - r.exact.ut[j];
  }
  r.provenance.alpha = alpha;
  r.provenance.grid = grid;
  return r;
}

CauchyDataRecord time_reverse(const ConstructedSlice& slice, const GridSpec& grid) {
  CauchyDataRecord r;
  r.alpha = slice.alpha;
  r.grid = grid;
  r.u = slice.total.u;
  r.ut = negated(slice.total.ut);
  r.exact = {slice.exact.u, negated(slice.exact.ut)};
  r.phi = {slice.phi.u, negated(slice.phi.ut)};
  r.tail = {slice.tail.u, negated(slice.tail.ut)};
  r.provenance.alpha = slice.alpha;
  r.provenance.grid = grid;
  return r;
}

ControlBudget budget_report(const CauchyDataRecord& record, double epsilon) {
  const Spectral sp(record.grid);
  ControlBudget b;
  b.epsilon = epsilon;
  b.alpha = record.alpha;
  b.norm_exact = sp.cauchy_pair_norm(record.exact.u, record.exact.ut, record.s0);
  b.norm_phi = sp.cauchy_pair_norm(record.phi.u, record.phi.ut, record.s0);
  b.norm_tail = sp.cauchy_pair_norm(record.tail.u, record.tail.ut, record.s0);
  b.total = sp.cauchy_pair_norm(record.u, record.ut, record.s0);
  b.pass = b.norm_exact < epsilon / 4.0 && b.norm_phi < epsilon / 4.0 && b.norm_tail < epsilon / 2.0 && b.total < epsilon;
  return b;
}

BoundaryTrace extract_boundary_trace(const CauchyDataRecord& record, const SubDomain& omega, const VerifierConfig& cfg,
                                     int stride) {
  return record_boundary_trace(record.grid, record.u, record.ut, omega, cfg, stride);
}

Field predicted_blowup_time(const BlowupSurface& s, double alpha) {
  Field t(s.psi());
  for (double& v : t) v = alpha - v;
  return t;
}

CauchyDataRecord run_pipeline(const PipelineConfig& cfg, std::shared_ptr<const ReducedTrajectory>* trajectory) {
  const BlowupSurface s = build_surface(cfg.surface, cfg.grid);
  const double alpha = cfg.alpha > 0.0 ? cfg.alpha : choose_alpha(cfg.epsilon, cfg.s0, cfg.grid);
  Field w0(static_cast<std::size_t>(cfg.grid.points));
  for (int j = 0; j < cfg.grid.points; ++j) w0[static_cast<std::size_t>(j)] = cfg.theta * cfg.bump.value(cfg.grid.x(j));
  const ConstructedSlice slice = construct_solution(s, w0, alpha, cfg.integrator, cfg.seed_order);
  if (trajectory) *trajectory = slice.trajectory;
  CauchyDataRecord rec = time_reverse(slice, cfg.grid);
  rec.s0 = cfg.s0;
  rec.budget = budget_report(rec, cfg.epsilon);
  rec.provenance.surface = cfg.surface.describe();
  rec.provenance.lambda = cfg.surface.scale * (cfg.surface.family == ProfileFamily::CosineWell ? cfg.surface.amplitude : 1.0);
  rec.provenance.datum = cfg.bump.describe();
  rec.provenance.theta = cfg.theta;
  rec.provenance.integrator = cfg.integrator;
  return rec;
}

int worker_count(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(n, 1);
  if (const char* env = std::getenv("BLOWUP_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return n;
}

SweepResult sweep(const std::vector<double>& lambdas, const std::vector<double>& thetas, const PipelineConfig& base,
                  int threads) {
  struct Cell {
    double lambda;
    double theta;
  };
  std::vector<Cell> cells;
  for (double l : lambdas)
    for (double t : thetas) cells.push_back({l, t});
  std::vector<SweepRow> rows(cells.size());

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      SweepRow& row = rows[i];
      row.lambda = cells[i].lambda;
      row.theta = cells[i].theta;
      try {
        PipelineConfig cfg = base;
        cfg.surface = base.surface.scaled(row.lambda);
        cfg.theta = row.theta;
        const CauchyDataRecord rec = run_pipeline(cfg);
        row.alpha = rec.alpha;
        row.norm_exact = rec.budget.norm_exact;
        row.norm_phi = rec.budget.norm_phi;
        row.norm_tail = rec.budget.norm_tail;
        row.total = rec.budget.total;
        row.pass = rec.budget.pass;
      } catch (const std::exception& e) {
        row.error = e.what();
        row.total = std::numeric_limits<double>::infinity();
      }
    }
  };
  const int n = std::min(worker_count(threads), static_cast<int>(std::max<std::size_t>(cells.size(), 1)));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  SweepResult res;
  for (double l : lambdas) {
    SweepArgmin best{l, 0.0, std::numeric_limits<double>::infinity()};
    for (const SweepRow& r : rows)
      if (r.lambda == l && r.error.empty() && r.total < best.total) best = {l, r.theta, r.total};
    if (std::isfinite(best.total)) res.argmin.push_back(best);
  }
  res.rows = std::move(rows);
  std::stable_sort(res.rows.begin(), res.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.error.empty() != b.error.empty()) return a.error.empty();
    return a.total < b.total;
  });
  return res;
}

double lambda_threshold(const PipelineConfig& cfg, double lo, double hi, double tol) {
  auto passes = [&](double lambda) {
    PipelineConfig c = cfg;
    c.surface = cfg.surface.scaled(lambda);
    return run_pipeline(c).budget.pass;
  };
  if (!passes(lo)) throw Error(ErrorKind::InvalidConfig, "budget fails at the lower bisection bound");
  if (passes(hi)) throw Error(ErrorKind::InvalidConfig, "budget passes at the upper bisection bound");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (passes(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace blowup
