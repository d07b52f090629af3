#include "core/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "core/error.hpp"

namespace blowup {

namespace {

constexpr double kMaxCourant = 0.9;
constexpr int kHistory = 10;

int wrap(int i, int n) { return ((i % n) + n) % n; }

// Grid points of omega = (a, b): the nearest grid indices to a and b, unwrapped.
std::pair<int, int> snap(const GridSpec& g, const SubDomain& om) {
  const double dx = g.spacing();
  const int l = static_cast<int>(std::lround((om.a - g.origin) / dx));
  const int r = static_cast<int>(std::lround((om.b - g.origin) / dx));
  return {l, r};
}

struct Layout {
  bool periodic = true;
  int N = 0;
  int left = 0;  // global index of local 0
  int M = 0;
  int global(int k) const { return wrap(left + k, N); }
};

struct Observer {
  // Called after each completed step with the new level; return false to stop before accepting it.
  std::function<bool(long n, double t, const Field& cur, const Field& next, const std::vector<int>& crossed)> before_accept;
};

DirectSolution march(const GridSpec& grid, const Field& u, const Field& ut, const VerifierConfig& cfg, const Layout& lay,
                     const BoundaryTrace* trace, const Observer* obs) {
  cfg.validate();
  const int N = grid.points;
  if (static_cast<int>(u.size()) != N || static_cast<int>(ut.size()) != N)
    throw Error(ErrorKind::InvalidConfig, "data size does not match the grid");
  for (std::size_t j = 0; j < u.size(); ++j)
    if (!std::isfinite(u[j]) || !std::isfinite(ut[j])) throw Error(ErrorKind::InvalidConfig, "data are not finite");
  if (sup_abs(u) > cfg.u_max) throw Error(ErrorKind::ImmediateOverflow, "initial data already exceed u_max");

  const double dx = grid.spacing();
  const double dt = cfg.courant * dx;
  const double dt2 = dt * dt;
  const double top = cfg.top();
  const std::vector<double>& ladder = cfg.ladder;
  const std::size_t L = ladder.size();
  const int M = lay.M;
  const double nl = cfg.nonlinear ? 2.0 : 0.0;

  DirectSolution sol;
  BlowupMap& map = sol.map;
  map.points = N;
  map.dx = dx;
  map.dt = dt;
  map.u_max = cfg.u_max;
  map.ladder = ladder;
  map.x = grid.coordinates();
  map.t_raw.assign(static_cast<std::size_t>(N), kNoBlowup);
  map.t_extrap.assign(static_cast<std::size_t>(N), kNoBlowup);
  map.sign.assign(static_cast<std::size_t>(N), 0);
  map.fit_ok.assign(static_cast<std::size_t>(N), 0);
  map.monotone.assign(static_cast<std::size_t>(N), 0);

  Field prev(static_cast<std::size_t>(M)), cur(static_cast<std::size_t>(M)), next(static_cast<std::size_t>(M));
  Field v(static_cast<std::size_t>(M));
  for (int k = 0; k < M; ++k) {
    prev[static_cast<std::size_t>(k)] = u[static_cast<std::size_t>(lay.global(k))];
    v[static_cast<std::size_t>(k)] = ut[static_cast<std::size_t>(lay.global(k))];
  }

  auto laplacian = [&](const Field& f, int k) {
    const auto kk = static_cast<std::size_t>(k);
    if (lay.periodic) {
      const auto km = static_cast<std::size_t>(wrap(k - 1, M));
      const auto kp = static_cast<std::size_t>(wrap(k + 1, M));
      return (f[km] - 2.0 * f[kk] + f[kp]) / (dx * dx);
    }
    return (f[kk - 1] - 2.0 * f[kk] + f[kk + 1]) / (dx * dx);
  };
  const int k_lo = lay.periodic ? 0 : 1;
  const int k_hi = lay.periodic ? M - 1 : M - 2;

  auto apply_boundary = [&](Field& f, double t) {
    if (lay.periodic) return;
    const auto [a, b] = trace->at(t);
    f.front() = a;
    f.back() = b;
  };

  // Startup: Taylor step with u_tt = u_xx + 2u^3 and u_ttt = v_xx + 6u^2 v.
  for (int k = k_lo; k <= k_hi; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const double a = laplacian(prev, k) + nl * prev[kk] * prev[kk] * prev[kk];
    const double j3 = laplacian(v, k) + 3.0 * nl * prev[kk] * prev[kk] * v[kk];
    cur[kk] = prev[kk] + dt * v[kk] + 0.5 * dt2 * a + dt2 * dt / 6.0 * j3;
  }
  if (!lay.periodic) {
    const auto [a0, b0] = trace->at(0.0);
    prev.front() = a0;
    prev.back() = b0;
    apply_boundary(cur, dt);
  }

  std::vector<std::vector<double>> cross(static_cast<std::size_t>(N));
  std::vector<double> ring(static_cast<std::size_t>(M) * kHistory, 0.0);
  std::vector<char> frozen(static_cast<std::size_t>(M), 0);
  int frozen_count = 0;
  const int active = k_hi - k_lo + 1;

  std::vector<long> snap_steps;
  for (double ts : cfg.snapshot_times) snap_steps.push_back(std::lround(ts / dt));
  auto take_snapshots = [&](long n, const Field& f) {
    for (std::size_t i = 0; i < snap_steps.size(); ++i)
      if (snap_steps[i] == n) {
        Field g(static_cast<std::size_t>(N), std::numeric_limits<double>::quiet_NaN());
        for (int k = 0; k < M; ++k) g[static_cast<std::size_t>(lay.global(k))] = f[static_cast<std::size_t>(k)];
        sol.snapshot_t.push_back(n * dt);
        sol.snapshots.push_back(std::move(g));
      }
  };

  // Crossing bookkeeping between the levels a (time ta) and b (time ta + dt).
  std::vector<int> crossed;
  auto note_crossings = [&](const Field& a, const Field& b, double ta, long n_b) {
    crossed.clear();
    for (int k = k_lo; k <= k_hi; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      if (frozen[kk]) continue;
      const int g = lay.global(k);
      const auto gg = static_cast<std::size_t>(g);
      double* hist = &ring[kk * kHistory];
      hist[n_b % kHistory] = std::abs(b[kk]);
      const double ua = std::abs(a[kk]);
      double ub = std::abs(b[kk]);
      if (!std::isfinite(ub)) ub = std::numeric_limits<double>::max();
      for (std::size_t l = cross[gg].size(); l < L; ++l) {
        if (!(ub > ladder[l])) break;
        const double za = 1.0 / std::max(ua, 1e-300);
        const double zb = 1.0 / ub;
        const double s = ua >= ladder[l] ? 0.0 : (za - 1.0 / ladder[l]) / (za - zb);
        cross[gg].push_back(ta + s * dt);
      }
      if (map.t_raw[gg] == kNoBlowup && ub > cfg.u_max) {
        map.t_raw[gg] = ta + dt;
        map.sign[gg] = b[kk] > 0.0 ? 1 : -1;
        bool mono = n_b >= kHistory;
        for (long m = n_b - kHistory + 2; mono && m <= n_b; ++m)
          mono = hist[m % kHistory] > hist[(m - 1) % kHistory];
        map.monotone[gg] = mono ? 1 : 0;
        crossed.push_back(g);
      }
    }
  };

  for (int k = 0; k < M; ++k) ring[static_cast<std::size_t>(k) * kHistory] = std::abs(prev[static_cast<std::size_t>(k)]);
  note_crossings(prev, cur, 0.0, 1);
  if (obs && obs->before_accept && !obs->before_accept(1, dt, prev, cur, crossed)) {
    sol.t_end = 0.0;
    return sol;
  }
  take_snapshots(0, prev);
  take_snapshots(1, cur);

  double t_limit = cfg.t_max;
  if (trace) t_limit = std::min(t_limit, trace->t.back());

  long n = 1;
  double t = dt;
  auto freeze = [&](Field& f) {
    for (int k = k_lo; k <= k_hi; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      if (frozen[kk]) continue;
      if (!std::isfinite(f[kk]) || std::abs(f[kk]) > top) {
        const int sgn = map.sign[static_cast<std::size_t>(lay.global(k))];
        f[kk] = (sgn != 0 ? sgn : (f[kk] > 0 ? 1 : -1)) * top;
        frozen[kk] = 1;
        ++frozen_count;
      }
    }
  };
  freeze(cur);

  while (t + dt <= t_limit * (1.0 + 1e-12) && frozen_count < active) {
    for (int k = k_lo; k <= k_hi; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      if (frozen[kk]) {
        next[kk] = cur[kk];
        continue;
      }
      const double c = cur[kk];
      next[kk] = 2.0 * c - prev[kk] + dt2 * (laplacian(cur, k) + nl * c * c * c);
    }
    const double t_next = (n + 1) * dt;
    apply_boundary(next, t_next);
    note_crossings(cur, next, t, n + 1);
    if (obs && obs->before_accept && !obs->before_accept(n + 1, t_next, cur, next, crossed)) break;
    freeze(next);
    if (cfg.record_energy && lay.periodic) {
      sol.energy_t.push_back(t);
      sol.energy.push_back(discrete_energy(prev, cur, next, dx, dt));
    }
    std::swap(prev, cur);
    std::swap(cur, next);
    ++n;
    t = t_next;
    take_snapshots(n, cur);
  }
  sol.t_end = t;
  sol.steps = n;

  for (int k = k_lo; k <= k_hi; ++k) {
    const auto g = static_cast<std::size_t>(lay.global(k));
    if (map.t_raw[g] == kNoBlowup) continue;
    try {
      const ThresholdFit f = fit_crossings(cross[g], std::vector<double>(ladder.begin(), ladder.begin() + static_cast<long>(cross[g].size())),
                                           cfg.fit_tolerance);
      map.t_extrap[g] = f.t_blow;
      map.fit_ok[g] = 1;
    } catch (const Error&) {
      map.t_extrap[g] = map.t_raw[g];
      ++map.fit_failures;
    }
  }
  return sol;
}

}  // namespace

void VerifierConfig::validate() const {
  if (!(courant > 0.0)) throw Error(ErrorKind::InvalidConfig, "courant number must be positive");
  if (courant > kMaxCourant) {
    std::ostringstream os;
    os << "dt/dx = " << courant << " exceeds " << kMaxCourant;
    throw Error(ErrorKind::CFLViolation, os.str());
  }
  if (!(t_max > 0.0)) throw Error(ErrorKind::InvalidConfig, "t_max must be positive");
  if (!(u_max > 0.0)) throw Error(ErrorKind::InvalidConfig, "u_max must be positive");
  if (ladder.empty() || !std::is_sorted(ladder.begin(), ladder.end()) || ladder.front() <= 0.0)
    throw Error(ErrorKind::InvalidConfig, "ladder must be positive and increasing");
}

double VerifierConfig::top() const { return std::max(u_max, ladder.back()); }

double BlowupMap::first_blowup() const {
  double m = kNoBlowup;
  for (double t : t_raw) m = std::min(m, t);
  return m;
}

std::pair<double, double> BoundaryTrace::at(double time) const {
  if (t.empty() || time > t.back() * (1.0 + 1e-12) + 1e-14 || time < 0.0)
    throw Error(ErrorKind::OutOfRange, "time outside the boundary trace");
  auto it = std::lower_bound(t.begin(), t.end(), time);
  std::size_t i = static_cast<std::size_t>(it - t.begin());
  if (i < t.size() && std::abs(t[i] - time) <= 1e-12 * std::max(1.0, time)) return {left_values[i], right_values[i]};
  if (i == 0) return {left_values[0], right_values[0]};
  if (i >= t.size()) return {left_values.back(), right_values.back()};
  const double s = (time - t[i - 1]) / (t[i] - t[i - 1]);
  return {(1 - s) * left_values[i - 1] + s * left_values[i], (1 - s) * right_values[i - 1] + s * right_values[i]};
}

DirectSolution solve_direct(const GridSpec& grid, const Field& u, const Field& ut, const VerifierConfig& cfg) {
  grid.validate();
  Layout lay;
  lay.N = grid.points;
  lay.M = grid.points;
  return march(grid, u, ut, cfg, lay, nullptr, nullptr);
}

DirectSolution solve_dirichlet(const GridSpec& grid, const Field& u, const Field& ut, const BoundaryTrace& trace,
                               const VerifierConfig& cfg) {
  grid.validate();
  if (trace.t.size() < 2) throw Error(ErrorKind::InvalidConfig, "boundary trace has fewer than two samples");
  VerifierConfig c = cfg;
  if (std::abs(trace.dt - cfg.courant * grid.spacing()) > 1e-14 * trace.dt)
    throw Error(ErrorKind::InvalidConfig, "boundary trace was recorded with a different time step");
  Layout lay;
  lay.periodic = false;
  lay.N = grid.points;
  lay.left = trace.left;
  lay.M = trace.right - trace.left + 1;
  if (lay.M < 3 || lay.M > grid.points) throw Error(ErrorKind::InvalidConfig, "omega does not contain interior grid points");
  return march(grid, u, ut, c, lay, &trace, nullptr);
}

BoundaryTrace record_boundary_trace(const GridSpec& grid, const Field& u, const Field& ut, const SubDomain& omega,
                                    const VerifierConfig& cfg, int stride) {
  grid.validate();
  if (stride < 1) throw Error(ErrorKind::InvalidConfig, "trace stride must be positive");
  if (!(omega.b > omega.a)) throw Error(ErrorKind::InvalidConfig, "omega must satisfy a < b");
  if (omega.b - omega.a >= grid.length) throw Error(ErrorKind::InvalidConfig, "omega must lie strictly inside the box");
  const auto [l, r] = snap(grid, omega);
  if (r - l < 2) throw Error(ErrorKind::InvalidConfig, "omega does not contain interior grid points");

  BoundaryTrace tr;
  tr.omega = omega;
  tr.left = l;
  tr.right = r;
  tr.stride = stride;
  tr.dt = cfg.courant * grid.spacing();
  const int N = grid.points;
  const auto li = static_cast<std::size_t>(wrap(l, N));
  const auto ri = static_cast<std::size_t>(wrap(r, N));
  tr.t.push_back(0.0);
  tr.left_values.push_back(u[li]);
  tr.right_values.push_back(u[ri]);

  bool reached = false;
  Observer obs;
  obs.before_accept = [&](long n, double t, const Field& cur, const Field& next, const std::vector<int>& crossed) {
    if (!crossed.empty()) {
      // Judge where the blow-up is heading from the last level below u_max.
      double peak = 0.0;
      double inner = 0.0;
      for (int k = 0; k < N; ++k) {
        const double a = std::abs(cur[static_cast<std::size_t>(k)]);
        peak = std::max(peak, a);
        const int off = wrap(k - l, N);
        if (off > 0 && off < r - l) inner = std::max(inner, a);
      }
      reached = inner < peak * (1.0 - 1e-12);
      return false;
    }
    if (n % stride == 0) {
      tr.t.push_back(t);
      tr.left_values.push_back(next[li]);
      tr.right_values.push_back(next[ri]);
    }
    return true;
  };
  Layout lay;
  lay.N = N;
  lay.M = N;
  march(grid, u, ut, cfg, lay, nullptr, &obs);
  if (reached) {
    std::ostringstream os;
    os << "blow-up approaches the boundary of omega = (" << omega.a << ", " << omega.b << ") before the interior";
    throw Error(ErrorKind::BlowupReachedBoundary, os.str());
  }
  return tr;
}

ThresholdFit fit_crossings(const std::vector<double>& t_cross, const std::vector<double>& levels, double tolerance) {
  const std::size_t m = std::min(t_cross.size(), levels.size());
  if (m < 2) throw Error(ErrorKind::FitFailure, "fewer than two ladder crossings");
  Eigen::MatrixXd X(static_cast<Eigen::Index>(m), 2);
  Eigen::VectorXd z(static_cast<Eigen::Index>(m));
  const double t0 = t_cross[0];
  for (std::size_t i = 0; i < m; ++i) {
    X(static_cast<Eigen::Index>(i), 0) = 1.0;
    X(static_cast<Eigen::Index>(i), 1) = t_cross[i] - t0;
    z(static_cast<Eigen::Index>(i)) = 1.0 / levels[i];
  }
  const Eigen::Vector2d beta = X.colPivHouseholderQr().solve(z);
  if (!(beta(1) < 0.0)) throw Error(ErrorKind::FitFailure, "1/|u| is not decreasing through the ladder");
  ThresholdFit f;
  const Eigen::VectorXd fit = X * beta;
  for (std::size_t i = 0; i < m; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    f.residual = std::max(f.residual, std::abs(fit(ii) - z(ii)) / z(ii));
  }
  if (f.residual > tolerance) {
    std::ostringstream os;
    os << "ladder fit residual " << f.residual << " above " << tolerance;
    throw Error(ErrorKind::FitFailure, os.str());
  }
  f.t_blow = t0 - beta(0) / beta(1);
  return f;
}

ThresholdFit threshold_extrapolation(const std::vector<double>& t, const std::vector<double>& u,
                                     const std::vector<double>& ladder, double tolerance) {
  std::vector<double> tc;
  std::size_t level = 0;
  for (std::size_t i = 1; i < t.size() && level < ladder.size(); ++i) {
    const double ua = std::abs(u[i - 1]);
    const double ub = std::abs(u[i]);
    while (level < ladder.size() && ub > ladder[level]) {
      const double za = 1.0 / std::max(ua, 1e-300);
      const double zb = 1.0 / ub;
      const double s = ua >= ladder[level] ? 0.0 : (za - 1.0 / ladder[level]) / (za - zb);
      tc.push_back(t[i - 1] + s * (t[i] - t[i - 1]));
      ++level;
    }
  }
  return fit_crossings(tc, std::vector<double>(ladder.begin(), ladder.begin() + static_cast<long>(tc.size())), tolerance);
}

BlowupComparison compare_blowup(const BlowupMap& map, const Field& predicted, const std::vector<bool>& K,
                                bool use_extrapolated) {
  const Field& tm = use_extrapolated ? map.t_extrap : map.t_raw;
  const int N = map.points;
  BlowupComparison c;
  std::vector<double> finite;
  for (int j = 0; j < N; ++j) {
    const double v = tm[static_cast<std::size_t>(j)];
    if (v == kNoBlowup) continue;
    finite.push_back(v);
    if (v < c.min_time) {
      c.min_time = v;
      c.argmin_index = j;
    }
  }
  if (finite.empty()) return c;
  std::sort(finite.begin(), finite.end());
  const std::size_t q = static_cast<std::size_t>(std::max(1.0, std::ceil(0.1 * static_cast<double>(finite.size())))) - 1;
  c.quantile_time = finite[q];
  for (int j = 0; j < N; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    if (tm[jj] == kNoBlowup || tm[jj] > c.quantile_time) continue;
    ++c.quantile_count;
    c.max_error = std::max(c.max_error, std::abs(tm[jj] - predicted[jj]));
  }
  c.argmin_x = map.x[static_cast<std::size_t>(c.argmin_index)];
  for (int d = -1; d <= 1; ++d)
    if (K[static_cast<std::size_t>(wrap(c.argmin_index + d, N))]) c.argmin_in_K = true;
  return c;
}

double discrete_energy(const Field& prev, const Field& cur, const Field& next, double dx, double dt) {
  const std::size_t n = cur.size();
  double e = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double v = (next[j] - prev[j]) / (2.0 * dt);
    const double g = (cur[(j + 1) % n] - cur[j]) / dx;
    const double u2 = cur[j] * cur[j];
    e += v * v + g * g - u2 * u2;
  }
  return e * dx;
}

}  // namespace blowup
