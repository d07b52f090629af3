#include "core/reduced.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/error.hpp"

namespace blowup {

namespace {

constexpr int kSeriesCap = 1000;

Field scaled(const Field& f, double a) {
  Field r(f);
  for (double& v : r) v *= a;
  return r;
}

Field zeros_like(const Field& f) { return Field(f.size(), 0.0); }

}  // namespace

Eigen::Matrix3d SystemMatrices::constant_A() {
  Eigen::Matrix3d A;
  A << 3.0, -1.0, 0.0, -6.0, 2.0, 0.0, 0.0, 0.0, 2.0;
  return A;
}

Eigen::Matrix3d SystemMatrices::Q(int j) const {
  return Eigen::Vector3d(1.0, gamma[static_cast<std::size_t>(j)], 1.0).asDiagonal();
}

Eigen::Matrix3d SystemMatrices::A1(int j) const {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m(1, 1) = -2.0 * psi_x[static_cast<std::size_t>(j)];
  m(1, 2) = 1.0;
  m(2, 1) = 1.0;
  return m;
}

Eigen::Matrix3d SystemMatrices::V(int j) const {
  return Eigen::Vector3d(6.0 * gamma[static_cast<std::size_t>(j)], 1.0, 1.0).asDiagonal();
}

SystemMatrices assemble_matrices(const BlowupSurface& s, double gamma_floor) {
  if (s.inf_gamma() < gamma_floor) {
    std::ostringstream os;
    os << "inf gamma = " << s.inf_gamma() << " below floor " << gamma_floor;
    throw Error(ErrorKind::DegenerateSurface, os.str());
  }
  SystemMatrices m;
  m.gamma = s.gamma();
  m.psi_x = s.grad_psi();
  m.A = SystemMatrices::constant_A();
  return m;
}

MatrixCheck check_matrices(const SystemMatrices& m) {
  MatrixCheck c;
  c.min_vqa_eigenvalue = std::numeric_limits<double>::infinity();
  c.min_q_eigenvalue = std::numeric_limits<double>::infinity();
  for (int j = 0; j < m.size(); ++j) {
    const Eigen::Matrix3d Q = m.Q(j);
    const Eigen::Matrix3d A1 = m.A1(j);
    const Eigen::Matrix3d V = m.V(j);
    c.q_asymmetry = std::max(c.q_asymmetry, (Q - Q.transpose()).cwiseAbs().maxCoeff());
    c.a1_asymmetry = std::max(c.a1_asymmetry, (A1 - A1.transpose()).cwiseAbs().maxCoeff());
    c.va1_defect = std::max(c.va1_defect, (V * A1 - A1).cwiseAbs().maxCoeff());
    const Eigen::Matrix3d vqa = V * Q * m.A;
    c.vqa_asymmetry = std::max(c.vqa_asymmetry, (vqa - vqa.transpose()).cwiseAbs().maxCoeff());
    const Eigen::Matrix3d sym = 0.5 * (vqa + vqa.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(sym, Eigen::EigenvaluesOnly);
    c.min_vqa_eigenvalue = std::min(c.min_vqa_eigenvalue, es.eigenvalues().minCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> qs(Q, Eigen::EigenvaluesOnly);
    c.min_q_eigenvalue = std::min(c.min_q_eigenvalue, qs.eigenvalues().minCoeff());
  }
  Eigen::EigenSolver<Eigen::Matrix3d> ea(m.A, false);
  std::array<double, 3> ev{};
  for (int i = 0; i < 3; ++i) ev[static_cast<std::size_t>(i)] = ea.eigenvalues()(i).real();
  std::sort(ev.begin(), ev.end());
  c.a_spectrum = ev;
  c.null_defect = (m.A * Eigen::Vector3d(1.0, 3.0, 0.0)).norm();
  return c;
}

ReducedState ReducedState::zeros(int n, double T) {
  ReducedState s;
  s.T = T;
  s.w.assign(static_cast<std::size_t>(n), 0.0);
  s.w0c = s.w;
  s.w1 = s.w;
  return s;
}

ReducedState ReducedState::from_datum(const Field& w0, double T) {
  ReducedState s;
  s.T = T;
  s.w = w0;
  s.w0c = scaled(w0, 3.0);
  s.w1 = zeros_like(w0);
  return s;
}

double ReducedState::sup_norm() const { return std::max({sup_abs(w), sup_abs(w0c), sup_abs(w1)}); }

void ReducedState::axpy(double a, const ReducedState& o) {
  for (int i = 0; i < 3; ++i) {
    Field& dst = component(i);
    const Field& src = o.component(i);
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += a * src[j];
  }
}

ReducedModel::ReducedModel(const BlowupSurface& s, const ExpansionCoefficients& c, const Field& w0, int seed_order)
    : surface_(s), coeffs_(c), spectral_(s.grid()), matrices_(assemble_matrices(s)), w0_(w0), seed_order_(seed_order) {
  if (static_cast<int>(w0.size()) != s.size()) throw Error(ErrorKind::InvalidConfig, "datum size does not match the grid");
  if (seed_order < 0) throw Error(ErrorKind::InvalidConfig, "seed order must be nonnegative");
  const std::size_t n = w0.size();
  inv_gamma_.resize(n);
  for (std::size_t j = 0; j < n; ++j) inv_gamma_[j] = 1.0 / s.gamma()[j];

  E_ = truncated_expansion(c, 0);
  P_ = E_.shifted(1);
  P2mg_ = P_.times(P_).band(1, kSeriesCap);

  // rho = (residual of E, orders >= 2) / T; the lower orders vanish identically.
  const LogSeries rho = expansion_residual(c, s).band(kFirstResidualPower, kSeriesCap).shifted(-1);
  LogSeries f0 = rho * -1.0;
  f0.add_term(2, 1, c.u(ExpansionCoefficients::kU41, 2), -1.0);
  forcing0c_ = f0.times(inv_gamma_);
  const Field& u41x = c.u(ExpansionCoefficients::kU41, 1);
  forcing1_ = LogSeries(n);
  forcing1_.add_term(1, 0, u41x);
  forcing1_.add_term(1, 1, u41x, 3.0);

  // Series solution: (m + A) c_{m,l} + (l + 1) c_{m,l+1} = B_{m,l}.
  const ReducedState c0 = ReducedState::from_datum(w0);
  for (int i = 0; i < 3; ++i) {
    seed_[static_cast<std::size_t>(i)] = LogSeries(n);
    seed_[static_cast<std::size_t>(i)].add_term(0, 0, c0.component(i));
  }
  for (int m = 1; m <= seed_order; ++m) {
    const auto B = series_B(seed_, m);
    int top = 0;
    for (const auto& b : B) top = std::max(top, b.band(m, m).max_log_power());
    std::array<Field, 3> above{Field(n, 0.0), Field(n, 0.0), Field(n, 0.0)};
    for (int l = top; l >= 0; --l) {
      std::array<Field, 3> rhs;
      for (int i = 0; i < 3; ++i) {
        rhs[static_cast<std::size_t>(i)] = B[static_cast<std::size_t>(i)].coefficient(m, l);
        for (std::size_t j = 0; j < n; ++j) rhs[static_cast<std::size_t>(i)][j] -= (l + 1) * above[static_cast<std::size_t>(i)][j];
      }
      const double det = static_cast<double>(m) * (m + 5);
      std::array<Field, 3> sol{Field(n), Field(n), Field(n)};
      for (std::size_t j = 0; j < n; ++j) {
        const double a = rhs[0][j];
        const double b = rhs[1][j];
        sol[0][j] = ((m + 2) * a + b) / det;
        sol[1][j] = (6.0 * a + (m + 3) * b) / det;
        sol[2][j] = rhs[2][j] / (m + 2);
      }
      for (int i = 0; i < 3; ++i) seed_[static_cast<std::size_t>(i)].add_term(m, l, sol[static_cast<std::size_t>(i)]);
      above = sol;
    }
  }
}

std::array<LogSeries, 3> ReducedModel::series_B(const std::array<LogSeries, 3>& W, int max_power) const {
  const std::size_t n = w0_.size();
  const Field& psi_x = surface_.derivative(1);
  const Field& psi_xx = surface_.derivative(2);
  auto deriv = [this](const Field& f) { return d(f); };

  const LogSeries& Ww = W[0];
  const LogSeries& W0 = W[1];
  const LogSeries& W1 = W[2];

  LogSeries transport = W1.map(deriv);
  transport -= W0.map(deriv).times(scaled(psi_x, 2.0));
  transport -= W0.times(psi_xx);
  LogSeries row1 = transport.shifted(1);
  row1 += 6.0 * P2mg_.times(Ww, max_power);
  if (max_power >= 4) {
    const LogSeries w2 = Ww.times(Ww, max_power - 4);
    row1 += 6.0 * P_.times(w2, max_power - 4).shifted(4);
  }
  if (max_power >= 8) {
    const LogSeries w3 = Ww.times(Ww, max_power - 8).times(Ww, max_power - 8);
    row1 += 2.0 * w3.shifted(8);
  }
  LogSeries b1 = row1.times(inv_gamma_);
  b1 += forcing0c_;

  LogSeries b2 = W0.map(deriv).shifted(1);
  b2 += forcing1_;

  std::array<LogSeries, 3> B{LogSeries(n), b1.band(std::numeric_limits<int>::min(), max_power),
                             b2.band(std::numeric_limits<int>::min(), max_power)};
  return B;
}

const ReducedModel::ShiftData& ReducedModel::shift_data(int h) const {
  std::lock_guard<std::mutex> lock(*shift_mutex_);
  auto it = shifts_.find(h);
  if (it != shifts_.end()) return *it->second;
  auto data = std::make_shared<ShiftData>();
  const std::size_t n = w0_.size();
  for (int i = 0; i < 3; ++i) data->S[static_cast<std::size_t>(i)] = seed_[static_cast<std::size_t>(i)].band(0, h - 1);
  for (auto& s : data->S)
    if (s.points() == 0) s = LogSeries(n);
  const auto B = series_B(data->S, kSeriesCap);
  const Eigen::Matrix3d& A = matrices_.A;
  for (int i = 0; i < 3; ++i) {
    LogSeries r = B[static_cast<std::size_t>(i)];
    r -= data->S[static_cast<std::size_t>(i)].D();
    for (int k = 0; k < 3; ++k)
      if (A(i, k) != 0.0) r -= A(i, k) * data->S[static_cast<std::size_t>(k)];
    data->residual[static_cast<std::size_t>(i)] = r.band(h, kSeriesCap).shifted(-h);
  }
  shifts_.emplace(h, data);
  return *data;
}

ReducedState ReducedModel::to_shifted(const ReducedState& w, int h) const {
  if (h == 0) return w;
  const ShiftData& sd = shift_data(h);
  ReducedState z = w;
  const double scale = std::pow(w.T, -h);
  for (int i = 0; i < 3; ++i) {
    const Field S = sd.S[static_cast<std::size_t>(i)].evaluate(w.T);
    Field& zi = z.component(i);
    for (std::size_t j = 0; j < zi.size(); ++j) zi[j] = (zi[j] - S[j]) * scale;
  }
  return z;
}

ReducedState ReducedModel::from_shifted(const ReducedState& z, int h) const {
  if (h == 0) return z;
  const ShiftData& sd = shift_data(h);
  ReducedState w = z;
  const double scale = std::pow(z.T, h);
  for (int i = 0; i < 3; ++i) {
    const Field S = sd.S[static_cast<std::size_t>(i)].evaluate(z.T);
    Field& wi = w.component(i);
    for (std::size_t j = 0; j < wi.size(); ++j) wi[j] = S[j] + scale * wi[j];
  }
  return w;
}

ReducedState ReducedModel::rhs_shifted(const ReducedState& z, int h) const {
  const double T = z.T;
  if (!(T > 0.0)) throw Error(ErrorKind::SingularTime, "reduced right-hand side needs T > 0");
  const std::size_t n = z.w.size();
  const ShiftData* sd = h == 0 ? nullptr : &shift_data(h);

  Field Sw(n, 0.0);
  if (sd) Sw = sd->S[0].evaluate(T);
  const double Th = std::pow(T, h);
  const Field P = P_.evaluate(T);
  const Field P2mg = P2mg_.evaluate(T);
  const double T4 = std::pow(T, 4);
  const double T8 = T4 * T4;

  const Field dz0 = d(z.w0c);
  const Field dz1 = d(z.w1);
  const Field& psi_x = surface_.derivative(1);
  const Field& psi_xx = surface_.derivative(2);
  const Eigen::Matrix3d& A = matrices_.A;

  ReducedState out = ReducedState::zeros(static_cast<int>(n), T);
  for (std::size_t j = 0; j < n; ++j) {
    const Eigen::Vector3d zj(z.w[j], z.w0c[j], z.w1[j]);
    const Eigen::Vector3d lin = -(A * zj) - h * zj;
    const double ww = Sw[j] + Th * z.w[j];
    const double zw = z.w[j];
    double b1 = T * (dz1[j] - 2.0 * psi_x[j] * dz0[j] - psi_xx[j] * z.w0c[j]);
    b1 += 6.0 * P2mg[j] * zw;
    b1 += 6.0 * P[j] * T4 * zw * (ww + Sw[j]);
    b1 += 2.0 * T8 * zw * (ww * ww + ww * Sw[j] + Sw[j] * Sw[j]);
    out.w[j] = lin(0);
    out.w0c[j] = lin(1) + b1 * inv_gamma_[j];
    out.w1[j] = lin(2) + T * dz0[j];
  }
  if (sd) {
    for (int i = 0; i < 3; ++i) {
      const Field r = sd->residual[static_cast<std::size_t>(i)].evaluate(T);
      Field& o = out.component(i);
      for (std::size_t j = 0; j < n; ++j) o[j] += r[j];
    }
  } else {
    const Field f0 = forcing0c_.evaluate(T);
    const Field f1 = forcing1_.evaluate(T);
    for (std::size_t j = 0; j < n; ++j) {
      out.w0c[j] += f0[j];
      out.w1[j] += f1[j];
    }
  }
  return out;
}

ReducedState ReducedModel::rhs(const ReducedState& w) const { return rhs_shifted(w, 0); }

SolutionFields ReducedModel::reconstruct(const ReducedState& w) const {
  const double T = w.T;
  if (!(T > 0.0)) throw Error(ErrorKind::SingularTime, "reconstruction needs T > 0");
  SolutionFields f;
  f.u = E_.evaluate(T);
  f.u0 = E_.dT().evaluate(T);
  f.u1 = Field(w.w.size(), 0.0);
  const double T2 = T * T;
  const double T3 = T2 * T;
  for (std::size_t j = 0; j < f.u.size(); ++j) {
    f.u[j] += T3 * w.w[j];
    f.u0[j] += T2 * w.w0c[j];
    f.u1[j] = coeffs_.u(0, 1)[j] / T + coeffs_.u(1, 1)[j] + coeffs_.u(2, 1)[j] * T + coeffs_.u(3, 1)[j] * T2 + T2 * w.w1[j];
  }
  return f;
}

ReducedState ReducedModel::extract(const SolutionFields& f, double T) const {
  if (!(T > 0.0)) throw Error(ErrorKind::SingularTime, "extraction needs T > 0");
  const Field e = E_.evaluate(T);
  const Field et = E_.dT().evaluate(T);
  ReducedState w = ReducedState::zeros(static_cast<int>(e.size()), T);
  const double T2 = T * T;
  const double T3 = T2 * T;
  for (std::size_t j = 0; j < e.size(); ++j) {
    w.w[j] = (f.u[j] - e[j]) / T3;
    w.w0c[j] = (f.u0[j] - et[j]) / T2;
    const double lead = coeffs_.u(0, 1)[j] / T + coeffs_.u(1, 1)[j] + coeffs_.u(2, 1)[j] * T + coeffs_.u(3, 1)[j] * T2;
    w.w1[j] = (f.u1[j] - lead) / T2;
  }
  return w;
}

ReducedState ReducedModel::rhs_direct(const ReducedState& w) const {
  const double T = w.T;
  const SolutionFields f = reconstruct(w);
  const std::size_t n = f.u.size();
  const Field& gamma = surface_.gamma();
  const Field& psi_x = surface_.derivative(1);
  const Field& psi_xx = surface_.derivative(2);

  // First-order system: u_T = u_(0), gamma u_(0),T = d u_(1) - 2 psi' d u_(0) - psi'' u_(0) + 2 u^3, u_(1),T = d u_(0).
  const Field du0 = d(f.u0);
  const Field du1 = d(f.u1);
  Field ut = f.u0;
  Field u0t(n);
  for (std::size_t j = 0; j < n; ++j)
    u0t[j] = (du1[j] - 2.0 * psi_x[j] * du0[j] - psi_xx[j] * f.u0[j] + 2.0 * f.u[j] * f.u[j] * f.u[j]) / gamma[j];
  const Field& u1t = du0;

  const Field et = E_.dT().evaluate(T);
  const Field ett = E_.dT().dT().evaluate(T);
  ReducedState out = ReducedState::zeros(static_cast<int>(n), T);
  const double T2 = T * T;
  for (std::size_t j = 0; j < n; ++j) {
    out.w[j] = (ut[j] - et[j]) / T2 - 3.0 * w.w[j];
    out.w0c[j] = (u0t[j] - ett[j]) / T - 2.0 * w.w0c[j];
    const double lead_t = -coeffs_.u(0, 1)[j] / T2 + coeffs_.u(2, 1)[j] + 2.0 * coeffs_.u(3, 1)[j] * T;
    out.w1[j] = (u1t[j] - lead_t) / T - 2.0 * w.w1[j];
  }
  return out;
}

ReducedState ReducedModel::fuchsian_limit(const ReducedState& w) const {
  const Eigen::Matrix3d& A = matrices_.A;
  double defect = 0.0;
  for (std::size_t j = 0; j < w.w.size(); ++j)
    defect = std::max(defect, (A * Eigen::Vector3d(w.w[j], w.w0c[j], w.w1[j])).cwiseAbs().maxCoeff());
  if (defect > 1e-10) {
    std::ostringstream os;
    os << "state at T = 0 is not in the null space of A (|A w| = " << defect << ")";
    throw Error(ErrorKind::NullSpaceViolation, os.str());
  }
  return ReducedState::zeros(w.size(), 0.0);
}

ReducedState ReducedModel::seed(double T) const {
  ReducedState s;
  s.T = T;
  if (T == 0.0) {
    s.w = seed_[0].coefficient(0, 0);
    s.w0c = seed_[1].coefficient(0, 0);
    s.w1 = seed_[2].coefficient(0, 0);
    return s;
  }
  s.w = seed_[0].evaluate(T);
  s.w0c = seed_[1].evaluate(T);
  s.w1 = seed_[2].evaluate(T);
  return s;
}

EnergyReading ReducedModel::energy(const ReducedState& w, double s_index) const {
  EnergyReading r;
  r.T = w.T;
  r.sup_norm = w.sup_norm();
  const Field& gamma = surface_.gamma();
  const double dx = surface_.grid().spacing();
  const std::size_t n = w.w.size();
  std::array<Field, 3> weighted{Field(n), Field(n), Field(n)};
  double e0 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    e0 += 6.0 * gamma[j] * w.w[j] * w.w[j] + gamma[j] * w.w0c[j] * w.w0c[j] + w.w1[j] * w.w1[j];
    weighted[0][j] = std::sqrt(6.0 * gamma[j]) * w.w[j];
    weighted[1][j] = std::sqrt(gamma[j]) * w.w0c[j];
    weighted[2][j] = w.w1[j];
  }
  r.e0 = e0 * dx;
  double es = 0.0;
  for (const Field& f : weighted) {
    const double nf = spectral_.sobolev_norm(f, s_index);
    es += nf * nf;
  }
  r.es = es;
  if (w.T > 0.0) {
    const ReducedState Dw = rhs(w);
    double de = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      de += 6.0 * gamma[j] * w.w[j] * Dw.w[j] + gamma[j] * w.w0c[j] * Dw.w0c[j] + w.w1[j] * Dw.w1[j];
    r.De0 = 2.0 * de * dx;
  }
  return r;
}

}  // namespace blowup
