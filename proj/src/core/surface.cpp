#include "core/surface.hpp"

#include <sstream>

#include "core/error.hpp"

namespace blowup {

void BlowupSurface::check_assumptions() const {
  const double g = sup_grad();
  const double p = sup_psi();
  if (!(g < 1.0)) {
    std::ostringstream os;
    os << "sup|grad psi| = " << g << " must be < 1";
    throw Error(ErrorKind::AssumptionViolation, os.str());
  }
  if (!(p < 1.0)) {
    std::ostringstream os;
    os << "sup|psi| = " << p << " must be < 1";
    throw Error(ErrorKind::AssumptionViolation, os.str());
  }
}

BlowupSurface build_surface(const Profile& generator, const GridSpec& grid) {
  grid.validate();
  BlowupSurface s;
  s.grid_ = grid;
  s.generator_ = generator;
  const auto n = static_cast<std::size_t>(grid.points);
  for (auto& f : s.derivs_) f.assign(n, 0.0);
  for (int j = 0; j < grid.points; ++j) {
    const auto d = generator.derivatives(grid.x(j), BlowupSurface::kMaxDerivative);
    for (int k = 0; k <= BlowupSurface::kMaxDerivative; ++k) {
      s.derivs_[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = d[static_cast<std::size_t>(k)];
    }
  }
  s.gamma_.resize(n);
  for (std::size_t j = 0; j < n; ++j) s.gamma_[j] = 1.0 - s.derivs_[1][j] * s.derivs_[1][j];
  s.check_assumptions();
  return s;
}

BlowupSurface scale_surface(const BlowupSurface& s, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::AssumptionViolation, "scale factor must be finite and nonnegative");
  }
  BlowupSurface r;
  r.grid_ = s.grid_;
  r.generator_ = s.generator_.scaled(lambda);
  for (std::size_t k = 0; k < r.derivs_.size(); ++k) {
    r.derivs_[k] = s.derivs_[k];
    for (double& v : r.derivs_[k]) v *= lambda;
  }
  r.gamma_.resize(r.derivs_[1].size());
  for (std::size_t j = 0; j < r.gamma_.size(); ++j) r.gamma_[j] = 1.0 - r.derivs_[1][j] * r.derivs_[1][j];
  r.check_assumptions();
  return r;
}

std::vector<bool> zero_set_indicator(const BlowupSurface& s, double tol) {
  const Field& psi = s.psi();
  const double top = max_of(psi);
  if (top > tol) {
    std::ostringstream os;
    os << "psi must be nonpositive; max psi = " << top;
    throw Error(ErrorKind::ShapeViolation, os.str());
  }
  std::vector<bool> k(psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j) k[j] = std::abs(psi[j]) <= tol;
  return k;
}

}  // namespace blowup
