#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/grid.hpp"
#include "core/integrator.hpp"
#include "core/pipeline.hpp"
#include "core/profile.hpp"
#include "core/verifier.hpp"

namespace blowup {

struct ExpandSettings {
  double T_hi = 0.1;
  double T_lo = 1e-3;
  int per_decade = 8;
  int oracle_order = 6;
};

struct VerifySettings {
  std::string mode = "periodic";  ///< periodic | dirichlet
  SubDomain omega;
  int trace_stride = 1;
  double K_tol = 1e-12;  ///< |psi| <= K_tol defines K
};

struct CheckSettings {
  int surfaces = 50;
  double perturb_A = 0.0;       ///< added to A(0, 1) before the matrix checks
  double perturb_oracle = 0.0;  ///< added to the oracle's u0 before the comparison
};

/// Everything a subcommand needs. Sections of the INI file map onto the members.
struct RunConfig {
  GridSpec grid;
  /// Shape of psi at lambda = 1; the surface used is surface.scaled(lambda).
  Profile surface = Profile::cosine_well(1.0);
  double lambda = 0.05;
  Profile datum = Profile::bump(1.0, 0.0, 1.0);
  double theta = 0.0;

  double s0 = 2.0;
  double sigma = 8.0;
  double s = 3.0;

  double epsilon = 1.0;
  double alpha = 0.0;  ///< 0 selects the smallest admissible alpha

  IntegratorConfig integrator;
  int seed_order = 4;
  int dump_every = 0;  ///< simulate: write the state every N steps (0 = off)

  VerifierConfig verifier;
  VerifySettings verify;
  bool write_trace = false;  ///< construct: also record the boundary trace

  ExpandSettings expand;

  std::vector<double> sweep_lambdas{0.0, 0.002, 0.004, 0.008, 0.016, 0.032, 0.064};
  std::vector<double> sweep_thetas{0.0, 1e-6, 1e-5, 1e-4};
  int threads = 0;

  std::string out = "out";
  std::uint64_t seed = 12345;

  CheckSettings check;

  /// Throws InvalidConfig on inconsistent values.
  void validate() const;

  Profile scaled_surface() const { return surface.scaled(lambda); }
  PipelineConfig pipeline() const;
  /// Verifier settings; t_max = 0 becomes alpha - psi_min + 0.5.
  VerifierConfig verifier_for(double alpha, double psi_min) const;
};

RunConfig default_config();

/// Parses INI text on top of the defaults. Unknown sections or keys are errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// `section.key=value` override.
void apply_override(RunConfig& cfg, const std::string& assignment);
void set_value(RunConfig& cfg, const std::string& section, const std::string& key, const std::string& value);

/// Canonical INI text; parse_config(to_ini(c)) reproduces c.
std::string to_ini(const RunConfig& cfg);

/// FNV-1a over the canonical INI text.
std::uint64_t config_hash(const RunConfig& cfg);

}  // namespace blowup
