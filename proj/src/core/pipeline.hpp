#pragma once

#include <memory>
#include <string>
#include <vector>

#include "core/integrator.hpp"
#include "core/profile.hpp"
#include "core/verifier.hpp"

namespace blowup {

/// Smallest alpha in {2.5, 3, 3.5, ...} with sqrt(|box|) (1/alpha + 1/alpha^2) < epsilon/4.
double choose_alpha(double epsilon, double s0, const GridSpec& grid);

struct SlicePart {
  Field u;
  Field ut;
};

/// u = 1/t + Phi + T^3 w on the slice t = alpha, split into its three parts.
struct ConstructedSlice {
  double alpha = 0.0;
  Field T;  ///< alpha - psi(x)
  SlicePart exact;
  SlicePart phi;
  SlicePart tail;
  SlicePart total;
  std::shared_ptr<const ReducedTrajectory> trajectory;
};

/// Throws ShapeViolation unless psi <= 0, TrajectoryTooShort if b < alpha - min psi,
/// InvalidConfig unless alpha > 2.
ConstructedSlice construct_solution(const BlowupSurface& s, const Field& w0, double alpha, const IntegratorConfig& cfg,
                                    int seed_order = 4);

struct ControlBudget {
  double epsilon = 0.0;
  double alpha = 0.0;
  double norm_exact = 0.0;
  double norm_phi = 0.0;
  double norm_tail = 0.0;
  double total = 0.0;
  bool pass = false;
};

struct Provenance {
  std::string surface;
  double lambda = 0.0;
  std::string datum;
  double theta = 0.0;
  double alpha = 0.0;
  GridSpec grid;
  IntegratorConfig integrator;
};

/// Cauchy data on t = 0 after reversal, with the three parts kept for the budget.
struct CauchyDataRecord {
  double slice_time = 0.0;
  double alpha = 0.0;
  GridSpec grid;
  Field u;
  Field ut;
  SlicePart exact;
  SlicePart phi;
  SlicePart tail;
  double s0 = 2.0;
  ControlBudget budget;
  Provenance provenance;
};

/// (u, u_t) -> (u, -u_t). Without a decomposition the exact part is the constant pair of 1/t
/// and everything else is booked as tail.
CauchyDataRecord time_reverse(const Field& u, const Field& ut, double alpha, const GridSpec& grid);
CauchyDataRecord time_reverse(const ConstructedSlice& slice, const GridSpec& grid);

/// Pair norms ||u||_{s0} + ||u_t||_{s0-1} of each part and of the total.
ControlBudget budget_report(const CauchyDataRecord& record, double epsilon);

/// Forward direct solve from the record; samples u on the boundary of omega. See record_boundary_trace.
BoundaryTrace extract_boundary_trace(const CauchyDataRecord& record, const SubDomain& omega, const VerifierConfig& cfg,
                                     int stride = 1);

/// Predicted blow-up time after reversal, alpha - psi(x).
Field predicted_blowup_time(const BlowupSurface& s, double alpha);

struct PipelineConfig {
  GridSpec grid;
  Profile surface = Profile::cosine_well(0.05);
  Profile bump = Profile::bump(1.0, 0.0, 1.0);
  double theta = 0.0;
  double epsilon = 1.0;
  double s0 = 2.0;
  double alpha = 0.0;  ///< 0 selects choose_alpha
  IntegratorConfig integrator;
  int seed_order = 4;
};

/// Surface, datum theta * Z, construction, reversal and budget in one call.
CauchyDataRecord run_pipeline(const PipelineConfig& cfg, std::shared_ptr<const ReducedTrajectory>* trajectory = nullptr);

struct SweepRow {
  double lambda = 0.0;
  double theta = 0.0;
  double alpha = 0.0;
  double norm_exact = 0.0;
  double norm_phi = 0.0;
  double norm_tail = 0.0;
  double total = 0.0;
  bool pass = false;
  std::string error;  ///< empty on success, otherwise "Kind: message"
};

struct SweepArgmin {
  double lambda = 0.0;
  double theta = 0.0;
  double total = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;         ///< sorted by total (failed cells last)
  std::vector<SweepArgmin> argmin;    ///< per lambda, the theta with the smallest total
};

/// Runs every (lambda, theta) cell; `base` is psi for lambda = 1. Cell failures become rows.
/// Parallel up to `threads` workers (0: hardware concurrency), capped by BLOWUP_THREADS.
SweepResult sweep(const std::vector<double>& lambdas, const std::vector<double>& thetas, const PipelineConfig& base,
                  int threads = 0);

/// Number of workers after applying the BLOWUP_THREADS cap.
int worker_count(int requested);

/// Bisection in lambda (theta from cfg) for the pass/fail boundary of the budget.
/// Requires pass at lo and failure at hi; returns the last passing lambda.
double lambda_threshold(const PipelineConfig& cfg, double lo, double hi, double tol = 1e-3);

}  // namespace blowup
