#pragma once

// Ground-truth connection matrices from direct integration of
// y'' + R y = 0 along complex paths.

#include <array>
#include <optional>

#include "phaseint/algebra.hpp"
#include "phaseint/phase.hpp"

namespace phaseint {

struct OdeState {
  cplx y, dy;
};

struct OracleOptions {
  /// Local error tolerance of the Runge-Kutta pair.
  double tol = 1e-10;
  /// Endpoints are advanced outward until |epsilon| drops below this.
  double matching_eps = 1e-8;
  bool extend = true;
  /// Phase at the path start relative to the basepoint; computed from
  /// `basepoint_leg` (start -> basepoint) or a straight leg when absent.
  std::optional<cplx> omega_start;
  std::optional<PathSpec> basepoint_leg;
  /// Alternative route for the ODE only. Must share endpoints with the
  /// branch path and wind identically around every pole of R.
  std::optional<PathSpec> transport_path;
  /// Distribute the error budget over the accumulated phase length rather
  /// than per step.
  bool error_per_phase = true;
  long max_steps = 5'000'000;
};

struct ExactFResult {
  ConnectionMatrix matrix;
  PathSpec path;          // branch path after endpoint extension
  cplx basepoint;
  double eps_start = 0.0;
  double eps_end = 0.0;
  double ode_tolerance = 0.0;
  cplx omega_start, omega_end;
  long steps = 0;
};

/// Integrates the two solutions seeded by `init` along `path`
/// (dy/dz = y', dy'/dz = -R y). Throws StiffnessFailure when step control
/// underflows and PathClash when the path meets a pole.
std::array<OdeState, 2> transport(const RationalIntegrand& R, const PathSpec& path,
                                  std::array<OdeState, 2> init, const OracleOptions& opt,
                                  long* steps = nullptr);

/// Exact F-matrix of `path` in the basis y+- = q^{-1/2} exp(+-i omega),
/// omega measured from `basepoint`. The sheet must be anchored at the
/// path start.
ExactFResult exact_fmatrix(const BranchSheet& sheet, const PathSpec& path, cplx basepoint,
                           const OracleOptions& opt = {});

enum class StokesForm { S, ST };

struct StokesExtraction {
  cplx s;
  double residual;
};

/// Reads s from a matrix close to S[s] or S^T[s]. Throws WrongForm when
/// the remaining entries deviate from the pattern by more than `budget`.
StokesExtraction extract_stokes_constant(const ConnectionMatrix& F, StokesForm form,
                                         double budget = 1e-2);

struct MonodromyResult {
  ConnectionMatrix matrix;     // W[Omega] F_cont
  ConnectionMatrix continued;  // F in the basis continued around the loop
  cplx loop_phase;             // Omega, the closed phase integral
};

/// Monodromy around a closed loop starting at the sheet anchor. The result
/// expresses the continued solution in the original basis; for Weber-type
/// growth it equals -I.
MonodromyResult monodromy(const BranchSheet& sheet, const PathSpec& loop, const OracleOptions& opt = {});

/// Radial contraction of a loop for ODE transport: in along the ray to
/// `inner`, once around a circle of that radius, back out.
PathSpec contracted_loop(cplx start, double inner, int turns = 1, int n = 64);

}  // namespace phaseint
