#pragma once

// Constant-modulus analog beamforming toward two users.
//
// Target: maximise |a1^H w| subject to |a2^H w| >= g and |w_k| = 1/sqrt(N),
// where g = sqrt(c2 / |lambda2|^2) is the array amplitude User 2 needs.
// The way there:
//
//  1. Both gains are stated on steering vectors; |lambda_i| drops out of
//     the objective and into g.
//  2. The modulus equalities |w_k| = 1/sqrt(N) are relaxed to |w_k| <= 1/sqrt(N).
//     The relaxed optimum sits on the boundary, so nothing is lost.
//  3. A global phase rotation of w changes no gain, so a1^H w may be taken
//     real and non-negative, turning the objective into Re(a1^H w).
//  4. The phase of a2^H w is fixed to one of M candidates phi_m = 2 pi m / M,
//     which makes each instance convex:
//         maximise Re(a1^H w)  s.t.  Re(e^{j phi} a2^H w) >= g,  |w_k| <= 1/sqrt(N).
//  5. Each instance is solved exactly through its Lagrangian, which separates
//     per antenna: for multiplier mu >= 0 the maximiser is
//         w_k(mu) = q_k / (|q_k| sqrt(N)),   q_k = [a1]_k + mu e^{-j phi} [a2]_k,
//     and the constraint value Re(e^{j phi} a2^H w(mu)) is non-decreasing in mu,
//     so mu is found by bisection.
//  6. Among the M instances the one with the largest |a1^H w| wins.

#include <optional>
#include <span>

#include "mmnoma/allocation.hpp"
#include "mmnoma/array.hpp"

namespace mmnoma {

inline constexpr double kDefaultSolverTol = 1e-8;
inline constexpr int kMaxBisectionIterations = 200;

struct BeamformingRequest {
  ComplexVector a1;  // steering vector toward User 1
  ComplexVector a2;  // steering vector toward User 2
  double g = 0;      // required |a2^H w|
  int num_phases = 20;
  double tol = kDefaultSolverTol;

  void validate() const;
};

struct BeamformingSolution {
  ComplexVector w;
  double objective = 0;         // |a1^H w|
  double user2_amplitude = 0;   // |a2^H w|
  int phase_index = 0;          // m in [1, M]; 0 for a standalone fixed-phase solve
  double dual_mu = 0;
};

/// Per-antenna maximiser of the Lagrangian for multiplier mu.
ComplexVector lagrangian_maximizer(const ComplexVector& a1, const ComplexVector& a2,
                                   double phi, double mu);

/// Re(e^{j phi} a2^H w).
double rotated_constraint_value(const ComplexVector& a2, const ComplexVector& w,
                                double phi);

/// Dual function sum_k |q_k| / sqrt(N) - mu g; an upper bound on the
/// fixed-phase optimum for every mu >= 0.
double fixed_phase_dual_bound(const ComplexVector& a1, const ComplexVector& a2,
                              double g, double phi, double mu);

/// Global optimum of one fixed-phase instance. Throws Errc::infeasible_gain
/// when g exceeds sqrt(N) + tol.
BeamformingSolution solve_fixed_phase(const ComplexVector& a1, const ComplexVector& a2,
                                      double g, double phi,
                                      double tol = kDefaultSolverTol);

/// Sweep over the M candidate phases; phase instances run on OpenMP threads
/// and are reduced by lowest-index argmax, so output matches the serial sweep.
BeamformingSolution solve_cm_beamforming(const BeamformingRequest& request);

namespace reference {
BeamformingSolution solve_cm_beamforming(const BeamformingRequest& request);
}  // namespace reference

inline constexpr int kMaxOracleAntennas = 6;
inline constexpr int kMaxOraclePhaseLevels = 256;

/// Exhaustive search over w_k = e^{j 2 pi q_k / levels} / sqrt(N). The first
/// entry is pinned to phase 0 since gains ignore a global rotation. Returns
/// nullopt when no candidate meets |a2^H w| >= g.
std::optional<BeamformingSolution> brute_force_beamformer(const ComplexVector& a1,
                                                          const ComplexVector& a2,
                                                          double g, int phase_levels);

struct VerificationReport {
  double cm_residual = 0;   // max_k ||w_k| - 1/sqrt(N)|
  double rate1 = 0;         // achieved, User 1 decoded first
  double rate2 = 0;
  bool rate1_met = false;
  bool rate2_met = false;
  double sum_rate = 0;
  double bound = 0;
  bool within_bound = false;
};

VerificationReport verify_solution(const BeamformingSolution& solution,
                                   const BeamformingRequest& request,
                                   const ComplexVector& h1, const ComplexVector& h2,
                                   const GainAllocation& alloc,
                                   const SystemParams& params);

/// max_k ||w_k| - 1/sqrt(N)|.
double constant_modulus_residual(const ComplexVector& w);

}  // namespace mmnoma
