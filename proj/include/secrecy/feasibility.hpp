#pragma once

#include <functional>
#include <limits>
#include <variant>
#include <vector>

#include "secrecy/matrix.hpp"

namespace secrecy {

// Dead band for the phase-1 feasibility decision: strictly interior slack
// above +kFeasDeadBand means Feasible, certified optimum below -kFeasDeadBand
// means Infeasible, anything between is Undecided.
inline constexpr double kFeasDeadBand = 1e-7;

/// Affine functional of one or two symmetric unknowns:
/// value(B...) = sum_j tr(coeff[j] * B_j) + offset, required >= 0.
struct LinearFunctional {
  std::vector<SymMatrix> coeff;  // one entry per unknown
  double offset = 0.0;

  double value(const std::vector<SymMatrix>& unknowns) const;
};

struct ConeBox {
  SymMatrix S;  // 0 <= B <= S (Loewner)
};

struct ConeTracePair {
  double P;  // B1, B2 >= 0, tr(B1 + B2) <= P
};

struct FeasibilityProblem {
  Eigen::Index dim = 0;
  std::vector<LinearFunctional> inequalities;
  std::variant<ConeBox, ConeTracePair> cone = ConeTracePair{0.0};
  int unknown_count = 1;
};

enum class FeasStatus { Feasible, Infeasible, Undecided };

struct FeasibilityResult {
  FeasStatus status = FeasStatus::Undecided;
  std::vector<SymMatrix> witness;  // populated when Feasible
  double max_violation = 0.0;      // best-effort residual when Infeasible
};

// Boundary-check system for a secrecy rate pair under a matrix power
// constraint: the three scalar rows in B plus the box 0 <= B <= S.
FeasibilityProblem build_problem_41(const Eigen::RowVectorXd& h1,
                                    const Eigen::RowVectorXd& h2,
                                    const SymMatrix& S, double alpha,
                                    double gamma0);

// Total-power variant over a pair (B1, B2) with tr(B1 + B2) <= P.
FeasibilityProblem build_problem_42(const Eigen::RowVectorXd& h1,
                                    const Eigen::RowVectorXd& h2, double P,
                                    double alpha, double gamma0);

// Phase-1 interior-point decision: maximize the minimum slack s over the
// scalar rows and cone eigenvalues via a log-det barrier and damped Newton
// steps.  Feasible iff s* > kFeasDeadBand, Infeasible iff s* < -kFeasDeadBand,
// Undecided in the dead band.
FeasibilityResult solve(const FeasibilityProblem& problem);

// Exhaustive grid scan, t <= 2 only.  Test oracle: Feasible is sound
// (a checked witness exists); Infeasible only says the grid found nothing.
FeasibilityResult brute_force_feasible(const FeasibilityProblem& problem,
                                       int grid_n);

// solve() with a grid fallback at t <= 2 when the phase-1 result lands in the
// dead band.
FeasibilityResult solve_with_fallback(const FeasibilityProblem& problem,
                                      int fallback_grid_n = 41);

/// A rate region traced through the (alpha, gamma0) parameterization: a
/// problem builder per parameter point plus scalar caps.
struct RegionDescriptor {
  std::function<FeasibilityProblem(double alpha, double gamma0)> make_problem;
  double alpha_upper_seed = 1.0;
  // Optional sum-rate cap in bits (R0 + R1 <= cap); +inf when absent.
  double sum_rate_cap_bits = std::numeric_limits<double>::infinity();
};

}  // namespace secrecy
