#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "secrecy/feasibility.hpp"
#include "support.hpp"

using namespace secrecy;
using namespace testsupport;

namespace {

// Scalar instance with effective noises 1 and 2 and cap 3: the confidential
// endpoint sits at alpha = 0.6 and the common endpoint at alpha = 1.5.
Eigen::RowVectorXd scalar_h1() {
  Eigen::RowVectorXd h(1);
  h << 1.0;
  return h;
}

Eigen::RowVectorXd scalar_h2() {
  Eigen::RowVectorXd h(1);
  h << 1.0 / std::sqrt(2.0);
  return h;
}

bool witness_valid(const FeasibilityProblem& p, const FeasibilityResult& r,
                   double tol = 1e-6) {
  if (r.witness.size() != static_cast<std::size_t>(p.unknown_count)) {
    return false;
  }
  for (const auto& ineq : p.inequalities) {
    if (ineq.value(r.witness) < -tol) return false;
  }
  for (const auto& b : r.witness) {
    if (!psd_check(b, tol)) return false;
  }
  if (const auto* box = std::get_if<ConeBox>(&p.cone)) {
    if (!loewner_leq(r.witness[0], box->S, tol)) return false;
  } else {
    const auto& tp = std::get<ConeTracePair>(p.cone);
    double tr = 0.0;
    for (const auto& b : r.witness) tr += b.mat().trace();
    if (tr > tp.P + tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("linear functional evaluation") {
  LinearFunctional f{{SymMatrix::Identity(2)}, -1.5};
  CHECK(f.value({SymMatrix::Identity(2)}) == doctest::Approx(0.5));
  LinearFunctional g{{SymMatrix::Identity(2), SymMatrix::Scalar(0.0)}, 0.0};
  CHECK_THROWS_AS(g.value({SymMatrix::Identity(2)}), DimensionError);
}

TEST_CASE("unconstrained box problem is feasible with an interior witness") {
  FeasibilityProblem p;
  p.dim = 2;
  p.unknown_count = 1;
  p.cone = ConeBox{SymMatrix::Identity(2)};
  FeasibilityResult r = solve(p);
  CHECK(r.status == FeasStatus::Feasible);
  REQUIRE(r.witness.size() == 1);
  CHECK(psd_check(r.witness[0]));
  CHECK(loewner_leq(r.witness[0], SymMatrix::Identity(2)));
}

TEST_CASE("trace demand beyond the box is infeasible") {
  FeasibilityProblem p;
  p.dim = 2;
  p.unknown_count = 1;
  p.cone = ConeBox{SymMatrix::Identity(2)};
  // tr(B) >= 10 while 0 <= B <= I caps tr(B) at 2.
  p.inequalities.push_back({{SymMatrix::Identity(2)}, -10.0});
  CHECK(solve(p).status == FeasStatus::Infeasible);
  CHECK(brute_force_feasible(p, 15).status != FeasStatus::Feasible);
}

TEST_CASE("boundary system structure") {
  FeasibilityProblem p41 =
      build_problem_41(example_h1().row(0), example_h2().row(0), example_S(),
                       0.5, 0.5);
  CHECK(p41.dim == 2);
  CHECK(p41.unknown_count == 1);
  CHECK(p41.inequalities.size() == 3);
  CHECK(std::holds_alternative<ConeBox>(p41.cone));

  FeasibilityProblem p42 =
      build_problem_42(example_h1().row(0), example_h2().row(0), 5.0, 0.5, 0.5);
  CHECK(p42.unknown_count == 2);
  CHECK(std::holds_alternative<ConeTracePair>(p42.cone));
}

TEST_CASE("scalar box system: known alpha thresholds") {
  const SymMatrix S = SymMatrix::Scalar(3.0);
  auto status = [&](double alpha, double gamma0) {
    return solve_with_fallback(
               build_problem_41(scalar_h1(), scalar_h2(), S, alpha, gamma0))
        .status;
  };
  // Confidential endpoint: R1_max = 0.5*log2(1.6), i.e. alpha* = 0.6.
  CHECK(status(0.59, 0.0) == FeasStatus::Feasible);
  CHECK(status(0.61, 0.0) == FeasStatus::Infeasible);
  // Common endpoint: R0_max = 0.5*log2(2.5), i.e. alpha* = 1.5.
  CHECK(status(1.49, 1.0) == FeasStatus::Feasible);
  CHECK(status(1.51, 1.0) == FeasStatus::Infeasible);
  // Absurdly large rate demands are infeasible everywhere.
  CHECK(status(1e6, 0.3) == FeasStatus::Infeasible);
}

TEST_CASE("scalar total-power system: known alpha threshold") {
  Eigen::RowVectorXd h2(1);
  h2 << 0.5;
  auto status = [&](double alpha, double gamma0) {
    return solve_with_fallback(
               build_problem_42(scalar_h1(), h2, 3.0, alpha, gamma0))
        .status;
  };
  // All power on the confidential stream: alpha* = 4/1.75 - 1.
  const double astar = 4.0 / 1.75 - 1.0;
  CHECK(status(astar - 0.01, 0.0) == FeasStatus::Feasible);
  CHECK(status(astar + 0.01, 0.0) == FeasStatus::Infeasible);
  CHECK(status(1e6, 0.7) == FeasStatus::Infeasible);
}

TEST_CASE("feasible verdicts come with checkable witnesses") {
  std::mt19937 rng(47);
  std::uniform_real_distribution<double> ua(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    Eigen::RowVectorXd h1 = random_matrix(rng, 1, 2).row(0);
    Eigen::RowVectorXd h2 = random_matrix(rng, 1, 2).row(0);
    SymMatrix S = random_spd(rng, 2, 2.0);
    FeasibilityProblem p = build_problem_41(h1, h2, S, ua(rng), ua(rng));
    FeasibilityResult r = solve_with_fallback(p);
    if (r.status == FeasStatus::Feasible) {
      CHECK(witness_valid(p, r));
    }
    FeasibilityProblem q =
        build_problem_42(h1, h2, 1.0 + 3.0 * ua(rng), ua(rng), ua(rng));
    FeasibilityResult rq = solve_with_fallback(q);
    if (rq.status == FeasStatus::Feasible) {
      CHECK(witness_valid(q, rq));
    }
  }
}

TEST_CASE("feasibility is downward closed in alpha") {
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> ua(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    Eigen::RowVectorXd h1 = random_matrix(rng, 1, 2).row(0);
    Eigen::RowVectorXd h2 = random_matrix(rng, 1, 2).row(0);
    SymMatrix S = random_spd(rng, 2, 2.0);
    const double gamma0 = ua(rng);
    const double alpha = 0.1 + ua(rng);
    FeasibilityResult hi =
        solve_with_fallback(build_problem_41(h1, h2, S, alpha, gamma0));
    if (hi.status == FeasStatus::Feasible) {
      FeasibilityResult lo = solve_with_fallback(
          build_problem_41(h1, h2, S, 0.5 * alpha, gamma0));
      CHECK(lo.status == FeasStatus::Feasible);
    }
  }
}

TEST_CASE("grid oracle agrees with the interior-point decision") {
  std::mt19937 rng(59);
  std::uniform_real_distribution<double> ua(0.0, 1.0);
  int decided = 0;
  for (int i = 0; i < 40; ++i) {
    Eigen::RowVectorXd h1 = random_matrix(rng, 1, 2).row(0);
    Eigen::RowVectorXd h2 = random_matrix(rng, 1, 2).row(0);
    SymMatrix S = random_spd(rng, 2, 2.0);
    FeasibilityProblem p = build_problem_41(h1, h2, S, ua(rng), ua(rng));
    FeasibilityResult ip = solve(p);
    FeasibilityResult grid = brute_force_feasible(p, 41);
    if (ip.status == FeasStatus::Feasible) {
      ++decided;
      // A strictly interior point must be visible to a fine grid too.
      CHECK(grid.status == FeasStatus::Feasible);
    } else if (grid.status == FeasStatus::Feasible) {
      // The grid witness is sound, so the solver must not claim infeasible
      // with room to spare.
      CHECK(witness_valid(p, grid));
      CHECK(ip.status != FeasStatus::Infeasible);
    }
  }
  CHECK(decided > 5);  // the sweep must exercise the feasible branch
}

TEST_CASE("fallback resolves dead-band verdicts at small dimension") {
  std::mt19937 rng(61);
  std::uniform_real_distribution<double> ua(0.0, 1.0);
  for (int i = 0; i < 25; ++i) {
    Eigen::RowVectorXd h1 = random_matrix(rng, 1, 2).row(0);
    Eigen::RowVectorXd h2 = random_matrix(rng, 1, 2).row(0);
    SymMatrix S = random_spd(rng, 2, 2.0);
    FeasibilityProblem p = build_problem_41(h1, h2, S, ua(rng), ua(rng));
    CHECK(solve_with_fallback(p).status != FeasStatus::Undecided);
  }
}
