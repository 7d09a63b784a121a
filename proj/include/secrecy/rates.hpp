#pragma once

#include "secrecy/channel.hpp"
#include "secrecy/feasibility.hpp"
#include "secrecy/matrix.hpp"

namespace secrecy {

struct RatePair {
  double R0 = 0.0;  // common message, bits/use
  double R1 = 0.0;  // confidential message, bits/use
};

// Rate bounds for a general channel at covariance split B (0 <= B <= S).
// R1 is clamped at zero; the raw difference is available via wiretap_rate.
RatePair region_point_general(const GeneralMatrix& H1, const GeneralMatrix& H2,
                              const SymMatrix& S, const SymMatrix& B);

// Aligned form: bounds in terms of noise covariances N1, N2.
RatePair region_point_aligned(const SymMatrix& N1, const SymMatrix& N2,
                              const SymMatrix& S, const SymMatrix& B);

// Total-power form over a covariance pair: B1 confidential, B1 + B2 total.
RatePair region_point_total_power(const GeneralMatrix& H1,
                                  const GeneralMatrix& H2, const SymMatrix& B1,
                                  const SymMatrix& B2);

// Unclamped confidential-rate objective; may be negative.
double wiretap_rate(const GeneralMatrix& H1, const GeneralMatrix& H2,
                    const SymMatrix& B);

// Differential entropy of a Gaussian with the given covariance, in bits.
double gaussian_entropy(const SymMatrix& cov);

struct EeiCheckResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// Gaussian-restricted extremal entropy inequality: compares the weighted
// entropy combination at conditional covariance Bx against its value at the
// stationary covariance B_star.  All entropies in bits.
EeiCheckResult eei_gaussian_check(const SymMatrix& B_star,
                                  const SymMatrix& N1_tilde,
                                  const SymMatrix& N1, const SymMatrix& N2,
                                  const SymMatrix& S, double mu, double lambda,
                                  const SymMatrix& Bx);

/// Comparison baseline: the same channel without the secrecy constraint,
/// characterized as the intersection of a sum-rate simplex (region 1) and a
/// superposition region (region 2).  Single receive antenna only.
struct DegradedMsgSetRegions {
  RegionDescriptor r2;        // traced via (alpha, gamma0) feasibility
  double sum_rate_cap_bits;   // region 1: R0 + R1 <= cap
  // Intersection descriptor: r2's problems with the sum cap attached.
  RegionDescriptor intersection() const;
};

DegradedMsgSetRegions degraded_msg_set_regions(const Eigen::RowVectorXd& h1,
                                               const Eigen::RowVectorXd& h2,
                                               const PowerConstraint& power);

}  // namespace secrecy
