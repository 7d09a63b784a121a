#pragma once

#include <string>
#include <utility>
#include <vector>

#include "secrecy/channel.hpp"
#include "secrecy/matrix.hpp"

namespace secrecy {

/// First-order optimality witness for the aligned weighted-rate program,
/// re-checkable from its fields alone.  Carries the problem instance so the
/// certificate is self-contained.
struct KKTCertificate {
  SymMatrix N1;
  SymMatrix N2;
  SymMatrix S;
  double R0_target = 0.0;  // bits

  SymMatrix B_star;
  double R1_star = 0.0;  // bits, clamped at 0
  double mu1 = 0.0;
  double mu2 = 0.0;
  SymMatrix M1;
  SymMatrix M2;
  double residual_stationarity = 0.0;  // Frobenius norm of the gradient system
  double residual_slackness = 0.0;     // max complementarity product

  KKTCertificate(SymMatrix n1, SymMatrix n2, SymMatrix s)
      : N1(std::move(n1)), N2(std::move(n2)), S(std::move(s)),
        B_star(SymMatrix::Zero(N1.dim())), M1(SymMatrix::Zero(N1.dim())),
        M2(SymMatrix::Zero(N1.dim())) {}
};

struct EnhancedChannel {
  SymMatrix N1_tilde;
  KKTCertificate source_certificate;
};

// Largest supportable common rate (bits) at B = 0.
double common_rate_cap(const SymMatrix& N1, const SymMatrix& N2,
                       const SymMatrix& S);

// Maximize the confidential rate subject to two common-rate floor constraints
// and the Loewner box 0 <= B <= S.  Grid seeding plus a log-barrier Newton
// path; t <= 2 for the grid component.  Returns (B*, clamped R1* in bits).
std::pair<SymMatrix, double> solve_weighted_program(const SymMatrix& N1,
                                                    const SymMatrix& N2,
                                                    const SymMatrix& S,
                                                    double R0_target);

// Recover multipliers (mu1, mu2, M1, M2) for a presumed-optimal B_star by
// active-set detection and constrained least squares on the stationarity
// system; ambiguous near-active constraints are resolved by trying both
// assignments and keeping the lower residual.
KKTCertificate recover_kkt(const SymMatrix& N1, const SymMatrix& N2,
                           const SymMatrix& S, double R0_target,
                           const SymMatrix& B_star);

// N1_tilde = [(B* + N1)^{-1} + 2 M1]^{-1} - B*, verified to satisfy
// 0 < N1_tilde <= N1 and N1_tilde <= N2 (Loewner) before returning.
EnhancedChannel construct_enhanced(const KKTCertificate& cert);

struct ChainReport {
  KKTCertificate certificate;
  SymMatrix N1_tilde;
  double eq_substitution_residual = 0.0;  // enhanced stationarity identity
  double det_identity_rel_error = 0.0;    // |(B*+~N1)/~N1| vs |(B*+N1)/N1|
  bool orderings_ok = false;
  double weighted_sum_max_slack_bits = 0.0;  // over swept boundary points
  double contradiction_violation_bits = 0.0;  // injected-delta check
  bool eei_ok = false;
  double eei_max_violation = 0.0;
  bool passed = false;
  std::vector<std::string> failures;

  explicit ChainReport(KKTCertificate cert)
      : certificate(std::move(cert)),
        N1_tilde(SymMatrix::Zero(certificate.N1.dim())) {}
};

// End-to-end run: solve -> recover -> enhance, then machine-check the
// substitution identity, the noise orderings, the weighted-sum bound over a
// swept boundary, the injected-delta contradiction, and the Gaussian
// extremal-entropy inequality over a covariance grid.
ChainReport verify_enhancement_chain(const AlignedChannel& ch,
                                     double R0_target,
                                     double contradiction_delta = 0.01);

struct SupersetReport {
  int grid_points = 0;
  double min_r1_gain_bits = 0.0;
  bool ok = false;
};

// Pointwise dominance of the enhanced channel's confidential rate over a
// sampled covariance grid; the common-rate receiver keeps its noise.
SupersetReport enhanced_region_superset_check(const AlignedChannel& ch,
                                              const EnhancedChannel& enhanced,
                                              int grid_per_axis = 11);

}  // namespace secrecy
