#pragma once

#include <optional>

#include "secrecy/matrix.hpp"

namespace secrecy {

/// Input power constraint: either a covariance upper bound S (Loewner) or a
/// scalar total power budget P.
class PowerConstraint {
 public:
  enum class Kind { MatrixPower, TotalPower };

  static PowerConstraint Matrix(SymMatrix s);
  static PowerConstraint Total(double p);

  Kind kind() const { return kind_; }
  const SymMatrix& S() const;
  double P() const;

 private:
  PowerConstraint(Kind k, std::optional<SymMatrix> s, double p)
      : kind_(k), s_(std::move(s)), p_(p) {}
  Kind kind_;
  std::optional<SymMatrix> s_;
  double p_;
};

/// Two-receiver problem instance: Y_k = H_k X + Z_k with unit noise.
struct ChannelSpec {
  GeneralMatrix H1;
  GeneralMatrix H2;
  PowerConstraint power;

  ChannelSpec(GeneralMatrix h1, GeneralMatrix h2, PowerConstraint p);
  Eigen::Index t() const { return H1.cols(); }
};

/// Equivalent channel with the matrices absorbed: Y_k = X + Z_k, noise
/// covariances N_k, matrix power constraint S.
struct AlignedChannel {
  SymMatrix N1;
  SymMatrix N2;
  SymMatrix S;

  AlignedChannel(SymMatrix n1, SymMatrix n2, SymMatrix s);
  Eigen::Index t() const { return S.dim(); }
};

// Relative min-singular-value floor below which a channel matrix counts as
// singular and must be routed through perturb().
inline constexpr double kInvertibilityFloor = 1e-10;

// N_k = H_k^{-1} H_k^{-T}.  Requires square invertible H_k and a matrix power
// constraint.
AlignedChannel align(const ChannelSpec& spec);

// Equivalent spec with t x t channel matrices and identical Gram matrices
// H_k^T H_k (zero-pad or truncate the SVD middle factor).
ChannelSpec squarify(const ChannelSpec& spec);

// Shift every singular value of each (square) channel matrix up by eps > 0,
// producing invertible matrices that dominate the originals.
ChannelSpec perturb(const ChannelSpec& spec, double eps);

// Nonnegative R1 offset of the inflation region: half the log-det gap between
// the perturbed and original receiver-2 output covariances at full power.
double gap_region_bound(const ChannelSpec& spec, const ChannelSpec& spec_bar);

// If S is rank deficient, project the aligned channel onto range(S) so the
// reduced power constraint is positive definite; full-rank input is returned
// unchanged.  Rate formulas agree for every B supported on range(S).
AlignedChannel reduce_rank_deficient_S(const AlignedChannel& ch);

}  // namespace secrecy
