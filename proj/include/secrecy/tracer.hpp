#pragma once

#include <utility>
#include <vector>

#include "secrecy/channel.hpp"
#include "secrecy/feasibility.hpp"
#include "secrecy/rates.hpp"

namespace secrecy {

struct TraceConfig {
  int gamma0_samples = 201;
  double alpha_bisect_tol = 1e-6;
  double alpha_upper_seed = -1.0;  // <= 0: derive from the region descriptor
  bool keep_witnesses = false;
};

struct BoundaryPoint {
  double gamma0 = 0.0;
  double alpha = 0.0;
  double R0 = 0.0;  // exactly 0.5*log2(1 + alpha*gamma0)
  double R1 = 0.0;  // exactly 0.5*log2(1 + alpha*(1 - gamma0))
  std::vector<SymMatrix> witness;
};

struct RegionBoundary {
  std::vector<BoundaryPoint> points;
  PowerConstraint::Kind constraint_kind = PowerConstraint::Kind::MatrixPower;
};

struct MaxAlphaResult {
  double alpha = 0.0;
  std::vector<SymMatrix> witness;
};

// Map a nonnegative rate pair to its (alpha, gamma0) ray coordinates.
std::pair<double, double> alpha_gamma_of(double R0_bits, double R1_bits);

// Secrecy region descriptor for a single-receive-antenna channel, either
// power kind.
RegionDescriptor secrecy_region(const Eigen::RowVectorXd& h1,
                                const Eigen::RowVectorXd& h2,
                                const PowerConstraint& power);

// Largest alpha with a feasible boundary system at the given gamma0, found by
// bisection over the feasibility predicate (valid by downward closure in
// alpha).  Returns the witness at the last feasible alpha.
MaxAlphaResult max_alpha(const RegionDescriptor& region, double gamma0,
                         const TraceConfig& cfg);

// Sweep gamma0 over [0,1] and map each sample through max_alpha.
RegionBoundary trace_region(const RegionDescriptor& region,
                            const TraceConfig& cfg);

// Membership test through the (alpha, gamma0) parameterization.
bool region_contains(const RegionDescriptor& region, double R0_bits,
                     double R1_bits);

// Convenience wrappers on a channel spec (requires 1 x t channel rows).
RegionBoundary trace_boundary(const ChannelSpec& spec, const TraceConfig& cfg);

// Wiretap capacity (R0 = 0 endpoint).  Exact bisection path for single
// receive antennas; grid-plus-ascent path for r_k > 1 at t <= 2.
std::pair<double, SymMatrix> wiretap_capacity(const ChannelSpec& spec,
                                              const TraceConfig& cfg);

struct UnionCheckReport {
  int checked_points = 0;
  int contained_points = 0;
  // Largest R1 reduction (bits) needed to bring an uncontained point inside.
  double max_violation_bits = 0.0;
  bool all_contained() const { return checked_points == contained_points; }
};

// Verify that matrix-power boundaries for each sampled S (tr S <= P) lie
// inside the directly traced total-power region.
UnionCheckReport union_over_S_check(const ChannelSpec& spec_total,
                                    const std::vector<SymMatrix>& sampled_S,
                                    const TraceConfig& cfg);

}  // namespace secrecy
