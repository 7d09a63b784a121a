#include "secrecy/tracer.hpp"

#include <algorithm>
#include <cmath>

namespace secrecy {

namespace {

double quad(const Eigen::RowVectorXd& h, const SymMatrix& s) {
  return h * s.mat() * h.transpose();
}

void require_config(const TraceConfig& cfg) {
  if (cfg.gamma0_samples < 2) {
    throw DomainError("TraceConfig: gamma0_samples must be >= 2");
  }
  if (!(cfg.alpha_bisect_tol > 0)) {
    throw DomainError("TraceConfig: alpha_bisect_tol must be positive");
  }
}

Eigen::RowVectorXd single_row(const GeneralMatrix& h, const char* name) {
  if (h.rows() != 1) {
    throw DomainError(std::string(name) +
                      ": exact tracing requires a single receive antenna");
  }
  return h.row(0);
}

}  // namespace

std::pair<double, double> alpha_gamma_of(double R0_bits, double R1_bits) {
  const double a = std::exp2(2.0 * R0_bits) + std::exp2(2.0 * R1_bits) - 2.0;
  if (a <= 0) return {0.0, 0.0};
  // The ratio can land an ulp outside [0,1] when one rate is ~0.
  return {a, std::clamp((std::exp2(2.0 * R0_bits) - 1.0) / a, 0.0, 1.0)};
}

RegionDescriptor secrecy_region(const Eigen::RowVectorXd& h1,
                                const Eigen::RowVectorXd& h2,
                                const PowerConstraint& power) {
  RegionDescriptor d;
  if (power.kind() == PowerConstraint::Kind::MatrixPower) {
    const SymMatrix S = power.S();
    // Sum-rate cap implies alpha <= h1 S h1^T for every gamma0.
    d.alpha_upper_seed = quad(h1, S) + 1.0;
    d.make_problem = [h1, h2, S](double alpha, double gamma0) {
      return build_problem_41(h1, h2, S, alpha, gamma0);
    };
  } else {
    const double P = power.P();
    d.alpha_upper_seed = P * h1.squaredNorm() + 1.0;
    d.make_problem = [h1, h2, P](double alpha, double gamma0) {
      return build_problem_42(h1, h2, P, alpha, gamma0);
    };
  }
  return d;
}

namespace {

struct FeasProbe {
  bool feasible = false;
  std::vector<SymMatrix> witness;
};

FeasProbe probe(const RegionDescriptor& region, double alpha, double gamma0) {
  if (std::isfinite(region.sum_rate_cap_bits)) {
    const double sum =
        0.5 * std::log2(1.0 + alpha * gamma0) +
        0.5 * std::log2(1.0 + alpha * (1.0 - gamma0));
    if (sum > region.sum_rate_cap_bits + 1e-9) return {};
  }
  FeasibilityResult r = solve_with_fallback(region.make_problem(alpha, gamma0));
  if (r.status == FeasStatus::Feasible) return {true, std::move(r.witness)};
  return {};
}

}  // namespace

MaxAlphaResult max_alpha(const RegionDescriptor& region, double gamma0,
                         const TraceConfig& cfg) {
  require_config(cfg);
  if (!(gamma0 >= 0 && gamma0 <= 1)) {
    throw DomainError("max_alpha: gamma0 must be in [0,1]");
  }

  MaxAlphaResult best;
  FeasProbe p0 = probe(region, 0.0, gamma0);
  if (p0.feasible) best.witness = std::move(p0.witness);

  double lo = 0.0;
  double hi = cfg.alpha_upper_seed > 0 ? cfg.alpha_upper_seed
                                       : region.alpha_upper_seed;
  // Grow the bracket until the upper end is infeasible.
  for (int i = 0; i < 60; ++i) {
    FeasProbe p = probe(region, hi, gamma0);
    if (!p.feasible) break;
    lo = hi;
    best.witness = std::move(p.witness);
    hi *= 2.0;
  }
  while (hi - lo > cfg.alpha_bisect_tol) {
    const double mid = 0.5 * (lo + hi);
    FeasProbe p = probe(region, mid, gamma0);
    if (p.feasible) {
      lo = mid;
      best.witness = std::move(p.witness);
    } else {
      hi = mid;
    }
  }
  best.alpha = lo;
  return best;
}

RegionBoundary trace_region(const RegionDescriptor& region,
                            const TraceConfig& cfg) {
  require_config(cfg);
  RegionBoundary b;
  b.points.reserve(static_cast<std::size_t>(cfg.gamma0_samples));
  for (int i = 0; i < cfg.gamma0_samples; ++i) {
    const double gamma0 =
        static_cast<double>(i) / static_cast<double>(cfg.gamma0_samples - 1);
    MaxAlphaResult m;
    try {
      m = max_alpha(region, gamma0, cfg);
    } catch (const Error& e) {
      throw SolverError("trace_region: failure at gamma0=" +
                        std::to_string(gamma0) + ": " + e.what());
    }
    BoundaryPoint pt;
    pt.gamma0 = gamma0;
    pt.alpha = m.alpha;
    pt.R0 = 0.5 * std::log2(1.0 + m.alpha * gamma0);
    pt.R1 = 0.5 * std::log2(1.0 + m.alpha * (1.0 - gamma0));
    if (cfg.keep_witnesses) pt.witness = std::move(m.witness);
    b.points.push_back(std::move(pt));
  }
  return b;
}

bool region_contains(const RegionDescriptor& region, double R0_bits,
                     double R1_bits) {
  if (R0_bits < 0 || R1_bits < 0) return false;
  if (std::isfinite(region.sum_rate_cap_bits) &&
      R0_bits + R1_bits > region.sum_rate_cap_bits + 1e-9) {
    return false;
  }
  auto [alpha, gamma0] = alpha_gamma_of(R0_bits, R1_bits);
  if (alpha <= 0) return true;
  return probe(region, alpha, gamma0).feasible;
}

RegionBoundary trace_boundary(const ChannelSpec& spec, const TraceConfig& cfg) {
  const Eigen::RowVectorXd h1 = single_row(spec.H1, "trace_boundary");
  const Eigen::RowVectorXd h2 = single_row(spec.H2, "trace_boundary");
  RegionBoundary b = trace_region(secrecy_region(h1, h2, spec.power), cfg);
  b.constraint_kind = spec.power.kind();
  return b;
}

namespace {

// Grid-plus-ascent wiretap search for t <= 2 multi-antenna receivers.
std::pair<double, SymMatrix> wiretap_grid_ascent(const ChannelSpec& spec) {
  const Eigen::Index t = spec.t();
  if (t > 2) {
    throw DomainError("wiretap_capacity: grid path supports t <= 2 only");
  }
  const bool matrix_power =
      spec.power.kind() == PowerConstraint::Kind::MatrixPower;
  const SymMatrix S = matrix_power
                          ? spec.power.S()
                          : SymMatrix(spec.power.P() *
                                      Eigen::MatrixXd::Identity(t, t));
  const double P = matrix_power ? 0.0 : spec.power.P();

  auto admissible = [&](const SymMatrix& b) {
    if (!psd_check(b)) return false;
    if (matrix_power) return loewner_leq(b, S);
    return b.mat().trace() <= P + kPsdTol;
  };
  auto objective = [&](const SymMatrix& b) {
    return wiretap_rate(spec.H1, spec.H2, b);
  };

  // Axis ranges from the hull of the constraint set.
  double hi11 = S(0, 0), hi22 = t == 2 ? S(1, 1) : 0.0;
  double hi12 = t == 2 ? std::sqrt(std::max(hi11 * hi22, 0.0)) : 0.0;

  SymMatrix best = SymMatrix::Zero(t);
  double best_val = 0.0;
  auto consider = [&](const SymMatrix& b) {
    if (!admissible(b)) return;
    const double v = objective(b);
    if (v > best_val) {
      best_val = v;
      best = b;
    }
  };

  const int n = 41;
  if (t == 1) {
    for (int i = 0; i < n; ++i) consider(SymMatrix::Scalar(hi11 * i / (n - 1)));
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          Eigen::MatrixXd m(2, 2);
          m << hi11 * i / (n - 1), -hi12 + 2.0 * hi12 * k / (n - 1),
              -hi12 + 2.0 * hi12 * k / (n - 1), hi22 * j / (n - 1);
          consider(SymMatrix(std::move(m)));
        }
      }
    }
  }

  // Coordinate-wise ascent with step halving.
  const auto basis = sym_basis(t);
  double step = std::max({hi11, hi22, 1.0}) / static_cast<double>(n);
  while (step > 1e-9) {
    bool improved = false;
    for (const auto& e : basis) {
      for (double sign : {+1.0, -1.0}) {
        SymMatrix cand(best.mat() + sign * step * e);
        if (!admissible(cand)) continue;
        const double v = objective(cand);
        if (v > best_val + 1e-15) {
          best_val = v;
          best = std::move(cand);
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return {std::max(0.0, best_val), best};
}

}  // namespace

std::pair<double, SymMatrix> wiretap_capacity(const ChannelSpec& spec,
                                              const TraceConfig& cfg) {
  if (spec.H1.rows() == 1 && spec.H2.rows() == 1) {
    const Eigen::RowVectorXd h1 = spec.H1.row(0);
    const Eigen::RowVectorXd h2 = spec.H2.row(0);
    MaxAlphaResult m = max_alpha(secrecy_region(h1, h2, spec.power), 0.0, cfg);
    SymMatrix b_star = m.witness.empty() ? SymMatrix::Zero(spec.t())
                                         : m.witness.front();
    return {0.5 * std::log2(1.0 + m.alpha), std::move(b_star)};
  }
  return wiretap_grid_ascent(spec);
}

UnionCheckReport union_over_S_check(const ChannelSpec& spec_total,
                                    const std::vector<SymMatrix>& sampled_S,
                                    const TraceConfig& cfg) {
  if (spec_total.power.kind() != PowerConstraint::Kind::TotalPower) {
    throw DomainError("union_over_S_check: spec must carry a total power "
                      "constraint");
  }
  const double P = spec_total.power.P();
  const Eigen::RowVectorXd h1 = single_row(spec_total.H1, "union_over_S_check");
  const Eigen::RowVectorXd h2 = single_row(spec_total.H2, "union_over_S_check");
  RegionDescriptor total = secrecy_region(h1, h2, spec_total.power);

  UnionCheckReport rep;
  for (const auto& S : sampled_S) {
    if (S.mat().trace() > P + 1e-9) {
      throw DomainError("union_over_S_check: sampled S exceeds trace budget");
    }
    if (S.mat().trace() <= kPsdTol) {
      // Degenerate allocation: the region collapses to the origin.
      ++rep.checked_points;
      ++rep.contained_points;
      continue;
    }
    ChannelSpec sub(spec_total.H1, spec_total.H2, PowerConstraint::Matrix(S));
    RegionBoundary b = trace_boundary(sub, cfg);
    for (const auto& pt : b.points) {
      ++rep.checked_points;
      const double r0 = std::max(0.0, pt.R0 - 1e-6);
      const double r1 = std::max(0.0, pt.R1 - 1e-6);
      if (region_contains(total, r0, r1)) {
        ++rep.contained_points;
        continue;
      }
      // Measure how far the point must shrink to fit.
      double needed = 0.1;
      for (double delta : {1e-5, 1e-4, 1e-3, 1e-2}) {
        if (region_contains(total, std::max(0.0, pt.R0 - delta),
                            std::max(0.0, pt.R1 - delta))) {
          needed = delta;
          break;
        }
      }
      rep.max_violation_bits = std::max(rep.max_violation_bits, needed);
    }
  }
  return rep;
}

}  // namespace secrecy
