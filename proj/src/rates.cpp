#include "secrecy/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace secrecy {

namespace {

// log2 det(H X H^T + I_r)
double log_output(const GeneralMatrix& h, const SymMatrix& x) {
  if (h.cols() != x.dim()) {
    throw DimensionError("rates: channel/covariance dimension mismatch");
  }
  Eigen::MatrixXd g = h * x.mat() * h.transpose();
  g += Eigen::MatrixXd::Identity(g.rows(), g.cols());
  return logdet(SymMatrix(std::move(g)));
}

void require_box(const SymMatrix& B, const SymMatrix& S) {
  if (!psd_check(B) || !loewner_leq(B, S)) {
    throw DomainError("rates: B must satisfy 0 <= B <= S (Loewner)");
  }
}

SymMatrix outer(const Eigen::RowVectorXd& h) {
  return SymMatrix(Eigen::MatrixXd(h.transpose() * h));
}

double quad(const Eigen::RowVectorXd& h, const SymMatrix& s) {
  return h * s.mat() * h.transpose();
}

}  // namespace

RatePair region_point_general(const GeneralMatrix& H1, const GeneralMatrix& H2,
                              const SymMatrix& S, const SymMatrix& B) {
  require_box(B, S);
  RatePair r;
  r.R0 = std::min(0.5 * (log_output(H1, S) - log_output(H1, B)),
                  0.5 * (log_output(H2, S) - log_output(H2, B)));
  r.R1 = std::max(0.0, wiretap_rate(H1, H2, B));
  return r;
}

RatePair region_point_aligned(const SymMatrix& N1, const SymMatrix& N2,
                              const SymMatrix& S, const SymMatrix& B) {
  if (min_eigenvalue(N1) <= 0 || min_eigenvalue(N2) <= 0) {
    throw DomainError("region_point_aligned: N1, N2 must be positive definite");
  }
  require_box(B, S);
  RatePair r;
  r.R0 = std::min(0.5 * (logdet(S + N1) - logdet(B + N1)),
                  0.5 * (logdet(S + N2) - logdet(B + N2)));
  r.R1 = std::max(0.0, 0.5 * (logdet(B + N1) - logdet(N1)) -
                           0.5 * (logdet(B + N2) - logdet(N2)));
  return r;
}

RatePair region_point_total_power(const GeneralMatrix& H1,
                                  const GeneralMatrix& H2, const SymMatrix& B1,
                                  const SymMatrix& B2) {
  if (!psd_check(B1) || !psd_check(B2)) {
    throw DomainError("region_point_total_power: B1, B2 must be PSD");
  }
  const SymMatrix total = B1 + B2;
  RatePair r;
  r.R0 = std::min(0.5 * (log_output(H1, total) - log_output(H1, B1)),
                  0.5 * (log_output(H2, total) - log_output(H2, B1)));
  r.R1 = std::max(0.0, wiretap_rate(H1, H2, B1));
  return r;
}

double wiretap_rate(const GeneralMatrix& H1, const GeneralMatrix& H2,
                    const SymMatrix& B) {
  if (!psd_check(B)) throw DomainError("wiretap_rate: B must be PSD");
  return 0.5 * (log_output(H1, B) - log_output(H2, B));
}

double gaussian_entropy(const SymMatrix& cov) {
  if (min_eigenvalue(cov) <= 0) {
    throw SingularMatrixError("gaussian_entropy: covariance must be PD");
  }
  const double t = static_cast<double>(cov.dim());
  return 0.5 * (t * std::log2(2.0 * std::numbers::pi * std::numbers::e) +
                logdet(cov));
}

EeiCheckResult eei_gaussian_check(const SymMatrix& B_star,
                                  const SymMatrix& N1_tilde,
                                  const SymMatrix& N1, const SymMatrix& N2,
                                  const SymMatrix& S, double mu, double lambda,
                                  const SymMatrix& Bx) {
  (void)S;
  auto weighted = [&](const SymMatrix& b) {
    return gaussian_entropy(b + N1_tilde) -
           mu * lambda * gaussian_entropy(b + N1) -
           mu * (1.0 - lambda) * gaussian_entropy(b + N2);
  };
  EeiCheckResult r;
  r.lhs = weighted(Bx);
  r.rhs = weighted(B_star);
  r.holds = r.lhs <= r.rhs + 1e-9;
  return r;
}

RegionDescriptor DegradedMsgSetRegions::intersection() const {
  RegionDescriptor d = r2;
  d.sum_rate_cap_bits = sum_rate_cap_bits;
  return d;
}

DegradedMsgSetRegions degraded_msg_set_regions(const Eigen::RowVectorXd& h1,
                                               const Eigen::RowVectorXd& h2,
                                               const PowerConstraint& power) {
  if (h1.size() != h2.size() || h1.size() < 1) {
    throw DimensionError("degraded_msg_set_regions: h1, h2 dimension mismatch");
  }
  DegradedMsgSetRegions out;
  const Eigen::Index t = h1.size();

  if (power.kind() == PowerConstraint::Kind::MatrixPower) {
    const SymMatrix S = power.S();
    if (S.dim() != t) {
      throw DimensionError("degraded_msg_set_regions: S dimension mismatch");
    }
    out.sum_rate_cap_bits = 0.5 * std::log2(quad(h1, S) + 1.0);
    out.r2.alpha_upper_seed = std::max(quad(h1, S), quad(h2, S)) + 1.0;
    out.r2.make_problem = [h1, h2, S, t](double alpha, double gamma0) {
      FeasibilityProblem p;
      p.dim = t;
      p.unknown_count = 1;
      p.cone = ConeBox{S};
      const double ag = alpha * gamma0;
      const double a1g = alpha * (1.0 - gamma0);
      p.inequalities.push_back(
          {{SymMatrix(-(1.0 + ag) * outer(h2).mat())}, quad(h2, S) - ag});
      p.inequalities.push_back({{outer(h1)}, -a1g});
      return p;
    };
  } else {
    const double P = power.P();
    out.sum_rate_cap_bits = 0.5 * std::log2(P * h1.squaredNorm() + 1.0);
    out.r2.alpha_upper_seed =
        P * std::max(h1.squaredNorm(), h2.squaredNorm()) + 1.0;
    out.r2.make_problem = [h1, h2, P, t](double alpha, double gamma0) {
      FeasibilityProblem p;
      p.dim = t;
      p.unknown_count = 2;
      p.cone = ConeTracePair{P};
      const double ag = alpha * gamma0;
      const double a1g = alpha * (1.0 - gamma0);
      p.inequalities.push_back(
          {{SymMatrix(-ag * outer(h2).mat()), outer(h2)}, -ag});
      p.inequalities.push_back({{outer(h1), SymMatrix::Zero(t)}, -a1g});
      return p;
    };
  }
  return out;
}

}  // namespace secrecy
