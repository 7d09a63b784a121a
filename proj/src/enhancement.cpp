#include "secrecy/enhancement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "secrecy/rates.hpp"

namespace secrecy {

namespace {

constexpr double kRateSlackActive = 1e-6;      // bits
constexpr double kRateSlackAmbiguous = 1e-4;   // bits
constexpr double kFinalBarrier = 1e-9;

double ln2() { return std::numbers::ln2; }

// Frobenius-weighted vectorization of a symmetric matrix: off-diagonal
// coordinates scaled by sqrt(2) so Euclidean norms match Frobenius norms.
Eigen::VectorXd frob_vec(const Eigen::MatrixXd& m) {
  const Eigen::Index t = m.rows();
  Eigen::VectorXd v(t * (t + 1) / 2);
  Eigen::Index k = 0;
  const double r2 = std::numbers::sqrt2;
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = i; j < t; ++j) {
      v(k++) = (i == j) ? m(i, j) : r2 * m(i, j);
    }
  }
  return v;
}

Eigen::MatrixXd inv_of(const Eigen::MatrixXd& a) {
  return a.llt().solve(Eigen::MatrixXd::Identity(a.rows(), a.cols()));
}

// Stationarity residual matrix of the weighted program's gradient system.
Eigen::MatrixXd stationarity_residual(const KKTCertificate& c) {
  const Eigen::MatrixXd w1 = inv_of(c.B_star.mat() + c.N1.mat());
  const Eigen::MatrixXd w2 = inv_of(c.B_star.mat() + c.N2.mat());
  return 0.5 * w1 + c.M1.mat() - c.mu1 / 2.0 * w1 -
         (c.mu2 + 1.0) / 2.0 * w2 - c.M2.mat();
}

double rate_cap_k(const SymMatrix& Nk, const SymMatrix& S, const SymMatrix& B) {
  return 0.5 * (logdet(S + Nk) - logdet(B + Nk));
}

}  // namespace

double common_rate_cap(const SymMatrix& N1, const SymMatrix& N2,
                       const SymMatrix& S) {
  return std::min(0.5 * (logdet(S + N1) - logdet(N1)),
                  0.5 * (logdet(S + N2) - logdet(N2)));
}

namespace {

// Barrier-path maximizer for the weighted program, in nats internally.
class WeightedProgram {
 public:
  WeightedProgram(const SymMatrix& n1, const SymMatrix& n2, const SymMatrix& s,
                  double r0_bits)
      : n1_(n1.mat()), n2_(n2.mat()), s_(s.mat()), t_(s.dim()),
        basis_(sym_basis(t_)), r0_nat_(r0_bits * ln2()) {
    cap1_ = 0.5 * logdet_nat(SymMatrix(Eigen::MatrixXd(s_ + n1_)));
    cap2_ = 0.5 * logdet_nat(SymMatrix(Eigen::MatrixXd(s_ + n2_)));
  }

  // f(B) = (1/2) ln|B+N1| - (1/2) ln|B+N2|  (noise constants dropped)
  double objective(const Eigen::MatrixXd& b) const {
    return 0.5 * logdet_nat(SymMatrix(Eigen::MatrixXd(b + n1_))) -
           0.5 * logdet_nat(SymMatrix(Eigen::MatrixXd(b + n2_)));
  }

  // Common-rate slacks c_k(B) in nats.
  double slack1(const Eigen::MatrixXd& b) const {
    return cap1_ - 0.5 * logdet_nat(SymMatrix(Eigen::MatrixXd(b + n1_))) -
           r0_nat_;
  }
  double slack2(const Eigen::MatrixXd& b) const {
    return cap2_ - 0.5 * logdet_nat(SymMatrix(Eigen::MatrixXd(b + n2_))) -
           r0_nat_;
  }

  bool strictly_feasible(const Eigen::MatrixXd& b) const {
    if (min_eigenvalue(SymMatrix(b)) <= 0) return false;
    if (min_eigenvalue(SymMatrix(Eigen::MatrixXd(s_ - b))) <= 0) return false;
    return slack1(b) > 0 && slack2(b) > 0;
  }

  double barrier_potential(const Eigen::MatrixXd& b, double tau) const {
    if (!strictly_feasible(b)) {
      return -std::numeric_limits<double>::infinity();
    }
    try {
      return objective(b) +
             tau * (logdet_nat(SymMatrix(b)) +
                    logdet_nat(SymMatrix(Eigen::MatrixXd(s_ - b))) +
                    std::log(slack1(b)) + std::log(slack2(b)));
    } catch (const SingularMatrixError&) {
      // Eigenvalues can clear the strict-feasibility test while the
      // Cholesky factorization still fails at working precision.
      return -std::numeric_limits<double>::infinity();
    }
  }

  // One Newton stage at fixed tau; returns false on breakdown.
  bool newton(Eigen::MatrixXd& b, double tau) const {
    const Eigen::Index n = static_cast<Eigen::Index>(basis_.size());
    for (int it = 0; it < 200; ++it) {
      const Eigen::MatrixXd w1 = inv_of(b + n1_);
      const Eigen::MatrixXd w2 = inv_of(b + n2_);
      const Eigen::MatrixXd wb = inv_of(b);
      const Eigen::MatrixXd ws = inv_of(s_ - b);
      const double c1 = slack1(b);
      const double c2 = slack2(b);

      // Gradient matrix form, then coordinates.
      const Eigen::MatrixXd gmat = 0.5 * w1 - 0.5 * w2 + tau * (wb - ws) -
                                   tau / c1 * 0.5 * w1 - tau / c2 * 0.5 * w2;
      Eigen::VectorXd g(n);
      for (Eigen::Index k = 0; k < n; ++k) {
        g(k) = (gmat.array() * basis_[static_cast<std::size_t>(k)].array()).sum();
      }

      Eigen::VectorXd gc1(n), gc2(n);
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
      std::vector<Eigen::MatrixXd> w1e(static_cast<std::size_t>(n)),
          w2e(static_cast<std::size_t>(n)), wbe(static_cast<std::size_t>(n)),
          wse(static_cast<std::size_t>(n));
      for (Eigen::Index k = 0; k < n; ++k) {
        const auto& e = basis_[static_cast<std::size_t>(k)];
        w1e[static_cast<std::size_t>(k)] = w1 * e;
        w2e[static_cast<std::size_t>(k)] = w2 * e;
        wbe[static_cast<std::size_t>(k)] = wb * e;
        wse[static_cast<std::size_t>(k)] = ws * e;
        gc1(k) = -0.5 * w1e[static_cast<std::size_t>(k)].trace();
        gc2(k) = -0.5 * w2e[static_cast<std::size_t>(k)].trace();
      }
      for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index l = k; l < n; ++l) {
          const auto& ak = w1e[static_cast<std::size_t>(k)];
          const auto& al = w1e[static_cast<std::size_t>(l)];
          const auto& bk = w2e[static_cast<std::size_t>(k)];
          const auto& bl = w2e[static_cast<std::size_t>(l)];
          const double t11 = (ak.array() * al.transpose().array()).sum();
          const double t22 = (bk.array() * bl.transpose().array()).sum();
          const double tbb = (wbe[static_cast<std::size_t>(k)].array() *
                              wbe[static_cast<std::size_t>(l)].transpose().array())
                                 .sum();
          const double tss = (wse[static_cast<std::size_t>(k)].array() *
                              wse[static_cast<std::size_t>(l)].transpose().array())
                                 .sum();
          double v = -0.5 * t11 + 0.5 * t22 - tau * (tbb + tss);
          // ln c_j terms: (1/c) Hess(c) - (1/c^2) grad grad^T with
          // Hess(c_j)_{kl} = +0.5 tr(W_j E_k W_j E_l).
          v += tau / c1 * (0.5 * t11) - tau / (c1 * c1) * gc1(k) * gc1(l);
          v += tau / c2 * (0.5 * t22) - tau / (c2 * c2) * gc2(k) * gc2(l);
          h(k, l) = v;
          if (k != l) h(l, k) = v;
        }
      }

      // Ascent direction; regularize if the Hessian is not negative definite.
      Eigen::VectorXd d;
      double ridge = 0.0;
      for (int attempt = 0; attempt < 12; ++attempt) {
        Eigen::MatrixXd neg_h =
            -h + ridge * Eigen::MatrixXd::Identity(n, n);
        Eigen::LLT<Eigen::MatrixXd> llt(neg_h);
        if (llt.info() == Eigen::Success) {
          d = llt.solve(g);
          if (g.dot(d) > 0) break;
        }
        ridge = ridge == 0.0 ? 1e-8 * (1.0 + h.cwiseAbs().maxCoeff())
                             : ridge * 100.0;
        d.resize(0);
      }
      if (d.size() == 0) return false;

      const double decrement = g.dot(d);
      if (decrement / 2.0 < 1e-15 || g.lpNorm<Eigen::Infinity>() < 1e-13) {
        return true;
      }

      const double phi0 = barrier_potential(b, tau);
      double step = 1.0;
      bool moved = false;
      while (step > 1e-14) {
        Eigen::MatrixXd bn = b + step * sym_unvec(d, t_);
        bn = 0.5 * (bn + bn.transpose());
        if (barrier_potential(bn, tau) > phi0 + 1e-4 * step * decrement) {
          b = std::move(bn);
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) return true;
    }
    return true;
  }

  Eigen::MatrixXd path(Eigen::MatrixXd b0) const {
    for (double tau = 0.1; tau >= kFinalBarrier * 0.999; tau *= 0.2) {
      newton(b0, tau);
    }
    newton(b0, kFinalBarrier);
    return b0;
  }

  const Eigen::MatrixXd& S() const { return s_; }
  Eigen::Index t() const { return t_; }

 private:
  Eigen::MatrixXd n1_, n2_, s_;
  Eigen::Index t_;
  std::vector<Eigen::MatrixXd> basis_;
  double r0_nat_, cap1_, cap2_;
};

// Grid candidates pulled strictly inside the box.
std::vector<Eigen::MatrixXd> seed_candidates(const WeightedProgram& wp) {
  const Eigen::Index t = wp.t();
  const Eigen::MatrixXd& s = wp.S();
  std::vector<Eigen::MatrixXd> raw;
  if (t == 1) {
    for (int i = 0; i <= 32; ++i) {
      raw.push_back(s * (static_cast<double>(i) / 32.0));
    }
  } else if (t == 2) {
    const int n = 17;
    const double hi11 = s(0, 0), hi22 = s(1, 1);
    const double hi12 = std::sqrt(std::max(hi11 * hi22, 0.0));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          Eigen::MatrixXd b(2, 2);
          const double b12 = -hi12 + 2.0 * hi12 * k / (n - 1);
          b << hi11 * i / (n - 1), b12, b12, hi22 * j / (n - 1);
          raw.push_back(std::move(b));
        }
      }
    }
  } else {
    throw DomainError(
        "solve_weighted_program: grid seeding supports t <= 2 only");
  }

  std::vector<std::pair<double, Eigen::MatrixXd>> scored;
  for (auto& b : raw) {
    Eigen::MatrixXd bs = 0.98 * b + 0.005 * s;
    bs = 0.5 * (bs + bs.transpose());
    if (!wp.strictly_feasible(bs)) continue;
    scored.emplace_back(wp.objective(bs), std::move(bs));
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<Eigen::MatrixXd> out;
  for (std::size_t i = 0; i < scored.size() && i < 5; ++i) {
    out.push_back(scored[i].second);
  }
  // Shrinking fallback near the origin is always strictly feasible when the
  // common-rate floor is strictly below the cap.
  for (double delta = 0.25; delta > 1e-12; delta *= 0.25) {
    Eigen::MatrixXd b = delta * s;
    if (wp.strictly_feasible(b)) {
      out.push_back(std::move(b));
      break;
    }
  }
  return out;
}

}  // namespace

std::pair<SymMatrix, double> solve_weighted_program(const SymMatrix& N1,
                                                    const SymMatrix& N2,
                                                    const SymMatrix& S,
                                                    double R0_target) {
  if (N1.dim() != S.dim() || N2.dim() != S.dim()) {
    throw DimensionError("solve_weighted_program: dimension mismatch");
  }
  const double r0max = common_rate_cap(N1, N2, S);
  if (R0_target > r0max + 1e-9) {
    throw DomainError(
        "solve_weighted_program: R0_target exceeds the supportable cap");
  }
  if (R0_target < 0) {
    throw DomainError("solve_weighted_program: R0_target must be nonnegative");
  }
  const Eigen::Index t = S.dim();
  if (R0_target >= r0max - 1e-7 * (1.0 + r0max)) {
    // Within working precision of the cap the floor pins B to 0; the optimal
    // B (and R1) in this band is O(cap - R0_target) anyway.
    return {SymMatrix::Zero(t), 0.0};
  }
  if ((N1.mat() - N2.mat()).norm() < 1e-12) {
    // Objective is identically zero; report the zero-covariance tie-break.
    return {SymMatrix::Zero(t), 0.0};
  }

  WeightedProgram wp(N1, N2, S, R0_target);
  std::vector<Eigen::MatrixXd> seeds = seed_candidates(wp);
  if (seeds.empty()) {
    throw SolverError("solve_weighted_program: no strictly feasible seed");
  }
  double best_val = -std::numeric_limits<double>::infinity();
  Eigen::MatrixXd best;
  for (const auto& b0 : seeds) {
    Eigen::MatrixXd b = wp.path(b0);
    const double v = wp.objective(b);
    if (v > best_val) {
      best_val = v;
      best = std::move(b);
    }
  }
  const double r1_bits =
      (best_val - 0.5 * logdet_nat(N1) + 0.5 * logdet_nat(N2)) / ln2();
  return {SymMatrix(std::move(best)), std::max(0.0, r1_bits)};
}

namespace {

// Eigen-directions of m with eigenvalue below the threshold, as columns.
Eigen::MatrixXd near_null_space(const SymMatrix& m, double threshold) {
  EigResult e = eig_sym(m);
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < m.dim(); ++i) {
    if (e.values(i) < threshold) idx.push_back(i);
  }
  Eigen::MatrixXd q(m.dim(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) q.col(static_cast<Eigen::Index>(j)) = e.vectors.col(idx[j]);
  return q;
}

SymMatrix psd_project(const Eigen::MatrixXd& m, double* moved) {
  EigResult e = eig_sym(SymMatrix(m));
  Eigen::VectorXd clipped = e.values.cwiseMax(0.0);
  if (moved) *moved = (e.values - clipped).norm();
  return SymMatrix(
      Eigen::MatrixXd(e.vectors * clipped.asDiagonal() * e.vectors.transpose()));
}

struct KktAttempt {
  double mu1 = 0.0, mu2 = 0.0;
  SymMatrix M1, M2;
  double stationarity = 0.0;
  double slackness = 0.0;
  KktAttempt(Eigen::Index t) : M1(SymMatrix::Zero(t)), M2(SymMatrix::Zero(t)) {}
};

KktAttempt attempt_recovery(const SymMatrix& N1, const SymMatrix& N2,
                            const SymMatrix& S, double R0_target,
                            const SymMatrix& B, bool active1, bool active2,
                            double null_threshold) {
  const Eigen::Index t = S.dim();
  const double scale = 1.0 + S.mat().cwiseAbs().maxCoeff();
  const Eigen::MatrixXd q1 = near_null_space(B, null_threshold * scale);
  const Eigen::MatrixXd q2 = near_null_space(S - B, null_threshold * scale);
  const Eigen::MatrixXd w1 = inv_of(B.mat() + N1.mat());
  const Eigen::MatrixXd w2 = inv_of(B.mat() + N2.mat());

  std::vector<Eigen::MatrixXd> cols;  // residual derivative per unknown
  if (active1) cols.push_back(-0.5 * w1);
  if (active2) cols.push_back(-0.5 * w2);
  const auto basis1 = sym_basis(q1.cols() > 0 ? q1.cols() : 0);
  const auto basis2 = sym_basis(q2.cols() > 0 ? q2.cols() : 0);
  for (const auto& f : basis1) cols.push_back(q1 * f * q1.transpose());
  for (const auto& f : basis2) cols.push_back(-(q2 * f * q2.transpose()));

  const Eigen::Index nsym = t * (t + 1) / 2;
  const Eigen::Index ncols = static_cast<Eigen::Index>(cols.size());
  KktAttempt at(t);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(ncols);
  if (ncols > 0) {
    Eigen::MatrixXd a(nsym, ncols);
    for (Eigen::Index c = 0; c < ncols; ++c) {
      a.col(c) = frob_vec(cols[static_cast<std::size_t>(c)]);
    }
    const Eigen::VectorXd rhs = -frob_vec(0.5 * w1 - 0.5 * w2);
    u = a.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
  }

  Eigen::Index pos = 0;
  if (active1) at.mu1 = std::max(0.0, u(pos++));
  if (active2) at.mu2 = std::max(0.0, u(pos++));
  Eigen::MatrixXd y1 = Eigen::MatrixXd::Zero(t, t);
  if (q1.cols() > 0) {
    Eigen::VectorXd v1 = u.segment(pos, static_cast<Eigen::Index>(basis1.size()));
    pos += static_cast<Eigen::Index>(basis1.size());
    y1 = q1 * sym_unvec(v1, q1.cols()) * q1.transpose();
  }
  Eigen::MatrixXd y2 = Eigen::MatrixXd::Zero(t, t);
  if (q2.cols() > 0) {
    Eigen::VectorXd v2 = u.segment(pos, static_cast<Eigen::Index>(basis2.size()));
    y2 = q2 * sym_unvec(v2, q2.cols()) * q2.transpose();
  }

  double moved1 = 0.0, moved2 = 0.0;
  at.M1 = psd_project(y1, &moved1);
  at.M2 = psd_project(y2, &moved2);

  KKTCertificate probec(N1, N2, S);
  probec.B_star = B;
  probec.mu1 = at.mu1;
  probec.mu2 = at.mu2;
  probec.M1 = at.M1;
  probec.M2 = at.M2;
  at.stationarity = stationarity_residual(probec).norm();

  const double slack1 = rate_cap_k(N1, S, B) - R0_target;
  const double slack2 = rate_cap_k(N2, S, B) - R0_target;
  at.slackness = std::max({(B.mat() * at.M1.mat()).norm(),
                           ((S.mat() - B.mat()) * at.M2.mat()).norm(),
                           at.mu1 * std::abs(slack1), at.mu2 * std::abs(slack2),
                           moved1, moved2});
  return at;
}

}  // namespace

KKTCertificate recover_kkt(const SymMatrix& N1, const SymMatrix& N2,
                           const SymMatrix& S, double R0_target,
                           const SymMatrix& B_star) {
  const double slack1 = rate_cap_k(N1, S, B_star) - R0_target;
  const double slack2 = rate_cap_k(N2, S, B_star) - R0_target;

  auto assignments = [](double slack) {
    std::vector<bool> v;
    if (slack < kRateSlackActive) {
      v.push_back(true);
      if (slack > -kRateSlackActive) v.push_back(false);
    } else if (slack < kRateSlackAmbiguous) {
      v.push_back(true);
      v.push_back(false);
    } else {
      v.push_back(false);
    }
    return v;
  };

  KktAttempt best(S.dim());
  best.stationarity = std::numeric_limits<double>::infinity();
  for (bool a1 : assignments(slack1)) {
    for (bool a2 : assignments(slack2)) {
      for (double thr : {1e-5, 1e-3}) {
        KktAttempt at =
            attempt_recovery(N1, N2, S, R0_target, B_star, a1, a2, thr);
        if (at.stationarity < best.stationarity ||
            (at.stationarity < best.stationarity + 1e-12 &&
             at.slackness < best.slackness)) {
          best = at;
        }
      }
    }
  }
  if (best.stationarity > 1e-4) {
    throw SolverError(
        "recover_kkt: stationarity unresolved; B_star is likely not optimal");
  }

  KKTCertificate cert(N1, N2, S);
  cert.R0_target = R0_target;
  cert.B_star = B_star;
  cert.mu1 = best.mu1;
  cert.mu2 = best.mu2;
  cert.M1 = best.M1;
  cert.M2 = best.M2;
  cert.residual_stationarity = best.stationarity;
  cert.residual_slackness = best.slackness;
  cert.R1_star = std::max(
      0.0, 0.5 * (logdet(B_star + N1) - logdet(N1)) -
               0.5 * (logdet(B_star + N2) - logdet(N2)));
  return cert;
}

EnhancedChannel construct_enhanced(const KKTCertificate& cert) {
  const SymMatrix inner(
      Eigen::MatrixXd(inv_of(cert.B_star.mat() + cert.N1.mat()) +
                      2.0 * cert.M1.mat()));
  const SymMatrix n1_tilde = inverse(inner) - cert.B_star;

  if (min_eigenvalue(n1_tilde) <= 0) {
    throw InvariantViolation(
        "construct_enhanced: enhanced noise is not positive definite");
  }
  if (!loewner_leq(n1_tilde, cert.N1)) {
    throw InvariantViolation(
        "construct_enhanced: enhanced noise does not precede N1 in the "
        "Loewner order");
  }
  if (!loewner_leq(n1_tilde, cert.N2)) {
    throw InvariantViolation(
        "construct_enhanced: enhanced noise does not precede N2 in the "
        "Loewner order");
  }
  return {n1_tilde, cert};
}

ChainReport verify_enhancement_chain(const AlignedChannel& ch,
                                     double R0_target,
                                     double contradiction_delta) {
  auto [b_star, r1_star] =
      solve_weighted_program(ch.N1, ch.N2, ch.S, R0_target);
  ChainReport rep(recover_kkt(ch.N1, ch.N2, ch.S, R0_target, b_star));
  const KKTCertificate& cert = rep.certificate;

  try {
    EnhancedChannel enh = construct_enhanced(cert);
    rep.N1_tilde = enh.N1_tilde;
    rep.orderings_ok = true;
  } catch (const InvariantViolation& e) {
    rep.failures.emplace_back(e.what());
    return rep;
  }

  // Substitution identity: the enhanced inverse must equal the weighted
  // combination plus M2.
  const Eigen::MatrixXd lhs =
      0.5 * inv_of(cert.B_star.mat() + rep.N1_tilde.mat());
  const Eigen::MatrixXd rhs =
      cert.mu1 / 2.0 * inv_of(cert.B_star.mat() + cert.N1.mat()) +
      (cert.mu2 + 1.0) / 2.0 * inv_of(cert.B_star.mat() + cert.N2.mat()) +
      cert.M2.mat();
  rep.eq_substitution_residual = (lhs - rhs).norm();
  if (rep.eq_substitution_residual > 1e-6) {
    rep.failures.push_back("substitution identity residual " +
                           std::to_string(rep.eq_substitution_residual));
  }

  // Determinant identity between the enhanced and original receiver-1 noise.
  {
    const double a = logdet(cert.B_star + rep.N1_tilde) - logdet(rep.N1_tilde);
    const double b = logdet(cert.B_star + cert.N1) - logdet(cert.N1);
    rep.det_identity_rel_error = std::abs(a - b) / (1.0 + std::abs(b));
    if (rep.det_identity_rel_error > 1e-8) {
      rep.failures.push_back("determinant identity error " +
                             std::to_string(rep.det_identity_rel_error));
    }
  }

  // Weighted-sum bound over a swept boundary.
  const double mu_sum = cert.mu1 + cert.mu2;
  const double bound_rhs =
      0.5 * (logdet(cert.B_star + cert.N1) - logdet(cert.N1)) -
      0.5 * (logdet(cert.B_star + cert.N2) - logdet(cert.N2)) +
      cert.mu1 * rate_cap_k(cert.N1, cert.S, cert.B_star) +
      cert.mu2 * rate_cap_k(cert.N2, cert.S, cert.B_star);
  const double r0max = common_rate_cap(ch.N1, ch.N2, ch.S);
  double max_slack = -std::numeric_limits<double>::infinity();
  const int sweep = 41;
  for (int j = 0; j < sweep; ++j) {
    const double r0 = r0max * (1.0 - 1e-9) * j / (sweep - 1);
    auto [bj, r1j] = solve_weighted_program(ch.N1, ch.N2, ch.S, r0);
    max_slack = std::max(max_slack, r1j + mu_sum * r0 - bound_rhs);
  }
  rep.weighted_sum_max_slack_bits = max_slack;
  if (max_slack > 1e-6) {
    rep.failures.push_back("weighted-sum bound violated by " +
                           std::to_string(max_slack) + " bits");
  }

  // Injected-delta contradiction: a strictly better pair must overshoot.
  rep.contradiction_violation_bits =
      (r1_star + contradiction_delta) + mu_sum * R0_target - bound_rhs;
  if (rep.contradiction_violation_bits < contradiction_delta - 2e-6) {
    rep.failures.push_back("contradiction check too weak: " +
                           std::to_string(rep.contradiction_violation_bits));
  }

  // Gaussian extremal-entropy inequality over a covariance grid.
  {
    const double mu = cert.mu1 + cert.mu2 + 1.0;
    const double lambda = cert.mu1 / mu;
    double worst = -std::numeric_limits<double>::infinity();
    bool all_hold = true;
    auto check_at = [&](const SymMatrix& bx) {
      EeiCheckResult r = eei_gaussian_check(cert.B_star, rep.N1_tilde, cert.N1,
                                            cert.N2, cert.S, mu, lambda, bx);
      worst = std::max(worst, r.lhs - r.rhs);
      if (!r.holds) all_hold = false;
    };
    const Eigen::Index t = ch.t();
    if (t == 1) {
      for (int i = 0; i <= 20; ++i) {
        check_at(SymMatrix::Scalar(ch.S(0, 0) * i / 20.0));
      }
    } else {
      const int n = 13;
      const double hi11 = ch.S(0, 0), hi22 = ch.S(1, 1);
      const double hi12 = std::sqrt(std::max(hi11 * hi22, 0.0));
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k) {
            Eigen::MatrixXd m(2, 2);
            const double b12 = -hi12 + 2.0 * hi12 * k / (n - 1);
            m << hi11 * i / (n - 1), b12, b12, hi22 * j / (n - 1);
            SymMatrix bx(std::move(m));
            if (!psd_check(bx) || !loewner_leq(bx, ch.S)) continue;
            check_at(bx);
          }
        }
      }
    }
    check_at(cert.B_star);
    rep.eei_ok = all_hold;
    rep.eei_max_violation = worst;
    if (!all_hold) {
      rep.failures.push_back("extremal entropy inequality violated by " +
                             std::to_string(worst) + " bits");
    }
  }

  rep.passed = rep.failures.empty();
  return rep;
}

SupersetReport enhanced_region_superset_check(const AlignedChannel& ch,
                                              const EnhancedChannel& enhanced,
                                              int grid_per_axis) {
  SupersetReport rep;
  rep.min_r1_gain_bits = std::numeric_limits<double>::infinity();
  auto r1_term = [&](const SymMatrix& noise, const SymMatrix& b) {
    return 0.5 * (logdet(b + noise) - logdet(noise)) -
           0.5 * (logdet(b + ch.N2) - logdet(ch.N2));
  };
  auto visit = [&](const SymMatrix& b) {
    if (!psd_check(b) || !loewner_leq(b, ch.S)) return;
    ++rep.grid_points;
    rep.min_r1_gain_bits = std::min(
        rep.min_r1_gain_bits,
        r1_term(enhanced.N1_tilde, b) - r1_term(ch.N1, b));
  };
  const Eigen::Index t = ch.t();
  if (t == 1) {
    for (int i = 0; i < grid_per_axis; ++i) {
      visit(SymMatrix::Scalar(ch.S(0, 0) * i / (grid_per_axis - 1)));
    }
  } else if (t == 2) {
    const double hi11 = ch.S(0, 0), hi22 = ch.S(1, 1);
    const double hi12 = std::sqrt(std::max(hi11 * hi22, 0.0));
    for (int i = 0; i < grid_per_axis; ++i) {
      for (int j = 0; j < grid_per_axis; ++j) {
        for (int k = 0; k < grid_per_axis; ++k) {
          Eigen::MatrixXd m(2, 2);
          const double b12 =
              -hi12 + 2.0 * hi12 * k / (grid_per_axis - 1);
          m << hi11 * i / (grid_per_axis - 1), b12, b12,
              hi22 * j / (grid_per_axis - 1);
          visit(SymMatrix(std::move(m)));
        }
      }
    }
  } else {
    throw DomainError("enhanced_region_superset_check: t <= 2 only");
  }
  rep.ok = rep.grid_points > 0 && rep.min_r1_gain_bits >= -1e-9;
  return rep;
}

}  // namespace secrecy
