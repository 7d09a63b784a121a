#include "secrecy/channel.hpp"

#include <cmath>
#include <utility>

namespace secrecy {

PowerConstraint PowerConstraint::Matrix(SymMatrix s) {
  if (!psd_check(s)) {
    throw DomainError("PowerConstraint: S is not positive semidefinite");
  }
  return PowerConstraint(Kind::MatrixPower, std::move(s), 0.0);
}

PowerConstraint PowerConstraint::Total(double p) {
  if (!(p >= 0.0)) throw DomainError("PowerConstraint: P must be nonnegative");
  return PowerConstraint(Kind::TotalPower, std::nullopt, p);
}

const SymMatrix& PowerConstraint::S() const {
  if (kind_ != Kind::MatrixPower) {
    throw DomainError("PowerConstraint: not a matrix power constraint");
  }
  return *s_;
}

double PowerConstraint::P() const {
  if (kind_ != Kind::TotalPower) {
    throw DomainError("PowerConstraint: not a total power constraint");
  }
  return p_;
}

ChannelSpec::ChannelSpec(GeneralMatrix h1, GeneralMatrix h2, PowerConstraint p)
    : H1(std::move(h1)), H2(std::move(h2)), power(std::move(p)) {
  if (H1.cols() != H2.cols() || H1.cols() < 1) {
    throw DimensionError("ChannelSpec: H1 and H2 must share t >= 1 columns");
  }
  if (power.kind() == PowerConstraint::Kind::MatrixPower &&
      power.S().dim() != H1.cols()) {
    throw DimensionError("ChannelSpec: S dimension must match t");
  }
}

AlignedChannel::AlignedChannel(SymMatrix n1, SymMatrix n2, SymMatrix s)
    : N1(std::move(n1)), N2(std::move(n2)), S(std::move(s)) {
  if (N1.dim() != S.dim() || N2.dim() != S.dim()) {
    throw DimensionError("AlignedChannel: dimension mismatch");
  }
  if (min_eigenvalue(N1) <= 0 || min_eigenvalue(N2) <= 0) {
    throw DomainError("AlignedChannel: N1 and N2 must be positive definite");
  }
  if (!psd_check(S)) {
    throw DomainError("AlignedChannel: S must be positive semidefinite");
  }
}

namespace {

void require_square_invertible(const GeneralMatrix& h, const char* name) {
  if (h.rows() != h.cols()) {
    throw DomainError(std::string(name) +
                      " is not square; apply squarify() first");
  }
  SvdResult s = svd(h);
  const double smax = s.singular_values(0);
  if (s.singular_values(s.singular_values.size() - 1) <=
      kInvertibilityFloor * smax || smax == 0.0) {
    throw DomainError(std::string(name) +
                      " is numerically singular; apply perturb() first");
  }
}

GeneralMatrix squarify_one(const GeneralMatrix& h) {
  const Eigen::Index t = h.cols();
  SvdResult s = svd(h);
  Eigen::VectorXd sv = Eigen::VectorXd::Zero(t);
  const Eigen::Index m = std::min<Eigen::Index>(t, s.singular_values.size());
  sv.head(m) = s.singular_values.head(m);
  return sv.asDiagonal() * s.V.transpose();
}

}  // namespace

AlignedChannel align(const ChannelSpec& spec) {
  if (spec.power.kind() != PowerConstraint::Kind::MatrixPower) {
    throw DomainError("align: requires a matrix power constraint");
  }
  require_square_invertible(spec.H1, "H1");
  require_square_invertible(spec.H2, "H2");
  // N_k = H_k^{-1} H_k^{-T} = (H_k^T H_k)^{-1}
  SymMatrix n1 = inverse(SymMatrix(spec.H1.transpose() * spec.H1));
  SymMatrix n2 = inverse(SymMatrix(spec.H2.transpose() * spec.H2));
  return AlignedChannel(std::move(n1), std::move(n2), spec.power.S());
}

ChannelSpec squarify(const ChannelSpec& spec) {
  return ChannelSpec(squarify_one(spec.H1), squarify_one(spec.H2), spec.power);
}

ChannelSpec perturb(const ChannelSpec& spec, double eps) {
  if (!(eps > 0)) throw DomainError("perturb: eps must be positive");
  if (spec.H1.rows() != spec.t() || spec.H2.rows() != spec.t()) {
    throw DomainError("perturb: channel matrices must be square");
  }
  auto lift = [eps](const GeneralMatrix& h) {
    SvdResult s = svd(h);
    Eigen::VectorXd sv = s.singular_values.array() + eps;
    return GeneralMatrix(s.U * sv.asDiagonal() * s.V.transpose());
  };
  return ChannelSpec(lift(spec.H1), lift(spec.H2), spec.power);
}

double gap_region_bound(const ChannelSpec& spec, const ChannelSpec& spec_bar) {
  if (spec.power.kind() != PowerConstraint::Kind::MatrixPower) {
    throw DomainError("gap_region_bound: requires a matrix power constraint");
  }
  const Eigen::MatrixXd& s = spec.power.S().mat();
  auto output_logdet = [&s](const GeneralMatrix& h2) {
    Eigen::MatrixXd g = h2 * s * h2.transpose();
    g += Eigen::MatrixXd::Identity(g.rows(), g.cols());
    return logdet(SymMatrix(std::move(g)));
  };
  const double offset = 0.5 * (output_logdet(spec_bar.H2) - output_logdet(spec.H2));
  if (offset < -kPsdTol) {
    throw InvariantViolation(
        "gap_region_bound: negative offset; perturbed channel does not "
        "dominate the original");
  }
  return std::max(offset, 0.0);
}

AlignedChannel reduce_rank_deficient_S(const AlignedChannel& ch) {
  EigResult e = eig_sym(ch.S);
  const double floor = 1e-9 * std::max(e.values.maxCoeff(), 0.0);
  const Eigen::Index t = ch.t();
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < t; ++i) {
    if (e.values(i) > floor) kept.push_back(i);
  }
  if (kept.size() == static_cast<std::size_t>(t)) return ch;
  if (kept.empty()) {
    throw DomainError("reduce_rank_deficient_S: S is zero; region is {(0,0)}");
  }
  const Eigen::Index theta = static_cast<Eigen::Index>(kept.size());
  Eigen::MatrixXd q(t, theta);
  for (Eigen::Index j = 0; j < theta; ++j) q.col(j) = e.vectors.col(kept[j]);

  SymMatrix s_red(Eigen::MatrixXd(q.transpose() * ch.S.mat() * q));
  // Noise on the reduced coordinates: N' = (Q^T N^{-1} Q)^{-1}, which makes
  // every log-det rate with B = Q B' Q^T match the full-dimensional value.
  auto reduce_noise = [&q](const SymMatrix& n) {
    SymMatrix ninv = inverse(n);
    return inverse(SymMatrix(Eigen::MatrixXd(q.transpose() * ninv.mat() * q)));
  };
  return AlignedChannel(reduce_noise(ch.N1), reduce_noise(ch.N2), std::move(s_red));
}

}  // namespace secrecy
