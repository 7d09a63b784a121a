#include "secrecy/matrix.hpp"

#include <cmath>
#include <numbers>

namespace secrecy {

double log2_of(double x) { return std::log2(x); }

SymMatrix::SymMatrix(Eigen::MatrixXd m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DimensionError("SymMatrix: input must be square with dim >= 1");
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::Identity(Eigen::Index t) {
  return SymMatrix(Eigen::MatrixXd::Identity(t, t));
}

SymMatrix SymMatrix::Zero(Eigen::Index t) {
  return SymMatrix(Eigen::MatrixXd::Zero(t, t));
}

SymMatrix SymMatrix::Scalar(double v) {
  Eigen::MatrixXd m(1, 1);
  m(0, 0) = v;
  return SymMatrix(m);
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("SymMatrix +: dimension mismatch");
  return SymMatrix(a.mat() + b.mat());
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("SymMatrix -: dimension mismatch");
  return SymMatrix(a.mat() - b.mat());
}

SymMatrix operator*(double c, const SymMatrix& a) { return SymMatrix(c * a.mat()); }

double min_eigenvalue(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.mat(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool psd_check(const SymMatrix& a, double tol) {
  if (tol < 0) throw DomainError("psd_check: tol must be nonnegative");
  return min_eigenvalue(a) >= -tol;
}

bool loewner_leq(const SymMatrix& a, const SymMatrix& b, double tol) {
  if (a.dim() != b.dim()) throw DimensionError("loewner_leq: dimension mismatch");
  return psd_check(b - a, tol);
}

double logdet_nat(const SymMatrix& a) {
  Eigen::LLT<Eigen::MatrixXd> llt(a.mat());
  if (llt.info() != Eigen::Success) {
    throw SingularMatrixError("logdet: matrix is not positive definite");
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

double logdet(const SymMatrix& a) { return logdet_nat(a) / std::numbers::ln2; }

SymMatrix inverse(const SymMatrix& a) {
  EigResult e = eig_sym(a);
  const double floor = 1e-12 * (1.0 + e.values.cwiseAbs().maxCoeff());
  if (e.values.cwiseAbs().minCoeff() <= floor) {
    throw SingularMatrixError("inverse: matrix is singular");
  }
  Eigen::MatrixXd inv =
      e.vectors * e.values.cwiseInverse().asDiagonal() * e.vectors.transpose();
  return SymMatrix(std::move(inv));
}

EigResult eig_sym(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.mat());
  return {es.eigenvalues(), es.eigenvectors()};
}

SvdResult svd(const GeneralMatrix& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> s(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {s.matrixU(), s.singularValues(), s.matrixV()};
}

std::vector<Eigen::MatrixXd> sym_basis(Eigen::Index t) {
  std::vector<Eigen::MatrixXd> basis;
  basis.reserve(static_cast<std::size_t>(t * (t + 1) / 2));
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = i; j < t; ++j) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(t, t);
      e(i, j) = 1.0;
      e(j, i) = 1.0;
      basis.push_back(std::move(e));
    }
  }
  return basis;
}

Eigen::VectorXd sym_vec(const Eigen::MatrixXd& b) {
  const Eigen::Index t = b.rows();
  Eigen::VectorXd x(t * (t + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = i; j < t; ++j) x(k++) = b(i, j);
  }
  return x;
}

Eigen::MatrixXd sym_unvec(const Eigen::VectorXd& x, Eigen::Index t) {
  Eigen::MatrixXd b(t, t);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = i; j < t; ++j) {
      b(i, j) = x(k);
      b(j, i) = x(k);
      ++k;
    }
  }
  return b;
}

}  // namespace secrecy
