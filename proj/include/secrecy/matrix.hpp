#pragma once

#include <Eigen/Dense>
#include <vector>

#include "secrecy/errors.hpp"

namespace secrecy {

using GeneralMatrix = Eigen::MatrixXd;

// Minimum-eigenvalue slack tolerated when deciding positive semidefiniteness.
inline constexpr double kPsdTol = 1e-9;

// All reported rates are in bits per channel use (base-2 logarithms).
double log2_of(double x);

/// Real symmetric matrix of dimension t >= 1.  Construction symmetrizes the
/// input as (A + A^T)/2, so every stored matrix is exactly symmetric.
class SymMatrix {
 public:
  explicit SymMatrix(Eigen::MatrixXd m);

  static SymMatrix Identity(Eigen::Index t);
  static SymMatrix Zero(Eigen::Index t);
  static SymMatrix Scalar(double v);

  Eigen::Index dim() const { return m_.rows(); }
  const Eigen::MatrixXd& mat() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  Eigen::MatrixXd m_;
};

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator*(double c, const SymMatrix& a);

struct EigResult {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};

struct SvdResult {
  Eigen::MatrixXd U;
  Eigen::VectorXd singular_values;  // descending
  Eigen::MatrixXd V;
};

double min_eigenvalue(const SymMatrix& a);

// True iff min eigenvalue of a >= -tol.
bool psd_check(const SymMatrix& a, double tol = kPsdTol);

// Loewner order: true iff b - a is PSD at tolerance tol.
bool loewner_leq(const SymMatrix& a, const SymMatrix& b, double tol = kPsdTol);

// log2 det(a); requires a positive definite.
double logdet(const SymMatrix& a);

// ln det(a); requires a positive definite.
double logdet_nat(const SymMatrix& a);

SymMatrix inverse(const SymMatrix& a);

EigResult eig_sym(const SymMatrix& a);

SvdResult svd(const GeneralMatrix& m);

// Orthonormal basis of the symmetric t x t matrices under the trace inner
// product is not needed; this is the plain coordinate basis: E_ii = e_i e_i^T
// and E_ij = e_i e_j^T + e_j e_i^T for i < j.  sym_vec/sym_unvec are the
// matching coordinate maps, so B = sum_k sym_vec(B)[k] * basis[k].
std::vector<Eigen::MatrixXd> sym_basis(Eigen::Index t);
Eigen::VectorXd sym_vec(const Eigen::MatrixXd& b);
Eigen::MatrixXd sym_unvec(const Eigen::VectorXd& x, Eigen::Index t);

}  // namespace secrecy
