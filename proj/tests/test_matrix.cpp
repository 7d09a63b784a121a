#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "secrecy/matrix.hpp"
#include "support.hpp"

using namespace secrecy;
using namespace testsupport;

namespace {

SymMatrix make2(double a, double b, double c) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, b, c;
  return SymMatrix(std::move(m));
}

}  // namespace

TEST_CASE("construction symmetrizes and rejects non-square input") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 0.3, 0.1, 2.0;
  SymMatrix s(m);
  CHECK(s(0, 1) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(s(1, 0) == s(0, 1));
  CHECK_THROWS_AS(SymMatrix(Eigen::MatrixXd::Zero(2, 3)), DimensionError);
}

TEST_CASE("psd_check on known-sign matrices") {
  CHECK(psd_check(SymMatrix::Zero(3)));
  CHECK(psd_check(make2(2, 1, 2)));   // eigenvalues 1 and 3
  CHECK(!psd_check(make2(1, 2, 1)));  // eigenvalues -1 and 3
}

TEST_CASE("loewner_leq basics") {
  const SymMatrix s = example_S();
  CHECK(loewner_leq(s, s));
  CHECK(loewner_leq(SymMatrix::Zero(2), s));
  CHECK(!loewner_leq(SymMatrix(2.0 * Eigen::MatrixXd::Identity(2, 2)),
                     SymMatrix::Identity(2)));
  CHECK_THROWS_AS(loewner_leq(SymMatrix::Identity(2), SymMatrix::Identity(3)),
                  DimensionError);
}

TEST_CASE("logdet in bits") {
  CHECK(logdet(SymMatrix::Identity(3)) == doctest::Approx(0.0));
  CHECK(logdet(SymMatrix(2.0 * Eigen::MatrixXd::Identity(2, 2))) ==
        doctest::Approx(2.0));
  CHECK(logdet(make2(2, 1, 2)) == doctest::Approx(std::log2(3.0)));
  CHECK_THROWS_AS(logdet(make2(1, 2, 1)), SingularMatrixError);
  CHECK_THROWS_AS(logdet(SymMatrix::Zero(2)), SingularMatrixError);
}

TEST_CASE("logdet_nat consistent with logdet") {
  std::mt19937 rng(7);
  for (int i = 0; i < 20; ++i) {
    SymMatrix a = random_spd(rng, 3);
    CHECK(logdet(a) == doctest::Approx(logdet_nat(a) / std::log(2.0))
                           .epsilon(1e-12));
  }
}

TEST_CASE("inverse, svd, eig_sym factorization contracts") {
  CHECK((inverse(SymMatrix::Identity(2)).mat() -
         Eigen::MatrixXd::Identity(2, 2))
            .norm() < 1e-12);
  CHECK_THROWS_AS(inverse(SymMatrix::Zero(2)), SingularMatrixError);

  SvdResult sv = svd(Eigen::Vector2d(3.0, 0.0).asDiagonal().toDenseMatrix());
  CHECK(sv.singular_values(0) == doctest::Approx(3.0));
  CHECK(sv.singular_values(1) == doctest::Approx(0.0));

  EigResult e = eig_sym(make2(2, 1, 2));
  CHECK(e.values(0) == doctest::Approx(1.0));
  CHECK(e.values(1) == doctest::Approx(3.0));
}

TEST_CASE("random reconstruction properties") {
  std::mt19937 rng(11);
  for (int i = 0; i < 50; ++i) {
    SymMatrix a = random_spd(rng, 4);
    CHECK((inverse(a).mat() * a.mat() - Eigen::MatrixXd::Identity(4, 4))
              .norm() < 1e-9);

    Eigen::MatrixXd g = random_matrix(rng, 3, 4);
    SvdResult sv = svd(g);
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(3, 4);
    sigma.diagonal() = sv.singular_values;
    Eigen::MatrixXd rec = sv.U * sigma * sv.V.transpose();
    CHECK((rec - g).norm() <= 1e-10 * (1.0 + g.norm()));

    EigResult e = eig_sym(a);
    Eigen::MatrixXd rec2 =
        e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    CHECK((rec2 - a.mat()).norm() <= 1e-10 * (1.0 + a.mat().norm()));
  }
}

TEST_CASE("loewner order is monotone under PSD addition") {
  std::mt19937 rng(13);
  for (int i = 0; i < 50; ++i) {
    SymMatrix a = random_spd(rng, 3);
    SymMatrix b = random_spd(rng, 3);
    CHECK(loewner_leq(a, a + b));
  }
}

TEST_CASE("determinant scaling identity") {
  std::mt19937 rng(17);
  for (int i = 0; i < 30; ++i) {
    SymMatrix a = random_spd(rng, 3);
    const double c = std::uniform_real_distribution<double>(0.1, 5.0)(rng);
    CHECK(logdet(c * a) ==
          doctest::Approx(3.0 * std::log2(c) + logdet(a)).epsilon(1e-9));
  }
}

TEST_CASE("sym coordinate maps round-trip") {
  std::mt19937 rng(19);
  const auto basis = sym_basis(3);
  CHECK(basis.size() == 6);
  for (int i = 0; i < 10; ++i) {
    SymMatrix a = random_spd(rng, 3);
    Eigen::VectorXd v = sym_vec(a.mat());
    Eigen::MatrixXd rec = Eigen::MatrixXd::Zero(3, 3);
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      rec += v(k) * basis[static_cast<std::size_t>(k)];
    }
    CHECK((rec - a.mat()).norm() < 1e-14);
    CHECK((sym_unvec(v, 3) - a.mat()).norm() < 1e-14);
  }
}
