#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "instanton/errors.hpp"
#include "instanton/pfaffian.hpp"
#include "instanton/rng.hpp"

using namespace instanton;

namespace {

Eigen::MatrixXd random_antisym(int n, Rng& rng) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = rng.normal();
      a(j, i) = -a(i, j);
    }
  return a;
}

}  // namespace

TEST_CASE("pfaffian squared equals the determinant") {
  Rng rng(1);
  for (int n = 2; n <= 12; n += 2) {
    for (int rep = 0; rep < 5; ++rep) {
      const Eigen::MatrixXd a = random_antisym(n, rng);
      const double pf = pfaffian(a);
      CHECK(pf * pf == doctest::Approx(a.determinant()).epsilon(1e-9));
    }
  }
}

TEST_CASE("pfaffian of canonical block forms") {
  // direct sum of [[0, a_i], [-a_i, 0]] has pfaffian prod a_i
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 6);
  const double v[3] = {2.0, -3.0, 0.5};
  for (int b = 0; b < 3; ++b) {
    a(2 * b, 2 * b + 1) = v[b];
    a(2 * b + 1, 2 * b) = -v[b];
  }
  CHECK(pfaffian(a) == doctest::Approx(2.0 * -3.0 * 0.5).epsilon(1e-12));

  // 4x4 closed form a01 a23 - a02 a13 + a03 a12
  Rng rng(2);
  const Eigen::MatrixXd m = random_antisym(4, rng);
  const double closed = m(0, 1) * m(2, 3) - m(0, 2) * m(1, 3) + m(0, 3) * m(1, 2);
  CHECK(pfaffian(m) == doctest::Approx(closed).epsilon(1e-12));

  // zero matrix
  CHECK(pfaffian(Eigen::MatrixXd::Zero(4, 4)) == 0.0);
}

TEST_CASE("pfaffian congruence covariance") {
  // Pf(B A B^T) = det(B) Pf(A)
  Rng rng(3);
  for (int rep = 0; rep < 5; ++rep) {
    const Eigen::MatrixXd a = random_antisym(6, rng);
    Eigen::MatrixXd b(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) b(i, j) = rng.normal();
    const Eigen::MatrixXd c = b * a * b.transpose();
    CHECK(pfaffian(c) ==
          doctest::Approx(b.determinant() * pfaffian(a)).epsilon(1e-8));
  }
}

TEST_CASE("pfaffian input contract") {
  CHECK_THROWS_AS(pfaffian(Eigen::MatrixXd::Zero(3, 3)), OddDimension);
  CHECK_THROWS_AS(pfaffian(Eigen::MatrixXd::Identity(4, 4)), NotAntisymmetric);
  Eigen::MatrixXd notsquare = Eigen::MatrixXd::Zero(2, 4);
  CHECK_THROWS_AS(pfaffian(notsquare), DimensionMismatch);
}
