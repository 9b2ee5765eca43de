#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nnstne/embedding.hpp"
#include "support.hpp"

using namespace nnstne;

TEST_CASE("t_membership hand evaluation at alpha = 1") {
  Eigen::MatrixXd f(1, 2);
  f << 0, 1;
  const MembershipMatrix m = t_membership(f, 1.0);
  // kernels (1+0)^-1 = 1 and (1+1)^-1 = 1/2 -> q = [2/3, 1/3]
  CHECK(m.q(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(m.q(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("equal distances give the uniform row") {
  Eigen::MatrixXd f = Eigen::MatrixXd::Constant(3, 5, 0.7);
  const MembershipMatrix m = t_membership(f, 1.0);
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 5; ++k) CHECK(m.q(i, k) == doctest::Approx(0.2).epsilon(1e-14));
  }
}

TEST_CASE("single shapelet normalizes to 1") {
  Eigen::MatrixXd f(2, 1);
  f << 0.3, 1.9;
  const MembershipMatrix m = t_membership(f, 1.0);
  CHECK(m.q(0, 0) == 1.0);
  CHECK(m.q(1, 0) == 1.0);
}

TEST_CASE("rows are stochastic and monotone in the distances") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const int k = 1 + static_cast<int>(rng() % 8);
    Eigen::MatrixXd f(n, k);
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < k; ++c) f(i, c) = 2.0 * testsup::uniform01(rng);
    }
    const double alpha = 0.25 + 4.0 * testsup::uniform01(rng);
    const MembershipMatrix m = t_membership(f, alpha);
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(m.q.row(i).sum() - 1.0) <= 1e-12);
      for (int a = 0; a < k; ++a) {
        CHECK(m.q(i, a) > 0.0);
        CHECK(m.q(i, a) <= 1.0);
        for (int b = 0; b < k; ++b) {
          if (f(i, a) < f(i, b)) CHECK(m.q(i, a) > m.q(i, b));
        }
      }
    }
  }
}

TEST_CASE("large alpha approaches the softmax of -f/2") {
  std::mt19937_64 rng(22);
  Eigen::MatrixXd f(4, 3);
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 3; ++k) f(i, k) = 2.0 * testsup::uniform01(rng);
  }
  const MembershipMatrix m = t_membership(f, 1e6);
  for (int i = 0; i < 4; ++i) {
    Eigen::Vector3d soft = (-f.row(i).transpose() / 2.0).array().exp();
    soft /= soft.sum();
    for (int k = 0; k < 3; ++k) CHECK(std::abs(m.q(i, k) - soft[k]) <= 1e-3);
  }
}

TEST_CASE("t_membership input contract") {
  CHECK_THROWS_AS(t_membership(Eigen::MatrixXd(2, 0), 1.0), std::invalid_argument);
  Eigen::MatrixXd f(1, 2);
  f << 0.5, 0.5;
  CHECK_THROWS_AS(t_membership(f, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(t_membership(f, -1.0), std::invalid_argument);
  f(0, 0) = -0.1;
  CHECK_THROWS_AS(t_membership(f, 1.0), std::invalid_argument);
  f(0, 0) = -1e-14;  // numerical dust is clamped, not rejected
  CHECK_NOTHROW(t_membership(f, 1.0));
}
