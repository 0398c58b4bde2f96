#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "adaptlab/constants.hpp"
#include "adaptlab/numerics.hpp"

using namespace adaptlab;

namespace {

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

// Random matrix made Hurwitz by a Gershgorin shift: every disk ends up
// strictly in the left half-plane, no eigensolver needed.
Mat random_hurwitz(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = u(rng);
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::fabs(a(i, j));
    a(i, i) -= row + 0.5;
  }
  return a;
}

Mat random_spd(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = u(rng);
  Mat q = m.transposed() * m;
  for (std::size_t i = 0; i < n; ++i) q(i, i) += 0.1;
  return q;
}

}  // namespace

TEST_CASE("lyapunov solve: scalar and diagonal cases") {
  Mat a(1, 1), q(1, 1);
  a(0, 0) = -1.0;
  q(0, 0) = 2.0;
  CHECK(solve_lyapunov(a, q)(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

  Mat a2 = -1.0 * Mat::identity(2);
  Mat p2 = solve_lyapunov(a2, Mat::identity(2));
  CHECK(p2(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p2(1, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p2(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("lyapunov solve: companion matrix residual") {
  Mat a = mat2(0.0, 1.0, -2.0, -3.0);
  Mat q = Mat::identity(2);
  Mat p = solve_lyapunov(a, q);
  Mat residual = a.transposed() * p + p * a + q;
  CHECK(residual.frobenius_norm() <= 1e-10 * q.frobenius_norm());
  CHECK(sym_eig_bounds(p).min_eig > 0.0);
  CHECK(p.asymmetry() <= 1e-12);
}

TEST_CASE("lyapunov solve: rejects bad input") {
  CHECK_THROWS_AS(solve_lyapunov(Mat(2, 3), Mat::identity(2)),
                  std::invalid_argument);
  // A = +1 is not Hurwitz; the solved P is negative definite.
  Mat a(1, 1), q(1, 1);
  a(0, 0) = 1.0;
  q(0, 0) = 2.0;
  CHECK_THROWS_AS(solve_lyapunov(a, q), std::runtime_error);
}

TEST_CASE("lyapunov solve: random Hurwitz suite") {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 8);
    Mat a = random_hurwitz(rng, n);
    Mat q = random_spd(rng, n);
    Mat p = solve_lyapunov(a, q);
    Mat residual = a.transposed() * p + p * a + q;
    CHECK(residual.frobenius_norm() <=
          tol::lyapunov_residual_rel * q.frobenius_norm());
    CHECK(sym_eig_bounds(p).min_eig > 0.0);
  }
}

TEST_CASE("symmetric eigenvalue bounds") {
  CHECK(sym_eig_bounds(Mat::identity(2)).min_eig == doctest::Approx(1.0));
  CHECK(sym_eig_bounds(Mat::identity(2)).max_eig == doctest::Approx(1.0));

  Mat d(2, 2);
  d(0, 0) = std::numbers::pi;
  d(1, 1) = 3.0 * std::numbers::pi;
  EigBounds eb = sym_eig_bounds(d);
  CHECK(eb.min_eig == doctest::Approx(std::numbers::pi).epsilon(1e-12));
  CHECK(eb.max_eig == doctest::Approx(3.0 * std::numbers::pi).epsilon(1e-12));

  // Characteristic polynomial of [[2,1],[1,2]]: (2-l)^2 = 1 -> {1, 3}.
  eb = sym_eig_bounds(mat2(2.0, 1.0, 1.0, 2.0));
  CHECK(eb.min_eig == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eb.max_eig == doctest::Approx(3.0).epsilon(1e-12));

  CHECK_THROWS_AS(sym_eig_bounds(mat2(1.0, 2.0, 0.0, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("symmetric eigenvalues bracket Rayleigh quotients") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial);
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = u(rng);
    const EigBounds eb = sym_eig_bounds(m);
    for (int k = 0; k < 100; ++k) {
      Vec v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = u(rng);
      if (v.norm() == 0.0) continue;
      const double rayleigh = v.dot(m * v) / v.dot(v);
      CHECK(rayleigh >= eb.min_eig - 1e-9);
      CHECK(rayleigh <= eb.max_eig + 1e-9);
    }
  }
}

TEST_CASE("trapezoid quadrature") {
  std::vector<double> times;
  std::vector<Mat> vals;
  Mat m = mat2(1.0, 2.0, 3.0, 4.0);
  for (int i = 0; i <= 10; ++i) {
    times.push_back(i / 10.0);
    vals.push_back(m);
  }
  Mat integral = trapezoid_integral(times, vals);
  CHECK((integral - m).max_abs() <= 1e-14);

  times.clear();
  std::vector<double> scalars;
  for (int i = 0; i <= 100; ++i) {
    times.push_back(i / 100.0);
    scalars.push_back(times.back());
  }
  CHECK(trapezoid_integral(times, scalars) ==
        doctest::Approx(0.5).epsilon(1e-12));

  times.clear();
  scalars.clear();
  for (int i = 0; i <= 2000; ++i) {
    const double t = 2.0 * std::numbers::pi * i / 2000.0;
    times.push_back(t);
    scalars.push_back(std::sin(t) * std::sin(t));
  }
  CHECK(std::fabs(trapezoid_integral(times, scalars) - std::numbers::pi) <=
        1e-5);

  CHECK_THROWS_AS(trapezoid_integral(std::vector<double>{0.0, 1.0},
                                     std::vector<Mat>{m}),
                  std::invalid_argument);
}

TEST_CASE("trapezoid error drops ~4x per step halving") {
  auto integrate_exp = [](int n) {
    std::vector<double> times, vals;
    for (int i = 0; i <= n; ++i) {
      times.push_back(static_cast<double>(i) / n);
      vals.push_back(std::exp(times.back()));
    }
    return trapezoid_integral(times, vals);
  };
  const double exact = std::exp(1.0) - 1.0;
  const double e1 = std::fabs(integrate_exp(100) - exact);
  const double e2 = std::fabs(integrate_exp(200) - exact);
  CHECK(e1 / e2 >= 3.5);
}

TEST_CASE("linear solve and determinant") {
  Mat a = mat2(2.0, 1.0, 1.0, 3.0);
  Vec x = solve_linear(a, Vec{5.0, 10.0});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(x[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(determinant(a) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(determinant(mat2(1.0, 2.0, 2.0, 4.0)) == doctest::Approx(0.0));
  CHECK_THROWS_AS(solve_linear(mat2(1.0, 2.0, 2.0, 4.0), Vec{1.0, 1.0}),
                  std::runtime_error);
}

TEST_CASE("matrix exponential") {
  Mat d(2, 2);
  d(0, 0) = -1.0;
  d(1, 1) = 2.0;
  Mat e = expm(d);
  CHECK(e(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
  CHECK(e(1, 1) == doctest::Approx(std::exp(2.0)).epsilon(1e-13));
  CHECK(e(0, 1) == doctest::Approx(0.0));

  const double w = 0.7;
  Mat rot = mat2(0.0, -w, w, 0.0);
  Mat r = expm(rot);
  CHECK(r(0, 0) == doctest::Approx(std::cos(w)).epsilon(1e-13));
  CHECK(r(1, 0) == doctest::Approx(std::sin(w)).epsilon(1e-13));

  CHECK((expm(Mat(3, 3)) - Mat::identity(3)).max_abs() <= 1e-15);
}

TEST_CASE("halton sequence radical inverse") {
  CHECK(halton(0, 2) == doctest::Approx(0.5));
  CHECK(halton(1, 2) == doctest::Approx(0.25));
  CHECK(halton(2, 2) == doctest::Approx(0.75));
  CHECK(halton(0, 3) == doctest::Approx(1.0 / 3.0));
  for (int i = 0; i < 100; ++i) {
    CHECK(halton(i, 5) > 0.0);
    CHECK(halton(i, 5) < 1.0);
  }
}
