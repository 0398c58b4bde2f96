#pragma once

// Minimal dense linear-algebra kernel for small systems (n <= 32):
// vectors, row-major matrices, a pivoted linear solve, a symmetric
// eigensolver based on cyclic Jacobi rotations, a vectorized Lyapunov
// solve, trapezoid quadrature on sampled data and a scaled-squaring
// matrix exponential. Everything is value-semantic and pure.

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace adaptlab {

class Vec {
 public:
  Vec() = default;
  explicit Vec(std::size_t n, double fill = 0.0) : v_(n, fill) {}
  Vec(std::initializer_list<double> xs) : v_(xs) {}

  std::size_t size() const { return v_.size(); }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }
  const std::vector<double>& data() const { return v_; }
  std::vector<double>& data() { return v_; }

  double norm() const;
  double dot(const Vec& o) const;
  bool all_finite() const;

  Vec& operator+=(const Vec& o);
  Vec& operator-=(const Vec& o);
  Vec& operator*=(double s);

 private:
  std::vector<double> v_;
};

Vec operator+(Vec a, const Vec& b);
Vec operator-(Vec a, const Vec& b);
Vec operator*(double s, Vec a);

class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}
  static Mat identity(std::size_t n);
  static Mat outer(const Vec& u, const Vec& w);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Mat transposed() const;
  Vec operator*(const Vec& x) const;
  Mat operator*(const Mat& o) const;
  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat& operator*=(double s);

  double frobenius_norm() const;
  double max_abs() const;
  bool is_square() const { return rows_ == cols_; }
  // Max |a_ij - a_ji| relative to the Frobenius norm.
  double asymmetry() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator*(double s, Mat a);

// Gaussian elimination with partial pivoting. Throws std::runtime_error
// on a (numerically) singular matrix.
Vec solve_linear(Mat a, Vec b);

// Determinant via the same pivoted elimination.
double determinant(Mat a);

// All eigenvalues of a symmetric matrix, ascending, via cyclic Jacobi
// sweeps. Rejects matrices whose asymmetry exceeds the tolerance.
std::vector<double> sym_eigenvalues(const Mat& m);

struct EigBounds {
  double min_eig;
  double max_eig;
};

// Extremal eigenvalues of a symmetric matrix.
EigBounds sym_eig_bounds(const Mat& m);

// Solves A^T P + P A = -Q for symmetric positive-definite Q and Hurwitz
// A by vectorizing to an n^2 x n^2 linear system (one refinement pass).
// Throws if the residual contract fails or the solved P is not positive
// definite, which signals a non-Hurwitz A.
Mat solve_lyapunov(const Mat& a, const Mat& q);

// Composite trapezoid rule over matrix samples on a strictly increasing
// (not necessarily uniform) time grid. Exact for piecewise-linear data.
Mat trapezoid_integral(const std::vector<double>& times,
                       const std::vector<Mat>& values);

// Scalar convenience overload.
double trapezoid_integral(const std::vector<double>& times,
                          const std::vector<double>& values);

// Matrix exponential by scaling-and-squaring with a truncated series.
Mat expm(const Mat& m);

// Halton low-discrepancy sequence value (index >= 0, prime base).
double halton(unsigned long long index, unsigned base);

}  // namespace adaptlab
