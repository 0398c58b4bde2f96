#include "adaptlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "adaptlab/constants.hpp"

namespace adaptlab {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

double Vec::norm() const {
  double s = 0.0;
  for (double x : v_) s += x * x;
  return std::sqrt(s);
}

double Vec::dot(const Vec& o) const {
  require(o.size() == size(), "Vec::dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < v_.size(); ++i) s += v_[i] * o.v_[i];
  return s;
}

bool Vec::all_finite() const {
  return std::all_of(v_.begin(), v_.end(),
                     [](double x) { return std::isfinite(x); });
}

Vec& Vec::operator+=(const Vec& o) {
  require(o.size() == size(), "Vec::+=: dimension mismatch");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

Vec& Vec::operator-=(const Vec& o) {
  require(o.size() == size(), "Vec::-=: dimension mismatch");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

Vec& Vec::operator*=(double s) {
  for (double& x : v_) x *= s;
  return *this;
}

Vec operator+(Vec a, const Vec& b) { return a += b; }
Vec operator-(Vec a, const Vec& b) { return a -= b; }
Vec operator*(double s, Vec a) { return a *= s; }

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::outer(const Vec& u, const Vec& w) {
  Mat m(u.size(), w.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) m(i, j) = u[i] * w[j];
  return m;
}

Mat Mat::transposed() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vec Mat::operator*(const Vec& x) const {
  require(x.size() == cols_, "Mat*Vec: dimension mismatch");
  Vec y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Mat Mat::operator*(const Mat& o) const {
  require(cols_ == o.rows_, "Mat*Mat: dimension mismatch");
  Mat r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const double aik = (*this)(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
    }
  return r;
}

Mat& Mat::operator+=(const Mat& o) {
  require(o.rows_ == rows_ && o.cols_ == cols_, "Mat::+=: shape mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  require(o.rows_ == rows_ && o.cols_ == cols_, "Mat::-=: shape mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (double& x : a_) x *= s;
  return *this;
}

Mat operator+(Mat a, const Mat& b) { return a += b; }
Mat operator-(Mat a, const Mat& b) { return a -= b; }
Mat operator*(double s, Mat a) { return a *= s; }

double Mat::frobenius_norm() const {
  double s = 0.0;
  for (double x : a_) s += x * x;
  return std::sqrt(s);
}

double Mat::max_abs() const {
  double m = 0.0;
  for (double x : a_) m = std::max(m, std::fabs(x));
  return m;
}

double Mat::asymmetry() const {
  if (!is_square()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      worst = std::max(worst, std::fabs((*this)(i, j) - (*this)(j, i)));
  const double f = frobenius_norm();
  return f > 0.0 ? worst / f : worst;
}

namespace {

// In-place LU with partial pivoting; returns pivot sign, fills perm.
// Throws on numerically singular input.
double lu_decompose(Mat& a, std::vector<std::size_t>& perm) {
  const std::size_t n = a.rows();
  perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  double sign = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::fabs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double cand = std::fabs(a(i, k));
      if (cand > best) {
        best = cand;
        piv = i;
      }
    }
    if (best == 0.0) throw std::runtime_error("solve_linear: singular matrix");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(perm[k], perm[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      a(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return sign;
}

Vec lu_solve(const Mat& lu, const std::vector<std::size_t>& perm, const Vec& b) {
  const std::size_t n = lu.rows();
  Vec y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= lu(i, j) * y[j];
    y[i] = s;
  }
  Vec x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= lu(ii, j) * x[j];
    x[ii] = s / lu(ii, ii);
  }
  return x;
}

}  // namespace

Vec solve_linear(Mat a, Vec b) {
  require(a.is_square(), "solve_linear: matrix must be square");
  require(a.rows() == b.size(), "solve_linear: size mismatch");
  std::vector<std::size_t> perm;
  lu_decompose(a, perm);
  return lu_solve(a, perm, b);
}

double determinant(Mat a) {
  require(a.is_square(), "determinant: matrix must be square");
  std::vector<std::size_t> perm;
  double det;
  try {
    det = lu_decompose(a, perm);
  } catch (const std::runtime_error&) {
    return 0.0;
  }
  for (std::size_t i = 0; i < a.rows(); ++i) det *= a(i, i);
  return det;
}

std::vector<double> sym_eigenvalues(const Mat& m) {
  require(m.is_square(), "sym_eigenvalues: matrix must be square");
  require(m.asymmetry() <= tol::symmetry_rel,
          "sym_eigenvalues: matrix is not symmetric");
  const std::size_t n = m.rows();
  Mat a = m;
  // Symmetrize exactly so rotations preserve symmetry bit-for-bit.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = v;
      a(j, i) = v;
    }
  const double fro = std::max(a.frobenius_norm(),
                              std::numeric_limits<double>::min());
  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * a(i, j) * a(i, j);
    if (std::sqrt(off) <= tol::jacobi_offdiag_rel * fro) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

EigBounds sym_eig_bounds(const Mat& m) {
  const std::vector<double> eig = sym_eigenvalues(m);
  return {eig.front(), eig.back()};
}

Mat solve_lyapunov(const Mat& a, const Mat& q) {
  require(a.is_square(), "solve_lyapunov: A must be square");
  require(q.rows() == a.rows() && q.cols() == a.cols(),
          "solve_lyapunov: Q shape must match A");
  require(a.rows() <= 32, "solve_lyapunov: n must be <= 32");
  require(q.asymmetry() <= tol::symmetry_rel,
          "solve_lyapunov: Q is not symmetric");
  const std::size_t n = a.rows();

  // Vectorize A^T P + P A = -Q row-major: unknown x = vec(P).
  // d/dP entry (i,j): sum_k A(k,i) P(k,j) + P(i,k) A(k,j).
  const std::size_t nn = n * n;
  Mat big(nn, nn);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t row = i * n + j;
      for (std::size_t k = 0; k < n; ++k) {
        big(row, k * n + j) += a(k, i);
        big(row, i * n + k) += a(k, j);
      }
    }
  Vec rhs(nn);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rhs[i * n + j] = -q(i, j);

  Mat lu = big;
  std::vector<std::size_t> perm;
  lu_decompose(lu, perm);
  Vec x = lu_solve(lu, perm, rhs);
  // One refinement pass keeps the residual near machine level.
  Vec resid(nn);
  {
    Vec bx = big * x;
    for (std::size_t i = 0; i < nn; ++i) resid[i] = rhs[i] - bx[i];
  }
  x += lu_solve(lu, perm, resid);

  Mat p(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p(i, j) = x[i * n + j];
  // The exact solution is symmetric; enforce it to kill rounding skew.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (p(i, j) + p(j, i));
      p(i, j) = v;
      p(j, i) = v;
    }

  const Mat residual = a.transposed() * p + p * a + q;
  if (residual.frobenius_norm() >
      tol::lyapunov_residual_rel * q.frobenius_norm())
    throw std::runtime_error("solve_lyapunov: residual contract violated");
  if (sym_eig_bounds(p).min_eig <= 0.0)
    throw std::runtime_error(
        "solve_lyapunov: P is not positive definite (A not Hurwitz?)");
  return p;
}

Mat trapezoid_integral(const std::vector<double>& times,
                       const std::vector<Mat>& values) {
  require(times.size() == values.size(),
          "trapezoid_integral: times/values length mismatch");
  require(times.size() >= 2, "trapezoid_integral: need at least 2 samples");
  for (std::size_t i = 1; i < times.size(); ++i)
    require(times[i] > times[i - 1],
            "trapezoid_integral: times must be strictly increasing");
  Mat acc(values[0].rows(), values[0].cols());
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double w = 0.5 * (times[i] - times[i - 1]);
    Mat seg = values[i - 1] + values[i];
    acc += w * seg;
  }
  return acc;
}

double trapezoid_integral(const std::vector<double>& times,
                          const std::vector<double>& values) {
  std::vector<Mat> ms;
  ms.reserve(values.size());
  for (double v : values) {
    Mat m(1, 1);
    m(0, 0) = v;
    ms.push_back(m);
  }
  return trapezoid_integral(times, ms)(0, 0);
}

Mat expm(const Mat& m) {
  require(m.is_square(), "expm: matrix must be square");
  const std::size_t n = m.rows();
  double scale_norm = m.max_abs() * static_cast<double>(n);
  int s = 0;
  while (scale_norm > 0.5 && s < 60) {
    scale_norm *= 0.5;
    ++s;
  }
  Mat x = std::ldexp(1.0, -s) * m;
  Mat term = Mat::identity(n);
  Mat sum = term;
  for (int k = 1; k <= 24; ++k) {
    term = (1.0 / k) * (term * x);
    sum += term;
  }
  for (int k = 0; k < s; ++k) sum = sum * sum;
  return sum;
}

double halton(unsigned long long index, unsigned base) {
  double f = 1.0, r = 0.0;
  unsigned long long i = index + 1;  // skip the degenerate 0 term
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

}  // namespace adaptlab
