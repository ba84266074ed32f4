#ifndef NIKISHIN_LINALG_HPP_
#define NIKISHIN_LINALG_HPP_

#include <algorithm>
#include <cstddef>
#include <vector>

#include "nikishin/error.hpp"
#include "nikishin/real.hpp"

namespace nikishin {

// Row-major dense matrix; sized for the desk-scale order-condition systems.
template <class Real>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Real(0)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Real& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Real& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<Real> apply(const std::vector<Real>& x) const {
    if (x.size() != cols_) throw Error(ErrorKind::kDomain, "matrix-vector size mismatch");
    std::vector<Real> y(rows_, Real(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Real> data_;
};

template <class Real>
Real norm2(const std::vector<Real>& v) {
  using std::sqrt;
  Real s(0);
  for (const auto& x : v) s += x * x;
  return sqrt(s);
}

template <class Real>
struct NullDirection {
  std::vector<Real> vector;  // unit 2-norm right singular direction
  Real sigma_min{0};         // smallest singular value (column-equilibrated matrix)
  Real sigma_next{0};        // second smallest; equals sigma_min's slot when cols == 1
  Real sigma_max{0};
  // sigma_next <= 2^10 sigma_min, or sigma_next itself numerically zero: the
  // nullspace is numerically not a line.
  bool multiple = false;
};

// Right singular vector of the smallest singular value via one-sided
// (Hestenes) Jacobi on the column-equilibrated matrix. Works for any shape;
// for a matrix without rows every direction is admissible and the last unit
// vector is returned.
template <class Real>
NullDirection<Real> least_singular_direction(const Matrix<Real>& a) {
  using std::abs;
  using std::sqrt;
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (n == 0) throw Error(ErrorKind::kDomain, "nullspace of a matrix without columns");

  // Columns stored contiguously.
  std::vector<std::vector<Real>> u(n, std::vector<Real>(m, Real(0)));
  std::vector<Real> scale(n, Real(1));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) u[j][i] = a(i, j);
    Real nj = norm2(u[j]);
    if (nj > Real(0)) {
      scale[j] = nj;
      for (auto& x : u[j]) x /= nj;
    }
  }
  std::vector<std::vector<Real>> v(n, std::vector<Real>(n, Real(0)));
  for (std::size_t j = 0; j < n; ++j) v[j][j] = Real(1);

  const Real tol = precision_fraction<Real>(1, 1) * Real(static_cast<long>(std::max<std::size_t>(m, 1)));
  auto dot = [](const std::vector<Real>& x, const std::vector<Real>& y) {
    Real s(0);
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
  };

  bool rotated = true;
  for (int sweep = 0; sweep < 80 && rotated; ++sweep) {
    rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        Real alpha = dot(u[p], u[p]);
        Real beta = dot(u[q], u[q]);
        Real gamma = dot(u[p], u[q]);
        if (gamma == Real(0) || abs(gamma) <= tol * sqrt(alpha * beta)) continue;
        rotated = true;
        Real zeta = (beta - alpha) / (Real(2) * gamma);
        Real t = Real(1) / (abs(zeta) + sqrt(Real(1) + zeta * zeta));
        if (zeta < Real(0)) t = -t;
        Real c = Real(1) / sqrt(Real(1) + t * t);
        Real s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          Real up = u[p][i];
          u[p][i] = c * up - s * u[q][i];
          u[q][i] = s * up + c * u[q][i];
        }
        for (std::size_t i = 0; i < n; ++i) {
          Real vp = v[p][i];
          v[p][i] = c * vp - s * v[q][i];
          v[q][i] = s * vp + c * v[q][i];
        }
      }
    }
  }

  std::vector<Real> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm2(u[j]);
  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < n; ++j) order[j] = j;
  // Ascending singular values, ties broken towards higher column index.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (sigma[x] != sigma[y]) return sigma[x] < sigma[y];
    return x > y;
  });

  NullDirection<Real> out;
  const std::size_t k = order.front();
  out.sigma_min = sigma[k];
  out.sigma_next = n > 1 ? sigma[order[1]] : sigma[k];
  out.sigma_max = sigma[order.back()];
  // Two numerically vanishing values can differ by far more than 2^10.
  out.multiple = n > 1 && (out.sigma_next <= Real(1024) * out.sigma_min ||
                           out.sigma_next <= half_precision_tol<Real>() * out.sigma_max);

  // Undo the equilibration: A (D^-1 v) = (A D^-1) v.
  out.vector.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.vector[j] = v[k][j] / scale[j];
  Real nv = norm2(out.vector);
  for (auto& x : out.vector) x /= nv;
  return out;
}

}  // namespace nikishin

#endif  // NIKISHIN_LINALG_HPP_
