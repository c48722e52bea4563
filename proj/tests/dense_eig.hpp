#ifndef ORLHARDY_TESTS_DENSE_EIG_HPP
#define ORLHARDY_TESTS_DENSE_EIG_HPP

// Test-only oracle: smallest eigenvalue of the symmetric generalized
// problem A x = lambda B x via Cholesky reduction and cyclic Jacobi.
// Independent of the library's optimizer path.

#include <cmath>
#include <cstddef>
#include <vector>

namespace orlhardy_tests {

using Matrix = std::vector<std::vector<double>>;

inline double min_generalized_eig(Matrix A, const Matrix& B) {
  const std::size_t n = A.size();
  Matrix L(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = B[i][j];
      for (std::size_t k = 0; k < j; ++k) sum -= L[i][k] * L[j][k];
      if (i == j)
        L[i][i] = std::sqrt(sum);
      else
        L[i][j] = sum / L[j][j];
    }
  }
  Matrix C(n, std::vector<double>(n, 0.0));
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double sum = A[i][col];
      for (std::size_t k = 0; k < i; ++k) sum -= L[i][k] * y[k];
      y[i] = sum / L[i][i];
    }
    for (std::size_t i = 0; i < n; ++i) C[i][col] = y[i];
  }
  for (std::size_t row = 0; row < n; ++row) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double sum = C[row][i];
      for (std::size_t k = 0; k < i; ++k) sum -= L[i][k] * y[k];
      y[i] = sum / L[i][i];
    }
    for (std::size_t i = 0; i < n; ++i) C[row][i] = y[i];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double m = 0.5 * (C[i][j] + C[j][i]);
      C[i][j] = C[j][i] = m;
    }
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += C[p][q] * C[p][q];
    if (off < 1e-24) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(C[p][q]) < 1e-18) continue;
        const double theta = 0.5 * (C[q][q] - C[p][p]) / C[p][q];
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cth = 1.0 / std::sqrt(t * t + 1.0), sth = t * cth;
        for (std::size_t k = 0; k < n; ++k) {
          const double ckp = C[k][p], ckq = C[k][q];
          C[k][p] = cth * ckp - sth * ckq;
          C[k][q] = sth * ckp + cth * ckq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double cpk = C[p][k], cqk = C[q][k];
          C[p][k] = cth * cpk - sth * cqk;
          C[q][k] = sth * cpk + cth * cqk;
        }
      }
    }
  }
  double lam = C[0][0];
  for (std::size_t i = 1; i < n; ++i) lam = std::min(lam, C[i][i]);
  return lam;
}

} // namespace orlhardy_tests

#endif
