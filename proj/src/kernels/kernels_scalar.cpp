#include "spectail/kernels.hpp"

namespace spectail::kernels::scalar {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double sum_squares(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

void csr_matvec(const CsrView& m, const double* x, double* y) {
  const std::size_t rows = m.rows();
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0;
    for (std::int32_t p = m.row_ptr[r]; p < m.row_ptr[r + 1]; ++p) s += m.val[p] * x[m.col[p]];
    y[r] = s;
  }
}

}  // namespace spectail::kernels::scalar
