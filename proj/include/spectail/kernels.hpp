#pragma once
// Dense and sparse vector kernels used by the Lanczos eigensolver.
//
// Each kernel has a scalar reference implementation and an AVX2 variant.
// The active variant is chosen once at startup from CPUID, and can be forced
// through the SPECTAIL_KERNELS environment variable ("scalar", "avx2",
// "auto") or set_isa().

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace spectail::kernels {

enum class Isa { scalar, avx2 };

/// Compressed sparse row view of a square matrix. Column indices are 32-bit so
/// the AVX2 path can use hardware gathers.
struct CsrView {
  std::span<const std::int32_t> row_ptr;  // size rows + 1
  std::span<const std::int32_t> col;
  std::span<const double> val;
  std::size_t rows() const { return row_ptr.empty() ? 0 : row_ptr.size() - 1; }
};

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
double sum_squares(const double* x, std::size_t n);
void csr_matvec(const CsrView& m, const double* x, double* y);
}  // namespace scalar

namespace avx2 {
bool available();
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
double sum_squares(const double* x, std::size_t n);
void csr_matvec(const CsrView& m, const double* x, double* y);
}  // namespace avx2

Isa active_isa();
void set_isa(Isa isa);  // falls back to scalar when avx2 is unavailable
std::string_view isa_name(Isa isa);

double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);
double sum_squares(std::span<const double> x);
double norm2(std::span<const double> x);
void csr_matvec(const CsrView& m, std::span<const double> x, std::span<double> y);

}  // namespace spectail::kernels
