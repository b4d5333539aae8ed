#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <string>

#include "spectail/kernels.hpp"

namespace spectail::kernels {

namespace {

struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scale)(double, double*, std::size_t);
  double (*sum_squares)(const double*, std::size_t);
  void (*csr_matvec)(const CsrView&, const double*, double*);
};

constexpr Table kScalar{scalar::dot, scalar::axpy, scalar::scale, scalar::sum_squares, scalar::csr_matvec};
constexpr Table kAvx2{avx2::dot, avx2::axpy, avx2::scale, avx2::sum_squares, avx2::csr_matvec};

Isa initial_isa() {
  const bool have_avx2 = avx2::available();
  if (const char* env = std::getenv("SPECTAIL_KERNELS")) {
    const std::string v(env);
    if (v == "scalar") return Isa::scalar;
    if (v == "avx2") return have_avx2 ? Isa::avx2 : Isa::scalar;
  }
  return have_avx2 ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

const Table& table() { return current().load(std::memory_order_relaxed) == Isa::avx2 ? kAvx2 : kScalar; }

}  // namespace

Isa active_isa() { return current().load(); }

void set_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2::available()) isa = Isa::scalar;
  current().store(isa);
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  return table().dot(x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  table().axpy(a, x.data(), y.data(), x.size());
}

void scale(double a, std::span<double> x) { table().scale(a, x.data(), x.size()); }

double sum_squares(std::span<const double> x) { return table().sum_squares(x.data(), x.size()); }

double norm2(std::span<const double> x) { return std::sqrt(sum_squares(x)); }

void csr_matvec(const CsrView& m, std::span<const double> x, std::span<double> y) {
  assert(x.size() == m.rows() && y.size() == m.rows());
  table().csr_matvec(m, x.data(), y.data());
}

}  // namespace spectail::kernels
