#include <random>
#include <vector>

#include "doctest.h"
#include "spectail/kernels.hpp"
#include "spectail/network_sampler.hpp"

using namespace spectail;

TEST_SUITE("kernels") {
  TEST_CASE("avx2 matches scalar") {
    if (!kernels::avx2::available()) {
      MESSAGE("avx2 unavailable, skipping");
      return;
    }
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    for (std::size_t n : {0, 1, 3, 4, 5, 7, 8, 15, 16, 17, 63, 64, 65, 1000, 1001}) {
      std::vector<double> x(n), y(n);
      for (auto& v : x) v = nd(rng);
      for (auto& v : y) v = nd(rng);
      const double tol = 1e-12 * (1.0 + n);
      CHECK(std::abs(kernels::scalar::dot(x.data(), y.data(), n) - kernels::avx2::dot(x.data(), y.data(), n)) <= tol);
      CHECK(std::abs(kernels::scalar::sum_squares(x.data(), n) - kernels::avx2::sum_squares(x.data(), n)) <= tol);
      auto y1 = y, y2 = y;
      kernels::scalar::axpy(0.37, x.data(), y1.data(), n);
      kernels::avx2::axpy(0.37, x.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-14);
      auto s1 = x, s2 = x;
      kernels::scalar::scale(-1.5, s1.data(), n);
      kernels::avx2::scale(-1.5, s2.data(), n);
      CHECK(s1 == s2);
    }
  }

  TEST_CASE("csr matvec avx2 matches scalar") {
    if (!kernels::avx2::available()) return;
    Rng rng = make_rng(11);
    for (double d : {0.5, 2.0, 8.0, 30.0}) {
      const auto g = sampler::sample_network({300, d, 0}, rng);
      std::vector<double> x(300), y1(300), y2(300);
      std::normal_distribution<double> nd;
      for (auto& v : x) v = nd(rng);
      kernels::scalar::csr_matvec(g.csr(), x.data(), y1.data());
      kernels::avx2::csr_matvec(g.csr(), x.data(), y2.data());
      for (int i = 0; i < 300; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-12);
    }
  }

  TEST_CASE("dispatch switch") {
    const auto before = kernels::active_isa();
    kernels::set_isa(kernels::Isa::scalar);
    CHECK(kernels::active_isa() == kernels::Isa::scalar);
    CHECK(kernels::isa_name(kernels::Isa::scalar) == "scalar");
    std::vector<double> x{3.0, 4.0};
    CHECK(kernels::norm2(x) == doctest::Approx(5.0));
    kernels::set_isa(before);
  }
}
