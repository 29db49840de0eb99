#include "doctest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "moss/core/rng.hpp"
#include "moss/kernels/kernels.hpp"

namespace k = moss::kernels;
using moss::core::RandomStream;

namespace {

std::vector<double> random_vec(RandomStream& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-scale, scale);
  return v;
}

bool close(double a, double b, double tol = 1e-11) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

bool all_close(const std::vector<double>& a, const std::vector<double>& b, double tol = 1e-11) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!close(a[i], b[i], tol)) return false;
  return true;
}

}  // namespace

#if defined(__x86_64__) || defined(_M_X64)

TEST_CASE("avx2 variants match scalar reference on awkward sizes") {
  if (!k::avx2_available()) return;
  const k::Ops& s = k::scalar_ops();
  const k::Ops& a = k::avx2_ops();
  RandomStream rng(7, "kernel-equiv");

  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 63u, 64u, 67u, 255u}) {
    auto x = random_vec(rng, n, 3.0);
    auto y = random_vec(rng, n, 3.0);
    CHECK(close(s.dot(x.data(), y.data(), n), a.dot(x.data(), y.data(), n)));
    CHECK(close(s.sum(x.data(), n), a.sum(x.data(), n)));

    std::vector<double> o1(n), o2(n);
    s.add(x.data(), y.data(), o1.data(), n);
    a.add(x.data(), y.data(), o2.data(), n);
    CHECK(all_close(o1, o2));
    s.sub(x.data(), y.data(), o1.data(), n);
    a.sub(x.data(), y.data(), o2.data(), n);
    CHECK(all_close(o1, o2));
    s.mul(x.data(), y.data(), o1.data(), n);
    a.mul(x.data(), y.data(), o2.data(), n);
    CHECK(all_close(o1, o2));
    s.scale(x.data(), 1.7, o1.data(), n);
    a.scale(x.data(), 1.7, o2.data(), n);
    CHECK(all_close(o1, o2));

    auto y1 = y, y2 = y;
    s.axpy(-0.9, x.data(), y1.data(), n);
    a.axpy(-0.9, x.data(), y2.data(), n);
    CHECK(all_close(y1, y2));
  }
}

TEST_CASE("avx2 matmul variants match scalar reference") {
  if (!k::avx2_available()) return;
  const k::Ops& s = k::scalar_ops();
  const k::Ops& av = k::avx2_ops();
  RandomStream rng(11, "kernel-matmul");

  for (auto [m, kk, n] : std::vector<std::array<std::size_t, 3>>{
           {1, 1, 1}, {2, 3, 4}, {5, 7, 3}, {8, 8, 8}, {13, 31, 9}, {16, 64, 33}}) {
    auto A = random_vec(rng, m * kk);
    auto B = random_vec(rng, kk * n);
    std::vector<double> C1(m * n, 0.5), C2(m * n, 0.5);
    s.matmul_acc(A.data(), B.data(), C1.data(), m, kk, n);
    av.matmul_acc(A.data(), B.data(), C2.data(), m, kk, n);
    CHECK(all_close(C1, C2));

    auto At = random_vec(rng, kk * m);
    std::fill(C1.begin(), C1.end(), -0.25);
    std::fill(C2.begin(), C2.end(), -0.25);
    s.matmul_at_b_acc(At.data(), B.data(), C1.data(), kk, m, n);
    av.matmul_at_b_acc(At.data(), B.data(), C2.data(), kk, m, n);
    CHECK(all_close(C1, C2));

    auto Bt = random_vec(rng, n * kk);
    std::fill(C1.begin(), C1.end(), 0.0);
    std::fill(C2.begin(), C2.end(), 0.0);
    s.matmul_a_bt_acc(A.data(), Bt.data(), C1.data(), m, kk, n);
    av.matmul_a_bt_acc(A.data(), Bt.data(), C2.data(), m, kk, n);
    CHECK(all_close(C1, C2));
  }
}

TEST_CASE("force_isa switches the dispatch table") {
  const k::Isa before = k::active_isa();
  k::force_isa(k::Isa::scalar);
  CHECK(k::active_isa() == k::Isa::scalar);
  CHECK(&k::ops() == &k::scalar_ops());
  if (k::avx2_available()) {
    k::force_isa(k::Isa::avx2);
    CHECK(&k::ops() == &k::avx2_ops());
  }
  k::force_isa(before);
}

#endif  // x86-64

TEST_CASE("scalar matmul against naive triple loop") {
  RandomStream rng(3, "kernel-naive");
  const std::size_t m = 6, kk = 5, n = 7;
  auto A = random_vec(rng, m * kk);
  auto B = random_vec(rng, kk * n);
  std::vector<double> C(m * n, 0.0), ref(m * n, 0.0);
  k::scalar_ops().matmul_acc(A.data(), B.data(), C.data(), m, kk, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t p = 0; p < kk; ++p) ref[i * n + j] += A[i * kk + p] * B[p * n + j];
  CHECK(all_close(C, ref, 1e-12));
}
