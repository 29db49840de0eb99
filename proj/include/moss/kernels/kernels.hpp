#pragma once

#include <cstddef>
#include <string>

// Dense double-precision primitives behind the NN stack. Every primitive has
// a scalar reference implementation and (on x86-64) an AVX2+FMA variant; the
// active variant is chosen once at startup from CPUID, overridable with the
// MOSS_KERNELS environment variable or force_isa(). SIMD and scalar variants
// agree to rounding error (FMA contraction differs), never in shape or
// semantics; tests/test_kernels.cpp pins the equivalence.

namespace moss::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa();
const char* isa_name(Isa isa);

// Selects an ISA explicitly. Throws std::runtime_error if unsupported on
// this machine. Intended for tests and the MOSS_KERNELS override.
void force_isa(Isa isa);

struct Ops {
  // reductions
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  // elementwise, out may alias x or y
  void (*add)(const double* x, const double* y, double* out, std::size_t n);
  void (*sub)(const double* x, const double* y, double* out, std::size_t n);
  void (*mul)(const double* x, const double* y, double* out, std::size_t n);
  void (*scale)(const double* x, double a, double* out, std::size_t n);
  void (*axpy)(double a, const double* x, double* y, std::size_t n);  // y += a*x
  // C(m,n) += A(m,k) * B(k,n), row-major, no aliasing
  void (*matmul_acc)(const double* a, const double* b, double* c,
                     std::size_t m, std::size_t k, std::size_t n);
  // C(m,n) += A(k,m)^T * B(k,n)
  void (*matmul_at_b_acc)(const double* a, const double* b, double* c,
                          std::size_t k, std::size_t m, std::size_t n);
  // C(m,n) += A(m,k) * B(n,k)^T
  void (*matmul_a_bt_acc)(const double* a, const double* b, double* c,
                          std::size_t m, std::size_t k, std::size_t n);
};

// Active dispatch table. Stable for the lifetime of the process unless
// force_isa() is called (single-threaded callers only).
const Ops& ops();

// Reference table, always scalar. Used by equivalence tests.
const Ops& scalar_ops();

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_available();
const Ops& avx2_ops();  // only valid to call through if avx2_available()
#endif

}  // namespace moss::kernels
