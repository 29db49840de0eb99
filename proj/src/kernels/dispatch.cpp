#include "moss/kernels/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace moss::kernels {

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_available() {
  static const bool ok =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
}
#endif

namespace {

Isa detect_isa() {
  if (const char* env = std::getenv("MOSS_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
#if defined(__x86_64__) || defined(_M_X64)
    if (std::strcmp(env, "avx2") == 0 && avx2_available()) return Isa::avx2;
#endif
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (avx2_available()) return Isa::avx2;
#endif
  return Isa::scalar;
}

Isa& current_isa() {
  static Isa isa = detect_isa();
  return isa;
}

}  // namespace

Isa active_isa() { return current_isa(); }

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "?";
}

void force_isa(Isa isa) {
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == Isa::avx2 && !avx2_available())
    throw std::runtime_error("force_isa: avx2 not supported on this CPU");
#else
  if (isa == Isa::avx2)
    throw std::runtime_error("force_isa: avx2 not supported on this platform");
#endif
  current_isa() = isa;
}

const Ops& ops() {
#if defined(__x86_64__) || defined(_M_X64)
  if (current_isa() == Isa::avx2) return avx2_ops();
#endif
  return scalar_ops();
}

}  // namespace moss::kernels
