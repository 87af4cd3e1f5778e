#include <atomic>
#include <cstdlib>
#include <string>

#include "inhomo/kernels.hpp"

namespace inhomo::kernels {
namespace {

const KernelTable* initial_table() {
  if (const char* env = std::getenv("INHOMO_EULER_SIMD"); env && std::string(env) == "scalar") {
    return &scalar_table();
  }
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void set_backend(Backend b) {
  const KernelTable* t = &scalar_table();
  if (b == Backend::Avx2 && avx2_table()) t = avx2_table();
  current().store(t, std::memory_order_release);
}

Backend active_backend() { return active().backend; }

std::string_view backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

}  // namespace inhomo::kernels
