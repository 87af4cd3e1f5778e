#include "inhomo/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace inhomo {
namespace {

int default_limit() { return std::max(1u, std::thread::hardware_concurrency()); }

std::atomic<int> g_limit{0};

}  // namespace

void set_worker_limit(int n) { g_limit = n < 1 ? 0 : n; }

int worker_limit() {
  const int n = g_limit.load();
  return n > 0 ? n : default_limit();
}

void parallel_for(int count, const std::function<void(int)>& body) {
  if (count <= 0) return;
  const int workers = std::min(worker_limit(), count);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  auto run_one = [&](int i) {
    try {
      body(i);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  };
  if (workers == 1) {
    for (int i = 0; i < count; ++i) run_one(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next++; i < count; i = next++) run_one(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace inhomo
