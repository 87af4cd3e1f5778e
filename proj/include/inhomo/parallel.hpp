#pragma once

// Index-parallel loops over independent work items (ensemble samples, paired
// runs). Results are written by index, so output does not depend on the
// number of workers.

#include <functional>

namespace inhomo {

// Caps the number of worker threads; n < 1 restores the default of one
// worker per hardware thread.
void set_worker_limit(int n);
int worker_limit();

// Runs body(i) for i in [0, count). The first exception (lowest index) is
// rethrown after all workers finish.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace inhomo
