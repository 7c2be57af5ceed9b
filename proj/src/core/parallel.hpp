#pragma once

#include <cstddef>
#include <functional>

namespace flevy {

// Worker count: hardware concurrency, capped by FLEVY_THREADS when set, and
// by set_thread_limit() when nonzero.
unsigned thread_count();
void set_thread_limit(unsigned limit);

// Runs body(i) for i in [0, n). Results must be written to per-index slots;
// callers reduce sequentially afterwards so output never depends on the
// thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace flevy
