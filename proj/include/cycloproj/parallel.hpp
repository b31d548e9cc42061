#pragma once

#include <cstddef>
#include <functional>

namespace cycloproj {

// Hardware concurrency, capped by CYCLOPROJ_THREADS when set.
std::size_t worker_count();

// Calls fn(i) for i in [0, count) on up to worker_count() threads. Exceptions
// from fn are rethrown on the caller (the first one by index wins).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace cycloproj
