#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace semistab::detail {

// Runs f(i) for i in [0, n) on up to `jobs` threads, each owning one
// contiguous chunk. The first exception (in chunk order) is rethrown.
template <class F>
void parallel_for(int n, int jobs, F&& f) {
  const int workers = std::clamp(jobs, 1, std::max(1, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  {
    std::vector<std::jthread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      const int begin = static_cast<int>(static_cast<long long>(n) * w / workers);
      const int end = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
      threads.emplace_back([&f, &errors, begin, end, w] {
        try {
          for (int i = begin; i < end; ++i) f(i);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace semistab::detail
