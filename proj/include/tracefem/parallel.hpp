#pragma once

#include <thread>
#include <utility>
#include <vector>

namespace tracefem {

/// Splits [0, n) into `parts` near-equal contiguous ranges (some possibly
/// empty). Depends only on n and parts, never on runtime scheduling.
inline std::vector<std::pair<int, int>> split_ranges(int n, int parts) {
  if (parts < 1) parts = 1;
  std::vector<std::pair<int, int>> ranges;
  ranges.reserve(parts);
  int base = n / parts, rem = n % parts, begin = 0;
  for (int p = 0; p < parts; ++p) {
    int len = base + (p < rem ? 1 : 0);
    ranges.emplace_back(begin, begin + len);
    begin += len;
  }
  return ranges;
}

/// Runs f(0), ..., f(threads - 1) on separate threads (inline when 1).
template <class F>
void run_parallel(int threads, F&& f) {
  if (threads <= 1) {
    f(0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back([&f, t] { f(t); });
  for (auto& th : pool) th.join();
}

}  // namespace tracefem
