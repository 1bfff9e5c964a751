#include "cch/parallel.hpp"

#include <atomic>
#include <algorithm>
#include <thread>

namespace cch {

namespace {
int g_threads = 0;  // 0 = not set yet
}

void set_num_threads(int n) { g_threads = n < 1 ? 1 : n; }

int num_threads() {
  if (g_threads > 0) return g_threads;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for_blocks(std::size_t n, std::size_t block_size,
                         const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  if (block_size == 0) block_size = 1;
  const std::size_t nblocks = (n + block_size - 1) / block_size;
  const int nt = std::min<std::size_t>(num_threads(), nblocks);
  if (nt <= 1) {
    for (std::size_t b = 0; b < nblocks; ++b)
      fn(b, b * block_size, std::min(n, (b + 1) * block_size));
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      fn(b, b * block_size, std::min(n, (b + 1) * block_size));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nt - 1);
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

double parallel_block_sum(std::size_t n, std::size_t block_size,
                          const std::function<double(std::size_t, std::size_t)>& block_fn) {
  if (n == 0) return 0.0;
  if (block_size == 0) block_size = 1;
  const std::size_t nblocks = (n + block_size - 1) / block_size;
  std::vector<double> partial(nblocks, 0.0);
  parallel_for_blocks(n, block_size, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    partial[b] = block_fn(lo, hi);
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

}  // namespace cch
