#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace cch {

// Global worker count for parallel_for_blocks. Defaults to the hardware
// concurrency; the CLI exposes it as --threads.
void set_num_threads(int n);
int num_threads();

// Runs fn(block_index, begin, end) over [0,n) split into fixed-size blocks.
// Block boundaries depend only on n and block_size, never on the thread
// count, so per-block partial results can be combined in block order to give
// bit-identical totals for any --threads value.
void parallel_for_blocks(std::size_t n, std::size_t block_size,
                         const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

// Deterministic sum helper: partials[b] computed per block, then added in
// block order on one thread.
double parallel_block_sum(std::size_t n, std::size_t block_size,
                          const std::function<double(std::size_t, std::size_t)>& block_fn);

}  // namespace cch
