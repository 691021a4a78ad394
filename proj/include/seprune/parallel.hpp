#pragma once

#include <cstddef>
#include <functional>

// Deterministic data-parallel helper. Work is cut into fixed-size blocks that
// do not depend on the thread count; each block writes only to its own slots,
// and any reduction combines per-block partials sequentially in block order.
// Output is therefore bitwise identical for any thread count.

namespace seprune {

// Current thread cap. Defaults to SEPRUNE_THREADS from the environment, else 1.
int max_threads();
void set_max_threads(int n);

// Number of blocks for a given element count and block size.
std::size_t block_count(std::size_t count, std::size_t block_size);

// Invokes fn(block_index, begin, end) once per block, possibly concurrently.
// fn must confine side effects to slots owned by block_index (or by [begin,end)).
void parallel_blocks(std::size_t count, std::size_t block_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

}  // namespace seprune
