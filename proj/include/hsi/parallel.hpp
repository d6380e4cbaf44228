#pragma once

#include <cstdint>
#include <functional>

namespace hsi {

/// Number of workers the CLI defaults to (hardware concurrency, at least 1).
int default_threads();

/// Static-chunk parallel loop over [begin, end). The callable receives
/// contiguous sub-ranges. Callers must keep results independent of the chunk
/// boundaries (write-disjoint outputs, reduce in index order afterwards) so
/// results do not depend on the thread count.
void parallel_for(int64_t begin, int64_t end, int threads,
                  const std::function<void(int64_t, int64_t)>& chunk_fn);

}  // namespace hsi
