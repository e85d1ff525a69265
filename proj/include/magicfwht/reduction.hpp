#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace mfwht {

/// Sum `values` by fixed-shape pairwise (tree) reduction. The result depends
/// only on the contents of `values`, never on how the entries were produced,
/// which is what makes multi-worker runs bit-identical to serial ones.
double pairwise_sum(std::span<const double> values);

/// Resolve a worker-count request: 0 means "use hardware concurrency",
/// anything else is taken literally. Always returns >= 1.
int resolve_workers(int requested);

/// Run fn(worker_id, begin, end) over [begin, end) split into `workers`
/// contiguous chunks, one std::thread per chunk (the caller's thread runs
/// chunk 0). Exceptions thrown by workers are rethrown on the caller.
/// The chunk boundaries depend only on (begin, end, workers).
void parallel_for_chunks(std::uint64_t begin, std::uint64_t end, int workers,
                         const std::function<void(int, std::uint64_t, std::uint64_t)>& fn);

/// Physical memory of the machine in bytes (0 if it cannot be detected).
std::uint64_t detected_memory_bytes();

} // namespace mfwht
