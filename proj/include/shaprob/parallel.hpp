#pragma once

#include <cstddef>
#include <functional>

namespace shaprob {

/// Resolves a requested worker count: 0 means one per hardware thread.
unsigned resolve_threads(unsigned requested) noexcept;

/// Runs fn(0..count-1) on up to `threads` workers. Work items must write to
/// disjoint state. If any item throws, the exception of the lowest failing
/// index is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace shaprob
