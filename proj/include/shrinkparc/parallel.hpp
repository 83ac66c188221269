#pragma once

#include <functional>

namespace shrinkparc {

/// Resolves a worker count: positive request wins, otherwise the
/// SHRINKPARC_THREADS environment variable, otherwise hardware concurrency.
int resolve_threads(int requested);

/// Runs fn(i) for i in [0, n) across up to `threads` workers.
///
/// Tasks must be independent; each writes only its own output slot so the
/// merged result is identical for any worker count. The first exception
/// thrown by a task is rethrown after all workers join.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace shrinkparc
