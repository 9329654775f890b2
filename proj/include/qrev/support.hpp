#pragma once

#include <cstddef>
#include <functional>
#include <string>

namespace qrev {

/// Prints "qrev: warning: <message>" to stderr unless QREV_QUIET is set.
void warn(const std::string& message);

/// Worker threads allowed for data-parallel loops: QREV_THREADS if set and
/// positive, otherwise std::thread::hardware_concurrency().
int thread_count();

/// Runs body(i) for i in [0, n) over at most thread_count() threads.  The
/// first exception thrown by any body is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qrev
