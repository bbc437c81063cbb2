#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace wismc {

/// Shortest round-trip decimal representation of a double. All CSV and JSON
/// output goes through this so reruns are byte-identical.
std::string fmt_double(double x);

/// Write `content` to `path` via a temporary file in the same directory and
/// an atomic rename, so partially written outputs are never observed.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

/// Run fn(i) for i in [0, n) on up to `threads` workers. Tasks are
/// independent and write to caller-owned slots, so the result does not
/// depend on scheduling.
void parallel_for(std::int64_t n, int threads, const std::function<void(std::int64_t)>& fn);

/// Hardware concurrency with a sane floor of 1.
int default_thread_count();

}  // namespace wismc
