#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace sauce {

inline unsigned default_threads() {
  return std::max(1u, std::thread::hardware_concurrency());
}

struct Range {
  std::size_t begin;
  std::size_t end;
};

// Splits [0, n) into at most `parts` contiguous, nearly equal ranges.
inline std::vector<Range> partition_range(std::size_t n, unsigned parts) {
  parts = std::max(1u, parts);
  if (n < parts) parts = static_cast<unsigned>(std::max<std::size_t>(n, 1));
  std::vector<Range> out;
  out.reserve(parts);
  const std::size_t base = n / parts;
  const std::size_t extra = n % parts;
  std::size_t at = 0;
  for (unsigned p = 0; p < parts; ++p) {
    const std::size_t len = base + (p < extra ? 1 : 0);
    out.push_back({at, at + len});
    at += len;
  }
  return out;
}

/// Runs fn(part_index, range) over each partition. With one partition the
/// call happens on the calling thread. The first exception thrown by any
/// worker is rethrown after all workers join.
template <typename Fn>
void for_each_partition(const std::vector<Range>& parts, Fn&& fn) {
  if (parts.size() <= 1) {
    if (!parts.empty()) fn(std::size_t{0}, parts.front());
    return;
  }
  std::vector<std::exception_ptr> errors(parts.size());
  {
    std::vector<std::jthread> workers;
    workers.reserve(parts.size());
    for (std::size_t p = 0; p < parts.size(); ++p) {
      workers.emplace_back([&, p] {
        try {
          fn(p, parts[p]);
        } catch (...) {
          errors[p] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace sauce
