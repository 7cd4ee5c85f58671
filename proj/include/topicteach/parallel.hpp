// Copyright 2026 The topicteach Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TOPICTEACH_PARALLEL_HPP
#define TOPICTEACH_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace topicteach {

/// Number of workers to use when the caller asks for "all cores" (0).
inline std::size_t resolve_workers(std::size_t requested) noexcept {
  if (requested != 0) {
    return requested;
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Run `body(i)` for every i in [0, count) on up to `workers` threads.
/**
 * Indices are claimed dynamically, so `body` must write its result into a slot keyed by i for the
 * output to be independent of the worker count. The first exception thrown is rethrown.
 */
template <class Body>
void parallel_for(std::size_t count, std::size_t workers, Body&& body) {
  workers = std::min(resolve_workers(workers), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      body(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            const std::lock_guard lock{error_mutex};
            if (!error) {
              error = std::current_exception();
            }
            next = count;
          }
        }
      });
    }
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

}  // namespace topicteach

#endif  // TOPICTEACH_PARALLEL_HPP
