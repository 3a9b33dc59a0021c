// Copyright 2026 The qgerm authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QGERM_PARALLEL_HPP
#define QGERM_PARALLEL_HPP

#include <cstdlib>
#include <thread>
#include <vector>

#include "qgerm/linalg.hpp"

namespace qgerm {

/// Job count from an explicit flag, the QGERM_JOBS environment variable, or
/// the hardware concurrency, in that order.
inline int resolve_jobs(int flag_value = 0) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("QGERM_JOBS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Static-chunked parallel map over [0, count). The body must be pure with
/// respect to shared state; exceptions are rethrown on the caller's thread.
template <typename Body>
void parallel_for(size_t count, int jobs, const Body& body) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || count < 2) {
    for (size_t i = 0; i < count; ++i) body(i);
    return;
  }
  size_t workers = std::min<size_t>(jobs, count);
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  for (size_t w = 0; w < workers; ++w)
    threads.emplace_back([&, w] {
      try {
        for (size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace qgerm

#endif  // QGERM_PARALLEL_HPP
