// include/chenone/parallel.h

// Copyright 2026  The chenone authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CHENONE_PARALLEL_H_
#define CHENONE_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace chenone {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Work items must be
/// independent; the first exception thrown is rethrown on the caller.
template <typename Fn>
void ParallelFor(int64_t n, int32_t jobs, Fn &&fn) {
  jobs = std::max<int32_t>(1, std::min<int64_t>(jobs, n));
  if (jobs <= 1) {
    for (int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    while (true) {
      int64_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::thread> threads;
  for (int32_t j = 0; j < jobs; ++j) threads.emplace_back(worker);
  for (auto &t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace chenone

#endif  // CHENONE_PARALLEL_H_
