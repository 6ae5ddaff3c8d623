// Copyright 2026 The loopgas Authors
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

#ifndef LOOPGAS_PARALLEL_HPP
#define LOOPGAS_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace loopgas {

/// Process-wide cap on worker threads (the CLI's --threads). 0 means hardware concurrency.
inline std::atomic<int> &thread_limit() {
    static std::atomic<int> limit{0};
    return limit;
}

inline int worker_count() {
    int lim = thread_limit().load();
    int hw = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
    return lim > 0 ? lim : hw;
}

/// Runs body(begin, end) over contiguous chunks of [0, n). Each index is
/// handled by exactly one call, so per-index outputs are independent of the
/// worker count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)> &body) {
    int workers = worker_count();
    if (workers <= 1 || n < 4096) {
        body(0, n);
        return;
    }
    auto w = static_cast<std::size_t>(workers);
    std::size_t chunk = (n + w - 1) / w;
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    for (std::size_t start = 0; start < n; start += chunk) {
        std::size_t stop = std::min(n, start + chunk);
        pool.emplace_back([&, start, stop] {
            try {
                body(start, stop);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto &t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace loopgas

#endif
