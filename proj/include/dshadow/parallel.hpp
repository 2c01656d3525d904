// Copyright 2026 The dshadow Authors
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

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace dshadow {

/// Thread count for `requested` (0 = hardware concurrency).
inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) {
        return requested;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls fn(begin, end) on contiguous chunks of [0, count). Chunks write to
/// disjoint outputs, so results never depend on the thread count.
template <typename Fn>
void parallel_chunks(size_t count, unsigned threads, size_t min_chunk, Fn &&fn) {
    size_t workers = std::min<size_t>(threads, (count + min_chunk - 1) / std::max<size_t>(min_chunk, 1));
    if (workers <= 1) {
        fn(size_t{0}, count);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    size_t step = (count + workers - 1) / workers;
    for (size_t w = 0; w < workers; w++) {
        size_t b = w * step, e = std::min(count, b + step);
        pool.emplace_back([&, w, b, e] {
            try {
                fn(b, e);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    for (auto &err : errors) {
        if (err) {
            std::rethrow_exception(err);
        }
    }
}

}  // namespace dshadow
