// Copyright 2026 The hcft Authors
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


#include "hcft/series.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "hcft/entropy.hpp"

namespace hcft {

void finalize_record(SeriesRecord &r) {
    if (r.count <= 0) {
        r.mean_nats = std::nan("");
        r.std_error = 0.0;
        return;
    }
    const double n = static_cast<double>(r.count);
    r.mean_nats = static_cast<double>(r.sum_bits) / n * kLn2;
    if (r.count == 1) {
        r.std_error = 0.0;
        return;
    }
    // n * sum(x^2) - (sum x)^2 is exact in 128 bits
    __int128 num = static_cast<__int128>(r.count) * r.sum_sq_bits -
                   static_cast<__int128>(r.sum_bits) * r.sum_bits;
    double var_bits = static_cast<double>(num) / (n * (n - 1.0));
    r.std_error = std::sqrt(std::max(var_bits, 0.0) / n) * kLn2;
}

void BitSums::add(const std::vector<int64_t> &bits) {
    if (sum.size() != bits.size()) throw std::logic_error("realization width mismatch");
    for (size_t i = 0; i < bits.size(); i++) {
        sum[i] += bits[i];
        sum_sq[i] += bits[i] * bits[i];
    }
    count++;
}

BitSums run_realizations(uint64_t n, size_t workers, size_t width, const RealizationFn &fn) {
    BitSums total;
    total.sum.assign(width, 0);
    total.sum_sq.assign(width, 0);
    workers = std::max<size_t>(1, std::min<uint64_t>(workers, n));

    std::atomic<uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex mu;
    std::exception_ptr error;

    auto work = [&] {
        BitSums local;
        local.sum.assign(width, 0);
        local.sum_sq.assign(width, 0);
        while (!failed.load(std::memory_order_relaxed)) {
            uint64_t i = next.fetch_add(1);
            if (i >= n) break;
            try {
                local.add(fn(i));
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
        std::lock_guard<std::mutex> lock(mu);
        for (size_t k = 0; k < width; k++) {
            total.sum[k] += local.sum[k];
            total.sum_sq[k] += local.sum_sq[k];
        }
        total.count += local.count;
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (size_t w = 0; w < workers; w++) pool.emplace_back(work);
        for (auto &th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
    return total;
}

size_t default_workers() {
    if (const char *env = std::getenv("HCFT_WORKERS")) {
        char *end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace hcft
