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


// Ensemble-averaged observables and the parallel realization runner.

#ifndef HCFT_SERIES_HPP
#define HCFT_SERIES_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hcft {

inline constexpr const char *kCodeVersion = "0.1.0";

struct SeriesRecord {
    int64_t t = 0;
    double tau = 0.0;
    std::string segment;
    double xi = 0.0;
    double eta = 0.0;
    double mean_nats = 0.0;
    double std_error = 0.0;
    int64_t count = 0;
    int64_t sum_bits = 0;
    int64_t sum_sq_bits = 0;
};

struct SeriesMetadata {
    std::string kind;
    std::string geometry;
    int64_t L = 0;
    int64_t T = 0;
    double p = 0.0;
    double y_over_t = 0.0;
    uint64_t master_seed = 0;
    std::string code_version = kCodeVersion;
    int64_t n = 0;
};

struct ObservableSeries {
    SeriesMetadata metadata;
    std::vector<SeriesRecord> records;
};

// Fills mean_nats and std_error from the integer sums. The sample standard
// deviation uses n - 1; a single realization has std_error 0.
void finalize_record(SeriesRecord &r);

struct BitSums {
    int64_t count = 0;
    std::vector<int64_t> sum;
    std::vector<int64_t> sum_sq;

    void add(const std::vector<int64_t> &bits);
};

// Realization i of n calls fn(i); returned vectors must all have `width`
// entries. Sums are exact, so the result does not depend on `workers` or on
// completion order. The first exception thrown by fn is rethrown.
using RealizationFn = std::function<std::vector<int64_t>(uint64_t index)>;
BitSums run_realizations(uint64_t n, size_t workers, size_t width, const RealizationFn &fn);

// HCFT_WORKERS if set and positive, else the hardware concurrency.
size_t default_workers();

}  // namespace hcft

#endif
