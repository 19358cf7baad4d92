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

#ifndef HCFT_ERRORS_HPP
#define HCFT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hcft {

struct InvalidSizeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ScheduleError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct GeometryError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DegenerateProbeError : std::domain_error {
    using std::domain_error::domain_error;
};

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hcft

#endif
