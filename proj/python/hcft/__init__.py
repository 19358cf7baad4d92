# Copyright 2026 The hcft Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Hybrid Clifford circuits and boundary CFT scaling."""

from hcft._hcft import (
    ConfigError,
    DegenerateProbeError,
    FitError,
    FitResult,
    GeometryError,
    InvalidSizeError,
    IoError,
    ObservableSeries,
    ResultFile,
    ScheduleError,
    SeriesMetadata,
    SeriesRecord,
    StabilizerTableau,
    __version__,
    ellint_K,
    fit_line,
    fit_log_linear,
    fit_power_law,
    fit_series,
    jacobi_sn,
    percolate,
    preset_names,
    read_result_file,
    recompute_collapse,
    simulate,
    solve_m,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
