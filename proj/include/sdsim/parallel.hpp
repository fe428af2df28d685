// SPDX-License-Identifier: Apache-2.0
//
// sdsim: one-bit spatial Sigma-Delta massive MIMO simulator
// Copyright (C) 2026 The sdsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <functional>

namespace sdsim {

/// Worker count: hardware concurrency, capped by SDSIM_THREADS when set.
std::size_t default_worker_count();

/// Calls fn(i) for i in [0, n) on up to `workers` threads (0 = default).
/// Each index is visited exactly once; callers write results by index, so
/// output does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace sdsim
