/* Copyright 2026 The yolos Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#pragma once

#include <cstddef>
#include <functional>

namespace yolos {

// YOLOS_NUM_THREADS if set to a positive integer, else 1.
int default_thread_count();

// Runs fn(begin, end) over [0, n) split into at most `threads` contiguous
// chunks. Chunk boundaries depend only on n and threads; with threads <= 1
// everything runs on the calling thread.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace yolos
